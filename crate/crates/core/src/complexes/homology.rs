use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::chain::ChainComplexZ;
use crate::abelian::int::{Coeff, Overflow};
use crate::abelian::sparse::{Divisors, Echelon, SparseVec};
use crate::abelian::FinAbGroup;
use crate::error::{Error, Result};

const BATCH: usize = 8192;

/// Rank and elementary divisors of every boundary map needed for `H_0..=H_top`.
#[derive(Clone, Debug)]
pub struct BoundaryData {
    /// `boundaries[n]` describes `d_n` (`d_0` is the augmentation, or zero).
    pub boundaries: Vec<Divisors>,
    pub sizes: Vec<usize>,
}

impl BoundaryData {
    /// `H_k` from the ranks of `d_k`, `d_{k+1}` and the divisors of `d_{k+1}`.
    pub fn homology(&self, k: usize) -> FinAbGroup {
        let free = self.sizes[k] - self.boundaries[k].rank - self.boundaries[k + 1].rank;
        let mut orders: Vec<BigInt> = self.boundaries[k + 1].nontrivial.clone();
        orders.extend(std::iter::repeat_n(BigInt::from(0), free));
        FinAbGroup::from_orders(&orders)
    }
}

/// Reduce the coboundary `d_{k+1}^T`, skipping columns already known to be
/// redundant. Columns whose index is a unit pivot row of the previous
/// coboundary lie in the span of lower-indexed columns.
fn reduce_coboundary<T: Coeff + Send>(
    c: &ChainComplexZ,
    k: usize,
    skip: &[bool],
    convert: impl Fn(SparseVec<i64>) -> SparseVec<T> + Sync,
) -> std::result::Result<(Divisors, Vec<u32>), Overflow> {
    let ncols = c.basis_len(k);
    let mut ech = Echelon::<T>::new(c.basis_len(k + 1));
    let todo: Vec<usize> = (0..ncols).filter(|&i| !skip[i]).collect();
    for chunk in todo.chunks(BATCH) {
        let cols: Vec<SparseVec<T>> = chunk
            .par_iter()
            .map(|&i| convert(c.coboundary_column(k, i)))
            .collect();
        for col in cols {
            ech.push(col)?;
        }
    }
    let pivots = ech.unit_pivot_rows().collect();
    Ok((ech.divisors()?, pivots))
}

/// Boundary data for `H_0..=H_top`; requires `top < max_degree`.
pub fn boundary_data(c: &ChainComplexZ, top: usize) -> Result<BoundaryData> {
    if top + 1 > c.max_degree() {
        return Err(Error::invalid(format!(
            "H_{top} needs the complex up to degree {}, built only to {}",
            top + 1,
            c.max_degree()
        )));
    }
    let sizes = c.sizes();
    let mut boundaries = Vec::with_capacity(top + 2);
    let mut skip = vec![false; sizes[0]];
    if c.is_augmented() && sizes[0] > 0 {
        // the augmentation's only column has its pivot on the last vertex
        boundaries.push(Divisors {
            rank: 1,
            nontrivial: Vec::new(),
        });
        skip[sizes[0] - 1] = true;
    } else {
        boundaries.push(Divisors {
            rank: 0,
            nontrivial: Vec::new(),
        });
    }
    for k in 0..=top {
        let start = Instant::now();
        let (div, pivots) = match reduce_coboundary::<i64>(c, k, &skip, |v| v) {
            Ok(x) => x,
            Err(Overflow) => {
                log::debug!("overflow reducing d_{}; switching to bigints", k + 1);
                reduce_coboundary::<BigInt>(c, k, &skip, |v| v.to_big())
                    .expect("bigint arithmetic cannot overflow")
            }
        };
        log::debug!(
            "d_{}: {} x {}, rank {}, divisors {:?}, {:.2?}",
            k + 1,
            sizes[k],
            sizes[k + 1],
            div.rank,
            div.nontrivial,
            start.elapsed()
        );
        skip = vec![false; sizes[k + 1]];
        for p in pivots {
            skip[p as usize] = true;
        }
        boundaries.push(div);
    }
    Ok(BoundaryData { boundaries, sizes })
}

/// `H_k` of the complex (reduced when the complex is augmented).
pub fn complex_homology(c: &ChainComplexZ, k: usize) -> Result<FinAbGroup> {
    Ok(boundary_data(c, k)?.homology(k))
}

/// `H_0..=H_top` in one pass.
pub fn complex_homology_upto(c: &ChainComplexZ, top: usize) -> Result<Vec<FinAbGroup>> {
    let data = boundary_data(c, top)?;
    Ok((0..=top).map(|k| data.homology(k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::sparse::column_divisors;
    use crate::complexes::chain::{build_complex, Variant};
    use crate::rings::FiniteRing;

    fn homology(s: &str, n: usize, top: usize) -> Vec<String> {
        let r = FiniteRing::parse(s).unwrap();
        let c = build_complex(&r, n, Variant::Ge2, true).unwrap();
        complex_homology_upto(&c, top)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect()
    }

    #[test]
    fn fields_are_highly_connected_in_low_degrees() {
        assert_eq!(homology("gf:5^1", 3, 1), vec!["0", "0"]);
        assert_eq!(homology("gf:7^1", 3, 1), vec!["0", "0"]);
    }

    #[test]
    fn clearing_agrees_with_direct_reduction() {
        for s in ["gf:5^1", "zmod:4", "zmod:6", "prod:zmod:2+zmod:3"] {
            let r = FiniteRing::parse(s).unwrap();
            let c = build_complex(&r, 3, Variant::Ge2, true).unwrap();
            let data = boundary_data(&c, 2).unwrap();
            for n in 1..=3 {
                let cols: Vec<_> = (0..c.basis_len(n)).map(|i| c.boundary_column(n, i)).collect();
                let direct = column_divisors(&cols, c.basis_len(n - 1));
                assert_eq!(data.boundaries[n], direct, "{s} d_{n}");
            }
        }
    }

    #[test]
    fn unaugmented_h0_is_free_of_rank_components() {
        let r = FiniteRing::parse("gf:5^1").unwrap();
        let c = build_complex(&r, 1, Variant::Ge2, false).unwrap();
        assert_eq!(complex_homology(&c, 0).unwrap(), FinAbGroup::integers());
    }

    #[test]
    fn needs_one_more_degree() {
        let r = FiniteRing::parse("gf:5^1").unwrap();
        let c = build_complex(&r, 2, Variant::Ge2, true).unwrap();
        assert!(complex_homology(&c, 2).is_err());
    }
}
