use super::projline::ProjLine;
use crate::blochk::PreBlochGroup;
use crate::error::{Error, Result};
use crate::rings::{FiniteRing, Mat2};

/// Find `g` in `PGL_2` sending the first three entries to `(inf, 0, 1)` and
/// apply it to the whole tuple.
///
/// With `B = [v0 v1]` and `(alpha, beta) = B^-1 v2`, the normalizer is
/// `diag(alpha, beta)^-1 B^-1`. The stabilizer of `(inf, 0, 1)` is checked to
/// be the scalars, so `g` is unique up to scaling.
pub fn orbit_normalize(r: &FiniteRing, line: &ProjLine, tuple: &[usize]) -> Result<(Mat2, Vec<usize>)> {
    if !r.is_local() {
        return Err(Error::hypothesis(format!(
            "orbit normalization is restricted to local rings; {} is not local",
            r.spec_string()
        )));
    }
    if tuple.len() < 3 {
        return Err(Error::invalid(format!("need at least three classes, got {}", tuple.len())));
    }
    if let Some(&bad) = tuple.iter().find(|&&c| c >= line.len()) {
        return Err(Error::invalid(format!("class index {bad} out of range")));
    }
    let (t0, t1, t2) = (tuple[0], tuple[1], tuple[2]);
    if !(line.generic(t0, t1) && line.generic(t0, t2) && line.generic(t1, t2)) {
        return Err(Error::invalid(format!("classes {t0}, {t1}, {t2} are not pairwise generic")));
    }
    let (p, q) = line.representative(t0);
    let (s, t) = line.representative(t1);
    let b_inv = Mat2::new(p, s, q, t)
        .inverse(r)
        .ok_or_else(|| Error::internal("generic pair does not give an invertible matrix"))?;
    let (alpha, beta) = b_inv.apply(r, line.representative(t2));
    let (ai, bi) = match (r.inv(alpha), r.inv(beta)) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(Error::internal("third class is not generic to the first two")),
    };
    let g = Mat2::diag(ai, bi).mul(r, &b_inv).projective_canonical(r);
    let out: Vec<usize> = tuple.iter().map(|&c| line.act(r, &g, c)).collect();
    let (inf, zero) = (line.infinity(r), line.zero(r));
    let one = line.point(r, r.one()).expect("1 is a unit");
    if out[..3] != [inf, zero, one] {
        return Err(Error::internal(format!("normalizer sends the frame to {:?}", &out[..3])));
    }
    // diagonal matrices are exactly the stabilizer of (inf, 0); they fix 1
    // only when scalar
    for &a in r.units() {
        for &d in r.units() {
            if a != d && line.act(r, &Mat2::diag(a, d), one) == one {
                return Err(Error::internal("stabilizer of (inf, 0, 1) is not scalar"));
            }
        }
    }
    Ok((g, out))
}

/// The scissors congruence group presented by `PGL_2`-orbits of generic
/// 4- and 5-tuples: generators `(inf, 0, 1, x)` for `x` in `W_A`, one
/// relation per orbit `(inf, 0, 1, x, y)`, obtained by normalizing each face.
pub fn scissors_from_orbits(r: &FiniteRing) -> Result<PreBlochGroup> {
    if !r.is_local() {
        return Err(Error::hypothesis(format!("{} is not a local ring", r.spec_string())));
    }
    let k = r.residue_field_size().expect("local ring");
    if k <= 4 {
        return Err(Error::hypothesis(format!(
            "residue field of {} has {k} elements; orbit presentation needs more than 4",
            r.spec_string()
        )));
    }
    let w = r.wedge_set();
    if w.is_empty() {
        return Err(Error::hypothesis(format!("W is empty for {}", r.spec_string())));
    }
    let line = super::projline::projective_line(r);
    let inf = line.infinity(r);
    let zero = line.zero(r);
    let one = line.point(r, r.one()).expect("1 is a unit");
    let mut rows = Vec::new();
    for &x in &w {
        for &y in &w {
            let ratio = r.div(x, y).expect("y is a unit");
            if !w.contains(&ratio) {
                continue;
            }
            let five = [
                inf,
                zero,
                one,
                line.point(r, x).expect("unit"),
                line.point(r, y).expect("unit"),
            ];
            let mut row = Vec::with_capacity(5);
            for i in 0..5 {
                let face: Vec<usize> = (0..5).filter(|&j| j != i).map(|j| five[j]).collect();
                let (_, norm) = orbit_normalize(r, &line, &face)?;
                let z = line
                    .affine(r, norm[3])
                    .filter(|z| w.contains(z))
                    .ok_or_else(|| Error::internal("normalized face does not land on a symbol"))?;
                row.push((z, if i % 2 == 0 { 1 } else { -1 }));
            }
            rows.push(row);
        }
    }
    PreBlochGroup::from_relations(r, w, &rows)
}
