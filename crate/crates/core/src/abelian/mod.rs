//! Exact integer linear algebra and finitely generated abelian groups.

mod cayley;
mod functors;
mod group;
pub mod int;
mod matrix;
mod mm;
mod snf;
pub mod sparse;

pub use cayley::{abelian_from_cayley, CayleyStructure};
pub use functors::{
    exterior_cube, exterior_square, exterior_square_presented, homology_abelian, sym_square,
    sym_square_presented, tensor, tensor_presented, tor, tor_tilde, Bilinear, TorTilde,
};
pub use group::{coords, fp_group, present, AbHom, FinAbGroup, Presented};
pub(crate) use group::{nullspace, Lattice};
pub use matrix::IntMatrix;
pub use mm::{read_matrix_market, write_matrix_market};
pub use snf::{smith_normal_form, SmithForm};
