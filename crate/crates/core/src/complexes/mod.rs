//! The projective line over a finite ring, the complexes of pairwise generic
//! tuples on it, and their homology.

mod chain;
mod homology;
mod orbits;
mod pi1;
mod projline;

pub use chain::{
    build_complex, build_complex_for_spec, build_complex_with_budget, estimate_sizes, ChainComplexZ, Variant,
    DEFAULT_BUDGET, MAX_DEGREE,
};
pub use homology::{boundary_data, complex_homology, complex_homology_upto, BoundaryData};
pub use orbits::{orbit_normalize, scissors_from_orbits};
pub use pi1::h1_via_pi1;
pub use projline::{ge2_classes, projective_line, ProjLine};
