//! Explicit finite groups, their integral homology in low degrees, and the
//! amalgam computation for `PGL_2(Z)`.

mod bar;
mod group;
mod mv;

pub use bar::{bar_homology, bar_homology_with, cycle_homology, induced_map, induced_map_with, BarBudget, CycleHomology};
pub use group::{
    abelian_group, abelianization, dihedral, pb2, pgl2, pgl2_with, psl2, pt2, FiniteGroup, GroupHom,
    DEFAULT_GROUP_CUTOFF, TABLE_CUTOFF,
};
pub use mv::{check_dihedral_realization, pgl2z_mayer_vietoris, pgl2z_mayer_vietoris_with, MayerVietorisReport, MvDegree};
