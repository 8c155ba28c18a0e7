//! Pre-Bloch and Bloch groups, Milnor K_2 and the predicted homology of
//! `PGL_2` of a finite local ring.

mod predict;
mod prebloch;

pub use predict::{four_term_check, predict_h1, predict_h2, predict_h3, BWPrediction, FourTermReport, H2Prediction};
pub use prebloch::{
    bloch_group, ge2_bloch_group, lambda_exterior, lambda_s2, milnor_k2, milnor_k2_presented, prebloch_classical,
    sym_square_units, MilnorK2, PreBlochGroup,
};
