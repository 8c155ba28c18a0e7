pub mod abelian;
pub mod blochk;
pub mod complexes;
pub mod constants;
pub mod error;
pub mod finhom;
pub mod harness;
pub mod rings;

pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/rings.md")]
mod book_rings {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/abelian.md")]
mod book_abelian {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/complexes.md")]
mod book_complexes {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/bloch.md")]
mod book_bloch {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/finhom.md")]
mod book_finhom {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/harness.md")]
mod book_harness {}
