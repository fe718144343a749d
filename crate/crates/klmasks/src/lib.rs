//! Deodhar mask sets for cograssmannian permutations.
//!
//! The crate is layered bottom-up: permutations ([`perm`]), exact polynomials
//! ([`poly`]), the Hecke algebra ([`hecke`], [`kl`]), heaps ([`heap`]), masks
//! ([`mask`]), Lascoux–Schützenberger trees ([`ls`]), the first mask
//! construction ([`construct1`]), Bott–Samelson data ([`bs`]) and Zelevinsky
//! data together with the second construction ([`zel`]).

pub mod bs;
pub mod construct1;
pub mod error;
pub mod heap;
pub mod hecke;
pub mod kl;
pub mod ls;
pub mod mask;
pub mod perm;
pub mod poly;
pub mod render;
pub mod verify;
pub mod zel;

pub use error::{Error, Result};
pub use hecke::HeckeElement;
pub use perm::{Perm, Side};
pub use poly::{LPoly, QPoly};
