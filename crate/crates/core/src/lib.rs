//! Double-affine Weyl semigroups `W ⋉ 𝒯`, their enhanced length and
//! reflection orders, and the Iwahori-Hecke algebra of the semigroup in the
//! Bernstein and double coset bases.

pub mod error;
pub mod hecke;
pub mod laurent;
pub mod root_data;
pub mod tits;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
pub use hecke::{Basis, FiniteOracle, HeckeAlgebra, HeckeElt};
pub use laurent::LaurentPoly;
pub use root_data::{Coweight, DatumConfig, Kind, RootDatum, RootSign, RootVector, Witness};
pub use tits::{DoubleAffineRoot, EnhLength, TitsElt};
pub use weyl::WeylElt;
