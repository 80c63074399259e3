//! Form-preserving canonical transformations in one degree of freedom.
//!
//! For each of the six standard potentials that admit correction-free,
//! Hamiltonian-preserving generating functions, this crate builds the
//! generating-function family, the induced phase-space map, the integral
//! kernel `e^{iF/ħ}` and its reciprocal eigenvalues, and a set of
//! numerical checks that verify the resulting integral equations against
//! independently computed special functions (Hermite functions, Airy,
//! modified Bessel of imaginary order, Mathieu and modified Mathieu).

pub mod dump;
pub mod error;
pub mod genfun;
pub mod grouplaw;
pub mod phasecore;
pub mod quadrature;
pub mod specfun;
pub mod suite;
pub mod verify;

pub use error::{Error, Result};
pub use phasecore::{Params, PhasePoint, PotentialFamily};
