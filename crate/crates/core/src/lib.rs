//! Norm-based certification of optical quantumness.
//!
//! The quantifier compares an s-ordered quasiprobability of a state with the
//! same functional of its image under a quantumness-breaking channel, in an
//! L^p norm over the phase plane. Two exact engines supply the states:
//! [`gaussian`] (covariance calculus) and [`fock`] (photon-number-diagonal
//! mixtures); [`quadrature`] provides the certified sign-aware integrals, and
//! [`experiments`] reproduces the squeezed-thermal sweep, the crossing search
//! and the Fock-mixture scan.

pub mod channel;
pub mod error;
pub mod experiments;
pub mod fock;
pub mod gaussian;
pub mod quadrature;
pub mod quantifier;

pub use channel::{ChannelElement, ChannelSpec};
pub use error::{Error, Result};
pub use fock::FockDiagonalState;
pub use gaussian::GaussianState;
pub use quantifier::{Classification, Estimate, FunctionalSpec, QuantifierResult, State, Witness};
