//! Decompositions of linear operators that factor into commuting pieces.
//!
//! Given `P = P_0 P_1 ... P_m` with mutually commuting factors, the
//! toolkit computes partition-of-unity cofactors, spectral-style
//! projectors onto generalized eigenspaces, direct-sum splittings of
//! null spaces, and the forward/backward maps that reduce a high-order
//! inhomogeneous problem `P u = f` to a system of low-order factor
//! problems. Every identity is emitted together with a machine-checkable
//! certificate.
//!
//! Modules:
//! - [`polyalg`]: univariate partition-of-unity identities over exact or
//!   floating fields;
//! - [`posets`]: the subset-system combinatorics behind generalized
//!   (alpha-style) decompositions;
//! - [`mpoly`]: multivariate polynomials over Q with Groebner-basis
//!   unit-ideal certificates;
//! - [`opcore`]: application of the polynomial identities to concrete
//!   linear operators;
//! - [`koszul`]: the Koszul complex of a commuting family, homotopy and
//!   exactness checks, and certificate-free reconstruction;
//! - [`symmetry`]: weak/strong symmetry algebra machinery;
//! - [`gjms`]: conformal Laplacian (GJMS) coefficients and spectral
//!   models.

pub mod error;
pub mod gjms;
pub mod jsonio;
pub mod koszul;
pub mod linalg;
pub mod mpoly;
pub mod opcore;
pub mod polyalg;
pub mod posets;
pub mod symmetry;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Field, GaussianRational, DEFAULT_EPSILON};
