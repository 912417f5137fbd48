//! Location-based selection of a reconfigurable intelligent surface (RIS) from a
//! Poisson field of candidates.
//!
//! The crate pairs closed-form results for the min-product (power-law path
//! loss) and min-sum (exponential path loss) selection rules with an
//! independent Monte Carlo simulator:
//!
//! - [`specfun`]: elliptic integrals, digamma, log-gamma, `pFq` series.
//! - [`geometry`]: anchors, selection functionals, PPP sampling.
//! - [`channel`]: the cascaded Rayleigh gain `Z`, its moments and gamma fit.
//! - [`policies`]: optimum and baseline selection rules plus limited feedback.
//! - [`analytic`]: distance distributions, outage, rate and feedback load.
//! - [`montecarlo`]: brute-force estimators for all of the above.
//! - [`validation`]: the invariant suite tying the two sides together.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Test oracles keep every digit the reference tool printed.
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod analytic;
pub mod channel;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod policies;
pub mod quadrature;
pub mod specfun;
pub mod validation;

#[cfg(test)]
pub(crate) mod testutil;

pub use channel::{NetworkConfig, PathLossModel};
pub use error::{Error, Result};
pub use geometry::{AnchorPair, Point2, Realization};
pub use policies::{PolicyKind, SelectionPolicy};
