//! Special functions used by the analytic formulas.
//!
//! Everything here is real-valued, stateless and safe to call from any thread.
//! Elliptic integrals follow the *parameter* convention: the argument `m` is the
//! square of the modulus, so `K(m) = ∫₀^{π/2} (1 − m sin²t)^{−1/2} dt`.

mod elliptic;
mod gamma;
mod hypergeometric;

pub use elliptic::{carlson_rd, carlson_rf, ellip_e, ellip_e_inc, ellip_f_inc, ellip_k};
pub use gamma::{digamma, ln_gamma};
pub use hypergeometric::{genhyp, genhyp_with_magnitude, SeriesControl};
