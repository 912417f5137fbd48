use crate::error::{invalid, Error, Result};

/// Truncation control for hypergeometric series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    rel_tol: f64,
    max_terms: usize,
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol <= 1e-3) {
            return Err(invalid(format!("series rel_tol {rel_tol} not in (0, 1e-3]")));
        }
        if max_terms < 100 {
            return Err(invalid(format!("series max_terms {max_terms} < 100")));
        }
        Ok(Self { rel_tol, max_terms })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-16,
            max_terms: 2000,
        }
    }
}

/// Generalized hypergeometric series `pFq(a; b; z)` summed term by term.
///
/// The sum stops once three consecutive terms fall below `rel_tol · |partial sum|`.
/// Lower parameters within 1e-8 of a non-positive integer are rejected.
pub fn genhyp(upper: &[f64], lower: &[f64], z: f64, ctl: SeriesControl) -> Result<f64> {
    genhyp_with_magnitude(upper, lower, z, ctl).map(|(sum, _)| sum)
}

/// Like [`genhyp`], also returning `Σ|termₙ|`. The ratio of that magnitude to the
/// absolute value of the sum bounds the loss of precision to cancellation.
pub fn genhyp_with_magnitude(upper: &[f64], lower: &[f64], z: f64, ctl: SeriesControl) -> Result<(f64, f64)> {
    for &b in lower {
        if b <= 0.5 && (b - b.round()).abs() < 1e-8 && b.round() <= 0.0 {
            return Err(Error::Pole {
                func: "genhyp",
                value: b,
            });
        }
    }
    if z == 0.0 {
        return Ok((1.0, 1.0));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut magnitude = 1.0;
    let mut small_run = 0;
    for n in 0..ctl.max_terms {
        let nf = n as f64;
        let num: f64 = upper.iter().map(|&a| a + nf).product();
        let den: f64 = lower.iter().map(|&b| b + nf).product();
        term *= num / den * z / (nf + 1.0);
        sum += term;
        magnitude += term.abs();
        if term.abs() <= ctl.rel_tol * sum.abs() {
            small_run += 1;
            if small_run >= 3 {
                return Ok((sum, magnitude));
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergence {
        func: "genhyp",
        terms: ctl.max_terms,
    })
}
