use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// `ln |Γ(x)|` via the Lanczos approximation, with reflection for `x < 1/2`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole {
            func: "ln_gamma",
            value: x,
        });
    }
    if x < 0.5 {
        let s = (PI * x).sin().abs();
        return Ok((PI / s).ln() - ln_gamma(1.0 - x)?);
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let series = LANCZOS[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS[0], |acc, (i, &c)| acc + c / (x + i as f64 + 1.0));
    Ok(0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + series.ln())
}

/// Digamma `ψ(x) = Γ'(x)/Γ(x)`.
///
/// Shifts the argument above 10 with `ψ(x) = ψ(x+1) − 1/x` and then sums the
/// asymptotic expansion; negative arguments use the reflection formula.
pub fn digamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) || x.is_nan() {
        return Err(Error::Pole {
            func: "digamma",
            value: x,
        });
    }
    if x < 0.0 {
        return Ok(digamma(1.0 - x)? - PI / (PI * x).tan());
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    // Bernoulli terms B_{2n} / (2n), n = 1..7
    const TAIL: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32_760.0,
        1.0 / 12.0,
    ];
    let inv2 = 1.0 / (x * x);
    let mut pow = inv2;
    let mut tail = 0.0;
    for c in TAIL {
        tail += c * pow;
        pow *= inv2;
    }
    Ok(acc + x.ln() - 0.5 / x - tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn digamma_at_one_matches_harmonic_limit() {
        // ψ(1) = −lim (H_n − ln n); the Euler–Maclaurin correction makes the
        // partial sum accurate to O(n⁻⁴).
        let n = 100_000u32;
        let h: f64 = (1..=n).rev().map(|k| 1.0 / k as f64).sum();
        let nf = n as f64;
        let gamma_em = h - nf.ln() - 0.5 / nf + 1.0 / (12.0 * nf * nf);
        assert_abs_diff_eq!(digamma(1.0).unwrap(), -gamma_em, epsilon = 1e-12);
        assert_abs_diff_eq!(digamma(1.0).unwrap(), -0.577_215_664_901_532_9, epsilon = 1e-14);
    }

    #[test]
    fn digamma_recurrence() {
        assert_abs_diff_eq!(digamma(2.0).unwrap(), digamma(1.0).unwrap() + 1.0, epsilon = 1e-14);
        for &x in &[0.3, 1.7, 9.5, 25.758] {
            assert_abs_diff_eq!(
                digamma(x + 1.0).unwrap(),
                digamma(x).unwrap() + 1.0 / x,
                epsilon = 1e-13
            );
        }
    }

    #[test]
    fn digamma_reference_values() {
        // 50-digit reference values.
        assert_abs_diff_eq!(digamma(25.758).unwrap(), 3.229_208_231_000_961_4, epsilon = 1e-12);
        assert_abs_diff_eq!(digamma(0.1).unwrap(), -10.423_754_940_411_077, epsilon = 1e-12);
        assert_abs_diff_eq!(digamma(-2.5).unwrap(), 1.103_156_640_645_243_2, epsilon = 1e-12);
    }

    #[test]
    fn digamma_poles() {
        for x in [0.0, -1.0, -7.0] {
            assert!(matches!(digamma(x), Err(Error::Pole { .. })));
        }
    }

    #[test]
    fn ln_gamma_values() {
        assert_abs_diff_eq!(ln_gamma(1.0).unwrap(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ln_gamma(2.0).unwrap(), 0.0, epsilon = 1e-14);
        assert_relative_eq!(ln_gamma(0.5).unwrap(), 0.572_364_942_924_700_1, max_relative = 1e-13);
        assert_relative_eq!(
            ln_gamma(26.759_132_158_696_36).unwrap(),
            60.473_426_562_741_2,
            max_relative = 1e-14
        );
        assert_relative_eq!(ln_gamma(100.5).unwrap(), 361.435_540_467_777_6, max_relative = 1e-14);
        assert_relative_eq!(ln_gamma(11.0).unwrap(), (3_628_800f64).ln(), max_relative = 1e-14);
        assert!(matches!(ln_gamma(-3.0), Err(Error::Pole { .. })));
    }
}
