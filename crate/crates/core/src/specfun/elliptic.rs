use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const AGM_TOL: f64 = 1e-16;
const AGM_MAX_ITER: usize = 64;

/// Complete elliptic integral of the first kind, `K(m)`.
///
/// Evaluated with the arithmetic-geometric mean. Negative `m` is accepted; the
/// AGM iteration is valid there without transformation.
pub fn ellip_k(m: f64) -> Result<f64> {
    if !(m < 1.0) {
        return Err(Error::Domain {
            func: "ellip_k",
            value: m,
            reason: "requires m < 1",
        });
    }
    let (a, _) = agm(1.0, (1.0 - m).sqrt(), m);
    Ok(FRAC_PI_2 / a)
}

/// Complete elliptic integral of the second kind, `E(m)`.
pub fn ellip_e(m: f64) -> Result<f64> {
    if m > 1.0 || m.is_nan() {
        return Err(Error::Domain {
            func: "ellip_e",
            value: m,
            reason: "requires m <= 1",
        });
    }
    if m == 1.0 {
        return Ok(1.0);
    }
    let (a, weighted) = agm(1.0, (1.0 - m).sqrt(), m);
    Ok(FRAC_PI_2 / a * (1.0 - weighted))
}

/// Runs the AGM of `(a, b)` and returns the limit together with
/// `Σ 2^{n-1} c_n²`, where `c_0² = c0_sq` and `c_{n+1} = (a_n - b_n)/2`.
fn agm(mut a: f64, mut b: f64, c0_sq: f64) -> (f64, f64) {
    let mut weighted = 0.5 * c0_sq;
    let mut pow2 = 0.5;
    for _ in 0..AGM_MAX_ITER {
        let c = 0.5 * (a - b);
        pow2 *= 2.0;
        weighted += pow2 * c * c;
        let next_a = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next_a;
        if c.abs() <= AGM_TOL * a {
            break;
        }
    }
    (a, weighted)
}

/// Incomplete elliptic integral of the first kind, `F(φ | m)`, for `0 ≤ φ ≤ π/2`.
pub fn ellip_f_inc(phi: f64, m: f64) -> Result<f64> {
    check_phi("ellip_f_inc", phi)?;
    let s = phi.sin();
    let c = phi.cos();
    let y = 1.0 - m * s * s;
    if !(y > 0.0) {
        return Err(Error::Domain {
            func: "ellip_f_inc",
            value: m,
            reason: "requires m sin²φ < 1",
        });
    }
    if phi == 0.0 {
        return Ok(0.0);
    }
    Ok(s * carlson_rf(c * c, y, 1.0)?)
}

/// Incomplete elliptic integral of the second kind, `E(φ | m)`, for `0 ≤ φ ≤ π/2`.
pub fn ellip_e_inc(phi: f64, m: f64) -> Result<f64> {
    check_phi("ellip_e_inc", phi)?;
    let s = phi.sin();
    let c = phi.cos();
    let y = 1.0 - m * s * s;
    if y < 0.0 || y.is_nan() {
        return Err(Error::Domain {
            func: "ellip_e_inc",
            value: m,
            reason: "requires m sin²φ <= 1",
        });
    }
    if phi == 0.0 {
        return Ok(0.0);
    }
    if m == 1.0 {
        return Ok(s);
    }
    if phi == FRAC_PI_2 {
        return ellip_e(m);
    }
    let x = c * c;
    Ok(s * carlson_rf(x, y, 1.0)? - m / 3.0 * s * s * s * carlson_rd(x, y, 1.0)?)
}

fn check_phi(func: &'static str, phi: f64) -> Result<()> {
    if (0.0..=FRAC_PI_2).contains(&phi) {
        Ok(())
    } else {
        Err(Error::Domain {
            func,
            value: phi,
            reason: "requires 0 <= phi <= pi/2",
        })
    }
}

/// Carlson's symmetric integral `R_F(x, y, z)`; at most one argument may be zero.
pub fn carlson_rf(mut x: f64, mut y: f64, mut z: f64) -> Result<f64> {
    const ERRTOL: f64 = 5e-4;
    if x.min(y).min(z) < 0.0 || [x + y, x + z, y + z].iter().any(|&s| s <= 0.0) {
        return Err(Error::Domain {
            func: "carlson_rf",
            value: x.min(y).min(z),
            reason: "arguments must be non-negative with at most one zero",
        });
    }
    let (mut ave, mut dx, mut dy, mut dz);
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        ave = (x + y + z) / 3.0;
        dx = (ave - x) / ave;
        dy = (ave - y) / ave;
        dz = (ave - z) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            break;
        }
    }
    let e2 = dx * dy - dz * dz;
    let e3 = dx * dy * dz;
    Ok((1.0 + (e2 / 24.0 - 0.1 - 3.0 / 44.0 * e3) * e2 + e3 / 14.0) / ave.sqrt())
}

/// Carlson's degenerate integral `R_D(x, y, z)`; `z > 0`, at most one of `x, y` zero.
pub fn carlson_rd(mut x: f64, mut y: f64, mut z: f64) -> Result<f64> {
    const ERRTOL: f64 = 3e-4;
    const C1: f64 = 3.0 / 14.0;
    const C2: f64 = 1.0 / 6.0;
    const C3: f64 = 9.0 / 22.0;
    const C4: f64 = 3.0 / 26.0;
    const C5: f64 = 0.25 * C3;
    const C6: f64 = 1.5 * C4;
    if x.min(y) < 0.0 || x + y <= 0.0 || z <= 0.0 {
        return Err(Error::Domain {
            func: "carlson_rd",
            value: x.min(y).min(z),
            reason: "requires x, y >= 0 (not both zero) and z > 0",
        });
    }
    let mut sum = 0.0;
    let mut fac = 1.0;
    let (mut ave, mut dx, mut dy, mut dz);
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (z + lambda));
        fac *= 0.25;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        ave = 0.2 * (x + y + 3.0 * z);
        dx = (ave - x) / ave;
        dy = (ave - y) / ave;
        dz = (ave - z) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            break;
        }
    }
    let ea = dx * dy;
    let eb = dz * dz;
    let ec = ea - eb;
    let ed = ea - 6.0 * eb;
    let ee = ed + ec + ec;
    Ok(3.0 * sum
        + fac * (1.0 + ed * (-C1 + C5 * ed - C6 * dz * ee) + dz * (C2 * ee + dz * (-C3 * ec + dz * C4 * ea)))
            / (ave * ave.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::integrate_gl;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn k_quad(m: f64) -> f64 {
        integrate_gl(|t| (1.0 - m * t.sin().powi(2)).powf(-0.5), 0.0, FRAC_PI_2, 400)
    }

    fn e_quad(phi: f64, m: f64) -> f64 {
        integrate_gl(|t| (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, phi, 400)
    }

    fn f_quad(phi: f64, m: f64) -> f64 {
        integrate_gl(|t| (1.0 - m * t.sin().powi(2)).powf(-0.5), 0.0, phi, 400)
    }

    #[test]
    fn identity_cases() {
        assert_eq!(ellip_k(0.0).unwrap(), FRAC_PI_2);
        assert_eq!(ellip_e(0.0).unwrap(), FRAC_PI_2);
        assert_eq!(ellip_e(1.0).unwrap(), 1.0);
        assert_eq!(ellip_e_inc(0.0, 0.3).unwrap(), 0.0);
        assert_eq!(ellip_f_inc(0.0, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn complete_integrals_match_quadrature() {
        assert_relative_eq!(ellip_k(0.5).unwrap(), k_quad(0.5), max_relative = 1e-12);
        assert_relative_eq!(ellip_k(0.999).unwrap(), k_quad(0.999), max_relative = 1e-9);
        assert_relative_eq!(ellip_e(0.25).unwrap(), e_quad(FRAC_PI_2, 0.25), max_relative = 1e-12);
        assert_relative_eq!(ellip_k(-1.0).unwrap(), k_quad(-1.0), max_relative = 1e-12);
        assert_relative_eq!(ellip_e(-1.0).unwrap(), e_quad(FRAC_PI_2, -1.0), max_relative = 1e-12);
    }

    #[test]
    fn high_precision_values() {
        // 50-digit reference values.
        assert_relative_eq!(ellip_k(0.5).unwrap(), 1.854_074_677_301_371_9, max_relative = 1e-14);
        assert_relative_eq!(ellip_k(0.999).unwrap(), 4.841_132_560_550_296_6, max_relative = 1e-13);
        assert_relative_eq!(ellip_e(0.25).unwrap(), 1.467_462_209_339_427_2, max_relative = 1e-14);
        assert_relative_eq!(
            ellip_e_inc(0.7, 0.4).unwrap(),
            0.678_705_356_003_374_5,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            ellip_f_inc(0.7, 0.4).unwrap(),
            0.722_505_363_866_968_5,
            max_relative = 1e-13
        );
    }

    #[test]
    fn incomplete_integrals_match_quadrature() {
        assert_relative_eq!(ellip_e_inc(0.7, 0.4).unwrap(), e_quad(0.7, 0.4), max_relative = 1e-12);
        assert_relative_eq!(ellip_f_inc(0.7, 0.4).unwrap(), f_quad(0.7, 0.4), max_relative = 1e-12);
        assert_relative_eq!(ellip_f_inc(1.2, 0.9).unwrap(), f_quad(1.2, 0.9), max_relative = 1e-12);
    }

    #[test]
    fn completeness_identity() {
        assert_relative_eq!(
            ellip_e_inc(FRAC_PI_2, 0.3).unwrap(),
            ellip_e(0.3).unwrap(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            ellip_f_inc(FRAC_PI_2, 0.3).unwrap(),
            ellip_k(0.3).unwrap(),
            max_relative = 1e-13
        );
        // Carlson route for the complete integrals agrees with AGM.
        for &m in &[-2.0, -0.5, 0.1, 0.5, 0.9, 0.9999] {
            let k = carlson_rf(0.0, 1.0 - m, 1.0).unwrap();
            let e = k - m / 3.0 * carlson_rd(0.0, 1.0 - m, 1.0).unwrap();
            assert_relative_eq!(ellip_k(m).unwrap(), k, max_relative = 1e-13);
            assert_relative_eq!(ellip_e(m).unwrap(), e, max_relative = 1e-13);
        }
    }

    #[test]
    fn legendre_relation() {
        for i in 1..=9 {
            let m = i as f64 / 10.0;
            let (k, e) = (ellip_k(m).unwrap(), ellip_e(m).unwrap());
            let (kc, ec) = (ellip_k(1.0 - m).unwrap(), ellip_e(1.0 - m).unwrap());
            assert!((e * kc + ec * k - k * kc - FRAC_PI_2).abs() < 1e-10, "m = {m}");
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(ellip_k(1.0), Err(Error::Domain { .. })));
        assert!(matches!(ellip_k(1.5), Err(Error::Domain { .. })));
        assert!(matches!(ellip_e(1.0001), Err(Error::Domain { .. })));
        assert!(matches!(ellip_f_inc(1.0, 1.5), Err(Error::Domain { .. })));
        assert!(matches!(ellip_e_inc(-0.1, 0.5), Err(Error::Domain { .. })));
        assert!(matches!(ellip_e_inc(2.0, 0.5), Err(Error::Domain { .. })));
    }

    proptest! {
        #[test]
        fn incomplete_integrals_monotone_in_phi(m in 0.01f64..0.99, a in 0.0f64..1.5, b in 0.0f64..1.5) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assume!(hi - lo > 1e-9);
            prop_assert!(ellip_e_inc(lo, m).unwrap() < ellip_e_inc(hi, m).unwrap());
            prop_assert!(ellip_f_inc(lo, m).unwrap() < ellip_f_inc(hi, m).unwrap());
        }
    }
}
