//! Globally adaptive Gauss–Kronrod (10/21-point) quadrature on finite intervals.
//!
//! Endpoint singularities are left to the caller: every integral in this crate is
//! first mapped to a smooth (or at worst log-singular) integrand by substitution.

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let mut error = ((kronrod - gauss) * half).abs();
    // QUADPACK-style rescaling of the raw difference.
    let scale = (200.0 * error / value.abs().max(f64::MIN_POSITIVE)).powf(1.5);
    if value != 0.0 && scale < 1.0 {
        error = error.min(value.abs() * scale);
    }
    let roundoff = 50.0 * f64::EPSILON * value.abs();
    Segment {
        a,
        b,
        value,
        error: error.max(roundoff),
    }
}

/// Integrates `f` over `[a, b]` until the summed error estimate is below
/// `max(abs_tol, rel_tol · |I|)`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<f64> {
    integrate_with_breaks(f, &[a, b], abs_tol, rel_tol, max_subdivisions)
}

/// Like [`integrate`], but seeds the partition with the ordered `points`
/// (interior points are typically kinks or log singularities of `f`).
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<f64> {
    debug_assert!(points.windows(2).all(|w| w[0] <= w[1]));
    let mut segments: Vec<Segment> = points
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| kronrod21(&f, w[0], w[1]))
        .collect();
    if segments.is_empty() {
        return Ok(0.0);
    }
    loop {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if !total.is_finite() {
            return Err(Error::Quadrature {
                error: f64::INFINITY,
                subdivisions: segments.len(),
            });
        }
        if error <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        if segments.len() >= max_subdivisions {
            return Err(Error::Quadrature {
                error,
                subdivisions: segments.len(),
            });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("non-empty");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // Interval cannot be split further in floating point.
            return Err(Error::Quadrature {
                error,
                subdivisions: segments.len() + 1,
            });
        }
        segments.push(kronrod21(&f, seg.a, mid));
        segments.push(kronrod21(&f, mid, seg.b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exact_for_polynomials() {
        // 21-point Kronrod is exact through degree 31.
        let v = integrate(|x| x.powi(31) + 3.0 * x.powi(4), 0.0, 1.0, 1e-14, 1e-14, 50).unwrap();
        assert_relative_eq!(v, 1.0 / 32.0 + 3.0 / 5.0, max_relative = 1e-14);
    }

    #[test]
    fn smooth_and_peaked_integrands() {
        let v = integrate(|x| x.exp(), 0.0, 2.0, 1e-13, 1e-13, 50).unwrap();
        assert_relative_eq!(v, 2f64.exp() - 1.0, max_relative = 1e-13);
        let v = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-10, 1e-12, 500).unwrap();
        assert_relative_eq!(v, 2.0 * 100.0 * (100.0f64).atan(), max_relative = 1e-11);
    }

    #[test]
    fn log_singular_endpoint() {
        let v = integrate(|x| -x.ln(), 0.0, 1.0, 1e-12, 1e-12, 500).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-11);
    }

    #[test]
    fn breakpoints_and_empty_ranges() {
        let v = integrate_with_breaks(|x| x.abs(), &[-1.0, 0.0, 1.0], 1e-13, 1e-13, 10).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-14);
        assert_eq!(integrate(|x| x, 1.0, 1.0, 1e-10, 1e-10, 10).unwrap(), 0.0);
    }

    #[test]
    fn reports_failure() {
        let r = integrate(|x| 1.0 / x, 0.0, 1.0, 1e-10, 1e-10, 60);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
