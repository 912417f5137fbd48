//! Plane geometry, the two selection functionals and PPP sampling.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::analytic::{self, DistCdf, ScoreModel};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Transmitter at `(-d, 0)` and receiver at `(d, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnchorPair {
    d: f64,
}

impl AnchorPair {
    pub fn new(d: f64) -> Result<Self> {
        if !(d > 0.0 && d.is_finite()) {
            return Err(invalid(format!("anchor half-separation d = {d} must be positive")));
        }
        Ok(Self { d })
    }

    pub fn half_separation(&self) -> f64 {
        self.d
    }

    pub fn source(&self) -> Point2 {
        Point2::new(-self.d, 0.0)
    }

    pub fn destination(&self) -> Point2 {
        Point2::new(self.d, 0.0)
    }

    /// Distances `(‖x_s − p‖, ‖p − x_d‖)`.
    pub fn distances(&self, p: &Point2) -> (f64, f64) {
        ((p.x + self.d).hypot(p.y), (p.x - self.d).hypot(p.y))
    }
}

/// One draw of the RIS field restricted to a disc centred at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    points: Vec<Point2>,
    window_radius: f64,
    intensity: f64,
}

impl Realization {
    /// Builds a realization from explicit points; every point must lie inside the window.
    pub fn new(points: Vec<Point2>, window_radius: f64, intensity: f64) -> Result<Self> {
        if !(window_radius > 0.0) || !(intensity > 0.0) {
            return Err(invalid("window radius and intensity must be positive"));
        }
        if let Some(p) = points
            .iter()
            .find(|p| !(p.x.is_finite() && p.y.is_finite()) || p.norm() > window_radius)
        {
            return Err(invalid(format!(
                "point ({}, {}) outside window of radius {window_radius}",
                p.x, p.y
            )));
        }
        Ok(Self {
            points,
            window_radius,
            intensity,
        })
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn window_radius(&self) -> f64 {
        self.window_radius
    }

    pub fn intensity(&self) -> f64 {
        self.intensity
    }

    /// Keeps the points satisfying `keep`, preserving order and metadata.
    pub fn retain(&self, mut keep: impl FnMut(&Point2) -> bool) -> Realization {
        Realization {
            points: self.points.iter().copied().filter(|p| keep(p)).collect(),
            window_radius: self.window_radius,
            intensity: self.intensity,
        }
    }

    /// Mirror image about the x-axis.
    pub fn reflect_x_axis(&self) -> Realization {
        Realization {
            points: self.points.iter().map(|p| Point2::new(p.x, -p.y)).collect(),
            window_radius: self.window_radius,
            intensity: self.intensity,
        }
    }
}

/// Samples a homogeneous PPP of the given intensity on the disc of radius `window_radius`.
pub fn sample_ppp<R: Rng + ?Sized>(intensity: f64, window_radius: f64, rng: &mut R) -> Result<Realization> {
    if !(intensity > 0.0 && intensity.is_finite()) {
        return Err(invalid(format!("intensity {intensity} must be positive")));
    }
    if !(window_radius > 0.0 && window_radius.is_finite()) {
        return Err(invalid(format!("window radius {window_radius} must be positive")));
    }
    let mean = intensity * PI * window_radius * window_radius;
    let count = Poisson::new(mean)
        .map_err(|e| invalid(format!("poisson mean {mean}: {e}")))?
        .sample(rng) as usize;
    let points = (0..count)
        .map(|_| {
            let r = window_radius * rng.random::<f64>().sqrt();
            let theta = 2.0 * PI * rng.random::<f64>();
            Point2::new(r * theta.cos(), r * theta.sin())
        })
        .collect();
    Ok(Realization {
        points,
        window_radius,
        intensity,
    })
}

/// Product of the distances to the two anchors (min-product selection score).
pub fn s_pow(p: &Point2, anchors: &AnchorPair) -> f64 {
    let (a, b) = anchors.distances(p);
    a * b
}

/// Sum of the distances to the two anchors (min-sum selection score).
pub fn s_exp(p: &Point2, anchors: &AnchorPair) -> f64 {
    let (a, b) = anchors.distances(p);
    a + b
}

/// Radius of the largest origin-centred disc region guaranteed to contain the
/// level set `{score ≤ level}`.
pub fn covering_radius(model: ScoreModel, level: f64, d: f64) -> f64 {
    match model {
        // Cassini oval: farthest points lie on the x-axis at r² = d² + level.
        ScoreModel::MinProduct => (d * d + level).sqrt(),
        // Ellipse with semi-major axis level / 2.
        ScoreModel::MinSum => 0.5 * level,
    }
}

/// Smallest window radius such that the optimum node lies outside the window
/// with probability below `eps`, enlarged if needed to cover `{score ≤ min_level}`.
///
/// The optimum escapes the window only if the largest level set that fits
/// inside it is empty, so the radius follows from the tail of the optimum-score CDF.
pub fn window_radius(dist: &DistCdf, eps: f64, min_level: Option<f64>) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid(format!("window epsilon {eps} must be in (0, 1)")));
    }
    let d = dist.d();
    let level = analytic::optimum_score_quantile(dist, 1.0 - eps)?;
    let level = min_level.map_or(level, |m| level.max(m));
    Ok(covering_radius(dist.model(), level, d))
}
