//! Selection rules: the two optimum policies, three geometric baselines, and the
//! limited-feedback filter.
//!
//! Ties go to the point stored first. An empty result means no RIS is available
//! (or none fed back), which callers treat as an outage with zero rate.

use crate::channel::PathLossModel;
use crate::error::{invalid, Result};
use crate::geometry::{s_exp, s_pow, AnchorPair, Point2, Realization};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolicyKind {
    /// Minimum product of the two link distances (optimal under power-law loss).
    OptProduct,
    /// Minimum sum of the two link distances (optimal under exp-law loss).
    OptSum,
    /// Closest node to either anchor.
    MinMin,
    /// Minimum of the larger link distance.
    MinMax,
    /// Closest node to the TX–RX midpoint.
    MidPoint,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 5] = [
        PolicyKind::OptProduct,
        PolicyKind::OptSum,
        PolicyKind::MinMin,
        PolicyKind::MinMax,
        PolicyKind::MidPoint,
    ];

    /// The optimum rule for a path-loss model.
    pub fn optimum_for(model: PathLossModel) -> PolicyKind {
        match model {
            PathLossModel::PowerLaw => PolicyKind::OptProduct,
            PathLossModel::ExpLaw => PolicyKind::OptSum,
        }
    }

    /// Score minimised by this rule.
    pub fn score(&self, p: &Point2, anchors: &AnchorPair) -> f64 {
        match self {
            PolicyKind::OptProduct => s_pow(p, anchors),
            PolicyKind::OptSum => s_exp(p, anchors),
            PolicyKind::MinMin => {
                let (a, b) = anchors.distances(p);
                a.min(b)
            }
            PolicyKind::MinMax => {
                let (a, b) = anchors.distances(p);
                a.max(b)
            }
            PolicyKind::MidPoint => p.norm(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PolicyKind::OptProduct => "opt-product",
            PolicyKind::OptSum => "opt-sum",
            PolicyKind::MinMin => "min-min",
            PolicyKind::MinMax => "min-max",
            PolicyKind::MidPoint => "mid-point",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionPolicy {
    kind: PolicyKind,
    feedback_threshold: Option<f64>,
}

impl SelectionPolicy {
    /// All-feedback policy.
    pub fn new(kind: PolicyKind) -> Self {
        Self {
            kind,
            feedback_threshold: None,
        }
    }

    /// Limited-feedback version of an optimum policy: only nodes whose own
    /// score is at most `threshold` report back. An infinite threshold is the
    /// all-feedback policy.
    pub fn with_feedback(kind: PolicyKind, threshold: f64) -> Result<Self> {
        if !(threshold > 0.0) {
            return Err(invalid(format!("feedback threshold {threshold} must be positive")));
        }
        if !matches!(kind, PolicyKind::OptProduct | PolicyKind::OptSum) {
            return Err(invalid(format!(
                "limited feedback is defined for the optimum policies, not {}",
                kind.name()
            )));
        }
        Ok(Self {
            kind,
            feedback_threshold: Some(threshold).filter(|t| t.is_finite()),
        })
    }

    pub fn kind(&self) -> PolicyKind {
        self.kind
    }

    pub fn feedback_threshold(&self) -> Option<f64> {
        self.feedback_threshold
    }

    fn feedback_model(&self) -> Option<PathLossModel> {
        match self.kind {
            PolicyKind::OptProduct => Some(PathLossModel::PowerLaw),
            PolicyKind::OptSum => Some(PathLossModel::ExpLaw),
            _ => None,
        }
    }

    /// Index of the chosen point within `r.points()`.
    pub fn select_index(&self, r: &Realization, anchors: &AnchorPair) -> Option<usize> {
        let feedback = self.feedback_threshold.zip(self.feedback_model());
        let mut best: Option<(usize, f64)> = None;
        for (i, p) in r.points().iter().enumerate() {
            let score = self.kind.score(p, anchors);
            if let Some((t, model)) = feedback {
                if feedback_score(p, anchors, model) > t {
                    continue;
                }
            }
            if best.is_none_or(|(_, b)| score < b) {
                best = Some((i, score));
            }
        }
        best.map(|(i, _)| i)
    }
}

/// Chooses a RIS from `r` according to `policy`.
pub fn select(policy: &SelectionPolicy, r: &Realization, anchors: &AnchorPair) -> Option<Point2> {
    policy.select_index(r, anchors).map(|i| r.points()[i])
}

fn feedback_score(p: &Point2, anchors: &AnchorPair, model: PathLossModel) -> f64 {
    match model {
        PathLossModel::PowerLaw => s_pow(p, anchors),
        PathLossModel::ExpLaw => s_exp(p, anchors),
    }
}

/// The nodes that report back: score at most `threshold` under the model's functional.
pub fn feedback_filter(r: &Realization, anchors: &AnchorPair, model: PathLossModel, threshold: f64) -> Realization {
    r.retain(|p| feedback_score(p, anchors, model) <= threshold)
}

/// Number of nodes that report back.
pub fn feedback_count(r: &Realization, anchors: &AnchorPair, model: PathLossModel, threshold: f64) -> usize {
    r.points()
        .iter()
        .filter(|p| feedback_score(p, anchors, model) <= threshold)
        .count()
}
