use statrs::distribution::{ChiSquared, ContinuousCDF, Discrete, Poisson};

use crate::error::{invalid, Result};

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    /// Sample standard deviation over `√n_trials`.
    pub std_error: f64,
    pub n_trials: usize,
}

impl Estimate {
    /// Whether `value` lies within `k` standard errors of the mean.
    pub fn within(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.std_error
    }
}

/// Running count, sum and sum of squares; merging is associative.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Accumulator {
    n: usize,
    sum: f64,
    sum_sq: f64,
}

impl Accumulator {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn merge(&mut self, other: &Accumulator) {
        self.n += other.n;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn estimate(&self) -> Estimate {
        let n = self.n as f64;
        let mean = if self.n == 0 { f64::NAN } else { self.sum / n };
        let var = if self.n < 2 {
            0.0
        } else {
            ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
        };
        Estimate {
            mean,
            std_error: (var / n).sqrt(),
            n_trials: self.n,
        }
    }
}

/// Sorted sample with empirical-CDF queries. May contain `+∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDist {
    samples: Vec<f64>,
}

impl EmpiricalDist {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(invalid("empirical distribution needs at least one sample"));
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(invalid("NaN in empirical sample"));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Fraction of samples `≤ x`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.samples.partition_point(|&s| s <= x) as f64 / self.len() as f64
    }

    /// Half-width of the Dvoretzky–Kiefer–Wolfowitz band at the given confidence.
    pub fn dkw_epsilon(&self, confidence: f64) -> f64 {
        dkw_epsilon(self.len(), confidence)
    }

    /// Kolmogorov–Smirnov distance `sup |Fₙ − F|` to a continuous CDF.
    pub fn ks_distance(&self, cdf: impl Fn(f64) -> f64) -> f64 {
        let n = self.len() as f64;
        self.samples
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = cdf(x);
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.len() as f64
    }
}

/// `√(ln(2/α)/(2n))` with `α = 1 − confidence`.
pub fn dkw_epsilon(n: usize, confidence: f64) -> f64 {
    ((2.0 / (1.0 - confidence)).ln() / (2.0 * n as f64)).sqrt()
}

/// Pearson chi-square test outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Histogram of non-negative integer counts.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CountHistogram {
    /// `frequencies[k]` is the number of trials with count `k`.
    frequencies: Vec<u64>,
    n: u64,
}

impl CountHistogram {
    pub fn push(&mut self, count: usize) {
        if self.frequencies.len() <= count {
            self.frequencies.resize(count + 1, 0);
        }
        self.frequencies[count] += 1;
        self.n += 1;
    }

    pub fn merge(&mut self, other: &CountHistogram) {
        if self.frequencies.len() < other.frequencies.len() {
            self.frequencies.resize(other.frequencies.len(), 0);
        }
        for (a, b) in self.frequencies.iter_mut().zip(&other.frequencies) {
            *a += b;
        }
        self.n += other.n;
    }

    pub fn frequencies(&self) -> &[u64] {
        &self.frequencies
    }

    pub fn n_trials(&self) -> u64 {
        self.n
    }

    pub fn max_count(&self) -> usize {
        self.frequencies.len().saturating_sub(1)
    }

    pub fn mean(&self) -> f64 {
        self.moment(1) / self.n as f64
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        let n = self.n as f64;
        let m = self.mean();
        (self.moment(2) - n * m * m) / (n - 1.0)
    }

    /// Mean with its standard error.
    pub fn mean_estimate(&self) -> Estimate {
        Estimate {
            mean: self.mean(),
            std_error: (self.variance() / self.n as f64).sqrt(),
            n_trials: self.n as usize,
        }
    }

    /// Sample variance with a standard error from the fourth central moment.
    pub fn variance_estimate(&self) -> Estimate {
        let n = self.n as f64;
        let m = self.mean();
        let m4 = self
            .frequencies
            .iter()
            .enumerate()
            .map(|(k, &f)| f as f64 * (k as f64 - m).powi(4))
            .sum::<f64>()
            / n;
        let v = self.variance();
        Estimate {
            mean: v,
            std_error: ((m4 - v * v * (n - 3.0) / (n - 1.0)) / n).max(0.0).sqrt(),
            n_trials: self.n as usize,
        }
    }

    fn moment(&self, p: i32) -> f64 {
        self.frequencies
            .iter()
            .enumerate()
            .map(|(k, &f)| f as f64 * (k as f64).powi(p))
            .sum()
    }

    /// Pearson goodness of fit against Poisson(`mean`), merging adjacent
    /// classes until each expects at least five observations.
    pub fn poisson_gof(&self, mean: f64) -> Result<ChiSquareTest> {
        if !(mean > 0.0) {
            return Err(invalid(format!("Poisson mean {mean} must be positive")));
        }
        let poisson = Poisson::new(mean).map_err(|e| invalid(e.to_string()))?;
        let n = self.n as f64;
        let observed = |k: usize| self.frequencies.get(k).copied().unwrap_or(0) as f64;
        // Walk the support until the remaining tail expects fewer than five.
        let mut bins: Vec<(f64, f64)> = Vec::new();
        let (mut exp_acc, mut obs_acc, mut cum) = (0.0, 0.0, 0.0);
        let mut k = 0usize;
        loop {
            let p = poisson.pmf(k as u64);
            cum += p;
            exp_acc += n * p;
            obs_acc += observed(k);
            k += 1;
            let tail_expected = n * (1.0 - cum).max(0.0);
            if exp_acc >= 5.0 && tail_expected >= 5.0 {
                bins.push((obs_acc, exp_acc));
                exp_acc = 0.0;
                obs_acc = 0.0;
            } else if tail_expected < 5.0 && k > mean as usize {
                break;
            }
        }
        // Last class absorbs everything from k on.
        let rest: f64 = (k..self.frequencies.len()).map(observed).sum();
        let last = (obs_acc + rest, exp_acc + n * (1.0 - cum).max(0.0));
        match bins.last_mut() {
            Some(b) if last.1 < 5.0 => {
                b.0 += last.0;
                b.1 += last.1;
            }
            _ => bins.push(last),
        }
        if bins.len() < 2 {
            return Err(invalid("too few classes for a chi-square test"));
        }
        let statistic: f64 = bins.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
        let dof = bins.len() - 1;
        let dist = ChiSquared::new(dof as f64).map_err(|e| invalid(e.to_string()))?;
        Ok(ChiSquareTest {
            statistic,
            dof,
            p_value: dist.sf(statistic),
        })
    }
}
