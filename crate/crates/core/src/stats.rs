//! Estimators used by the experiments: exact binomial intervals, one-pass
//! moment accumulators, Kolmogorov–Smirnov tests, and batch-means errors for
//! correlated chains.

use serde::Serialize;
use statrs::function::beta::{beta_reg, inv_beta_reg, ln_beta};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Exact (Clopper–Pearson) two-sided interval for a binomial proportion.
pub fn clopper_pearson(hits: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 || hits > trials {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= hits <= trials and trials > 0, got {hits}/{trials}"
        )));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "confidence must lie in (0, 1), got {confidence}"
        )));
    }
    let alpha = 1.0 - confidence;
    let x = hits as f64;
    let n = trials as f64;
    let low = if hits == 0 {
        0.0
    } else {
        beta_quantile(x, n - x + 1.0, alpha / 2.0)
    };
    let high = if hits == trials {
        1.0
    } else {
        beta_quantile(x + 1.0, n - x, 1.0 - alpha / 2.0)
    };
    let p_hat = x / n;
    Ok((low.min(p_hat), high.max(p_hat)))
}

/// Quantile of Beta(a, b). statrs' inverse is only good to ~1e-8 relative,
/// so it seeds a few Newton steps on the regularized incomplete beta.
pub fn beta_quantile(a: f64, b: f64, q: f64) -> f64 {
    let mut x = inv_beta_reg(a, b, q);
    let ln_b = ln_beta(a, b);
    for _ in 0..8 {
        if !(x > 0.0 && x < 1.0) {
            break;
        }
        let ln_pdf = (a - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p() - ln_b;
        let step = (beta_reg(a, b, x) - q) / ln_pdf.exp();
        if !step.is_finite() {
            break;
        }
        let next = (x - step).clamp(x / 2.0, (1.0 + x) / 2.0);
        let done = (next - x).abs() <= 1e-15 * x;
        x = next;
        if done {
            break;
        }
    }
    x
}

/// Hit count with its exact interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailEstimate {
    pub trials: u64,
    pub hits: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub confidence: f64,
}

impl TailEstimate {
    pub fn new(hits: u64, trials: u64, confidence: f64) -> Result<Self> {
        let (ci_low, ci_high) = clopper_pearson(hits, trials, confidence)?;
        Ok(TailEstimate {
            trials,
            hits,
            p_hat: hits as f64 / trials as f64,
            ci_low,
            ci_high,
            confidence,
        })
    }
}

/// Welford mean and co-moment accumulator for vectors, mergeable across
/// workers (Chan et al. pairwise update).
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceAccumulator {
    dim: usize,
    count: u64,
    mean: Vec<f64>,
    comoment: Vec<f64>,
}

impl CovarianceAccumulator {
    pub fn new(dim: usize) -> Self {
        CovarianceAccumulator {
            dim,
            count: 0,
            mean: vec![0.0; dim],
            comoment: vec![0.0; dim * dim],
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn push(&mut self, x: &[f64]) {
        assert_eq!(x.len(), self.dim);
        self.count += 1;
        let inv = 1.0 / self.count as f64;
        let delta: Vec<f64> = x.iter().zip(&self.mean).map(|(a, m)| a - m).collect();
        for (m, d) in self.mean.iter_mut().zip(&delta) {
            *m += d * inv;
        }
        // C += (x - mean_old)(x - mean_new)ᵀ
        for i in 0..self.dim {
            let di = delta[i];
            for j in 0..self.dim {
                self.comoment[i * self.dim + j] += di * (x[j] - self.mean[j]);
            }
        }
    }

    pub fn merge(&mut self, other: &CovarianceAccumulator) {
        assert_eq!(self.dim, other.dim);
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = other.clone();
            return;
        }
        let na = self.count as f64;
        let nb = other.count as f64;
        let n = na + nb;
        let delta: Vec<f64> = other
            .mean
            .iter()
            .zip(&self.mean)
            .map(|(b, a)| b - a)
            .collect();
        for i in 0..self.dim {
            for j in 0..self.dim {
                self.comoment[i * self.dim + j] +=
                    other.comoment[i * self.dim + j] + delta[i] * delta[j] * na * nb / n;
            }
        }
        for (m, d) in self.mean.iter_mut().zip(&delta) {
            *m += d * nb / n;
        }
        self.count += other.count;
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// Unbiased sample covariance; requires at least two observations.
    pub fn covariance(&self) -> Matrix {
        let denom = (self.count.max(2) - 1) as f64;
        Matrix::from_fn(self.dim, |i, j| self.comoment[i * self.dim + j] / denom)
    }
}

/// Scalar mean/variance via the same recurrence.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningStats {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        (self.variance() / self.count as f64).sqrt()
    }
}

impl FromIterator<f64> for RunningStats {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = RunningStats::new();
        for x in iter {
            s.push(x);
        }
        s
    }
}

/// Standard error of the mean of a correlated series from `batches`
/// non-overlapping batch means.
pub fn batch_means_std_error(series: &[f64], batches: usize) -> f64 {
    assert!(batches >= 2 && series.len() >= batches);
    let len = series.len() / batches;
    let means: RunningStats = series
        .chunks_exact(len)
        .take(batches)
        .map(|c| c.iter().sum::<f64>() / len as f64)
        .collect();
    means.std_error()
}

/// Two-sided normal quantile `z` with `P(|Z| ≤ z) = confidence`.
pub fn normal_quantile_two_sided(confidence: f64) -> f64 {
    use statrs::function::erf::erf_inv;
    std::f64::consts::SQRT_2 * erf_inv(confidence)
}

/// One-sample Kolmogorov–Smirnov statistic `sup |F_n − F|`.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(|a, b| a.total_cmp(b));
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic p-value of the KS statistic `d` at sample size `n`
/// (Kolmogorov series with Stephens' small-sample correction).
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let t = d * (sn + 0.12 + 0.11 / sn);
    if t < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for j in 1..=100 {
        let jf = j as f64;
        let term = (-2.0 * jf * jf * t * t).exp();
        sum += if j % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}
