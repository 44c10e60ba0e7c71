//! Monte Carlo experiments: tail probabilities with exact intervals, the
//! empirical CLT covariance, the Gaussian reference tail, and bound sweeps.
//!
//! Every experiment draws trial `t` from stream `t` of the master seed, and
//! workers own contiguous blocks of trials. Output therefore depends only on
//! the seed and the trial count; the worker count changes wall time, not
//! results.

use std::io::Write;

use rand::RngExt;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, Tighter};
use crate::error::{Error, Result};
use crate::hermite::{compute_zeros, HermiteZeros, DEFAULT_ZERO_TOL};
use crate::sampler::EnsembleSampler;
use crate::spectral::build_precision;
use crate::stats::{CovarianceAccumulator, TailEstimate};
use crate::streams::{partition, SeedStream, TrialStreams};

pub const DEFAULT_TRIALS: u64 = 100_000;
pub const DEFAULT_CONFIDENCE: f64 = 0.99;

/// Tail threshold, either directly or through the corollary's `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Threshold {
    Eps(f64),
    C(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub k: f64,
    /// Required by the tail estimators, ignored by [`clt_covariance_test`].
    pub threshold: Option<Threshold>,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
    pub confidence: f64,
}

impl ExperimentConfig {
    pub fn new(n: usize, k: f64) -> Self {
        ExperimentConfig {
            n,
            k,
            threshold: None,
            trials: DEFAULT_TRIALS,
            seed: 0,
            workers: 1,
            confidence: DEFAULT_CONFIDENCE,
        }
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.threshold = Some(Threshold::Eps(eps));
        self
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.threshold = Some(Threshold::C(c));
        self
    }

    pub fn with_trials(mut self, trials: u64) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_confidence(mut self, confidence: f64) -> Self {
        self.confidence = confidence;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.n < 2 {
            return bad(format!("n must be >= 2, got {}", self.n));
        }
        if !(self.k > 0.0) || !self.k.is_finite() {
            return bad(format!("k must be finite and > 0, got {}", self.k));
        }
        if self.trials < 1 {
            return bad("trials must be >= 1".into());
        }
        if self.workers < 1 {
            return bad("workers must be >= 1".into());
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return bad(format!(
                "confidence must lie in (0, 1), got {}",
                self.confidence
            ));
        }
        match self.threshold {
            Some(Threshold::Eps(e)) if !(e >= 0.0) => bad(format!("eps must be >= 0, got {e}")),
            Some(Threshold::C(c)) if !(c > 0.0) || !c.is_finite() => {
                bad(format!("c must be finite and > 0, got {c}"))
            }
            Some(Threshold::C(_)) if !(self.k > 1.0) => {
                bad(format!("c thresholds need k > 1, got {}", self.k))
            }
            _ => Ok(()),
        }
    }

    fn threshold(&self) -> Result<Threshold> {
        self.threshold
            .ok_or_else(|| Error::InvalidConfig("tail estimate needs eps or c".into()))
    }

    /// Threshold on `‖X/√(2k) − z‖₂`. A `c` maps to `c √(ln k / k)`.
    pub fn scaled_eps(&self) -> Result<f64> {
        Ok(match self.threshold()? {
            Threshold::Eps(e) => e,
            Threshold::C(c) => bounds::corollary_eps(self.k, c),
        })
    }

    /// Threshold on `‖X − √(2k) z‖_∞`. An `eps` is taken as already unscaled;
    /// a `c` maps to `√(2k) c √(ln k / k)`.
    pub fn unscaled_eps(&self) -> Result<f64> {
        Ok(match self.threshold()? {
            Threshold::Eps(e) => e,
            Threshold::C(c) => bounds::unscaled_eps(self.k, bounds::corollary_eps(self.k, c)),
        })
    }
}

/// Runs `step` once per trial, each on its own stream, and returns one
/// accumulator per worker in worker order.
fn run_trials<A, I, F>(trials: u64, seed: u64, workers: usize, init: I, step: F) -> Result<Vec<A>>
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, &mut SeedStream) -> Result<()> + Sync,
{
    let streams = TrialStreams::new(seed);
    let blocks = partition(trials, workers);
    let work = |range: std::ops::Range<u64>| -> Result<A> {
        let mut acc = init();
        for t in range {
            step(&mut acc, &mut streams.for_trial(t))?;
        }
        Ok(acc)
    };
    if blocks.len() == 1 {
        return Ok(vec![work(blocks[0].clone())?]);
    }
    std::thread::scope(|s| {
        let handles: Vec<_> = blocks
            .into_iter()
            .map(|range| {
                let work = &work;
                s.spawn(move || work(range))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker thread panicked"))
            .collect()
    })
}

fn count_hits<F>(cfg: &ExperimentConfig, hit: F) -> Result<TailEstimate>
where
    F: Fn(&mut SeedStream) -> Result<bool> + Sync,
{
    let parts = run_trials(
        cfg.trials,
        cfg.seed,
        cfg.workers,
        || 0u64,
        |acc, rng| {
            *acc += u64::from(hit(rng)?);
            Ok(())
        },
    )?;
    TailEstimate::new(parts.into_iter().sum(), cfg.trials, cfg.confidence)
}

/// `X/√(2k) − z`.
pub fn scaled_deviation(values: &[f64], z: &HermiteZeros, k: f64) -> Vec<f64> {
    let s = (2.0 * k).sqrt();
    values
        .iter()
        .zip(z.zeros())
        .map(|(x, z)| x / s - z)
        .collect()
}

/// `X − √(2k) z`.
pub fn unscaled_deviation(values: &[f64], z: &HermiteZeros, k: f64) -> Vec<f64> {
    let s = (2.0 * k).sqrt();
    values
        .iter()
        .zip(z.zeros())
        .map(|(x, z)| x - s * z)
        .collect()
}

pub fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Estimates `P(‖X/√(2k) − z‖₂ > ε)`.
pub fn estimate_tail_l2(cfg: &ExperimentConfig) -> Result<TailEstimate> {
    cfg.validate()?;
    let eps = cfg.scaled_eps()?;
    let z = compute_zeros(cfg.n, DEFAULT_ZERO_TOL)?;
    let sampler = EnsembleSampler::new(cfg.n, cfg.k)?;
    count_hits(cfg, |rng| {
        let x = sampler.sample(rng)?;
        Ok(l2_norm(&scaled_deviation(&x.values, &z, cfg.k)) > eps)
    })
}

/// Estimates `P(‖X − √(2k) z‖_∞ > ε)` on the unscaled vector.
pub fn estimate_tail_sup(cfg: &ExperimentConfig) -> Result<TailEstimate> {
    cfg.validate()?;
    let eps = cfg.unscaled_eps()?;
    let z = compute_zeros(cfg.n, DEFAULT_ZERO_TOL)?;
    let sampler = EnsembleSampler::new(cfg.n, cfg.k)?;
    count_hits(cfg, |rng| {
        let x = sampler.sample(rng)?;
        Ok(sup_norm(&unscaled_deviation(&x.values, &z, cfg.k)) > eps)
    })
}

/// Empirical moments of `Y = X − √(2k) z` against the limit `N(0, Σ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CltReport {
    pub n: usize,
    pub k: f64,
    pub trials: u64,
    /// `‖mean(Y)‖₂`.
    pub mean_norm: f64,
    /// `‖cov(Y) − Σ‖_F / ‖Σ‖_F`.
    pub cov_rel_err: f64,
    /// `tr Σ`, for scaling `mean_norm`.
    pub sigma_trace: f64,
}

pub fn clt_covariance_test(cfg: &ExperimentConfig) -> Result<CltReport> {
    cfg.validate()?;
    if cfg.trials < 2 {
        return Err(Error::InvalidConfig("clt needs at least 2 trials".into()));
    }
    let z = compute_zeros(cfg.n, DEFAULT_ZERO_TOL)?;
    let sigma = build_precision(&z)?.covariance();
    let sampler = EnsembleSampler::new(cfg.n, cfg.k)?;
    let parts = run_trials(
        cfg.trials,
        cfg.seed,
        cfg.workers,
        || CovarianceAccumulator::new(cfg.n),
        |acc, rng| {
            let x = sampler.sample(rng)?;
            acc.push(&unscaled_deviation(&x.values, &z, cfg.k));
            Ok(())
        },
    )?;
    let mut acc = CovarianceAccumulator::new(cfg.n);
    for p in &parts {
        acc.merge(p);
    }
    let cov = acc.covariance();
    let mut diff = cov.clone();
    for i in 0..cfg.n {
        for j in 0..cfg.n {
            diff[(i, j)] -= sigma[(i, j)];
        }
    }
    Ok(CltReport {
        n: cfg.n,
        k: cfg.k,
        trials: cfg.trials,
        mean_norm: l2_norm(acc.mean()),
        cov_rel_err: diff.frobenius_norm() / sigma.frobenius_norm(),
        sigma_trace: sigma.trace(),
    })
}

/// Monte Carlo tail `P(‖X̃‖₂ > ε)` for `X̃ ~ N(0, diag(1, ½, …, 1/n))`, at
/// the default confidence.
pub fn gaussian_reference_tail(n: usize, eps: f64, trials: u64, seed: u64) -> Result<TailEstimate> {
    let cfg = ExperimentConfig::new(n, 1.0)
        .with_eps(eps)
        .with_trials(trials)
        .with_seed(seed);
    cfg.validate()?;
    let sd: Vec<f64> = (1..=n).map(|l| 1.0 / (l as f64).sqrt()).collect();
    let eps2 = eps * eps;
    count_hits(&cfg, |rng| {
        let r2: f64 = sd
            .iter()
            .map(|s| {
                let g: f64 = rng.sample(StandardNormal);
                let x = g * s;
                x * x
            })
            .sum();
        Ok(r2 > eps2)
    })
}

/// `{:.16e}`: 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// `# key = value` lines recording the crate version and run parameters.
pub fn provenance_header(command: &str, fields: &[(&str, String)]) -> String {
    let mut s = format!("# betafreeze {} {command}\n", env!("CARGO_PKG_VERSION"));
    for (key, value) in fields {
        s.push_str(&format!("# {key} = {value}\n"));
    }
    s
}

fn default_trials() -> u64 {
    DEFAULT_TRIALS
}

fn default_workers() -> usize {
    1
}

fn default_confidence() -> f64 {
    DEFAULT_CONFIDENCE
}

/// Grid for [`sweep`], read from JSON. Grid points are visited with `n`
/// outermost and `c` innermost; every point reuses the same master seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub n: Vec<usize>,
    pub k: Vec<f64>,
    pub c: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default = "default_confidence")]
    pub confidence: f64,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(format!("sweep config: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        if self.seed.is_none() {
            return Err(Error::InvalidConfig("sweep config has no seed".into()));
        }
        if let Some(k) = self.k.iter().find(|&&k| !(k > 1.0) || !k.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "sweep k values must be finite and > 1, got {k}"
            )));
        }
        // n, c and the shared fields are checked through one point's config
        for &n in &self.n {
            for &c in &self.c {
                self.point(n, self.k.first().copied().unwrap_or(2.0), c)
                    .validate()?;
            }
        }
        if self.n.is_empty() || self.c.is_empty() {
            self.point(2, 2.0, 1.0).validate()?;
        }
        Ok(())
    }

    fn point(&self, n: usize, k: f64, c: f64) -> ExperimentConfig {
        ExperimentConfig::new(n, k)
            .with_c(c)
            .with_trials(self.trials)
            .with_seed(self.seed.unwrap_or(0))
            .with_workers(self.workers)
            .with_confidence(self.confidence)
    }
}

pub const SWEEP_COLUMNS: [&str; 20] = [
    "N",
    "k",
    "c",
    "eps",
    "trials",
    "hits",
    "p_hat",
    "ci_low",
    "ci_high",
    "prop_term_quartic",
    "prop_term_stirling",
    "prop_e_factor",
    "prop_term_gaussian",
    "prop_total",
    "prop_total_clamped",
    "condition_ok",
    "cor_bound",
    "di_eps_unscaled",
    "di_bound",
    "tighter",
];

/// One grid point of a sweep. `cor_bound` is the raw corollary value; its
/// window coincides with the main bound's at `ε = c √(ln k / k)`, so
/// `condition_ok` covers both.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub k: f64,
    pub c: f64,
    pub eps: f64,
    pub tail: TailEstimate,
    pub prop: bounds::BoundBreakdown,
    pub cor_bound: f64,
    pub di_eps_unscaled: f64,
    pub di_bound: f64,
    pub tighter: Tighter,
}

impl SweepRow {
    pub fn to_csv_line(&self) -> String {
        let f = fmt_f64;
        [
            self.n.to_string(),
            f(self.k),
            f(self.c),
            f(self.eps),
            self.tail.trials.to_string(),
            self.tail.hits.to_string(),
            f(self.tail.p_hat),
            f(self.tail.ci_low),
            f(self.tail.ci_high),
            f(self.prop.term_quartic),
            f(self.prop.term_stirling),
            f(self.prop.e_factor),
            f(self.prop.term_gaussian),
            f(self.prop.total),
            f(self.prop.total_clamped),
            self.prop.condition_ok.to_string(),
            f(self.cor_bound),
            f(self.di_eps_unscaled),
            f(self.di_bound),
            self.tighter.to_string(),
        ]
        .join(",")
    }
}

/// Evaluates one grid point.
pub fn sweep_point(cfg: &SweepConfig, n: usize, k: f64, c: f64) -> Result<SweepRow> {
    let point = cfg.point(n, k, c);
    let eps = point.scaled_eps()?;
    let tail = estimate_tail_l2(&point)?;
    let prop = bounds::prop_bound(n, k, eps)?;
    let di_eps_unscaled = bounds::unscaled_eps(k, eps);
    let di_bound = bounds::dette_imhof_bound(n, di_eps_unscaled);
    Ok(SweepRow {
        n,
        k,
        c,
        eps,
        tail,
        prop,
        cor_bound: bounds::cor_bound_raw(n, k, c),
        di_eps_unscaled,
        di_bound,
        tighter: Tighter::compare(prop.total, di_bound),
    })
}

/// Writes the sweep CSV: provenance comments, the header, then one row per
/// grid point, flushed as it completes. On a failing point the rows already
/// written stay in `out` and the error is returned.
pub fn sweep<W: Write>(cfg: &SweepConfig, out: &mut W) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let header = provenance_header(
        "sweep",
        &[
            ("trials", cfg.trials.to_string()),
            ("seed", cfg.seed.unwrap_or(0).to_string()),
            ("workers", cfg.workers.to_string()),
            ("confidence", cfg.confidence.to_string()),
            ("eps", "c * sqrt(ln k / k)".into()),
        ],
    );
    out.write_all(header.as_bytes())?;
    writeln!(out, "{}", SWEEP_COLUMNS.join(","))?;
    out.flush()?;
    let mut rows = Vec::new();
    for &n in &cfg.n {
        for &k in &cfg.k {
            for &c in &cfg.c {
                let row = sweep_point(cfg, n, k, c)?;
                writeln!(out, "{}", row.to_csv_line())?;
                out.flush()?;
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_thresholds() {
        let base = ExperimentConfig::new(3, 5.0).with_trials(500).with_seed(1);
        assert_eq!(
            estimate_tail_l2(&base.clone().with_eps(0.0)).unwrap().p_hat,
            1.0
        );
        assert_eq!(
            estimate_tail_l2(&base.clone().with_eps(f64::INFINITY))
                .unwrap()
                .p_hat,
            0.0
        );
        assert_eq!(
            estimate_tail_sup(&base.clone().with_eps(0.0))
                .unwrap()
                .p_hat,
            1.0
        );
        assert_eq!(
            estimate_tail_sup(&base.with_eps(f64::INFINITY))
                .unwrap()
                .hits,
            0
        );
    }

    #[test]
    fn workers_do_not_change_results() {
        let cfg = ExperimentConfig::new(4, 20.0)
            .with_eps(0.05)
            .with_trials(2001)
            .with_seed(9);
        let one = estimate_tail_l2(&cfg).unwrap();
        let three = estimate_tail_l2(&cfg.clone().with_workers(3)).unwrap();
        assert_eq!(one, three);
    }

    #[test]
    fn config_validation() {
        let ok = ExperimentConfig::new(2, 10.0).with_eps(0.1);
        assert!(ok.validate().is_ok());
        assert!(ok.clone().with_trials(0).validate().is_err());
        assert!(ok.clone().with_workers(0).validate().is_err());
        assert!(ok.clone().with_confidence(1.0).validate().is_err());
        assert!(ok.clone().with_eps(f64::NAN).validate().is_err());
        assert!(ExperimentConfig::new(2, 1.0)
            .with_c(1.0)
            .validate()
            .is_err());
        let missing = ExperimentConfig::new(2, 10.0);
        assert!(matches!(
            estimate_tail_l2(&missing),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn c_threshold_maps_consistently() {
        let cfg = ExperimentConfig::new(2, 1e3).with_c(1.0);
        let e = cfg.scaled_eps().unwrap();
        assert!((e - (1e3f64.ln() / 1e3).sqrt()).abs() < 1e-16);
        assert!((cfg.unscaled_eps().unwrap() - e * 2e3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn empty_grid_is_header_only() {
        let cfg = SweepConfig::from_json(r#"{"n": [], "k": [100], "c": [1], "seed": 3}"#).unwrap();
        let mut buf = Vec::new();
        assert!(sweep(&cfg, &mut buf).unwrap().is_empty());
        let text = String::from_utf8(buf).unwrap();
        let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data, vec![SWEEP_COLUMNS.join(",")]);
    }

    #[test]
    fn sweep_config_rejects_unknown_fields_and_missing_seed() {
        assert!(SweepConfig::from_json(r#"{"n": [2], "k": [10], "c": [1], "bogus": 1}"#).is_err());
        let cfg = SweepConfig::from_json(r#"{"n": [2], "k": [10], "c": [1]}"#).unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn fmt_round_trips() {
        for x in [0.1, 1.0 / 3.0, 6.02e23, -2.5e-300] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }
}
