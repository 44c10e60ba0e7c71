// Empirical covariance of X − √(2k) z against the limit covariance as k
// grows.

use betafreeze::error::Result;
use betafreeze::experiment::{clt_covariance_test, ExperimentConfig};

pub fn run_example() -> Result<()> {
    for k in [1.0, 10.0, 100.0, 1e4] {
        let r = clt_covariance_test(&ExperimentConfig::new(3, k).with_trials(20_000).with_seed(5))?;
        println!(
            "k = {k:>7}: cov rel err {:.4}, |mean| {:.4} (noise scale {:.4})",
            r.cov_rel_err,
            r.mean_norm,
            (r.sigma_trace / r.trials as f64).sqrt()
        );
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
