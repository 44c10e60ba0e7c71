// Monte Carlo tail probabilities with exact intervals, next to the bounds
// that are supposed to dominate them.

use betafreeze::bounds::{dette_imhof_bound, gaussian_tail_bound, prop_bound};
use betafreeze::error::Result;
use betafreeze::experiment::{
    estimate_tail_l2, estimate_tail_sup, gaussian_reference_tail, ExperimentConfig,
};

pub fn run_example() -> Result<()> {
    let cfg = ExperimentConfig::new(2, 1e4)
        .with_c(1.0)
        .with_trials(20_000)
        .with_seed(11);
    let eps = cfg.scaled_eps()?;
    let est = estimate_tail_l2(&cfg)?;
    let bound = prop_bound(2, 1e4, eps)?;
    println!(
        "l2 tail at eps = {eps:.5}: {} / {} hits, 99% CI [{:.2e}, {:.2e}], bound {:.4} (condition ok: {})",
        est.hits, est.trials, est.ci_low, est.ci_high, bound.total, bound.condition_ok
    );

    let sup = estimate_tail_sup(&cfg.clone().with_eps(3.0))?;
    println!(
        "sup tail at unscaled eps = 3: p_hat {:.4}, dette-imhof {:.4}",
        sup.p_hat,
        dette_imhof_bound(2, 3.0)
    );

    for eps in [1.5, 2.5] {
        let g = gaussian_reference_tail(5, eps, 50_000, 11)?;
        println!(
            "gaussian reference, n = 5, eps = {eps}: p_hat {:.4e} <= {:.4e}",
            g.p_hat,
            gaussian_tail_bound(5, eps)
        );
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
