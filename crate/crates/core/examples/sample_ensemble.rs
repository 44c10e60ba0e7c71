// Exact draws from the tridiagonal model, and the freezing of X/√(2k) onto
// the Hermite zeros as k grows.

use betafreeze::error::Result;
use betafreeze::hermite::{compute_zeros, DEFAULT_ZERO_TOL};
use betafreeze::sampler::EnsembleSampler;
use betafreeze::streams::TrialStreams;

pub fn run_example() -> Result<()> {
    let n = 4;
    let z = compute_zeros(n, DEFAULT_ZERO_TOL)?;
    let streams = TrialStreams::new(7);
    println!("z_4 = {:?}", z.zeros());
    for k in [1.0, 10.0, 100.0, 1e4] {
        let sampler = EnsembleSampler::new(n, k)?;
        let x = sampler.sample(&mut streams.for_trial(0))?;
        let scaled: Vec<String> = x
            .values
            .iter()
            .map(|v| format!("{:+.4}", v / (2.0 * k).sqrt()))
            .collect();
        println!(
            "k = {k:>7} (beta = {:>7}): X/sqrt(2k) = [{}]",
            x.beta(),
            scaled.join(", ")
        );
    }

    // n = 2: (λ₁ − λ₂)²/2 is χ² with 2k + 1 degrees of freedom
    let k = 5.0;
    let sampler = EnsembleSampler::new(2, k)?;
    let trials = 20_000;
    let mean: f64 = (0..trials)
        .map(|t| {
            let x = sampler
                .sample(&mut streams.for_trial(t))
                .map(|s| s.values)?;
            Ok((x[0] - x[1]).powi(2) / 2.0)
        })
        .sum::<Result<f64>>()?
        / trials as f64;
    println!("n = 2, k = 5: mean gap²/2 = {mean:.3} (exact 11)");
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
