// Cross-checks the tridiagonal sampler against a random-walk Metropolis
// chain on the ensemble density.

use betafreeze::error::Result;
use betafreeze::sampler::{EnsembleSampler, MetropolisOracle};
use betafreeze::stats::{batch_means_std_error, RunningStats};
use betafreeze::streams::{seed_stream, TrialStreams};

pub fn run_example() -> Result<()> {
    let (n, k, draws) = (3, 2.0, 20_000);
    let sampler = EnsembleSampler::new(n, k)?;
    let streams = TrialStreams::new(3);
    let exact: Vec<Vec<f64>> = (0..draws as u64)
        .map(|t| sampler.sample(&mut streams.for_trial(t)).map(|s| s.values))
        .collect::<Result<_>>()?;

    let mut rng = seed_stream(3, u64::MAX);
    let mut chain = MetropolisOracle::new(n, k, &mut rng, 20_000, 50)?;
    let mh: Vec<Vec<f64>> = (0..draws)
        .map(|_| chain.next_sample(&mut rng).values)
        .collect();
    println!(
        "step {:.3}, acceptance {:.3}",
        chain.step_size(),
        chain.acceptance_rate()
    );

    for i in 0..n {
        let a: RunningStats = exact.iter().map(|x| x[i]).collect();
        let b: Vec<f64> = mh.iter().map(|x| x[i]).collect();
        let mean_b = b.iter().sum::<f64>() / b.len() as f64;
        println!(
            "lambda_{}: exact {:+.4} ± {:.4}   metropolis {:+.4} ± {:.4}",
            i + 1,
            a.mean(),
            a.std_error(),
            mean_b,
            batch_means_std_error(&b, 50)
        );
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
