// The limit precision matrix: integer spectrum, trace identities, and draws
// from the Gaussian limit.

use betafreeze::error::Result;
use betafreeze::hermite::{compute_zeros, DEFAULT_ZERO_TOL};
use betafreeze::spectral::{build_precision, sample_gaussian_limit, spectrum_deviation, verify};
use betafreeze::stats::CovarianceAccumulator;
use betafreeze::streams::seed_stream;

pub fn run_example() -> Result<()> {
    let p = build_precision(&compute_zeros(6, DEFAULT_ZERO_TOL)?)?;
    println!(
        "eigenvalues of S_6: {:?}",
        p.eigenvalues()
            .iter()
            .map(|l| format!("{l:.12}"))
            .collect::<Vec<_>>()
    );
    println!("spectrum deviation: {:.2e}", spectrum_deviation(&p));

    for check in verify(40)?.checks {
        println!(
            "  {:28} {:.3e} (limit {:.3e}) {}",
            check.name,
            check.value,
            check.limit,
            if check.passed { "ok" } else { "FAILED" }
        );
    }

    // empirical covariance of the limit law against Σ = S⁻¹
    let p = build_precision(&compute_zeros(2, DEFAULT_ZERO_TOL)?)?;
    let mut rng = seed_stream(1, 0);
    let mut acc = CovarianceAccumulator::new(2);
    for _ in 0..50_000 {
        acc.push(&sample_gaussian_limit(&p, &mut rng));
    }
    let c = acc.covariance();
    println!(
        "n = 2 sample covariance [[{:.4}, {:.4}], [{:.4}, {:.4}]] vs [[0.75, 0.25], [0.25, 0.75]]",
        c[(0, 0)],
        c[(0, 1)],
        c[(1, 0)],
        c[(1, 1)]
    );
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
