// Zeros of H_n with both identity residuals and the ensemble's log
// normalization constant.

use betafreeze::error::Result;
use betafreeze::hermite::{
    compute_zeros, fixed_point_residual, log_norm_const, potential_identity_gap, DEFAULT_ZERO_TOL,
};

pub fn run_example() -> Result<()> {
    let z = compute_zeros(8, DEFAULT_ZERO_TOL)?;
    println!("zeros of H_8:");
    for (i, x) in z.zeros().iter().enumerate() {
        println!("  z_{} = {x:+.15}", i + 1);
    }
    println!("fixed-point residual  {:.3e}", fixed_point_residual(&z)?);
    println!("potential gap         {:.3e}", potential_identity_gap(&z)?);

    for n in [50, 200] {
        let z = compute_zeros(n, DEFAULT_ZERO_TOL)?;
        println!(
            "n = {n:3}: residual {:.2e}, potential gap {:.2e}, largest zero {:.6}",
            fixed_point_residual(&z)?,
            potential_identity_gap(&z)?,
            z.zeros()[0]
        );
    }

    for (n, k) in [(2, 1.0), (5, 3.5), (40, 120.0)] {
        println!("ln c(n = {n}, k = {k}) = {:.12}", log_norm_const(n, k)?);
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
