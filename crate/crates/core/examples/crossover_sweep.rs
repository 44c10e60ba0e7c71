// A small bound-versus-empirical sweep written as CSV to stdout. The
// `tighter` column switches from `di` to `prop` as k grows.

use betafreeze::error::Result;
use betafreeze::experiment::{sweep, SweepConfig};

pub fn run_example() -> Result<()> {
    let cfg = SweepConfig::from_json(
        r#"{"n": [2, 4, 8], "k": [100, 1000, 10000, 100000], "c": [1.0], "trials": 2000, "seed": 1}"#,
    )?;
    let rows = sweep(&cfg, &mut std::io::stdout().lock())?;
    eprintln!("{} grid points", rows.len());
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
