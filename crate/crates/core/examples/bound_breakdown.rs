// Term-by-term evaluation of the explicit tail bound, its corollary form,
// and the sup-norm baseline at the matching threshold.

use betafreeze::bounds::{
    cor_bound_raw, corollary_eps, dette_imhof_bound, gaussian_tail_bound, prop_bound, prop_window,
    unscaled_eps, Tighter,
};
use betafreeze::error::Result;

pub fn run_example() -> Result<()> {
    for (n, k) in [(2, 1e3), (2, 1e4), (3, 1e5), (10, 1e5)] {
        let eps = corollary_eps(k, 1.0);
        let b = prop_bound(n, k, eps)?;
        let (lo, hi) = prop_window(n, k);
        let di = dette_imhof_bound(n, unscaled_eps(k, eps));
        println!("n = {n}, k = {k:e}, eps = {eps:.5} (window [{lo:.5}, {hi:.5}])");
        println!(
            "  quartic {:.4e}  stirling {:.4e}  E {:.4e}  gaussian {:.4e}",
            b.term_quartic, b.term_stirling, b.e_factor, b.term_gaussian
        );
        println!(
            "  total {:.4e}  corollary {:.4e}  dette-imhof {:.4e}  tighter: {}",
            b.total,
            cor_bound_raw(n, k, 1.0),
            di,
            Tighter::compare(b.total, di)
        );
    }

    for eps in [1.0, 2.0, 3.0, 4.0] {
        println!(
            "chernoff tail bound, n = 5, eps = {eps}: {:.4e}",
            gaussian_tail_bound(5, eps)
        );
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
