//! Explicit finite-parameter tail bounds for the scaled ensemble.
//!
//! For `n ≥ 2`, `k ≥ 1` and `√((1 + ln n)/(2k)) ≤ ε ≤ 1/(2√n)`,
//!
//! ```text
//! P(‖X/√(2k) − z‖₂ > ε) ≤ (32/3) ε⁴ k n³ − (n − 1)/(26k)
//!                          + E · (√e √n / 2) (2kε² + 1) e^{−kε²},
//! E = exp((1/k)((n − 1)/26 − (32/3) ε⁴ k² n³)).
//! ```
//!
//! Substituting `ε = c √(ln k / k)` and `E ≤ 1` gives the simpler corollary
//! bound evaluated by [`cor_bound`]. The sup-norm bound `4n e^{−ε²/18}` on the
//! unscaled vector is the comparison baseline.

use serde::Serialize;

use crate::error::{Error, Result};

/// Every term of the main bound, kept separate so sweeps can plot them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundBreakdown {
    /// `(32/3) ε⁴ k n³`.
    pub term_quartic: f64,
    /// `(n − 1)/(26k)`.
    pub term_stirling: f64,
    /// `E`.
    pub e_factor: f64,
    /// `E (√e √n / 2)(2kε² + 1) e^{−kε²}`.
    pub term_gaussian: f64,
    /// `term_quartic − term_stirling + term_gaussian`; may leave `[0, 1]`.
    pub total: f64,
    pub total_clamped: f64,
    pub condition_ok: bool,
}

/// Which of two upper bounds is smaller at a grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tighter {
    Prop,
    Di,
    Tie,
}

impl Tighter {
    /// Compares raw (unclamped) bound values.
    pub fn compare(prop_total: f64, di_bound: f64) -> Self {
        if prop_total < di_bound {
            Tighter::Prop
        } else if di_bound < prop_total {
            Tighter::Di
        } else {
            Tighter::Tie
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Tighter::Prop => "prop",
            Tighter::Di => "di",
            Tighter::Tie => "tie",
        }
    }
}

impl std::fmt::Display for Tighter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn check_nk(n: usize, k: f64, k_min: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be >= 2, got {n}")));
    }
    if !(k >= k_min) || !k.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "k must be finite and >= {k_min}, got {k}"
        )));
    }
    Ok(())
}

/// Lower and upper end of the admissible ε window.
pub fn prop_window(n: usize, k: f64) -> (f64, f64) {
    let nf = n as f64;
    (
        ((1.0 + nf.ln()) / (2.0 * k)).sqrt(),
        1.0 / (2.0 * nf.sqrt()),
    )
}

/// `√((1 + ln n)/(2k)) ≤ ε ≤ 1/(2√n)`. False for inputs outside
/// `n ≥ 2, k ≥ 1, ε > 0`.
pub fn prop_condition(n: usize, k: f64, eps: f64) -> bool {
    if n < 2 || !(k >= 1.0) || !(eps > 0.0) {
        return false;
    }
    let (lo, hi) = prop_window(n, k);
    lo <= eps && eps <= hi
}

/// `(32/3) ε⁴ k n³`. Shared by [`prop_bound`] and [`cor_bound`].
pub fn quartic_term(n: usize, k: f64, eps: f64) -> f64 {
    let nf = n as f64;
    32.0 / 3.0 * eps.powi(4) * k * nf.powi(3)
}

/// `ln[(√e · n_factor / 2)(2kε² + 1) e^{−kε²}]`.
fn ln_gaussian_core(n_factor: f64, k: f64, eps: f64) -> f64 {
    let ke2 = k * eps * eps;
    0.5 + n_factor.ln() - std::f64::consts::LN_2 + (2.0 * ke2).ln_1p() - ke2
}

/// The ε that corresponds to the corollary's `c`: `c √(ln k / k)`.
pub fn corollary_eps(k: f64, c: f64) -> f64 {
    c * (k.ln() / k).sqrt()
}

/// Evaluates the main bound at `(n, k, ε)`. The breakdown is returned even
/// when the ε window is violated; `condition_ok` records it.
pub fn prop_bound(n: usize, k: f64, eps: f64) -> Result<BoundBreakdown> {
    check_nk(n, k, 1.0)?;
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "eps must be finite and > 0, got {eps}"
        )));
    }
    let nf = n as f64;
    let term_quartic = quartic_term(n, k, eps);
    let term_stirling = (nf - 1.0) / (26.0 * k);
    let ln_e = term_stirling - term_quartic;
    let e_factor = ln_e.exp();
    let term_gaussian = (ln_e + ln_gaussian_core(nf.sqrt(), k, eps)).exp();
    let total = term_quartic - term_stirling + term_gaussian;
    Ok(BoundBreakdown {
        term_quartic,
        term_stirling,
        e_factor,
        term_gaussian,
        total,
        total_clamped: total.clamp(0.0, 1.0),
        condition_ok: prop_condition(n, k, eps),
    })
}

/// `√((1 + ln n)/(2 ln k)) ≤ c ≤ ½ √(k/(n ln k))` together with `k ≥ e`.
pub fn cor_condition(n: usize, k: f64, c: f64) -> bool {
    if n < 2 || !(k >= std::f64::consts::E) || !(c > 0.0) {
        return false;
    }
    let nf = n as f64;
    let lk = k.ln();
    let lo = ((1.0 + nf.ln()) / (2.0 * lk)).sqrt();
    let hi = 0.5 * (k / (nf * lk)).sqrt();
    lo <= c && c <= hi
}

/// The corollary bound without the window check:
/// `(32/3) c⁴ n³ (ln k)²/k + (√e n / 2)(2c² ln k + 1) k^{−c²}`.
///
/// The first summand is evaluated as `quartic_term(n, k, c√(ln k/k))`, so it
/// matches the main bound's quartic term at that ε bit for bit.
pub fn cor_bound_raw(n: usize, k: f64, c: f64) -> f64 {
    let (quartic, gaussian) = cor_terms(n, k, c);
    quartic + gaussian
}

/// The two summands of [`cor_bound_raw`].
pub fn cor_terms(n: usize, k: f64, c: f64) -> (f64, f64) {
    let eps = corollary_eps(k, c);
    (
        quartic_term(n, k, eps),
        ln_gaussian_core(n as f64, k, eps).exp(),
    )
}

/// The corollary bound; fails with [`Error::ConditionViolated`] outside its
/// `c` window.
pub fn cor_bound(n: usize, k: f64, c: f64) -> Result<f64> {
    check_nk(n, k, std::f64::consts::E)?;
    if !cor_condition(n, k, c) {
        return Err(Error::ConditionViolated(format!(
            "c = {c} outside the admissible window for n = {n}, k = {k}"
        )));
    }
    Ok(cor_bound_raw(n, k, c))
}

/// `4n e^{−ε²/18}` for the sup-norm deviation of the unscaled vector.
pub fn dette_imhof_bound(n: usize, eps_unscaled: f64) -> f64 {
    4.0 * n as f64 * (-eps_unscaled * eps_unscaled / 18.0).exp()
}

/// Converts a threshold on the scaled vector to the unscaled one.
pub fn unscaled_eps(k: f64, eps_scaled: f64) -> f64 {
    (2.0 * k).sqrt() * eps_scaled
}

/// `φ(δ) = e^{rδ} / (1 − 2δ)` on `[0, ½)`.
pub fn phi(r: f64, delta: f64) -> f64 {
    (r * delta).exp() / (1.0 - 2.0 * delta)
}

/// Minimiser of [`phi`] on `[0, ½)`: `0` for `r ≥ −2`, else `½ + 1/r`.
pub fn optimize_delta(r: f64) -> f64 {
    if r >= -2.0 {
        0.0
    } else {
        0.5 + 1.0 / r
    }
}

/// Chernoff bound on `P(‖X̃‖₂ > ε)` for `X̃ ~ N(0, diag(1, ½, …, 1/n))`,
/// `min_δ e^{(−ε² − 1 + ln n)δ} / (1 − 2δ)`.
pub fn gaussian_tail_bound(n: usize, eps: f64) -> f64 {
    let r = -eps * eps - 1.0 + (n as f64).ln();
    phi(r, optimize_delta(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_examples() {
        assert!(prop_condition(2, 1e4, 0.05));
        let (lo, hi) = prop_window(2, 1e4);
        assert!((lo - 0.009_202).abs() < 1e-5);
        assert!((hi - 0.353_553).abs() < 1e-5);
        assert!(!prop_condition(2, 1.0, 0.3));
        assert!((prop_window(2, 1.0).0 - 0.920_1).abs() < 1e-4);
    }

    #[test]
    fn window_nonempty_iff_k_large() {
        for n in [2usize, 3, 5, 10, 50] {
            let nf = n as f64;
            let k_star = 2.0 * nf * (1.0 + nf.ln());
            let (lo, hi) = prop_window(n, k_star * 1.001);
            assert!(lo <= hi);
            let (lo, hi) = prop_window(n, k_star * 0.999);
            assert!(lo > hi);
        }
    }

    #[test]
    fn breakdown_identities() {
        let b = prop_bound(3, 5e4, 0.01).unwrap();
        assert!((b.total - (b.term_quartic - b.term_stirling + b.term_gaussian)).abs() < 1e-15);
        let ln_e: f64 = (1.0 / 5e4) * (2.0 / 26.0 - 32.0 / 3.0 * 1e-8 * 25e8 * 27.0);
        assert!((b.e_factor - ln_e.exp()).abs() < 1e-15);
        assert_eq!(b.total_clamped, b.total.clamp(0.0, 1.0));
        assert!(b.condition_ok);
    }

    #[test]
    fn small_eps_limit() {
        let n = 4;
        let b = prop_bound(n, 100.0, 1e-9).unwrap();
        assert!(b.term_quartic < 1e-30);
        let expected = b.e_factor * 0.5_f64.exp() * (n as f64).sqrt() / 2.0;
        assert!((b.term_gaussian - expected).abs() < 1e-12);
        assert!(!b.condition_ok);
    }

    #[test]
    fn extreme_inputs_stay_finite() {
        for &k in &[1.0, 1e3, 1e8, 1e12] {
            for &eps in &[1e-9, 1e-4, 0.1, 1.0, 10.0] {
                let b = prop_bound(7, k, eps).unwrap();
                for v in [
                    b.term_quartic,
                    b.term_stirling,
                    b.e_factor,
                    b.term_gaussian,
                    b.total,
                ] {
                    assert!(v.is_finite(), "k={k} eps={eps} {b:?}");
                }
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(prop_bound(1, 10.0, 0.1).is_err());
        assert!(prop_bound(2, 0.5, 0.1).is_err());
        assert!(prop_bound(2, 10.0, 0.0).is_err());
        assert!(matches!(
            cor_bound(2, 100.0, 100.0),
            Err(Error::ConditionViolated(_))
        ));
        assert!(cor_bound(2, 2.0, 1.0).is_err());
    }

    #[test]
    fn corollary_matches_main_bound_terms() {
        let (n, k, c) = (3usize, 1e5, 1.0);
        let eps = corollary_eps(k, c);
        let b = prop_bound(n, k, eps).unwrap();
        let (first, second) = cor_terms(n, k, c);
        assert_eq!(first, b.term_quartic);
        assert_eq!(cor_bound(n, k, c).unwrap(), first + second);
        // the corollary carries n where the main bound has √n
        let gauss_e1 = b.term_gaussian / b.e_factor;
        assert!((second - gauss_e1 * (n as f64).sqrt()).abs() < 1e-13 * second);
    }

    #[test]
    fn dette_imhof_values() {
        assert_eq!(dette_imhof_bound(2, 0.0), 8.0);
        let eps = (18.0 * 8f64.ln()).sqrt();
        assert!((dette_imhof_bound(2, eps) - 1.0).abs() < 1e-14);
        assert!(dette_imhof_bound(3, 2.0) < dette_imhof_bound(3, 1.9));
    }

    #[test]
    fn delta_optimizer() {
        assert_eq!(optimize_delta(-2.0), 0.0);
        assert_eq!(optimize_delta(5.0), 0.0);
        assert_eq!(optimize_delta(-4.0), 0.25);
        let d = optimize_delta(-100.0);
        assert!((d - 0.49).abs() < 1e-15);
        assert!(phi(-100.0, d) < phi(-100.0, 0.48));
        assert!(phi(-100.0, d) < phi(-100.0, 0.5 - 1e-9));
    }

    #[test]
    fn vacuous_gaussian_regime() {
        // r = -1 - 1 + ln 2 > -2
        assert_eq!(gaussian_tail_bound(2, 1.0), 1.0);
    }
}
