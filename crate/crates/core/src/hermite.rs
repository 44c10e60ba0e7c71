//! Physicists' Hermite polynomials, their zeros, and the exact scalar
//! identities the zero vector satisfies.
//!
//! The zero vector `z` of `H_n` is the unique descending vector solving the
//! electrostatic fixed point `z_i = Σ_{j≠i} 1/(z_i − z_j)`. It also satisfies
//! the closed-form potential identity
//!
//! ```text
//! −‖z‖² + 2 Σ_{i<j} ln(z_i − z_j) = −n(n−1)/2 · (1 + ln 2) + Σ_{j=1}^n j ln j
//! ```
//!
//! Both are exposed as residual functions so callers can validate any
//! candidate vector.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::tridiagonal_eigenvalues;
use crate::special::{ln_factorial, ln_gamma};

/// Default absolute tolerance for [`compute_zeros`].
pub const DEFAULT_ZERO_TOL: f64 = 1e-12;

const NEWTON_MAX_ITERS: usize = 100;

/// Rescale threshold for the three-term recurrence.
const RESCALE_ABOVE: f64 = 1e150;

/// A real number stored as sign and log-magnitude, so values like `H_500(40)`
/// stay representable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledReal {
    /// −1, 0 or +1.
    pub sign: f64,
    /// `ln |value|`; `-inf` when the value is zero.
    pub ln_abs: f64,
}

impl ScaledReal {
    pub const ZERO: ScaledReal = ScaledReal {
        sign: 0.0,
        ln_abs: f64::NEG_INFINITY,
    };

    fn from_parts(mantissa: f64, log_scale: f64) -> Self {
        if mantissa == 0.0 {
            return Self::ZERO;
        }
        ScaledReal {
            sign: mantissa.signum(),
            ln_abs: mantissa.abs().ln() + log_scale,
        }
    }

    /// Converts back to `f64`; overflows to ±inf for huge magnitudes.
    pub fn value(&self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.ln_abs.exp()
        }
    }
}

/// Runs the recurrence `H_{m+1} = 2x H_m − 2m H_{m−1}` and returns the
/// mantissas of `(H_n, H_{n−1})` sharing the log scale in the third slot.
fn recurrence(n: usize, x: f64) -> (f64, f64, f64) {
    if n == 0 {
        return (1.0, 0.0, 0.0);
    }
    let mut prev = 1.0; // H_0
    let mut cur = 2.0 * x; // H_1
    let mut log_scale = 0.0;
    for m in 1..n {
        let next = 2.0 * x * cur - 2.0 * m as f64 * prev;
        prev = cur;
        cur = next;
        let big = cur.abs().max(prev.abs());
        if big > RESCALE_ABOVE {
            let shift = big.ln();
            let inv = 1.0 / big;
            cur *= inv;
            prev *= inv;
            log_scale += shift;
        }
    }
    (cur, prev, log_scale)
}

/// `H_n(x)` and `H_n'(x) = 2n H_{n−1}(x)` in sign/log-magnitude form.
pub fn hermite_eval(n: usize, x: f64) -> (ScaledReal, ScaledReal) {
    let (h_n, h_prev, log_scale) = recurrence(n, x);
    let value = ScaledReal::from_parts(h_n, log_scale);
    let derivative = if n == 0 {
        ScaledReal::ZERO
    } else {
        ScaledReal::from_parts(2.0 * n as f64 * h_prev, log_scale)
    };
    (value, derivative)
}

/// Newton step `H_n(x) / H_n'(x)`. Both come from the same scaled
/// recurrence, so the ratio never leaves the mantissa range.
fn newton_step(n: usize, x: f64) -> f64 {
    let (h_n, h_prev, _) = recurrence(n, x);
    h_n / (2.0 * n as f64 * h_prev)
}

/// Descending zeros of `H_n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HermiteZeros {
    n: usize,
    zeros: Vec<f64>,
}

impl HermiteZeros {
    /// Wraps an arbitrary candidate vector, checking only that it is strictly
    /// descending. Used to feed perturbed vectors to the residual functions.
    pub fn from_vec(zeros: Vec<f64>) -> Result<Self> {
        if zeros.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least two points, got {}",
                zeros.len()
            )));
        }
        check_strictly_descending(&zeros)?;
        Ok(HermiteZeros {
            n: zeros.len(),
            zeros,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.zeros
    }
}

fn check_strictly_descending(z: &[f64]) -> Result<()> {
    for (i, w) in z.windows(2).enumerate() {
        if !(w[0] > w[1]) {
            return Err(Error::DegenerateInput(format!(
                "entries {i} and {} are not strictly descending ({} <= {})",
                i + 1,
                w[0],
                w[1]
            )));
        }
    }
    Ok(())
}

/// Zeros of `H_n`, descending.
///
/// Initial guesses are the eigenvalues of the Jacobi matrix for the Hermite
/// weight (zero diagonal, off-diagonal `√(i/2)`); each non-negative guess is
/// then Newton polished and the negative half is obtained by mirroring, so
/// `z[i] == -z[n-1-i]` holds bit for bit.
///
/// Fails with [`Error::ConvergenceFailure`] when the polished vector's
/// [`fixed_point_residual`] exceeds `tol`.
pub fn compute_zeros(n: usize, tol: f64) -> Result<HermiteZeros> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "order must be >= 2, got {n}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be > 0, got {tol}"
        )));
    }
    let offdiag: Vec<f64> = (1..n).map(|i| (i as f64 / 2.0).sqrt()).collect();
    let mut guesses = tridiagonal_eigenvalues(&vec![0.0; n], &offdiag)?;
    guesses.reverse();

    let half = n / 2;
    let mut zeros = vec![0.0; n];
    for (i, &guess) in guesses.iter().take(half).enumerate() {
        zeros[i] = polish(n, guess.abs())?;
    }
    for i in 0..half {
        zeros[n - 1 - i] = -zeros[i];
    }
    let z = HermiteZeros::from_vec(zeros)?;
    let residual = fixed_point_residual(&z)?;
    if residual > tol {
        return Err(Error::ConvergenceFailure(format!(
            "fixed-point residual {residual:e} exceeds {tol:e} for n = {n}"
        )));
    }
    Ok(z)
}

fn polish(n: usize, mut x: f64) -> Result<f64> {
    for _ in 0..NEWTON_MAX_ITERS {
        let step = newton_step(n, x);
        if !step.is_finite() {
            return Err(Error::ConvergenceFailure(format!(
                "non-finite Newton step at x = {x} for n = {n}"
            )));
        }
        x -= step;
        if step.abs() <= 4.0 * f64::EPSILON * x.abs().max(1e-300) {
            return Ok(x);
        }
    }
    Err(Error::ConvergenceFailure(format!(
        "Newton polish did not settle within {NEWTON_MAX_ITERS} iterations near {x} (n = {n})"
    )))
}

/// `max_i |z_i − Σ_{j≠i} 1/(z_i − z_j)|`.
pub fn fixed_point_residual(z: &HermiteZeros) -> Result<f64> {
    let v = z.zeros();
    check_strictly_descending(v)?;
    let mut worst: f64 = 0.0;
    for (i, &zi) in v.iter().enumerate() {
        let s: f64 = v
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &zj)| 1.0 / (zi - zj))
            .sum();
        worst = worst.max((zi - s).abs());
    }
    Ok(worst)
}

/// Closed-form right-hand side `−n(n−1)/2 · (1 + ln 2) + Σ j ln j`.
pub fn potential_rhs(n: usize) -> f64 {
    let nf = n as f64;
    let sum: f64 = (1..=n).map(|j| j as f64 * (j as f64).ln()).sum();
    -nf * (nf - 1.0) / 2.0 * (1.0 + std::f64::consts::LN_2) + sum
}

/// `−‖z‖² + 2 Σ_{i<j} ln(z_i − z_j)` for a descending vector.
pub fn potential_lhs(z: &HermiteZeros) -> Result<f64> {
    let v = z.zeros();
    let mut acc = -v.iter().map(|x| x * x).sum::<f64>();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let gap = v[i] - v[j];
            if !(gap > 0.0) {
                return Err(Error::DegenerateInput(format!(
                    "non-positive gap {gap} between entries {i} and {j}"
                )));
            }
            acc += 2.0 * gap.ln();
        }
    }
    Ok(acc)
}

/// `|LHS − RHS|` of the potential identity.
pub fn potential_identity_gap(z: &HermiteZeros) -> Result<f64> {
    Ok((potential_lhs(z)? - potential_rhs(z.n())).abs())
}

/// `ln c_k^A` for the normalization of the ordered Hermite ensemble density,
///
/// ```text
/// c_k^A = n! / (2π)^{n/2} · Π_{j=1}^n Γ(1 + k) / Γ(1 + jk).
/// ```
pub fn log_norm_const(n: usize, k: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be >= 2, got {n}")));
    }
    if !(k > 0.0) {
        return Err(Error::InvalidArgument(format!("k must be > 0, got {k}")));
    }
    let lg1k = ln_gamma(1.0 + k);
    let gamma_part: f64 = (1..=n).map(|j| lg1k - ln_gamma(1.0 + j as f64 * k)).sum();
    Ok(ln_factorial(n as u64) - n as f64 / 2.0 * (2.0 * std::f64::consts::PI).ln() + gamma_part)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_values() {
        assert_eq!(hermite_eval(0, 0.3).0.value(), 1.0);
        assert_eq!(hermite_eval(2, 0.0).0.value(), -2.0);
        let (v, d) = hermite_eval(3, 0.0);
        assert_eq!(v.sign, 0.0);
        assert_eq!(v.value(), 0.0);
        // H_3' = 24x² − 12
        assert_eq!(d.value(), -12.0);
        // H_4(x) = 16x⁴ − 48x² + 12
        let x: f64 = 0.7;
        let exact = 16.0 * x.powi(4) - 48.0 * x * x + 12.0;
        assert!((hermite_eval(4, x).0.value() - exact).abs() < 1e-13);
    }

    #[test]
    fn huge_orders_do_not_overflow() {
        let (v, d) = hermite_eval(500, 40.0);
        assert!(v.ln_abs.is_finite() && v.ln_abs > 709.0);
        assert!(d.ln_abs.is_finite());
        assert_eq!(v.sign, 1.0);
    }

    #[test]
    fn zeros_of_h2_and_h3() {
        let z = compute_zeros(2, 1e-12).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((z.zeros()[0] - r).abs() < 1e-15);
        assert!((z.zeros()[1] + r).abs() < 1e-15);

        let z = compute_zeros(3, 1e-12).unwrap();
        let r = 1.5f64.sqrt();
        assert!((z.zeros()[0] - r).abs() < 1e-15);
        assert_eq!(z.zeros()[1], 0.0);
        assert!((z.zeros()[2] + r).abs() < 1e-15);
    }

    #[test]
    fn zeros_are_exactly_antisymmetric() {
        for n in [2, 7, 10, 51, 120] {
            let z = compute_zeros(n, DEFAULT_ZERO_TOL).unwrap();
            let v = z.zeros();
            for i in 0..n {
                assert_eq!(v[i], -v[n - 1 - i]);
            }
        }
    }

    #[test]
    fn order_fifty_residual() {
        let z = compute_zeros(50, 1e-12).unwrap();
        assert!(fixed_point_residual(&z).unwrap() <= 1e-12);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(compute_zeros(1, 1e-12).is_err());
        assert!(compute_zeros(5, 0.0).is_err());
        assert!(matches!(
            HermiteZeros::from_vec(vec![1.0, 1.0]),
            Err(Error::DegenerateInput(_))
        ));
        assert!(matches!(
            HermiteZeros::from_vec(vec![-1.0, 1.0]),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn perturbed_vector_has_large_residual() {
        let mut v = compute_zeros(20, 1e-12).unwrap().into_vec();
        v[0] += 0.1;
        let z = HermiteZeros::from_vec(v).unwrap();
        assert!(fixed_point_residual(&z).unwrap() >= 0.05);
    }

    #[test]
    fn potential_identity_small_cases() {
        let z = compute_zeros(2, 1e-12).unwrap();
        assert!(potential_identity_gap(&z).unwrap() < 1e-15);
        let ln2 = std::f64::consts::LN_2;
        assert!((potential_lhs(&z).unwrap() - (-1.0 + ln2)).abs() < 1e-15);

        let z = HermiteZeros::from_vec(vec![1.0, -1.0]).unwrap();
        assert!((potential_identity_gap(&z).unwrap() - (1.0 - ln2)).abs() < 1e-15);
    }

    #[test]
    fn norm_const_closed_forms() {
        let two_pi = 2.0 * std::f64::consts::PI;
        assert!((log_norm_const(2, 1.0).unwrap() - (1.0 / two_pi).ln()).abs() < 1e-14);
        let tiny = log_norm_const(2, 1e-12).unwrap();
        assert!((tiny - (2.0 / two_pi).ln()).abs() < 1e-10);
        assert!(log_norm_const(1, 1.0).is_err());
        assert!(log_norm_const(3, 0.0).is_err());
    }
}
