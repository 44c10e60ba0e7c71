//! Precision matrix of the Gaussian freezing limit.
//!
//! For the Hermite zero vector `z`, the limit of `X − √(2k) z` as `k → ∞` is
//! `N(0, Σ)` with `Σ⁻¹ = S`,
//!
//! ```text
//! S_ii = 1 + Σ_{l≠i} (z_i − z_l)⁻²,   S_ij = −(z_i − z_j)⁻²  (i ≠ j).
//! ```
//!
//! `S` has spectrum exactly `{1, …, n}`; everything here is about building it,
//! measuring how close the computed spectrum gets, and sampling `N(0, Σ)`.

use rand::{Rng, RngExt};
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::hermite::HermiteZeros;
use crate::linalg::{cholesky, lower_triangular_inverse, symmetric_eigenvalues, Matrix};

/// `S`, its ascending spectrum, and a lower factor `L` with `L Lᵀ = S⁻¹`.
#[derive(Debug, Clone)]
pub struct PrecisionSpectralPair {
    n: usize,
    precision: Matrix,
    eigenvalues: Vec<f64>,
    chol_cov: Matrix,
}

impl PrecisionSpectralPair {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn precision(&self) -> &Matrix {
        &self.precision
    }

    /// Ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn chol_cov(&self) -> &Matrix {
        &self.chol_cov
    }

    /// `Σ = L Lᵀ`, formed on demand.
    pub fn covariance(&self) -> Matrix {
        self.chol_cov.matmul(&self.chol_cov.transpose())
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.precision.row(i).iter().sum())
            .collect()
    }
}

/// Fills `S` from the zero vector and factors it.
///
/// The covariance factor is obtained without forming `S⁻¹`: with `P` the
/// index reversal and `P S P = C Cᵀ`, the matrix `L = P C⁻ᵀ P` is lower
/// triangular and `L Lᵀ = S⁻¹`.
pub fn build_precision(z: &HermiteZeros) -> Result<PrecisionSpectralPair> {
    let v = z.zeros();
    let n = v.len();
    let mut s = Matrix::zeros(n);
    for i in 0..n {
        let mut diag = 1.0;
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = v[i] - v[j];
            if d == 0.0 {
                return Err(Error::DegenerateInput(format!(
                    "entries {i} and {j} coincide"
                )));
            }
            let w = 1.0 / (d * d);
            s[(i, j)] = -w;
            diag += w;
        }
        s[(i, i)] = diag;
    }

    let eigenvalues = symmetric_eigenvalues(&s)?;

    let reversed = Matrix::from_fn(n, |i, j| s[(n - 1 - i, n - 1 - j)]);
    let c = cholesky(&reversed)?;
    let c_inv = lower_triangular_inverse(&c);
    // L[i][j] = (C⁻ᵀ)[n-1-i][n-1-j] = C⁻¹[n-1-j][n-1-i]
    let chol_cov = Matrix::from_fn(n, |i, j| c_inv[(n - 1 - j, n - 1 - i)]);

    Ok(PrecisionSpectralPair {
        n,
        precision: s,
        eigenvalues,
        chol_cov,
    })
}

/// `max_m |λ_m − m|` with eigenvalues ascending and `m = 1..n`.
pub fn spectrum_deviation(p: &PrecisionSpectralPair) -> f64 {
    p.eigenvalues
        .iter()
        .enumerate()
        .map(|(m, &l)| (l - (m + 1) as f64).abs())
        .fold(0.0, f64::max)
}

/// `Σ_{i≠j} (z_i − z_j)^{−p}` over ordered pairs, for `p ∈ {2, 4}`.
///
/// Both orientations of every pair are counted; the sum over `i < j` is half
/// of this.
pub fn inverse_power_sum(z: &HermiteZeros, p: u32) -> Result<f64> {
    if p != 2 && p != 4 {
        return Err(Error::InvalidArgument(format!(
            "power must be 2 or 4, got {p}"
        )));
    }
    let v = z.zeros();
    let mut acc = 0.0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let d = v[i] - v[j];
            if d == 0.0 {
                return Err(Error::DegenerateInput(format!(
                    "entries {i} and {j} coincide"
                )));
            }
            acc += 2.0 * d.powi(-(p as i32));
        }
    }
    Ok(acc)
}

/// Smallest consecutive gap `min_i (z_i − z_{i+1})`.
pub fn min_gap(z: &HermiteZeros) -> f64 {
    z.zeros()
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(f64::INFINITY, f64::min)
}

/// One draw from `N(0, Σ)` as `L g` with `g` standard normal.
pub fn sample_gaussian_limit<R: Rng + ?Sized>(p: &PrecisionSpectralPair, rng: &mut R) -> Vec<f64> {
    let g: Vec<f64> = (0..p.n).map(|_| rng.sample(StandardNormal)).collect();
    lower_matvec(&p.chol_cov, &g)
}

fn lower_matvec(l: &Matrix, g: &[f64]) -> Vec<f64> {
    (0..g.len())
        .map(|i| (0..=i).map(|j| l[(i, j)] * g[j]).sum())
        .collect()
}

/// Outcome of one named numerical check in a [`VerifyReport`].
#[derive(Debug, Clone, serde::Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

/// Every identity attached to `S_n`, evaluated once.
#[derive(Debug, Clone, serde::Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Runs the spectrum, trace, power-sum, gap and row-sum checks for order `n`.
pub fn verify(n: usize) -> Result<VerifyReport> {
    let z = crate::hermite::compute_zeros(n, crate::hermite::DEFAULT_ZERO_TOL)?;
    let p = build_precision(&z)?;
    let nf = n as f64;
    let mut checks = Vec::new();

    let dev = spectrum_deviation(&p);
    checks.push(Check {
        name: "spectrum_deviation",
        value: dev,
        limit: 1e-7,
        passed: dev <= 1e-7,
    });

    let tr = p.precision().trace();
    let tr_expected = nf * (nf + 1.0) / 2.0;
    let rel = ((tr - tr_expected) / tr_expected).abs();
    checks.push(Check {
        name: "trace_S_rel_err",
        value: rel,
        limit: 1e-9,
        passed: rel <= 1e-9,
    });

    let s2 = p.precision().matmul(p.precision()).trace();
    let s2_expected = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 6.0;
    let rel = ((s2 - s2_expected) / s2_expected).abs();
    checks.push(Check {
        name: "trace_S2_rel_err",
        value: rel,
        limit: 1e-9,
        passed: rel <= 1e-9,
    });

    let p2 = inverse_power_sum(&z, 2)?;
    let p2_expected = nf * (nf - 1.0) / 2.0;
    let rel = ((p2 - p2_expected) / p2_expected).abs();
    checks.push(Check {
        name: "inverse_power_sum_2_rel_err",
        value: rel,
        limit: 1e-9,
        passed: rel <= 1e-9,
    });

    let p4 = inverse_power_sum(&z, 4)?;
    let p4_limit = nf * (nf - 1.0) * (2.0 * nf - 1.0) / 12.0;
    checks.push(Check {
        name: "inverse_power_sum_4",
        value: p4,
        limit: p4_limit,
        passed: p4 <= p4_limit && p4_limit <= nf.powi(3) / 6.0,
    });

    let gap = min_gap(&z);
    let gap_limit = 2.0 / nf.sqrt();
    checks.push(Check {
        name: "min_gap",
        value: gap,
        limit: gap_limit,
        passed: gap >= gap_limit,
    });

    let row_err = p
        .row_sums()
        .iter()
        .map(|r| (r - 1.0).abs())
        .fold(0.0, f64::max);
    checks.push(Check {
        name: "row_sum_max_err",
        value: row_err,
        limit: 1e-12,
        passed: row_err <= 1e-12,
    });

    Ok(VerifyReport { n, checks })
}
