//! Small dense and tridiagonal symmetric eigen machinery.
//!
//! Everything here is eigenvalues-only: Householder reduction of a dense
//! symmetric matrix to tridiagonal form, followed by implicit-shift QL with
//! Wilkinson shifts. The matrices in this crate are at most a few hundred rows,
//! so a plain row-major `Vec<f64>` is all the storage needed.

use crate::error::{Error, Result};

/// Sweep budget per eigenvalue for the QL iteration.
const MAX_QL_SWEEPS: usize = 60;

/// Square row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds from nested rows; panics on ragged input.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        Self::from_fn(n, |i, j| {
            assert_eq!(rows[i].len(), n, "row {i} has wrong length");
            rows[i][j]
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for l in 0..n {
                let a = self[(i, l)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[l * n + j];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// sub/super-diagonal `offdiag`, in ascending order.
///
/// Implicit QL with Wilkinson shifts, no eigenvector accumulation.
pub fn tridiagonal_eigenvalues(diag: &[f64], offdiag: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if offdiag.len() + 1 != n {
        return Err(Error::InvalidArgument(format!(
            "off-diagonal length {} does not match dimension {n}",
            offdiag.len()
        )));
    }
    let mut d = diag.to_vec();
    // e[i] couples d[i] and d[i+1]; e[n-1] is scratch.
    let mut e = offdiag.to_vec();
    e.push(0.0);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_SWEEPS {
                return Err(Error::ConvergenceFailure(format!(
                    "tridiagonal QL exceeded {MAX_QL_SWEEPS} sweeps at index {l}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.total_cmp(b));
    Ok(d)
}

/// Householder reduction of a symmetric matrix to tridiagonal form.
/// Returns `(diag, offdiag)`; only the lower triangle of `a` is read.
pub fn householder_tridiagonalize(a: &Matrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.dim();
    let mut a = a.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| a[(i, k)].abs()).sum();
            if scale == 0.0 {
                e[i] = a[(i, l)];
            } else {
                for k in 0..=l {
                    a[(i, k)] /= scale;
                    h += a[(i, k)] * a[(i, k)];
                }
                let f = a[(i, l)];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[(i, l)] = f - g;
                let mut f = 0.0;
                for j in 0..=l {
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[(j, k)] * a[(i, k)];
                    }
                    for k in j + 1..=l {
                        g += a[(k, j)] * a[(i, k)];
                    }
                    e[j] = g / h;
                    f += e[j] * a[(i, j)];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[(j, k)] -= f * e[k] + g * a[(i, k)];
                    }
                }
            }
        } else {
            e[i] = a[(i, l)];
        }
        d[i] = h;
    }
    for i in 0..n {
        d[i] = a[(i, i)];
    }
    // e[i] couples rows i-1 and i; shift so offdiag[i] couples i and i+1.
    let offdiag = e.into_iter().skip(1).collect();
    (d, offdiag)
}

/// Eigenvalues of a dense symmetric matrix, ascending.
pub fn symmetric_eigenvalues(a: &Matrix) -> Result<Vec<f64>> {
    let (d, e) = householder_tridiagonalize(a);
    tridiagonal_eigenvalues(&d, &e)
}

/// Lower Cholesky factor `C` with `C Cᵀ = a`.
pub fn cholesky(a: &Matrix) -> Result<Matrix> {
    let n = a.dim();
    let mut c = Matrix::zeros(n);
    for j in 0..n {
        let mut diag = a[(j, j)];
        for k in 0..j {
            diag -= c[(j, k)] * c[(j, k)];
        }
        if !(diag > 0.0) || !diag.is_finite() {
            return Err(Error::FactorizationFailure {
                pivot: j,
                value: diag,
            });
        }
        let cjj = diag.sqrt();
        c[(j, j)] = cjj;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= c[(i, k)] * c[(j, k)];
            }
            c[(i, j)] = s / cjj;
        }
    }
    Ok(c)
}

/// Inverse of a nonsingular lower-triangular matrix by forward substitution
/// against the identity columns.
pub fn lower_triangular_inverse(c: &Matrix) -> Matrix {
    let n = c.dim();
    let mut inv = Matrix::zeros(n);
    for col in 0..n {
        inv[(col, col)] = 1.0 / c[(col, col)];
        for i in col + 1..n {
            let mut s = 0.0;
            for k in col..i {
                s += c[(i, k)] * inv[(k, col)];
            }
            inv[(i, col)] = -s / c[(i, i)];
        }
    }
    inv
}
