//! Log-gamma and the Stirling remainder.
//!
//! Both are built on the same asymptotic series
//!
//! ```text
//! ln Γ(x) = ½ ln(2π) + (x − ½) ln x − x + μ(x),
//! μ(x)    = Σ_m B_2m / (2m (2m − 1) x^(2m−1))
//! ```
//!
//! evaluated directly for `x ≥ 10` and reached through the recurrence
//! `Γ(x) = Γ(x + m) / (x (x + 1) ⋯ (x + m − 1))` below that. Computing μ from the
//! series rather than by subtracting two large logarithms keeps its relative
//! accuracy near machine precision even for `x ~ 10⁶`, where `ln Γ(x)` is about
//! `10⁷` and μ about `10⁻⁷`.

/// `½ ln(2π)`.
pub const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Below this point μ is evaluated through upward recurrence.
const SERIES_CUTOFF: f64 = 10.0;

/// `B_2m / (2m (2m − 1))` for m = 1..=8.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Stirling series for μ, valid for `x ≥ SERIES_CUTOFF`. `skip` drops the
/// leading terms so that the bracket gaps `μ − 1/(12x)` and
/// `μ − (1/(12x) − 1/(360x³))` come out without cancellation.
fn mu_series(x: f64, skip: usize) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut power = inv;
    for _ in 0..skip {
        power *= inv2;
    }
    let mut acc = 0.0;
    let mut terms = Vec::with_capacity(STIRLING_COEFFS.len() - skip);
    for c in &STIRLING_COEFFS[skip..] {
        terms.push(c * power);
        power *= inv2;
    }
    // smallest terms first
    for t in terms.iter().rev() {
        acc += t;
    }
    acc
}

/// Stirling remainder `μ(x) = ln Γ(x) − ½ ln(2π) − (x − ½) ln x + x` for `x > 0`.
pub fn stirling_remainder(x: f64) -> f64 {
    assert!(x > 0.0, "stirling_remainder requires x > 0, got {x}");
    if x >= SERIES_CUTOFF {
        return mu_series(x, 0);
    }
    let m = (SERIES_CUTOFF - x).ceil().max(1.0);
    let y = x + m;
    let mut prod = 1.0;
    let mut t = x;
    while t < y - 0.5 {
        prod *= t;
        t += 1.0;
    }
    mu_series(y, 0) + (y - 0.5) * y.ln() - m - prod.ln() - (x - 0.5) * x.ln()
}

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires x > 0, got {x}");
    if x >= SERIES_CUTOFF {
        return HALF_LN_2PI + (x - 0.5) * x.ln() - x + mu_series(x, 0);
    }
    let m = (SERIES_CUTOFF - x).ceil().max(1.0);
    let y = x + m;
    let mut prod = 1.0;
    let mut t = x;
    while t < y - 0.5 {
        prod *= t;
        t += 1.0;
    }
    HALF_LN_2PI + (y - 0.5) * y.ln() - y + mu_series(y, 0) - prod.ln()
}

/// `ln n!`.
pub fn ln_factorial(n: u64) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// The Stirling remainder at one point, together with its distance to the
/// classical bracket `1/(12x) − 1/(360x³) < μ(x) < 1/(12x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StirlingRemainder {
    pub x: f64,
    pub mu: f64,
    /// `1/(12x) − μ(x)`.
    pub upper_gap: f64,
    /// `μ(x) − (1/(12x) − 1/(360x³))`.
    pub lower_gap: f64,
}

impl StirlingRemainder {
    /// Strict two-sided bracket; only asserted for `x > 1`.
    pub fn within_bounds(&self) -> bool {
        self.upper_gap > 0.0 && self.lower_gap > 0.0
    }

    pub fn upper_bound(&self) -> f64 {
        1.0 / (12.0 * self.x)
    }

    pub fn lower_bound(&self) -> f64 {
        1.0 / (12.0 * self.x) - 1.0 / (360.0 * self.x.powi(3))
    }
}

/// Evaluates μ(x). Defined for every `x > 0`; `x = 1` is accepted as the
/// continuous extension of the `x > 1` statement.
pub fn stirling_mu(x: f64) -> StirlingRemainder {
    assert!(x > 0.0, "stirling_mu requires x > 0, got {x}");
    let mu = stirling_remainder(x);
    let (upper_gap, lower_gap) = if x >= SERIES_CUTOFF {
        (-mu_series(x, 1), mu_series(x, 2))
    } else {
        let upper = 1.0 / (12.0 * x);
        let lower = upper - 1.0 / (360.0 * x * x * x);
        (upper - mu, mu - lower)
    };
    StirlingRemainder {
        x,
        mu,
        upper_gap,
        lower_gap,
    }
}

/// `M = (n − 1) μ(k) − Σ_{l=2}^n μ(lk)`, the Stirling exponent left over
/// when the normalization constant is expanded. At least `(n − 1)/(26k)` for
/// `k ≥ 1`.
pub fn exponent_m(n: usize, k: f64) -> f64 {
    assert!(n >= 2 && k > 0.0, "exponent_m requires n >= 2 and k > 0");
    let tail: f64 = (2..=n).map(|l| stirling_remainder(l as f64 * k)).sum();
    (n - 1) as f64 * stirling_remainder(k) - tail
}
