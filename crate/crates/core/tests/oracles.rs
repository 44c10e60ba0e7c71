//! Reference values from an independent 60-digit evaluation
//! (`tests/oracles/generate.py`) and exact big-integer recurrences.

use betafreeze::bounds::{cor_bound, cor_bound_raw, gaussian_tail_bound, prop_bound};
use betafreeze::hermite::{
    compute_zeros, fixed_point_residual, hermite_eval, log_norm_const, potential_identity_gap,
    HermiteZeros,
};
use betafreeze::special::{exponent_m, ln_gamma, stirling_mu, stirling_remainder};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn log_normalization_constant() {
    let cases = [
        (2, 1.0, -1.837_877_066_409_345_5),
        (5, 3.5, -74.943_953_437_119_71),
        (10, 0.25, 1.521_072_105_592_202_4),
        (40, 120.0, -669_543.277_260_119_2),
        (200, 1e4, -2_598_826_179.679_100_8),
    ];
    for (n, k, want) in cases {
        let got = log_norm_const(n, k).unwrap();
        assert!(rel(got, want) < 1e-10, "({n}, {k}): {got} vs {want}");
    }
    // (2, 1) is ln(1/(2π))
    assert!((log_norm_const(2, 1.0).unwrap() + (2.0 * std::f64::consts::PI).ln()).abs() < 1e-14);
}

#[test]
fn log_gamma() {
    let cases = [
        (0.5, 0.572_364_942_924_700_1),
        (3.7, 1.428_072_326_665_388_1),
        (9.5, 11.689_333_420_797_268),
        (10.0, 12.801_827_480_081_47),
        (25.0, 54.784_729_398_112_32),
        (1e3, 5_905.220_423_209_181),
        (1e6, 12_815_504.569_147_612),
    ];
    for (x, want) in cases {
        assert!(
            rel(ln_gamma(x), want) < 1e-14,
            "lnΓ({x}) = {} vs {want}",
            ln_gamma(x)
        );
    }
}

#[test]
fn stirling_remainder_values() {
    let cases = [
        (0.5, 0.153_426_409_720_027_35),
        (1.0, 0.081_061_466_795_327_26),
        (2.0, 0.041_340_695_955_409_29),
        (3.7, 0.022_468_770_580_143_146),
        (9.5, 0.008_768_700_134_139_385),
        (10.0, 0.008_330_563_433_362_871),
        (25.0, 0.003_333_155_636_728_093),
        (1e3, 8.333_333_055_555_635e-5),
        (1e6, 8.333_333_333_333_056e-8),
    ];
    for (x, want) in cases {
        let got = stirling_remainder(x);
        assert!(rel(got, want) < 1e-12, "μ({x}) = {got} vs {want}");
        assert_eq!(stirling_mu(x).mu, got);
    }
}

#[test]
fn exponent_m_values() {
    let cases = [
        (2, 1.0, 0.039_720_770_839_917_964),
        (2, 100.0, 4.166_642_361_879_901e-4),
        (50, 10.0, 0.379_038_124_180_740_2),
        (100, 1.0, 7.676_672_741_764_784),
        (100, 1e4, 7.901_051_870_785_643e-4),
    ];
    for (n, k, want) in cases {
        let got = exponent_m(n, k);
        assert!(rel(got, want) < 1e-10, "M({n}, {k}) = {got} vs {want}");
    }
}

#[test]
fn main_bound_at_small_eps() {
    let b = prop_bound(2, 1e6, 0.005).unwrap();
    assert!(rel(b.term_quartic, 0.053_333_333_333_333_33) < 1e-12);
    assert!(rel(b.term_stirling, 3.846_153_846_153_846e-8) < 1e-12);
    assert!(rel(b.e_factor, 0.948_063_974_957_393_8) < 1e-12);
    assert!(rel(b.term_gaussian, 7.828_490_267_173_123e-10) < 1e-12);
    assert!(rel(b.total, 0.053_333_295_654_643_9) < 1e-12);
}

#[test]
fn corollary_values() {
    let e2 = std::f64::consts::E.powi(2);
    // c = 1 lies outside the window at k = e², so only the raw value exists
    assert!(cor_bound(2, e2, 1.0).is_err());
    assert!(rel(cor_bound_raw(2, e2, 1.0), 47.310_094_145_505_95) < 1e-12);
    let v = cor_bound(2, 1e6, 1.0).unwrap();
    assert!(rel(v, 0.016_334_635_568_905_335) < 1e-12);
    assert!(v < 0.02);
}

#[test]
fn gaussian_tail_value() {
    assert!(rel(gaussian_tail_bound(2, 3.0), 0.120_534_097_513_124_36) < 1e-12);
}

fn hermite_exact(n: usize, x: &BigRational) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    let mut prev = BigRational::from_integer(BigInt::from(1));
    let mut cur = &two * x;
    if n == 0 {
        return prev;
    }
    for m in 1..n {
        let next = &two * x * &cur - &two * BigRational::from_integer(BigInt::from(m)) * &prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[test]
fn hermite_values_against_exact_recurrence() {
    let h10 = hermite_exact(10, &BigRational::from_integer(BigInt::from(1)));
    assert_eq!(h10, BigRational::from_integer(BigInt::from(8224)));
    // stored as sign and log-magnitude, so integers come back within an ulp or two
    assert!(rel(hermite_eval(10, 1.0).0.value(), 8224.0) < 1e-14);

    let x = BigRational::new(BigInt::from(3), BigInt::from(10));
    let exact = hermite_exact(25, &x).to_f64().unwrap();
    assert!(rel(exact, 7_983_090_162_993_517.7) < 1e-15);
    assert!(rel(hermite_eval(25, 0.3).0.value(), exact) < 1e-12);

    let exact = hermite_exact(60, &BigRational::from_integer(BigInt::from(5)))
        .to_f64()
        .unwrap();
    assert!(rel(exact, -8.337_037_686_993_972e54) < 1e-15);
    assert!(rel(hermite_eval(60, 5.0).0.value(), exact) < 1e-12);
}

#[test]
fn hand_computed_identities() {
    let z2 = compute_zeros(2, 1e-12).unwrap();
    assert!(fixed_point_residual(&z2).unwrap() <= 1e-12);
    assert!(potential_identity_gap(&z2).unwrap() < 1e-15);

    let off = HermiteZeros::from_vec(vec![1.0, -1.0]).unwrap();
    let want = (1.0 - std::f64::consts::LN_2).abs();
    assert!((potential_identity_gap(&off).unwrap() - want).abs() < 1e-15);

    let mut v = compute_zeros(20, 1e-12).unwrap().into_vec();
    v[0] += 0.1;
    let perturbed = HermiteZeros::from_vec(v).unwrap();
    assert!(fixed_point_residual(&perturbed).unwrap() >= 0.05);
}
