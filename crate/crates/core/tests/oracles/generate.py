"""High-precision reference values frozen into the integration tests.

Run with `python3 generate.py`; requires mpmath. Every value is computed at
60 significant digits, independently of the Rust implementation.
"""
from mpmath import mp, mpf, loggamma, log, sqrt, exp, e, pi, hermite, factorial

mp.dps = 60


def ln_norm_const(n, k):
    k = mpf(k)
    acc = log(factorial(n)) - mpf(n) / 2 * log(2 * pi)
    for j in range(1, n + 1):
        acc += loggamma(1 + k) - loggamma(1 + j * k)
    return acc


def mu(x):
    x = mpf(x)
    return loggamma(x) - log(2 * pi) / 2 - (x - mpf(1) / 2) * log(x) + x


def exponent_m(n, k):
    k = mpf(k)
    return (n - 1) * mu(k) - sum(mu(l * k) for l in range(2, n + 1))


def prop(n, k, eps):
    n, k, eps = mpf(n), mpf(k), mpf(eps)
    quartic = mpf(32) / 3 * eps**4 * k * n**3
    stir = (n - 1) / (26 * k)
    big_e = exp((1 / k) * ((n - 1) / 26 - mpf(32) / 3 * eps**4 * k**2 * n**3))
    gauss = big_e * sqrt(e) * sqrt(n) / 2 * (2 * k * eps**2 + 1) * exp(-k * eps**2)
    return quartic, stir, big_e, gauss, quartic - stir + gauss


def cor(n, k, c):
    n, k, c = mpf(n), mpf(k), mpf(c)
    return mpf(32) / 3 * c**4 * n**3 * log(k) ** 2 / k + sqrt(e) * n / 2 * (2 * c**2 * log(k) + 1) * k ** (-c**2)


def gauss_tail(n, eps):
    r = -mpf(eps) ** 2 - 1 + log(n)
    d = mpf(0) if r >= -2 else mpf(1) / 2 + 1 / r
    return exp(r * d) / (1 - 2 * d)


def show(name, v):
    print(f"{name} = {mp.nstr(v, 25)}")


for n, k in [(2, 1), (5, 3.5), (10, 0.25), (40, 120), (200, 1e4)]:
    show(f"ln_norm_const({n}, {k})", ln_norm_const(n, k))
for x in [0.5, 1, 2, 3.7, 9.5, 10, 25, 1e3, 1e6]:
    show(f"ln_gamma({x})", loggamma(mpf(x)))
    show(f"mu({x})", mu(x))
for n, k in [(2, 1), (2, 100), (50, 10), (100, 1), (100, 1e4)]:
    show(f"exponent_M({n}, {k})", exponent_m(n, k))
q, s, be, g, t = prop(2, 10**6, mpf("0.005"))
for name, v in [("quartic", q), ("stirling", s), ("E", be), ("gauss", g), ("total", t)]:
    show(f"prop(2,1e6,0.005).{name}", v)
show("cor(2, e^2, 1)", cor(2, e**2, 1))
show("cor(2, 1e6, 1)", cor(2, mpf(10) ** 6, 1))
show("gauss_tail(2, 3)", gauss_tail(2, 3))
show("H_10(1)", hermite(10, 1))
show("H_25(0.3)", hermite(25, mpf("0.3")))
show("H_60(5)", hermite(60, 5))
