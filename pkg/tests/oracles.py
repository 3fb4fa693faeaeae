"""Independent reference computations used by the tests.

None of these call into cevchart.
"""

import math

import mpmath as mp
import numpy as np

mp.mp.dps = 40

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(200)


def _gauss_legendre(f, a, b):
    a = np.asarray(a, dtype=float)[:, None]
    b = np.asarray(b, dtype=float)[:, None]
    x = 0.5 * (b - a) * _GL_NODES + 0.5 * (b + a)
    return (0.5 * (b - a) * _GL_WEIGHTS * f(x)).sum(axis=1)


def truncated_variance(z):
    """Var(Z | Z <= z) for standard normal Z, by Gauss-Legendre quadrature.

    For z < 0 the integral is taken over the distance s = z - Z >= 0 with the
    density rescaled by phi(z), which keeps every term O(1) deep in the tail.
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    out = np.empty_like(z)

    neg = z < 0
    if neg.any():
        x = -z[neg][:, None]
        upper = -x[:, 0] + np.sqrt(x[:, 0] ** 2 + 160.0)

        def moment(k):
            return _gauss_legendre(lambda s: s**k * np.exp(-x * s - 0.5 * s * s), 0.0 * upper, upper)

        m0, m1, m2 = moment(0), moment(1), moment(2)
        out[neg] = m2 / m0 - (m1 / m0) ** 2

    pos = ~neg
    if pos.any():
        top = np.minimum(z[pos], 14.0)
        lo = np.full_like(top, -14.0)

        def moment(k):
            return _gauss_legendre(lambda t: t**k * np.exp(-0.5 * t * t), lo, top)

        m0, m1, m2 = moment(0), moment(1), moment(2)
        out[pos] = m2 / m0 - (m1 / m0) ** 2
    return out


def mp_cdf(z) -> float:
    return float(mp.ncdf(mp.mpf(z)))


def mp_hazard(z) -> float:
    z = mp.mpf(z)
    return float(mp.npdf(z) / mp.ncdf(z))


def mp_quantile_bisect(p, lo=-40.0, hi=40.0) -> float:
    p = mp.mpf(p)
    lo, hi = mp.mpf(lo), mp.mpf(hi)
    for _ in range(200):
        mid = (lo + hi) / 2
        if mp.ncdf(mid) < p:
            lo = mid
        else:
            hi = mid
    return float((lo + hi) / 2)


def mp_shewhart(n):
    n = mp.mpf(n)
    c4 = mp.sqrt(2 / (n - 1)) * mp.gamma(n / 2) / mp.gamma((n - 1) / 2)
    a3 = 3 / (c4 * mp.sqrt(n))
    b4 = 1 + 3 * mp.sqrt(1 - c4**2) / c4
    return float(c4), float(a3), float(b4)


def chi_quantile_scaled(df, q) -> float:
    """sqrt(chi2_{df, q} / df) by bisection on the regularized gamma function."""
    lo, hi = mp.mpf(0), mp.mpf(1000)
    q = mp.mpf(q)
    for _ in range(200):
        mid = (lo + hi) / 2
        if mp.gammainc(mp.mpf(df) / 2, 0, mid / 2, regularized=True) < q:
            lo = mid
        else:
            hi = mid
    return float(mp.sqrt((lo + hi) / 2 / df))


def cev_weight_ref(mu, sigma, c) -> float:
    z = (mp.mpf(c) - mp.mpf(mu)) / mp.mpf(sigma)
    return float(mp.mpf(mu) - mp.mpf(sigma) * mp.npdf(z) / mp.ncdf(z))


def binomial_band(p, trials, k=3.0):
    se = math.sqrt(p * (1 - p) / trials)
    return p - k * se, p + k * se
