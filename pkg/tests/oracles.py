"""Independent oracles used to freeze expected values in the tests.

Everything here deliberately avoids the library's own code paths: the Airy
oracle sums the Maclaurin series in 40-digit arithmetic, and the closed-form
helpers are direct transcriptions of elementary Gaussian identities.
"""

import math

import mpmath

mpmath.mp.dps = 40


def airy_maclaurin(x: float, terms: int = 200) -> float:
    """Ai(x) from its Maclaurin series, summed in high precision."""
    with mpmath.workdps(40):
        xm = mpmath.mpf(x)
        c1 = mpmath.mpf(3) ** mpmath.mpf("-2/3") / mpmath.gamma(mpmath.mpf("2/3"))
        c2 = mpmath.mpf(3) ** mpmath.mpf("-1/3") / mpmath.gamma(mpmath.mpf("1/3"))
        f = mpmath.mpf(1)
        g = xm
        tf = mpmath.mpf(1)
        tg = xm
        x3 = xm ** 3
        for k in range(1, terms):
            tf *= x3 / ((3 * k) * (3 * k - 1))
            tg *= x3 / ((3 * k + 1) * (3 * k))
            f += tf
            g += tg
        return float(c1 * f - c2 * g)


def gaussian_overlap(sigma: float, displacement: float) -> float:
    """Overlap of two identical real Gaussians displaced by a distance."""
    return math.exp(-displacement ** 2 / (8.0 * sigma * sigma))


def cs_spread(sigma: float, tau: float) -> float:
    """Spreading law sqrt(sigma^2 + tau^2 / (4 sigma^2))."""
    return math.hypot(sigma, tau / (2.0 * sigma))


def free_arrival_spread(q: float, q0: float, p0: float, sigma: float) -> float:
    """Packet spread at arrival for zero force."""
    return cs_spread(sigma, (q - q0) / p0)
