"""Pure numpy/math implementations of the hot kernels.

Every function here has a twin of the same name and signature in
``_ckernels.pyx``; the two must agree to rounding.
"""
import math

import numpy as np

LN2 = math.log(2.0)
# derivative evaluations refuse steered states this close to pure
SINGULAR_GAP = 1e-9


def entropy_bits(r):
    """h(r) for an array of Bloch radii, with 0 log 0 = 0."""
    r = np.clip(np.asarray(r, dtype=float), 0.0, 1.0)
    p = 0.5 * (1.0 + r)
    q = 0.5 * (1.0 - r)
    qs = np.where(q > 0.0, q, 1.0)
    return -p * np.log2(p) - np.where(q > 0.0, q * np.log2(qs), 0.0)


def _atanh_over_r(r):
    small = r < 1e-3
    rs = np.where(small, 0.5, r)
    big = np.arctanh(rs) / rs
    r2 = r * r
    ser = 1.0 + r2 * (1.0 / 3.0 + r2 * (1.0 / 5.0 + r2 / 7.0))
    return np.where(small, ser, big)


def _dg_over_r(r):
    # (r/(1-r^2) - atanh r) / r^3, series below 0.05 to dodge cancellation
    small = r < 0.05
    rs = np.where(small, 0.5, r)
    big = (rs / (1.0 - rs * rs) - np.arctanh(rs)) / rs**3
    r2 = r * r
    ser = 2.0 / 3.0 + r2 * (4.0 / 5.0 + r2 * (6.0 / 7.0 + r2 * (8.0 / 9.0 + r2 * (10.0 / 11.0 + r2 * 12.0 / 13.0))))
    return np.where(small, ser, big)


def curve_eval(l1, l3, z0, z):
    """Value, first and second derivative of h(r(z)) on an array of z.

    Derivatives are NaN where r(z) >= 1 - 1e-9.
    """
    z = np.asarray(z, dtype=float)
    k = (l1 * l1) / (l3 * l3)
    w = np.maximum(1.0 - (z - z0) ** 2 / (l3 * l3), 0.0)
    q = z * z + l1 * l1 * w
    r = np.minimum(np.sqrt(q), 1.0)
    f = entropy_bits(r)
    qp = 2.0 * z - 2.0 * k * (z - z0)
    qpp = 2.0 - 2.0 * k
    ok = r < 1.0 - SINGULAR_GAP
    rr = np.where(ok, r, 0.5)
    hp = -_atanh_over_r(rr) / (2.0 * LN2)
    hpp = -_dg_over_r(rr) / (4.0 * LN2)
    d1 = np.where(ok, hp * qp, np.nan)
    d2 = np.where(ok, hpp * qp * qp + hp * qpp, np.nan)
    return f, d1, d2


def _h_scalar(r):
    if r >= 1.0:
        return 0.0
    r = max(r, 0.0)
    p = 0.5 * (1.0 + r)
    q = 0.5 * (1.0 - r)
    return -(p * math.log2(p) + q * math.log2(q))


def curve_point(l1, l3, z0, z):
    """Scalar version of :func:`curve_eval` returning plain floats."""
    k = (l1 * l1) / (l3 * l3)
    w = max(1.0 - (z - z0) ** 2 / (l3 * l3), 0.0)
    r = min(math.sqrt(z * z + l1 * l1 * w), 1.0)
    f = _h_scalar(r)
    if r >= 1.0 - SINGULAR_GAP:
        return f, math.nan, math.nan
    qp = 2.0 * z - 2.0 * k * (z - z0)
    qpp = 2.0 - 2.0 * k
    r2 = r * r
    if r < 1e-3:
        g = 1.0 + r2 * (1.0 / 3.0 + r2 * (1.0 / 5.0 + r2 / 7.0))
    else:
        g = math.atanh(r) / r
    if r < 0.05:
        dg = 2.0 / 3.0 + r2 * (4.0 / 5.0 + r2 * (6.0 / 7.0 + r2 * (8.0 / 9.0 + r2 * (10.0 / 11.0 + r2 * 12.0 / 13.0))))
    else:
        dg = (r / (1.0 - r2) - math.atanh(r)) / (r2 * r)
    hp = -g / (2.0 * LN2)
    hpp = -dg / (4.0 * LN2)
    return f, hp * qp, hpp * qp * qp + hp * qpp


def lower_hull(x, y):
    """Indices of the lower convex hull of points sorted by ascending x.

    Andrew's monotone chain, lower half only. Collinear points are dropped.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    hull = []
    for i in range(len(x)):
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (x[a] - x[o]) * (y[i] - y[o]) - (y[a] - y[o]) * (x[i] - x[o])
            if cross <= 0.0:
                hull.pop()
            else:
                break
        hull.append(i)
    return np.asarray(hull, dtype=np.intp)


def steer_entropy(z_a, z_b, txx, tzz, cos_t, sin_t):
    """Entropy contribution per unit POVM weight of planar direction (sin, cos).

    Returns ``(1 + cos*z_a)/2 * h(|steered point|)``; zero-probability
    directions contribute 0.
    """
    c = np.asarray(cos_t, dtype=float)
    s = np.asarray(sin_t, dtype=float)
    den = 1.0 + c * z_a
    ok = den > 1e-14
    dd = np.where(ok, den, 1.0)
    px = txx * s / dd
    pz = (z_b + tzz * c) / dd
    h = entropy_bits(np.sqrt(px * px + pz * pz))
    return np.where(ok, 0.5 * den * h, 0.0)
