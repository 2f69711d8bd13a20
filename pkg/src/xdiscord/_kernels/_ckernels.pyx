# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_pykernels``."""
import numpy as np

from libc.math cimport sqrt, log2, log1p, atanh, log, NAN

cdef double LN2 = log(2.0)
cdef double SINGULAR_GAP = 1e-9


cdef inline double _h(double r) nogil:
    cdef double p, q
    if r >= 1.0:
        return 0.0
    if r < 0.0:
        r = 0.0
    p = 0.5 * (1.0 + r)
    q = 0.5 * (1.0 - r)
    return -(p * log2(p) + q * log2(q))


cdef inline void _curve(double l1, double l3, double z0, double z,
                        double* f, double* d1, double* d2) nogil:
    cdef double k = (l1 * l1) / (l3 * l3)
    cdef double w = 1.0 - (z - z0) * (z - z0) / (l3 * l3)
    cdef double r, r2, qp, qpp, g, dg, hp, hpp, at
    if w < 0.0:
        w = 0.0
    r = sqrt(z * z + l1 * l1 * w)
    if r > 1.0:
        r = 1.0
    if r >= 1.0 - SINGULAR_GAP:
        f[0] = _h(r)
        d1[0] = NAN
        d2[0] = NAN
        return
    qp = 2.0 * z - 2.0 * k * (z - z0)
    qpp = 2.0 - 2.0 * k
    r2 = r * r
    # one atanh serves the value and both derivatives:
    # (1+r)ln(1+r) + (1-r)ln(1-r) = ln(1-r^2) + 2 r atanh(r)
    at = atanh(r)
    f[0] = 1.0 - (log1p(-r2) + 2.0 * r * at) / (2.0 * LN2)
    if r < 1e-3:
        g = 1.0 + r2 * (1.0 / 3.0 + r2 * (1.0 / 5.0 + r2 / 7.0))
    else:
        g = at / r
    if r < 0.05:
        dg = 2.0 / 3.0 + r2 * (4.0 / 5.0 + r2 * (6.0 / 7.0 + r2 * (8.0 / 9.0 + r2 * (10.0 / 11.0 + r2 * 12.0 / 13.0))))
    else:
        dg = (r / (1.0 - r2) - at) / (r2 * r)
    hp = -g / (2.0 * LN2)
    hpp = -dg / (4.0 * LN2)
    d1[0] = hp * qp
    d2[0] = hpp * qp * qp + hp * qpp


def entropy_bits(r):
    cdef double[::1] rv = np.ascontiguousarray(r, dtype=float).ravel()
    out = np.empty(rv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    for i in range(rv.shape[0]):
        ov[i] = _h(rv[i])
    return out.reshape(np.shape(r))


def curve_eval(double l1, double l3, double z0, z):
    cdef double[::1] zv = np.ascontiguousarray(z, dtype=float).ravel()
    cdef Py_ssize_t n = zv.shape[0], i
    f = np.empty(n)
    d1 = np.empty(n)
    d2 = np.empty(n)
    cdef double[::1] fv = f, av = d1, bv = d2
    with nogil:
        for i in range(n):
            _curve(l1, l3, z0, zv[i], &fv[i], &av[i], &bv[i])
    shape = np.shape(z)
    return f.reshape(shape), d1.reshape(shape), d2.reshape(shape)


def curve_point(double l1, double l3, double z0, double z):
    cdef double f, a, b
    _curve(l1, l3, z0, z, &f, &a, &b)
    return f, a, b


def lower_hull(x, y):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=float)
    cdef double[::1] yv = np.ascontiguousarray(y, dtype=float)
    cdef Py_ssize_t n = xv.shape[0], i, top = 0, o, a
    hull = np.empty(n, dtype=np.intp)
    cdef Py_ssize_t[::1] hv = hull
    cdef double cross
    for i in range(n):
        while top >= 2:
            o = hv[top - 2]
            a = hv[top - 1]
            cross = (xv[a] - xv[o]) * (yv[i] - yv[o]) - (yv[a] - yv[o]) * (xv[i] - xv[o])
            if cross <= 0.0:
                top -= 1
            else:
                break
        hv[top] = i
        top += 1
    return hull[:top].copy()


def steer_entropy(double z_a, double z_b, double txx, double tzz, cos_t, sin_t):
    cdef double[::1] cv = np.ascontiguousarray(cos_t, dtype=float).ravel()
    cdef double[::1] sv = np.ascontiguousarray(sin_t, dtype=float).ravel()
    cdef Py_ssize_t n = cv.shape[0], i
    out = np.empty(n)
    cdef double[::1] ov = out
    cdef double den, px, pz
    with nogil:
        for i in range(n):
            den = 1.0 + cv[i] * z_a
            if den > 1e-14:
                px = txx * sv[i] / den
                pz = (z_b + tzz * cv[i]) / den
                ov[i] = 0.5 * den * _h(sqrt(px * px + pz * pz))
            else:
                ov[i] = 0.0
    return out.reshape(np.shape(cos_t))
