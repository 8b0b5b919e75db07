"""Hot numeric kernels.

Every kernel has two implementations with identical signatures: a loop
version compiled with numba (``*_jit``) and a vectorised numpy version
(``*_np``). The public name dispatches to one of them according to
``robustdesign._accel.USE_NUMBA``. Both are kept importable so tests and
the benchmark can compare them directly.
"""
import math

import numpy as np

from ._accel import USE_NUMBA, njit

__all__ = [
    "bump_sum",
    "ndtri",
    "hermite_table",
    "hermite_design",
    "nondominated_mask",
]

# AS241 (Wichura 1988), PPND16: |error| ~ 1e-16 relative.
_SPLIT1 = 0.425
_SPLIT2 = 5.0
_CONST1 = 0.180625
_CONST2 = 1.6

_A = np.array([
    3.3871328727963666080e0, 1.3314166789178437745e2,
    1.9715909503065514427e3, 1.3731693765509461125e4,
    4.5921953931549871457e4, 6.7265770927008700853e4,
    3.3430575583588128105e4, 2.5090809287301226727e3,
])
_B = np.array([
    1.0, 4.2313330701600911252e1,
    6.8718700749205790830e2, 5.3941960214247511077e3,
    2.1213794301586595867e4, 3.9307895800092710610e4,
    2.8729085735721942674e4, 5.2264952788528545610e3,
])
_C = np.array([
    1.42343711074968357734e0, 4.63033784615654529590e0,
    5.76949722146069140550e0, 3.64784832476320460504e0,
    1.27045825245236838258e0, 2.41780725177450611770e-1,
    2.27238449892691845833e-2, 7.74545014278341407640e-4,
])
_D = np.array([
    1.0, 2.05319162663775882187e0,
    1.67638483018380384940e0, 6.89767334985100004550e-1,
    1.48103976427480074590e-1, 1.51986665636164571966e-2,
    5.47593808499534494600e-4, 1.05075007164441684324e-9,
])
_E = np.array([
    6.65790464350110377720e0, 5.46378491116411436990e0,
    1.78482653991729133580e0, 2.96560571828504891230e-1,
    2.65321895265761230930e-2, 1.24266094738807843860e-3,
    2.71155556874348757815e-5, 2.01033439929228813265e-7,
])
_F = np.array([
    1.0, 5.99832206555887937690e-1,
    1.36929880922735805310e-1, 1.48753612908506148525e-2,
    7.86869131145613259100e-4, 1.84631831751005468180e-5,
    1.42151175831644588870e-7, 2.04426310338993978564e-15,
])


# ----------------------------------------------------------------------------
# Sum of isotropic Gaussian bumps
# ----------------------------------------------------------------------------

@njit(cache=True)
def bump_sum_jit(points, heights, centers, sigmas):
    n, d = points.shape
    m = heights.shape[0]
    out = np.zeros(n)
    for i in range(n):
        acc = 0.0
        for b in range(m):
            r2 = 0.0
            for j in range(d):
                diff = points[i, j] - centers[b, j]
                r2 += diff * diff
            acc += heights[b] * math.exp(-r2 / (2.0 * sigmas[b] * sigmas[b]))
        out[i] = acc
    return out


def bump_sum_np(points, heights, centers, sigmas):
    r2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    return (heights[None, :] * np.exp(-r2 / (2.0 * sigmas[None, :] ** 2))).sum(axis=1)


# ----------------------------------------------------------------------------
# Inverse standard normal CDF
# ----------------------------------------------------------------------------

@njit(cache=True)
def _horner(coef, x):
    acc = 0.0
    for k in range(coef.shape[0] - 1, -1, -1):
        acc = acc * x + coef[k]
    return acc


@njit(cache=True)
def ndtri_jit(p):
    out = np.empty(p.shape[0])
    for i in range(p.shape[0]):
        q = p[i] - 0.5
        if abs(q) <= _SPLIT1:
            r = _CONST1 - q * q
            out[i] = q * _horner(_A, r) / _horner(_B, r)
            continue
        r = p[i] if q < 0.0 else 1.0 - p[i]
        r = math.sqrt(-math.log(r))
        if r <= _SPLIT2:
            r -= _CONST2
            val = _horner(_C, r) / _horner(_D, r)
        else:
            r -= _SPLIT2
            val = _horner(_E, r) / _horner(_F, r)
        out[i] = -val if q < 0.0 else val
    return out


def _horner_np(coef, x):
    acc = np.zeros_like(x)
    for c in coef[::-1]:
        acc = acc * x + c
    return acc


def ndtri_np(p):
    q = p - 0.5
    out = np.empty_like(p)
    central = np.abs(q) <= _SPLIT1
    if central.any():
        qc = q[central]
        r = _CONST1 - qc * qc
        out[central] = qc * _horner_np(_A, r) / _horner_np(_B, r)
    tail = ~central
    if tail.any():
        pt = p[tail]
        qt = q[tail]
        r = np.sqrt(-np.log(np.where(qt < 0.0, pt, 1.0 - pt)))
        near = r <= _SPLIT2
        val = np.empty_like(r)
        rn = r[near] - _CONST2
        val[near] = _horner_np(_C, rn) / _horner_np(_D, rn)
        rf = r[~near] - _SPLIT2
        val[~near] = _horner_np(_E, rf) / _horner_np(_F, rf)
        out[tail] = np.where(qt < 0.0, -val, val)
    return out


# ----------------------------------------------------------------------------
# Probabilists' Hermite polynomials and the tensorised design matrix
# ----------------------------------------------------------------------------

@njit(cache=True)
def hermite_table_jit(z, degree):
    # table[i, k] = He_k(z[i])
    n = z.shape[0]
    table = np.empty((n, degree + 1))
    for i in range(n):
        table[i, 0] = 1.0
        if degree >= 1:
            table[i, 1] = z[i]
        for k in range(1, degree):
            table[i, k + 1] = z[i] * table[i, k] - k * table[i, k - 1]
    return table


def hermite_table_np(z, degree):
    table = np.empty((z.shape[0], degree + 1))
    table[:, 0] = 1.0
    if degree >= 1:
        table[:, 1] = z
    for k in range(1, degree):
        table[:, k + 1] = z * table[:, k] - k * table[:, k - 1]
    return table


@njit(cache=True)
def hermite_design_jit(z, alphas, degree):
    n, d = z.shape
    n_terms = alphas.shape[0]
    tables = np.empty((d, n, degree + 1))
    for j in range(d):
        tables[j] = hermite_table_jit(z[:, j].copy(), degree)
    out = np.ones((n, n_terms))
    for i in range(n):
        for t in range(n_terms):
            acc = 1.0
            for j in range(d):
                acc *= tables[j, i, alphas[t, j]]
            out[i, t] = acc
    return out


def hermite_design_np(z, alphas, degree):
    n, d = z.shape
    out = np.ones((n, alphas.shape[0]))
    for j in range(d):
        table = hermite_table_np(z[:, j], degree)
        out *= table[:, alphas[:, j]]
    return out


# ----------------------------------------------------------------------------
# Non-dominated filter (minimisation), O(m^2 k)
# ----------------------------------------------------------------------------

@njit(cache=True)
def nondominated_mask_jit(objs):
    m, k = objs.shape
    keep = np.ones(m, dtype=np.bool_)
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            no_worse = True
            better = False
            for c in range(k):
                if objs[j, c] > objs[i, c]:
                    no_worse = False
                    break
                if objs[j, c] < objs[i, c]:
                    better = True
            if no_worse and better:
                keep[i] = False
                break
    return keep


def nondominated_mask_np(objs):
    le = (objs[:, None, :] <= objs[None, :, :]).all(axis=2)
    lt = (objs[:, None, :] < objs[None, :, :]).any(axis=2)
    # dom[j, i]: row j dominates row i
    dom = le & lt
    return ~dom.any(axis=0)


if USE_NUMBA:
    bump_sum = bump_sum_jit
    ndtri = ndtri_jit
    hermite_table = hermite_table_jit
    hermite_design = hermite_design_jit
    nondominated_mask = nondominated_mask_jit
else:
    bump_sum = bump_sum_np
    ndtri = ndtri_np
    hermite_table = hermite_table_np
    hermite_design = hermite_design_np
    nondominated_mask = nondominated_mask_np
