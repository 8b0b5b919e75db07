"""Moment estimation: empirical sample moments and Hermite polynomial chaos."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import ConditioningError, InvalidInputError, UnderdeterminedError
from .model import MomentEstimate

DEFAULT_PCE_DEGREE = 2


def empirical_moments(values) -> MomentEstimate:
    """Sample mean and unbiased (``n - 1``) sample standard deviation."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size < 2:
        raise InvalidInputError(f"need at least 2 values, got {v.size}")
    mean = float(v.mean())
    std = float(np.sqrt(np.sum((v - mean) ** 2) / (v.size - 1)))
    return MomentEstimate(mean=mean, std=std, n_samples=int(v.size), estimator="empirical")


def hermite_eval(order: int, z):
    """Probabilists' Hermite polynomial ``He_order(z)``."""
    if order < 0:
        raise InvalidInputError(f"order must be >= 0, got {order}")
    arr = np.atleast_1d(np.asarray(z, dtype=float))
    out = kernels.hermite_table(np.ascontiguousarray(arr.ravel()), order)[:, order]
    if np.ndim(z) == 0:
        return float(out[0])
    return out.reshape(arr.shape)


@lru_cache(maxsize=64)
def total_degree_indices(d: int, degree: int) -> np.ndarray:
    """Multi-indices with ``sum(alpha) <= degree``, graded then reverse-lex.

    The first row is always the zero index.
    """
    if d < 1 or degree < 0:
        raise InvalidInputError(f"need d >= 1 and degree >= 0, got d={d}, degree={degree}")
    rows = []
    for total in range(degree + 1):
        for alpha in itertools.product(range(total, -1, -1), repeat=d):
            if sum(alpha) == total:
                rows.append(alpha)
    out = np.array(rows, dtype=np.int64).reshape(len(rows), d)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class PceModel:
    degree: int
    basis: np.ndarray
    coefficients: np.ndarray
    basis_norms: np.ndarray
    residual_norm: float = 0.0
    n_samples: int = 0

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def coefficient(self, alpha) -> float:
        hit = np.flatnonzero((self.basis == np.asarray(alpha)).all(axis=1))
        if hit.size == 0:
            raise KeyError(tuple(alpha))
        return float(self.coefficients[hit[0]])

    def predict(self, std_samples) -> np.ndarray:
        z = np.ascontiguousarray(np.atleast_2d(std_samples), dtype=float)
        return kernels.hermite_design(z, np.ascontiguousarray(self.basis), self.degree) @ self.coefficients


def _basis_norms(basis: np.ndarray) -> np.ndarray:
    return np.array([math.prod(math.factorial(int(a)) for a in row) for row in basis], dtype=float)


def pce_from_coefficients(d: int, degree: int, coefficients) -> PceModel:
    """Build a model directly from coefficients in ``total_degree_indices`` order."""
    basis = total_degree_indices(d, degree)
    coef = np.asarray(coefficients, dtype=float)
    if coef.shape != (basis.shape[0],):
        raise InvalidInputError(f"expected {basis.shape[0]} coefficients, got {coef.shape}")
    return PceModel(degree, basis, coef, _basis_norms(basis))


def pce_fit(std_samples, values, degree: int = DEFAULT_PCE_DEGREE, rcond: float = 1e-10) -> PceModel:
    """Least-squares regression of ``values`` on the total-degree Hermite basis.

    ``std_samples`` are the inputs mapped to standard normal variables,
    i.e. ``(sample - design) / std`` per dimension. The system is solved by
    SVD; a singular value below ``rcond`` times the largest one raises
    ``ConditioningError``.
    """
    z = np.ascontiguousarray(np.atleast_2d(np.asarray(std_samples, dtype=float)))
    y = np.asarray(values, dtype=float).ravel()
    if z.shape[0] != y.size:
        raise InvalidInputError(f"{z.shape[0]} sample rows but {y.size} values")
    if degree < 0:
        raise InvalidInputError(f"degree must be >= 0, got {degree}")
    basis = total_degree_indices(z.shape[1], degree)
    if z.shape[0] < basis.shape[0]:
        raise UnderdeterminedError(
            f"{z.shape[0]} samples cannot determine {basis.shape[0]} coefficients")
    psi = kernels.hermite_design(z, np.ascontiguousarray(basis), degree)
    coef, _, rank, sv = np.linalg.lstsq(psi, y, rcond=None)
    if rank < basis.shape[0] or sv[-1] <= rcond * sv[0]:
        raise ConditioningError(
            f"design matrix is rank deficient (rank {rank} of {basis.shape[0]})")
    residual = float(np.linalg.norm(psi @ coef - y))
    return PceModel(degree, basis, coef, _basis_norms(basis), residual, int(y.size))


def pce_moments(m: PceModel) -> MomentEstimate:
    variance = float(np.sum(m.coefficients[1:] ** 2 * m.basis_norms[1:]))
    return MomentEstimate(mean=float(m.coefficients[0]), std=math.sqrt(variance),
                          n_samples=m.n_samples, estimator="pce")
