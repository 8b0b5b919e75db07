"""Domain types, the robust problem, the two-peak test function and oracles."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np

from . import kernels
from .errors import InvalidInputError

Sense = Literal["maximize-mean", "minimize-mean"]
EstimatorTag = Literal["empirical", "pce", "nominal"]


def _frozen_array(values, name: str, ndim: int = 1) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise InvalidInputError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DesignPoint:
    """A candidate design vector."""

    coords: np.ndarray

    def __post_init__(self):
        coords = _frozen_array(self.coords, "coords")
        if coords.size < 1:
            raise InvalidInputError("a design needs at least one coordinate")
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return self.coords.size

    def __eq__(self, other):
        if not isinstance(other, DesignPoint):
            return NotImplemented
        return np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash(self.coords.tobytes())

    def __iter__(self):
        return iter(self.coords.tolist())

    def __repr__(self):
        return f"DesignPoint({self.coords.tolist()})"


@dataclass(frozen=True, eq=False)
class Bounds:
    """Axis-aligned box ``lo[j] <= x[j] <= hi[j]``."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = _frozen_array(self.lo, "lo")
        hi = _frozen_array(self.hi, "hi")
        if lo.shape != hi.shape or lo.size == 0:
            raise InvalidInputError("lo and hi must be non-empty and of equal length")
        if np.any(lo >= hi):
            raise InvalidInputError("bounds must define a nonempty box (lo < hi)")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[float]]) -> "Bounds":
        arr = np.asarray(pairs, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise InvalidInputError("bounds must be a list of [lo, hi] pairs")
        return cls(arr[:, 0], arr[:, 1])

    @classmethod
    def box(cls, lo: float, hi: float, dim: int) -> "Bounds":
        return cls(np.full(dim, lo), np.full(dim, hi))

    @property
    def dim(self) -> int:
        return self.lo.size

    @property
    def width(self) -> np.ndarray:
        return self.hi - self.lo

    def contains(self, p: DesignPoint) -> bool:
        c = p.coords
        return c.size == self.dim and bool(np.all((c >= self.lo) & (c <= self.hi)))

    def pairs(self) -> list[list[float]]:
        return [[float(a), float(b)] for a, b in zip(self.lo, self.hi)]

    def __eq__(self, other):
        if not isinstance(other, Bounds):
            return NotImplemented
        return np.array_equal(self.lo, other.lo) and np.array_equal(self.hi, other.hi)


@dataclass(frozen=True, eq=False)
class GaussianBump:
    """``k * exp(-|x - center|^2 / (2 sigma^2))``."""

    k: float
    center: np.ndarray
    sigma: float

    def __post_init__(self):
        object.__setattr__(self, "center", _frozen_array(self.center, "center"))
        if not self.sigma > 0:
            raise InvalidInputError(f"sigma must be positive, got {self.sigma}")
        if not math.isfinite(self.k):
            raise InvalidInputError("k must be finite")

    @property
    def dim(self) -> int:
        return self.center.size

    def __eq__(self, other):
        if not isinstance(other, GaussianBump):
            return NotImplemented
        return (self.k == other.k and self.sigma == other.sigma
                and np.array_equal(self.center, other.center))


class BumpSum:
    """Weighted sum of isotropic Gaussian bumps, evaluated in batches."""

    def __init__(self, bumps: Sequence[GaussianBump]):
        bumps = tuple(bumps)
        if not bumps:
            raise InvalidInputError("at least one bump is required")
        dims = {b.dim for b in bumps}
        if len(dims) != 1:
            raise InvalidInputError("all bump centers must share one dimension")
        self.bumps = bumps
        self.dim = dims.pop()
        self._heights = np.array([b.k for b in bumps])
        self._centers = np.array([b.center for b in bumps])
        self._sigmas = np.array([b.sigma for b in bumps])

    def evaluate_batch(self, points: np.ndarray) -> np.ndarray:
        pts = np.ascontiguousarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.dim:
            raise InvalidInputError(f"expected an (n, {self.dim}) array, got shape {pts.shape}")
        return kernels.bump_sum(pts, self._heights, self._centers, self._sigmas)

    def __call__(self, p) -> float:
        coords = p.coords if isinstance(p, DesignPoint) else np.asarray(p, dtype=float)
        if coords.shape != (self.dim,):
            raise InvalidInputError(f"expected a design of dimension {self.dim}, got {coords.shape}")
        return float(self.evaluate_batch(coords[None, :])[0])

    def __eq__(self, other):
        if not isinstance(other, BumpSum):
            return NotImplemented
        return type(self) is type(other) and self.bumps == other.bumps

    def __repr__(self):
        return f"{type(self).__name__}({list(self.bumps)!r})"


class TwoPeakFunction(BumpSum):
    """The two-peak Gaussian test function.

    The default instance has a tall, sharp peak of height 11 at (2, 2)
    (width 0.5) and a lower, broad peak of height 10 at (-2, -2) (width 2).
    Under input noise the broad peak is the robust optimum.
    """

    def __init__(self, bumps: Sequence[GaussianBump] | None = None):
        if bumps is None:
            bumps = (
                GaussianBump(11.0, (2.0, 2.0), 0.5),
                GaussianBump(10.0, (-2.0, -2.0), 2.0),
            )
        bumps = tuple(bumps)
        if len(bumps) != 2:
            raise InvalidInputError(f"a two-peak function needs exactly two bumps, got {len(bumps)}")
        super().__init__(bumps)


def two_peak_eval(f: TwoPeakFunction, p: DesignPoint) -> float:
    if p.dim != 2 or f.dim != 2:
        raise InvalidInputError(f"two-peak evaluation needs a 2-d design, got dimension {p.dim}")
    return f(p)


@dataclass(frozen=True)
class UncertaintySpec:
    """Independent normal noise on each design variable."""

    std: tuple[float, ...]

    def __post_init__(self):
        std = tuple(float(s) for s in np.atleast_1d(np.asarray(self.std, dtype=float)))
        if not std:
            raise InvalidInputError("std needs at least one entry")
        for s in std:
            if not (s > 0 and math.isfinite(s)):
                raise InvalidInputError(f"std must be positive and finite per dimension, got {s}")
        object.__setattr__(self, "std", std)

    @classmethod
    def isotropic(cls, std: float, dim: int) -> "UncertaintySpec":
        return cls((float(std),) * dim)

    @property
    def dim(self) -> int:
        return len(self.std)

    @property
    def std_array(self) -> np.ndarray:
        return np.array(self.std)


@dataclass(frozen=True)
class MomentEstimate:
    mean: float
    std: float
    n_samples: int
    estimator: EstimatorTag

    def __post_init__(self):
        if not self.std >= 0:
            raise InvalidInputError(f"std must be non-negative, got {self.std}")
        if self.estimator == "empirical" and self.n_samples < 2:
            raise InvalidInputError("empirical estimates need at least 2 samples")
        if self.estimator not in ("empirical", "pce", "nominal"):
            raise InvalidInputError(f"unknown estimator tag {self.estimator!r}")


@dataclass(frozen=True)
class EvaluatedDesign:
    design: DesignPoint
    moments: MomentEstimate
    feasible: bool


def batch_objective(objective: Callable, points: np.ndarray) -> np.ndarray:
    """Evaluate ``objective`` on every row of ``points``.

    Objectives exposing ``evaluate_batch`` are called once; plain callables
    are called row by row with a ``DesignPoint``.
    """
    if hasattr(objective, "evaluate_batch"):
        return np.asarray(objective.evaluate_batch(points), dtype=float)
    return np.array([float(objective(DesignPoint(row))) for row in points])


@dataclass(frozen=True)
class RobustProblem:
    """Optimise the mean of ``objective`` under input noise, subject to
    ``std(objective) < std_constraint``.
    """

    objective: Callable
    uncertainty: UncertaintySpec
    bounds: Bounds
    std_constraint: float = 0.1
    sense: Sense = "maximize-mean"

    def __post_init__(self):
        if not (self.std_constraint > 0 and math.isfinite(self.std_constraint)):
            raise InvalidInputError(f"std_constraint must be positive, got {self.std_constraint}")
        if self.sense not in ("maximize-mean", "minimize-mean"):
            raise InvalidInputError(f"unknown sense {self.sense!r}")
        if self.uncertainty.dim != self.bounds.dim:
            raise InvalidInputError(
                f"uncertainty has {self.uncertainty.dim} dimensions, bounds have {self.bounds.dim}")
        obj_dim = getattr(self.objective, "dim", None)
        if obj_dim is not None and obj_dim != self.bounds.dim:
            raise InvalidInputError(f"objective dimension {obj_dim} != bounds dimension {self.bounds.dim}")

    @classmethod
    def two_peak(cls, std: float = 0.1, std_constraint: float = 0.1,
                 bounds: Bounds | None = None) -> "RobustProblem":
        return cls(
            objective=TwoPeakFunction(),
            uncertainty=UncertaintySpec.isotropic(std, 2),
            bounds=bounds if bounds is not None else Bounds.box(-5.0, 5.0, 2),
            std_constraint=std_constraint,
        )

    @property
    def dim(self) -> int:
        return self.bounds.dim

    def check_design(self, p: DesignPoint) -> None:
        if p.dim != self.dim:
            raise InvalidInputError(f"design has dimension {p.dim}, problem has {self.dim}")
        if not self.bounds.contains(p):
            raise InvalidInputError(f"design {p.coords.tolist()} lies outside the bounds")

    def is_feasible(self, moments: MomentEstimate) -> bool:
        # strict: std == constraint is infeasible
        return moments.std < self.std_constraint

    def constraint_margin(self, moments: MomentEstimate) -> float:
        """Positive when feasible."""
        return self.std_constraint - moments.std

    def classify(self, design: DesignPoint, moments: MomentEstimate) -> EvaluatedDesign:
        return EvaluatedDesign(design, moments, self.is_feasible(moments))

    def objective_vector(self, e: EvaluatedDesign) -> np.ndarray:
        """Canonical minimisation form ``[-mean, std]`` (or ``[mean, std]``)."""
        sign = -1.0 if self.sense == "maximize-mean" else 1.0
        return np.array([sign * e.moments.mean, e.moments.std])


# ----------------------------------------------------------------------------
# Verification oracles
# ----------------------------------------------------------------------------

def bump_mean_oracle(b: GaussianBump, mu: DesignPoint, s: float) -> float:
    """Exact mean of one bump under ``N(mu, s^2 I)`` inputs (Gaussian convolution)."""
    if not s > 0:
        raise InvalidInputError(f"s must be positive, got {s}")
    if mu.dim != b.dim:
        raise InvalidInputError("mu and bump center dimensions differ")
    var = b.sigma ** 2 + s ** 2
    r2 = float(np.sum((mu.coords - b.center) ** 2))
    return b.k * (b.sigma ** 2 / var) ** (b.dim / 2) * math.exp(-r2 / (2 * var))


def bump_sum_mean_oracle(f: BumpSum, mu: DesignPoint, s: float) -> float:
    return math.fsum(bump_mean_oracle(b, mu, s) for b in f.bumps)


def mc_moments_oracle(f: Callable, mu: DesignPoint, s: float, n: int,
                      seed: int = 0) -> tuple[float, float, float]:
    """Plain Monte Carlo ``(mean, std, standard error of mean)`` under ``N(mu, s^2 I)``."""
    if n < 100_000:
        raise InvalidInputError(f"the Monte Carlo oracle needs n >= 1e5, got {n}")
    if not s > 0:
        raise InvalidInputError(f"s must be positive, got {s}")
    rng = np.random.default_rng(seed)
    pts = mu.coords[None, :] + s * rng.standard_normal((n, mu.dim))
    vals = batch_objective(f, pts)
    std = float(vals.std(ddof=1))
    return float(vals.mean()), std, std / math.sqrt(n)


def mc_std_oracle(f: Callable, mu: DesignPoint, s: float, n: int, seed: int = 0) -> float:
    return mc_moments_oracle(f, mu, s, n, seed)[1]
