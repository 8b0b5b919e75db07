"""Latin hypercube sampling and normal perturbations around a design."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvalidInputError
from .model import DesignPoint, UncertaintySpec

DEFAULT_SAMPLES = 50

# Stream families for child generators.
STREAM_SAMPLING = 0
STREAM_WALKER = 1
STREAM_START = 2


def child_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for ``(seed, *key)``.

    The stream depends only on the key, never on call order, so any
    evaluation can be replayed in isolation or on another worker.
    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


def lhs_unit(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    """Random-pairing Latin hypercube sample in ``[0, 1)^d``.

    Each column places exactly one point uniformly inside each stratum
    ``[i/n, (i+1)/n)``; strata are paired across columns by independent
    random permutations.

    Parameters
    ----------
    n : int
        Number of points (strata per dimension).
    d : int
        Number of dimensions.
    rng : numpy.random.Generator
        Source of randomness.

    Returns
    -------
    numpy.ndarray
        Array of shape ``(n, d)``.
    """
    if n < 1 or d < 1:
        raise InvalidInputError(f"lhs_unit needs n >= 1 and d >= 1, got n={n}, d={d}")
    strata = rng.permuted(np.tile(np.arange(n), (d, 1)), axis=1).T
    u = (strata + rng.random((n, d))) / n
    # (k + jitter)/n can round up to exactly 1.0 for the top stratum
    return np.minimum(u, np.nextafter(1.0, 0.0))


def inverse_normal_cdf(p):
    """Standard normal quantile (AS241); accepts a scalar or an array."""
    arr = np.asarray(p, dtype=float)
    if np.any(~((arr > 0.0) & (arr < 1.0))):
        raise InvalidInputError("inverse_normal_cdf needs 0 < p < 1")
    out = kernels.ndtri(np.ascontiguousarray(arr.ravel()))
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


@dataclass(frozen=True, eq=False)
class SampleBatch:
    points: np.ndarray
    origin: DesignPoint
    stream: tuple[int, ...] = ()

    def __post_init__(self):
        if self.points.ndim != 2 or self.points.shape[0] < 2:
            raise InvalidInputError("a sample batch needs at least 2 rows")
        if self.points.shape[1] != self.origin.dim:
            raise InvalidInputError("batch width differs from origin dimension")

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def standardized(self, spec: UncertaintySpec) -> np.ndarray:
        """``(points - origin) / std`` per dimension."""
        return (self.points - self.origin.coords) / spec.std_array


def sample_around(design: DesignPoint, spec: UncertaintySpec, n: int,
                  rng: np.random.Generator, stream: tuple[int, ...] = ()) -> SampleBatch:
    if spec.dim != design.dim:
        raise InvalidInputError(
            f"uncertainty has {spec.dim} dimensions, design has {design.dim}")
    if n < 2:
        raise InvalidInputError(f"need at least 2 samples, got {n}")
    u = lhs_unit(n, design.dim, rng)
    z = kernels.ndtri(u.ravel()).reshape(u.shape)
    points = design.coords + spec.std_array * z
    return SampleBatch(points, design, tuple(stream))
