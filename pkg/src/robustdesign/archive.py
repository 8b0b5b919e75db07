"""Non-dominated archive of feasible designs."""
from __future__ import annotations

import enum
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import InvalidInputError
from .model import EvaluatedDesign


class InsertOutcome(enum.Enum):
    INSERTED = "inserted"
    DOMINATED = "dominated"
    INFEASIBLE = "infeasible-rejected"


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """Pareto dominance for minimisation."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise InvalidInputError(f"objective vectors differ in length: {a.shape} vs {b.shape}")
    return bool(np.all(a <= b) and np.any(a < b))


def nondominated_filter(objs) -> np.ndarray:
    """Boolean mask of rows not dominated by any other row (brute force)."""
    arr = np.ascontiguousarray(np.atleast_2d(np.asarray(objs, dtype=float)))
    if arr.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    return kernels.nondominated_mask(arr)


class ParetoArchive:
    """Feasible, mutually non-dominated designs.

    Members are kept in insertion order. An entry whose objective vector
    equals a member's exactly is treated as dominated, so the first one
    wins.

    Parameters
    ----------
    objective_fn : callable
        Maps an ``EvaluatedDesign`` to its minimisation-form objective
        vector (for a ``RobustProblem`` that is ``problem.objective_vector``).
    """

    def __init__(self, objective_fn):
        self._objective_fn = objective_fn
        self._members: list[EvaluatedDesign] = []
        self._objs: list[np.ndarray] = []

    def __len__(self):
        return len(self._members)

    def __iter__(self):
        return iter(tuple(self._members))

    @property
    def members(self) -> tuple[EvaluatedDesign, ...]:
        return tuple(self._members)

    def objectives(self) -> np.ndarray:
        if not self._objs:
            return np.zeros((0, 0))
        return np.array(self._objs)

    def insert(self, e: EvaluatedDesign) -> InsertOutcome:
        if not e.feasible:
            return InsertOutcome.INFEASIBLE
        obj = np.asarray(self._objective_fn(e), dtype=float)
        if not np.all(np.isfinite(obj)):
            raise InvalidInputError("objective vector must be finite")
        if self._objs:
            stack = np.array(self._objs)
            if stack.shape[1] != obj.size:
                raise InvalidInputError("objective vector length changed")
            covered = np.all(stack <= obj, axis=1)  # dominates or equals
            if covered.any():
                return InsertOutcome.DOMINATED
            beaten = np.all(obj <= stack, axis=1)  # e dominates (equality ruled out above)
            if beaten.any():
                keep = np.flatnonzero(~beaten)
                self._members = [self._members[i] for i in keep]
                self._objs = [self._objs[i] for i in keep]
        self._members.append(e)
        self._objs.append(obj)
        return InsertOutcome.INSERTED

    def extend(self, entries: Iterable[EvaluatedDesign]) -> list[InsertOutcome]:
        return [self.insert(e) for e in entries]

    def snapshot(self) -> tuple[EvaluatedDesign, ...]:
        return self.members
