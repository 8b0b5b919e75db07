"""Multi-objective simulated annealing over robust design statistics."""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field, replace
from typing import Literal, Sequence

import numpy as np

from .archive import ParetoArchive
from .errors import ConfigError, InvalidInputError
from .model import (
    Bounds,
    DesignPoint,
    EvaluatedDesign,
    MomentEstimate,
    RobustProblem,
    batch_objective,
)
from .sampling import (
    DEFAULT_SAMPLES,
    STREAM_SAMPLING,
    STREAM_START,
    STREAM_WALKER,
    child_rng,
    lhs_unit,
    sample_around,
)
from .uq import DEFAULT_PCE_DEGREE, empirical_moments, pce_fit, pce_moments

Mode = Literal["robust", "deterministic"]
Estimator = Literal["empirical", "pce"]
ConstraintRule = Literal["feasibility-first", "archive"]


@dataclass(frozen=True)
class AnnealingSchedule:
    """Geometric cooling ``T_k = t_initial * cooling**k``, clamped at ``t_final``.

    ``steps_per_temperature=None`` spreads the evaluation budget evenly so the
    chain reaches ``t_final`` on its last evaluation.
    """

    t_initial: float = 0.005
    t_final: float = 5e-5
    cooling: float = 0.95
    steps_per_temperature: int | None = None

    def validate(self):
        if not (self.t_initial > 0 and self.t_final > 0):
            raise ConfigError("temperatures must be positive")
        if not self.t_final < self.t_initial:
            raise ConfigError("t_final must be below t_initial")
        if not 0 < self.cooling < 1:
            raise ConfigError(f"cooling must lie in (0, 1), got {self.cooling}")
        if self.steps_per_temperature is not None and self.steps_per_temperature < 1:
            raise ConfigError("steps_per_temperature must be >= 1")

    @property
    def n_levels(self) -> int:
        return int(math.ceil(math.log(self.t_final / self.t_initial) / math.log(self.cooling))) + 1

    def level(self, step: int, budget: int) -> int:
        if self.steps_per_temperature is not None:
            return step // self.steps_per_temperature
        # spread the levels evenly so the last step lands on the last level
        return min(self.n_levels - 1, step * self.n_levels // max(budget, 1))

    def temperature(self, step: int, budget: int) -> float:
        return max(self.t_final, self.t_initial * self.cooling ** self.level(step, budget))


@dataclass(frozen=True)
class RunConfig:
    eval_budget: int = 600
    samples_per_design: int = DEFAULT_SAMPLES
    seed: int = 0
    estimator: Estimator = "empirical"
    pce_degree: int = DEFAULT_PCE_DEGREE
    step_scale: float = 0.1
    step_scale_final: float = 0.002
    schedule: AnnealingSchedule = field(default_factory=AnnealingSchedule)
    mode: Mode = "robust"
    n_chains: int = 12
    migrate_after: float = 1.0
    constraint_rule: ConstraintRule = "archive"
    weights: tuple[float, ...] = (0.5, 0.5)

    def validate(self):
        if self.eval_budget < 1:
            raise ConfigError(f"eval_budget must be >= 1, got {self.eval_budget}")
        if self.mode not in ("robust", "deterministic"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.mode == "robust" and self.samples_per_design < 2:
            raise ConfigError("samples_per_design must be >= 2 in robust mode")
        if self.estimator not in ("empirical", "pce"):
            raise ConfigError(f"unknown estimator {self.estimator!r}")
        if self.n_chains < 1:
            raise ConfigError(f"n_chains must be >= 1, got {self.n_chains}")
        if not 0 <= self.migrate_after <= 1:
            raise ConfigError("migrate_after must lie in [0, 1]")
        if self.constraint_rule not in ("feasibility-first", "archive"):
            raise ConfigError(f"unknown constraint rule {self.constraint_rule!r}")
        if self.pce_degree < 0:
            raise ConfigError("pce_degree must be >= 0")
        if not (self.step_scale >= 0 and self.step_scale_final >= 0):
            raise ConfigError("step scales must be non-negative")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0 or np.any(w < 0) or not math.isclose(w.sum(), 1.0, abs_tol=1e-9):
            raise ConfigError(f"weights must be non-negative and sum to 1, got {self.weights}")
        self.schedule.validate()

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class RunResult:
    trace: tuple[EvaluatedDesign, ...]
    archive: tuple[EvaluatedDesign, ...]
    best: EvaluatedDesign | None
    config: RunConfig
    accepted: tuple[bool, ...]
    acceptance_rate: tuple[float, ...]
    wall_time: float

    @property
    def n_feasible(self) -> int:
        return sum(e.feasible for e in self.trace)


# ----------------------------------------------------------------------------
# Building blocks
# ----------------------------------------------------------------------------

def _reflect(x: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    width = hi - lo
    y = np.mod(x - lo, 2 * width)
    return lo + np.where(y > width, 2 * width - y, y)


def neighbor(current: DesignPoint, step_scale: float, bounds: Bounds,
             rng: np.random.Generator) -> DesignPoint:
    """Isotropic normal step of std ``step_scale * (hi - lo)``, reflected into the box."""
    if step_scale == 0:
        return current
    step = step_scale * bounds.width * rng.standard_normal(bounds.dim)
    x = _reflect(current.coords + step, bounds.lo, bounds.hi)
    return DesignPoint(np.clip(x, bounds.lo, bounds.hi))


class ObjectiveNormalizer:
    """Running per-objective min/max used to scale objectives into [0, 1]."""

    def __init__(self, n_objectives: int):
        self.lo = np.full(n_objectives, np.inf)
        self.hi = np.full(n_objectives, -np.inf)

    def update(self, objs) -> None:
        objs = np.asarray(objs, dtype=float)
        self.lo = np.minimum(self.lo, objs)
        self.hi = np.maximum(self.hi, objs)

    def scale(self, objs) -> np.ndarray:
        objs = np.asarray(objs, dtype=float)
        span = self.hi - self.lo
        safe = np.where(span > 0, span, 1.0)
        return np.where(span > 0, (objs - self.lo) / safe, 0.0)


def energy(objs, weights, normalizer: ObjectiveNormalizer) -> float:
    """Weighted sum of range-normalised minimisation objectives."""
    w = np.asarray(weights, dtype=float)
    objs = np.asarray(objs, dtype=float)
    if w.shape != objs.shape:
        raise InvalidInputError(f"{w.size} weights for {objs.size} objectives")
    if np.any(w < 0) or not math.isclose(w.sum(), 1.0, abs_tol=1e-9):
        raise InvalidInputError("weights must be non-negative and sum to 1")
    return float(w @ normalizer.scale(objs))


def accept(current: EvaluatedDesign, candidate: EvaluatedDesign, temperature: float,
           rng: np.random.Generator, energy_fn, rule: ConstraintRule = "feasibility-first") -> bool:
    """Metropolis acceptance of ``candidate`` over ``current``.

    ``energy_fn`` maps an ``EvaluatedDesign`` to its scalar energy. The
    random draw is consumed only when the Metropolis branch is reached.

    With ``rule="feasibility-first"`` a feasible design always beats an
    infeasible one and two infeasible designs are ranked by std alone. With
    ``rule="archive"`` feasibility is ignored here and enforced only by the
    archive.
    """
    if not temperature > 0:
        raise InvalidInputError(f"temperature must be positive, got {temperature}")
    if rule == "feasibility-first":
        if candidate.feasible != current.feasible:
            return candidate.feasible
        if not candidate.feasible:
            return candidate.moments.std < current.moments.std
    elif rule != "archive":
        raise InvalidInputError(f"unknown constraint rule {rule!r}")
    delta = energy_fn(candidate) - energy_fn(current)
    if delta <= 0:
        return True
    return bool(rng.random() < math.exp(-delta / temperature))


# ----------------------------------------------------------------------------
# Design evaluation
# ----------------------------------------------------------------------------

def evaluate_design(problem: RobustProblem, design: DesignPoint, cfg: RunConfig,
                    index: int) -> EvaluatedDesign:
    """Moments of the objective at ``design``; sampling stream keyed by ``(seed, index)``."""
    if cfg.mode == "deterministic":
        value = float(batch_objective(problem.objective, design.coords[None, :])[0])
        moments = MomentEstimate(value, 0.0, 1, "nominal")
        return EvaluatedDesign(design, moments, True)
    stream = (STREAM_SAMPLING, index)
    rng = child_rng(cfg.seed, *stream)
    batch = sample_around(design, problem.uncertainty, cfg.samples_per_design, rng, stream)
    values = batch_objective(problem.objective, batch.points)
    if cfg.estimator == "pce":
        moments = pce_moments(pce_fit(batch.standardized(problem.uncertainty), values, cfg.pce_degree))
    else:
        moments = empirical_moments(values)
    return problem.classify(design, moments)


def step_scale_at(cfg: RunConfig, progress: float) -> float:
    """Step scale interpolated log-linearly from ``step_scale`` (progress 0)
    to ``step_scale_final`` (progress 1).
    """
    if cfg.step_scale == 0 or cfg.step_scale_final == 0:
        return cfg.step_scale
    progress = min(max(progress, 0.0), 1.0)
    return cfg.step_scale * (cfg.step_scale_final / cfg.step_scale) ** progress


def _objective_fn(problem: RobustProblem, mode: Mode):
    if mode == "deterministic":
        sign = -1.0 if problem.sense == "maximize-mean" else 1.0
        return lambda e: np.array([sign * e.moments.mean])
    return problem.objective_vector


def _extreme(entries: Sequence[EvaluatedDesign], problem: RobustProblem) -> EvaluatedDesign | None:
    if not entries:
        return None
    means = np.array([e.moments.mean for e in entries])
    idx = int(np.argmax(means) if problem.sense == "maximize-mean" else np.argmin(means))
    return entries[idx]


def run(problem: RobustProblem, cfg: RunConfig) -> RunResult:
    """Anneal ``cfg.n_chains`` chains in lockstep until the budget is spent.

    Chains start from a Latin hypercube design over the bounds, share one
    archive and one objective normaliser, and follow the same temperature
    schedule. Evaluation ``i`` belongs to chain ``i % n_chains``.
    """
    cfg.validate()
    if cfg.mode == "robust" and len(cfg.weights) != 2:
        raise ConfigError("robust mode needs two weights (mean, std)")
    weights = (1.0,) if cfg.mode == "deterministic" else cfg.weights

    t0 = time.perf_counter()
    budget = cfg.eval_budget
    k = min(cfg.n_chains, budget)
    n_steps = -(-budget // k)  # chain steps, the first one being the start design
    sched = cfg.schedule
    obj_fn = _objective_fn(problem, cfg.mode)
    archive = ParetoArchive(obj_fn)
    norm = ObjectiveNormalizer(len(weights))
    rngs = [child_rng(cfg.seed, STREAM_WALKER, c) for c in range(k)]

    def energy_fn(e):
        return energy(obj_fn(e), weights, norm)

    def record(e):
        norm.update(obj_fn(e))
        archive.insert(e)
        trace.append(e)

    trace: list[EvaluatedDesign] = []
    accepted: list[bool] = []
    u = lhs_unit(k, problem.dim, child_rng(cfg.seed, STREAM_START))
    current = []
    for c in range(k):
        e = evaluate_design(problem, DesignPoint(problem.bounds.lo + problem.bounds.width * u[c]), cfg, c)
        record(e)
        accepted.append(True)
        current.append(e)

    index = k
    for step in range(1, n_steps):
        temp = sched.temperature(step - 1, n_steps - 1)
        progress = (step - 1) / max(1, n_steps - 2)
        scale = step_scale_at(cfg, progress)
        members = archive.members
        migrate = progress >= cfg.migrate_after and cfg.migrate_after < 1 and members
        for c in range(k):
            if index >= budget:
                break
            if migrate and not any(current[c] is m for m in members):
                current[c] = members[int(rngs[c].integers(len(members)))]
            cand = evaluate_design(problem, neighbor(current[c].design, scale, problem.bounds, rngs[c]),
                                   cfg, index)
            record(cand)
            ok = accept(current[c], cand, temp, rngs[c], energy_fn, cfg.constraint_rule)
            accepted.append(ok)
            if ok:
                current[c] = cand
            index += 1

    if cfg.mode == "deterministic":
        best = _extreme(trace, problem)
    else:
        best = _extreme(archive.members, problem)

    # acceptance rate per temperature level (start designs excluded)
    acc = np.array(accepted[k:], dtype=float)
    levels = np.array([sched.level(i // k, n_steps - 1) for i in range(acc.size)], dtype=np.int64)
    rate = tuple(float(acc[levels == lv].mean()) for lv in np.unique(levels))
    return RunResult(tuple(trace), archive.members, best, cfg, tuple(accepted), rate,
                     time.perf_counter() - t0)
