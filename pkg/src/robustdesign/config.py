"""Experiment configuration files (YAML, strict schema)."""
from __future__ import annotations

import difflib
import os
import re
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any

import yaml

from .errors import ConfigError, InvalidInputError
from .model import Bounds, BumpSum, GaussianBump, RobustProblem, TwoPeakFunction, UncertaintySpec
from .mosa import AnnealingSchedule, RunConfig

OUTPUT_ENV = "ROBUSTDESIGN_OUTPUT"
BUILTIN_PROBLEMS = ("two-peak", "bumps")
CONSTRAINT_RULES = ("archive", "feasibility-first")
_RUN = RunConfig()
_SCHEDULE = AnnealingSchedule()


@dataclass(frozen=True)
class MosaSettings:
    t_initial: float = _SCHEDULE.t_initial
    t_final: float = _SCHEDULE.t_final
    cooling: float = _SCHEDULE.cooling
    steps_per_temperature: int | None = None
    step_scale: float = _RUN.step_scale
    step_scale_final: float = _RUN.step_scale_final
    n_chains: int = _RUN.n_chains
    migrate_after: float = _RUN.migrate_after
    constraint_rule: str = _RUN.constraint_rule
    weights: tuple[float, ...] = _RUN.weights


@dataclass(frozen=True)
class ExperimentConfig:
    problem: str = "two-peak"
    bumps: tuple[dict, ...] = ()
    bounds: tuple[tuple[float, float], ...] = ((-5.0, 5.0), (-5.0, 5.0))
    std: tuple[float, ...] = (0.1,)
    constraint: float = 0.1
    sense: str = "maximize-mean"
    estimator: str = "empirical"
    pce_degree: int = 2
    mode: str = "robust"
    evals: int = 600
    samples: int = 50
    seeds: tuple[int, ...] = (0,)
    output: str = "runs"
    mosa: MosaSettings = field(default_factory=MosaSettings)

    @property
    def dim(self) -> int:
        return len(self.bounds)

    def build_problem(self) -> RobustProblem:
        bounds = Bounds.from_pairs(self.bounds)
        if self.problem == "two-peak":
            objective = TwoPeakFunction()
        else:
            objective = BumpSum([GaussianBump(b["k"], b["center"], b["sigma"]) for b in self.bumps])
        std = self.std * self.dim if len(self.std) == 1 else self.std
        return RobustProblem(objective, UncertaintySpec(std), bounds, self.constraint, self.sense)

    def run_config(self, seed: int) -> RunConfig:
        m = self.mosa
        schedule = AnnealingSchedule(m.t_initial, m.t_final, m.cooling, m.steps_per_temperature)
        return RunConfig(
            eval_budget=self.evals, samples_per_design=self.samples, seed=seed,
            estimator=self.estimator, pce_degree=self.pce_degree,
            step_scale=m.step_scale, step_scale_final=m.step_scale_final,
            schedule=schedule, mode=self.mode, n_chains=m.n_chains, weights=m.weights,
            migrate_after=m.migrate_after, constraint_rule=m.constraint_rule,
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["bumps"] = [dict(b) for b in self.bumps]
        d["bounds"] = [list(b) for b in self.bounds]
        d["std"] = list(self.std) if len(self.std) > 1 else self.std[0]
        d["seeds"] = list(self.seeds)
        d["mosa"]["weights"] = list(self.mosa.weights)
        if not self.bumps:
            del d["bumps"]
        return d


# ----------------------------------------------------------------------------
# Parsing
# ----------------------------------------------------------------------------

_TOP_KEYS = [f.name for f in fields(ExperimentConfig)]
_MOSA_KEYS = [f.name for f in fields(MosaSettings)]
_BUMP_KEYS = ["k", "center", "sigma"]


def _suggest(key: str, valid: list[str]) -> str:
    close = difflib.get_close_matches(key, valid, n=1, cutoff=0.5)
    if not close:
        # prefix match catches shortened/lengthened names such as "stdev"
        close = [v for v in valid if key.startswith(v) or v.startswith(key)][:1]
    return f"; did you mean {close[0]!r}?" if close else ""


def _key_lines(node) -> dict[str, tuple[int, Any]]:
    out = {}
    if isinstance(node, yaml.MappingNode):
        for k, v in node.value:
            out[str(k.value)] = (k.start_mark.line + 1, v)
    return out


class _Ctx:
    def __init__(self, source: str, lines: dict):
        self.source = source
        self.lines = lines

    def fail(self, key: str, msg: str):
        line = self.lines.get(key.split(".")[0], (None,))[0]
        where = f"{self.source}:{line}" if line else self.source
        raise ConfigError(f"{where}: key {key!r}: {msg}")


def _as_float(ctx, key, value, positive=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        ctx.fail(key, f"expected a number, got {value!r}")
    value = float(value)
    if positive and not value > 0:
        ctx.fail(key, f"must be positive, got {value}")
    return value


def _as_int(ctx, key, value, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        ctx.fail(key, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        ctx.fail(key, f"must be >= {minimum}, got {value}")
    return int(value)


def _choice(ctx, key, value, options):
    if value not in options:
        ctx.fail(key, f"must be one of {', '.join(options)}, got {value!r}")
    return value


def parse_seeds(spec) -> tuple[int, ...]:
    """``7``, ``[1, 2, 3]``, ``"0..19"`` (inclusive) or ``"1,4,9"``."""
    if isinstance(spec, bool):
        raise InvalidInputError(f"invalid seed specification {spec!r}")
    if isinstance(spec, int):
        seeds = [spec]
    elif isinstance(spec, (list, tuple)):
        if not all(isinstance(s, int) and not isinstance(s, bool) for s in spec):
            raise InvalidInputError(f"seeds must be integers, got {spec!r}")
        seeds = list(spec)
    elif isinstance(spec, str):
        m = re.fullmatch(r"\s*(\d+)\s*\.\.\s*(\d+)\s*", spec)
        if m:
            a, b = int(m.group(1)), int(m.group(2))
            if b < a:
                raise InvalidInputError(f"empty seed range {spec!r}")
            seeds = list(range(a, b + 1))
        else:
            try:
                seeds = [int(s) for s in spec.split(",") if s.strip()]
            except ValueError:
                raise InvalidInputError(f"invalid seed specification {spec!r}") from None
    else:
        raise InvalidInputError(f"invalid seed specification {spec!r}")
    if not seeds:
        raise InvalidInputError("at least one seed is required")
    if any(not 0 <= s < 2 ** 64 for s in seeds):
        raise InvalidInputError("seeds must be 64-bit unsigned integers")
    return tuple(seeds)


def _parse_mosa(ctx, raw) -> MosaSettings:
    if not isinstance(raw, dict):
        ctx.fail("mosa", "expected a mapping")
    for k in raw:
        if k not in _MOSA_KEYS:
            ctx.fail(f"mosa.{k}", "unknown key" + _suggest(str(k), _MOSA_KEYS))
    kw = {}
    for k in ("t_initial", "t_final", "step_scale", "step_scale_final"):
        if k in raw:
            kw[k] = _as_float(ctx, f"mosa.{k}", raw[k], positive=k.startswith("t_"))
            if kw[k] < 0:
                ctx.fail(f"mosa.{k}", "must be non-negative")
    if "cooling" in raw:
        c = _as_float(ctx, "mosa.cooling", raw["cooling"])
        if not 0 < c < 1:
            ctx.fail("mosa.cooling", f"must lie in (0, 1), got {c}")
        kw["cooling"] = c
    if raw.get("steps_per_temperature") is not None:
        kw["steps_per_temperature"] = _as_int(ctx, "mosa.steps_per_temperature",
                                              raw["steps_per_temperature"], 1)
    if "n_chains" in raw:
        kw["n_chains"] = _as_int(ctx, "mosa.n_chains", raw["n_chains"], 1)
    if "migrate_after" in raw:
        kw["migrate_after"] = _as_float(ctx, "mosa.migrate_after", raw["migrate_after"])
        if not 0 <= kw["migrate_after"] <= 1:
            ctx.fail("mosa.migrate_after", "must lie in [0, 1]")
    if "constraint_rule" in raw:
        kw["constraint_rule"] = _choice(ctx, "mosa.constraint_rule", raw["constraint_rule"],
                                        CONSTRAINT_RULES)
    if "weights" in raw:
        w = raw["weights"]
        if not isinstance(w, list) or not w:
            ctx.fail("mosa.weights", "expected a non-empty list")
        kw["weights"] = tuple(_as_float(ctx, "mosa.weights", x) for x in w)
    return MosaSettings(**kw)


def config_from_dict(raw: dict, source: str = "<config>", lines: dict | None = None) -> ExperimentConfig:
    ctx = _Ctx(source, lines or {})
    if not isinstance(raw, dict):
        raise ConfigError(f"{source}: top level must be a mapping")
    for k in raw:
        if k not in _TOP_KEYS:
            ctx.fail(str(k), "unknown key" + _suggest(str(k), _TOP_KEYS))

    kw: dict[str, Any] = {}
    if "problem" in raw:
        kw["problem"] = _choice(ctx, "problem", raw["problem"], BUILTIN_PROBLEMS)
    if "bumps" in raw:
        bumps = raw["bumps"]
        if not isinstance(bumps, list) or not bumps:
            ctx.fail("bumps", "expected a non-empty list of {k, center, sigma}")
        parsed = []
        for i, b in enumerate(bumps):
            if not isinstance(b, dict) or set(b) != set(_BUMP_KEYS):
                ctx.fail(f"bumps[{i}]", "each bump needs exactly the keys k, center, sigma")
            parsed.append({
                "k": _as_float(ctx, f"bumps[{i}].k", b["k"]),
                "center": [_as_float(ctx, f"bumps[{i}].center", c) for c in b["center"]],
                "sigma": _as_float(ctx, f"bumps[{i}].sigma", b["sigma"], positive=True),
            })
        kw["bumps"] = tuple(parsed)
    if kw.get("problem") == "bumps" and not kw.get("bumps"):
        ctx.fail("problem", "problem 'bumps' needs a 'bumps' list")
    if "bumps" in kw and kw.get("problem", "two-peak") != "bumps":
        ctx.fail("bumps", "only allowed with problem: bumps")
    if "bounds" in raw:
        b = raw["bounds"]
        if (not isinstance(b, list) or not b
                or not all(isinstance(p, list) and len(p) == 2 for p in b)):
            ctx.fail("bounds", "expected a list of [lo, hi] pairs")
        pairs = tuple((_as_float(ctx, "bounds", p[0]), _as_float(ctx, "bounds", p[1])) for p in b)
        if any(lo >= hi for lo, hi in pairs):
            ctx.fail("bounds", "every pair needs lo < hi")
        kw["bounds"] = pairs
    if "std" in raw:
        s = raw["std"]
        vals = s if isinstance(s, list) else [s]
        if not vals:
            ctx.fail("std", "expected a number or a list of numbers")
        kw["std"] = tuple(_as_float(ctx, "std", v, positive=True) for v in vals)
    if "constraint" in raw:
        kw["constraint"] = _as_float(ctx, "constraint", raw["constraint"], positive=True)
    if "sense" in raw:
        kw["sense"] = _choice(ctx, "sense", raw["sense"], ("maximize-mean", "minimize-mean"))
    if "estimator" in raw:
        kw["estimator"] = _choice(ctx, "estimator", raw["estimator"], ("empirical", "pce"))
    if "pce_degree" in raw:
        kw["pce_degree"] = _as_int(ctx, "pce_degree", raw["pce_degree"], 0)
    if "mode" in raw:
        kw["mode"] = _choice(ctx, "mode", raw["mode"], ("robust", "deterministic"))
    if "evals" in raw:
        kw["evals"] = _as_int(ctx, "evals", raw["evals"], 1)
    if "samples" in raw:
        kw["samples"] = _as_int(ctx, "samples", raw["samples"], 2)
    if "seeds" in raw:
        try:
            kw["seeds"] = parse_seeds(raw["seeds"])
        except InvalidInputError as exc:
            ctx.fail("seeds", str(exc))
    if "output" in raw:
        if not isinstance(raw["output"], str) or not raw["output"]:
            ctx.fail("output", "expected a directory path")
        kw["output"] = raw["output"]
    elif os.environ.get(OUTPUT_ENV):
        kw["output"] = os.environ[OUTPUT_ENV]
    if "mosa" in raw:
        kw["mosa"] = _parse_mosa(ctx, raw["mosa"])

    cfg = ExperimentConfig(**kw)
    return validate(cfg, ctx)


def validate(cfg: ExperimentConfig, ctx: _Ctx | None = None) -> ExperimentConfig:
    """Cross-field checks; builds the problem and run config once to be sure."""
    ctx = ctx or _Ctx("<config>", {})
    if cfg.evals < 1:
        ctx.fail("evals", f"must be >= 1, got {cfg.evals}")
    if len(cfg.std) not in (1, cfg.dim):
        ctx.fail("std", f"expected 1 or {cfg.dim} values, got {len(cfg.std)}")
    if cfg.problem == "two-peak" and cfg.dim != 2:
        ctx.fail("bounds", "the two-peak problem is 2-dimensional")
    if cfg.problem == "bumps" and any(len(b["center"]) != cfg.dim for b in cfg.bumps):
        ctx.fail("bumps", f"every center needs {cfg.dim} coordinates")
    if cfg.mode == "robust" and len(cfg.mosa.weights) != 2:
        ctx.fail("mosa", "robust mode needs two weights (mean, std)")
    try:
        cfg.build_problem()
        cfg.run_config(cfg.seeds[0]).validate()
    except (ConfigError, InvalidInputError) as exc:
        ctx.fail("mosa" if isinstance(exc, ConfigError) else "problem", str(exc))
    return cfg


def parse_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc.strerror or exc}") from None
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{path}:{mark.line + 1}" if mark else str(path)
        raise ConfigError(f"{where}: parse error: {getattr(exc, 'problem', exc)}") from None
    if raw is None:
        raw = {}
    return config_from_dict(raw, str(path), {k: v for k, v in _key_lines(node).items()})


def dump_config(cfg: ExperimentConfig) -> str:
    return yaml.safe_dump(cfg.to_dict(), sort_keys=False, default_flow_style=None)


def write_config(cfg: ExperimentConfig, path) -> None:
    Path(path).write_text(dump_config(cfg))


def with_overrides(cfg: ExperimentConfig, **overrides) -> ExperimentConfig:
    """Apply CLI overrides (``None`` values are ignored) and revalidate."""
    kw = {k: v for k, v in overrides.items() if v is not None}
    return validate(replace(cfg, **kw)) if kw else cfg
