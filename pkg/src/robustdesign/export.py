"""CSV/JSON export of run results."""
from __future__ import annotations

import csv
import io
import json
import os
from pathlib import Path

from .model import EvaluatedDesign
from .mosa import RunResult


def coord_names(dim: int) -> list[str]:
    if dim == 1:
        return ["x"]
    if dim == 2:
        return ["x", "y"]
    return [f"x{j + 1}" for j in range(dim)]


def fmt_real(v: float) -> str:
    return f"{v:.9g}"


def _row(e: EvaluatedDesign) -> list[str]:
    return ([fmt_real(c) for c in e.design.coords]
            + [fmt_real(e.moments.mean), fmt_real(e.moments.std), "true" if e.feasible else "false"])


def designs_csv(result: RunResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    dim = result.trace[0].design.dim if result.trace else 2
    w.writerow(["eval_index", *coord_names(dim), "mean", "std", "feasible"])
    for i, e in enumerate(result.trace):
        w.writerow([str(i), *_row(e)])
    return buf.getvalue()


def archive_csv(result: RunResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    dim = result.trace[0].design.dim if result.trace else 2
    w.writerow([*coord_names(dim), "mean", "std", "feasible"])
    for e in result.archive:
        w.writerow(_row(e))
    return buf.getvalue()


def record(e: EvaluatedDesign | None) -> dict | None:
    if e is None:
        return None
    return {
        "design": [float(c) for c in e.design.coords],
        "mean": e.moments.mean,
        "std": e.moments.std,
        "n_samples": e.moments.n_samples,
        "estimator": e.moments.estimator,
        "feasible": e.feasible,
    }


def run_json(result: RunResult, extra: dict | None = None) -> str:
    doc = {
        "seed": result.config.seed,
        "config": result.config.to_dict(),
        "best": record(result.best),
        "n_evaluations": len(result.trace),
        "n_feasible": result.n_feasible,
        "archive_size": len(result.archive),
        "acceptance_rate": list(result.acceptance_rate),
        "wall_time_s": result.wall_time,
    }
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=2) + "\n"


def export_scatter(result: RunResult, out_dir, extra: dict | None = None) -> list[Path]:
    """Write ``designs.csv``, ``archive.csv`` and ``run.json`` into ``out_dir``.

    Files are first written under temporary names and renamed at the end,
    so a failure never leaves a half-written set behind.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    payload = {
        "designs.csv": designs_csv(result),
        "archive.csv": archive_csv(result),
        "run.json": run_json(result, extra),
    }
    written = []
    try:
        for name, text in payload.items():
            tmp = out / f".{name}.partial"
            tmp.write_text(text)
            written.append(tmp)
        final = []
        for tmp in written:
            dest = out / tmp.name[1:-len(".partial")]
            os.replace(tmp, dest)
            final.append(dest)
        return final
    except OSError:
        for tmp in written:
            tmp.unlink(missing_ok=True)
        raise
