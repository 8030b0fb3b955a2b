"""Experiment runner: single runs, suites, parameter sweeps and CSV/JSON export."""

from __future__ import annotations

import csv
import json
import logging
import statistics
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

from ..engine.algorithms import RunConfig, RunResult, run
from ..model import Instance, save_schedule

logger = logging.getLogger(__name__)

SWEEP_PARAMS = {"rs": "rs", "lambda": "lam"}
SUMMARY_FIELDS = ("f1_min", "f1_avg", "f1_max", "f2_min", "f2_avg", "f2_max")


@dataclass
class ExperimentReport:
    instance_id: str
    algorithm: str
    config: dict
    wall_time: float
    front: list[tuple[float, float]] = field(default_factory=list)
    label: str = ""
    error: str | None = None

    @property
    def summary(self) -> dict[str, float]:
        return summarize(self.front)


def summarize(front: Sequence[tuple[float, float]]) -> dict[str, float]:
    if not front:
        return {k: float("nan") for k in SUMMARY_FIELDS}
    f1 = [p[0] for p in front]
    f2 = [p[1] for p in front]
    return {
        "f1_min": min(f1), "f1_avg": statistics.fmean(f1), "f1_max": max(f1),
        "f2_min": min(f2), "f2_avg": statistics.fmean(f2), "f2_max": max(f2),
    }


def export_front(front: Sequence[tuple[float, float]], path) -> None:
    """Write a front as ``f1,f2`` CSV sorted by f1; floats use repr so they parse back exactly."""
    if not front:
        raise ValueError("cannot export an empty front")
    rows = sorted((float(a), float(b)) for a, b in front)
    with open(path, "w", newline="") as fh:
        fh.write("f1,f2\n")
        for a, b in rows:
            fh.write(f"{a!r},{b!r}\n")


def read_front(path) -> list[tuple[float, float]]:
    with open(path, newline="") as fh:
        return [(float(r["f1"]), float(r["f2"])) for r in csv.DictReader(fh)]


def write_weights_trace(result: RunResult, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["iteration", "family", "variant", "weight"])
        for rec in result.trace:
            for op, weight in rec["weights"].items():
                w.writerow([rec["iteration"], op.family, op.variant, repr(weight)])


def write_progress_trace(result: RunResult, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["iteration", "archive_size", "best_f1", "best_f2", "hypervolume"])
        for rec in result.trace:
            w.writerow([rec["iteration"], rec["archive_size"], repr(rec["best_f1"]),
                        repr(rec["best_f2"]), repr(rec["hypervolume"])])


def write_run_outputs(result: RunResult, out_dir) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    export_front(result.front, out / "front.csv")
    save_schedule(result.archive[0], out / "schedule.json")
    write_weights_trace(result, out / "weights_trace.csv")
    write_progress_trace(result, out / "trace.csv")
    meta = {
        "instance_id": result.instance_id,
        "config": result.config.to_dict(),
        "seed": result.config.seed,
        "wall_time": result.wall_time,
        "archive_size": len(result.archive),
    }
    (out / "run_meta.json").write_text(json.dumps(meta, indent=1))


def run_cell(instance: Instance, config: RunConfig, out_dir=None, workers: int = 1, label: str = "") -> ExperimentReport:
    result = run(config, instance, workers=workers)
    if out_dir is not None:
        write_run_outputs(result, out_dir)
    return ExperimentReport(
        instance_id=instance.id,
        algorithm=config.algorithm,
        config=config.to_dict(),
        wall_time=result.wall_time,
        front=[tuple(v) for v in result.front],
        label=label,
    )


def _cell_dir(root, instance: Instance, config: RunConfig, label: str = "") -> Path:
    name = f"{instance.id}_{config.algorithm}_s{config.seed}"
    if label:
        name += f"_{label}"
    return Path(root) / name


def run_suite(
    configs: Iterable[RunConfig],
    instances: Iterable[Instance],
    out_dir=None,
    workers: int = 1,
) -> list[ExperimentReport]:
    """Run every (config, instance) cell; a failing cell is recorded and the suite continues."""
    reports = []
    configs = list(configs)
    for inst in instances:
        for cfg in configs:
            cell = _cell_dir(out_dir, inst, cfg) if out_dir is not None else None
            try:
                reports.append(run_cell(inst, cfg, cell, workers))
            except Exception as exc:  # recorded per cell
                logger.exception("cell %s/%s failed", inst.id, cfg.algorithm)
                reports.append(ExperimentReport(inst.id, cfg.algorithm, cfg.to_dict(), 0.0, error=repr(exc)))
    if out_dir is not None:
        write_reports(reports, out_dir)
    return reports


def sweep(
    parameter: str,
    values: Sequence[float],
    base: RunConfig,
    instance: Instance,
    out_dir=None,
    workers: int = 1,
) -> list[ExperimentReport]:
    """One run per parameter value; rows carry min/avg/max of both objectives."""
    if parameter not in SWEEP_PARAMS:
        raise ValueError(f"sweep parameter must be one of {sorted(SWEEP_PARAMS)}")
    attr = SWEEP_PARAMS[parameter]
    reports = []
    for v in values:
        cfg = replace(base, **{attr: float(v)})
        label = f"{parameter}={v:g}"
        cell = _cell_dir(out_dir, instance, cfg, label.replace("=", "")) if out_dir is not None else None
        try:
            reports.append(run_cell(instance, cfg, cell, workers, label=label))
        except Exception as exc:
            logger.exception("sweep value %s failed", label)
            reports.append(ExperimentReport(instance.id, cfg.algorithm, cfg.to_dict(), 0.0, label=label, error=repr(exc)))
    if out_dir is not None:
        write_reports(reports, out_dir)
    return reports


def write_reports(reports: Sequence[ExperimentReport], out_dir) -> None:
    """``report.csv`` holds deterministic columns only; runtimes go to ``runtime.csv``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "report.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["instance", "algorithm", "seed", "label", "front_size", *SUMMARY_FIELDS, "error"])
        for r in reports:
            s = r.summary
            w.writerow([r.instance_id, r.algorithm, r.config["seed"], r.label, len(r.front),
                        *(repr(s[k]) for k in SUMMARY_FIELDS), r.error or ""])
    with open(out / "runtime.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["instance", "algorithm", "seed", "label", "wall_time"])
        for r in reports:
            w.writerow([r.instance_id, r.algorithm, r.config["seed"], r.label, f"{r.wall_time:.6f}"])
