"""Paired comparison of the three algorithms on seeded WD instances.

Measures how often ALNS reaches the lowest energy, how often its front spans
the widest quality range, how runtime scales from n to a larger n, and
whether archive hypervolume ever drops between iterations.
"""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass, field
from typing import Callable

from ..engine.algorithms import ALGORITHMS, RunConfig, run
from .generator import GeneratorSpec, generate_instance


@dataclass
class TrendRun:
    algorithm: str
    n: int
    seed: int
    front: list[tuple[float, float]]
    wall_time: float
    hv_trace: list[float]

    @property
    def min_f2(self) -> float:
        return min(p[1] for p in self.front)

    @property
    def f1_extent(self) -> float:
        f1 = [p[0] for p in self.front]
        return max(f1) - min(f1)

    @property
    def hv_drops(self) -> int:
        return sum(1 for a, b in zip(self.hv_trace, self.hv_trace[1:]) if b < a)


@dataclass
class TrendReport:
    n: int
    scale_n: int
    runs: list[TrendRun] = field(default_factory=list)

    def _by(self, algorithm: str, n: int) -> dict[int, TrendRun]:
        return {r.seed: r for r in self.runs if r.algorithm == algorithm and r.n == n}

    def paired_seeds(self) -> list[int]:
        groups = [set(self._by(a, self.n)) for a in ALGORITHMS]
        return sorted(set.intersection(*groups)) if groups else []

    def f2_win_rate(self) -> float:
        """Share of instances where ALNS min f2 is no worse than the best of PD and LA."""
        pd, la, alns = (self._by(a, self.n) for a in ALGORITHMS)
        seeds = self.paired_seeds()
        wins = sum(alns[s].min_f2 <= min(pd[s].min_f2, la[s].min_f2) for s in seeds)
        return wins / len(seeds)

    def extent_win_rate(self) -> float:
        """Share of instances where the ALNS front spans at least as much f1 as PD and LA."""
        pd, la, alns = (self._by(a, self.n) for a in ALGORITHMS)
        seeds = self.paired_seeds()
        wins = sum(alns[s].f1_extent >= max(pd[s].f1_extent, la[s].f1_extent) for s in seeds)
        return wins / len(seeds)

    def time_ratio(self, algorithm: str) -> float:
        """Median wall time at the large size over median wall time at the base size."""
        big = [r.wall_time for r in self._by(algorithm, self.scale_n).values()]
        base_runs = self._by(algorithm, self.n)
        base = [base_runs[s].wall_time for s in self._by(algorithm, self.scale_n) if s in base_runs]
        if not big or not base:
            raise ValueError(f"no scaling runs for {algorithm}")
        return statistics.median(big) / statistics.median(base)

    def hv_drops(self) -> list[tuple[str, int, int, int]]:
        """(algorithm, n, seed, number of decreasing steps) for every run with a drop."""
        return [(r.algorithm, r.n, r.seed, r.hv_drops) for r in self.runs if r.hv_drops]


def trend_run(algorithm: str, n: int, seed: int, max_iter: int = 200, **overrides) -> TrendRun:
    inst = generate_instance(GeneratorSpec("WD", n, seed=seed))
    cfg = RunConfig.tuned(algorithm, max_iter=max_iter, seed=seed, **overrides)
    res = run(cfg, inst)
    return TrendRun(
        algorithm=cfg.algorithm,
        n=n,
        seed=seed,
        front=[tuple(v) for v in res.front],
        wall_time=res.wall_time,
        hv_trace=[rec["hypervolume"] for rec in res.trace],
    )


def trend_experiment(
    instances: int = 20,
    n: int = 100,
    max_iter: int = 200,
    scale_n: int = 400,
    scale_instances: int = 5,
    scale_algorithms: tuple[str, ...] = ("LA", "ALNS"),
    progress: Callable[[TrendRun], None] | None = None,
    **overrides,
) -> TrendReport:
    """All algorithms on ``instances`` seeded WD-n instances, plus scaling runs at ``scale_n``.

    The scaling runs reuse seeds ``0..scale_instances-1`` so that each large
    run has a base-size partner with the same seed.
    """
    report = TrendReport(n=n, scale_n=scale_n)
    cells = [(a, n, s) for s in range(instances) for a in ALGORITHMS]
    cells += [(a, scale_n, s) for s in range(scale_instances) for a in scale_algorithms]
    for algo, size, seed in cells:
        r = trend_run(algo, size, seed, max_iter, **overrides)
        report.runs.append(r)
        if progress is not None:
            progress(r)
    return report


def write_trend_csv(report: TrendReport, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["algorithm", "n", "seed", "front_size", "min_f1", "max_f1", "min_f2", "f1_extent",
                    "final_hv", "hv_drops", "wall_time"])
        for r in report.runs:
            w.writerow([r.algorithm, r.n, r.seed, len(r.front), min(p[0] for p in r.front),
                        max(p[0] for p in r.front), r.min_f2, r.f1_extent, r.hv_trace[-1],
                        r.hv_drops, f"{r.wall_time:.3f}"])
