"""PD+NSGA-II, LA+NSGA-II and ALNS+NSGA-II."""

from __future__ import annotations

import logging
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from ..model import Instance, Schedule
from ..objectives import ObjectiveVector, evaluate
from ..operators import (
    DELETE,
    EXPAND,
    INSERT,
    SHORT,
    SORT,
    OperatorId,
    TabooBank,
    delete_op,
    dichotomize_schedule,
    expand_scheduled,
    free_span,
    insert_op,
    rgha_place,
    select_targets,
    short_op,
    sort_targets,
)
from .adaptive import DEFAULT_SIGMA, AdaptiveLayer
from .nsga import (
    box_select_parent,
    environmental_selection,
    hypervolume,
    rank_order,
    score_solution,
    update_archive,
)

logger = logging.getLogger(__name__)

ALGORITHMS = ("PD", "LA", "ALNS")
FAMILIES_USED = {"PD": (SORT, EXPAND), "LA": (SORT, EXPAND), "ALNS": (DELETE, SHORT, INSERT, EXPAND)}
TUNED = {"PD": dict(rs=0.2, lam=0.7), "LA": dict(rs=0.2, lam=0.5), "ALNS": dict(rs=0.1, lam=0.7)}


@dataclass
class RunConfig:
    algorithm: str = "ALNS"
    max_iter: int = 200
    rs: float = 0.3
    bmr: float = 0.7
    lam: float = 0.5
    sigma: tuple[float, float, float, float] = DEFAULT_SIGMA
    ns: int = 100
    nbest: int = 50
    na: int = 100
    seed: int = 0
    bank_fraction: float = 0.3
    destroy_range: tuple[float, float] = (0.1, 0.3)
    literal_bmr: bool = False

    def __post_init__(self):
        self.algorithm = self.algorithm.upper()
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not 0.0 <= self.rs < 1.0:
            raise ValueError("rs must lie in [0, 1)")
        if not 0.0 <= self.bmr <= 1.0:
            raise ValueError("bmr must lie in [0, 1]")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError("lambda must lie in [0, 1]")
        if min(self.ns, self.nbest, self.na) < 1 or self.nbest > self.ns:
            raise ValueError("population sizes must be positive with nbest <= ns")
        lo, hi = self.destroy_range
        if not 0.0 <= lo <= hi <= 1.0:
            raise ValueError("destroy_range must satisfy 0 <= lo <= hi <= 1")
        if not 0.0 < self.bank_fraction <= 1.0:
            raise ValueError("bank_fraction must lie in (0, 1]")
        self.sigma = tuple(float(s) for s in self.sigma)  # type: ignore[assignment]
        self.destroy_range = (float(lo), float(hi))

    @classmethod
    def tuned(cls, algorithm: str, **overrides) -> "RunConfig":
        """Configuration with the per-algorithm RS and lambda recommended by the sweeps."""
        params = dict(TUNED[algorithm.upper()])
        params.update(overrides)
        return cls(algorithm=algorithm, **params)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["sigma"] = list(self.sigma)
        d["destroy_range"] = list(self.destroy_range)
        return d


@dataclass
class Population:
    solutions: list[tuple[ObjectiveVector, list]] = field(default_factory=list)
    elite: list[tuple[ObjectiveVector, list]] = field(default_factory=list)
    archive: list[tuple[ObjectiveVector, list]] = field(default_factory=list)


@dataclass
class RunResult:
    config: RunConfig
    instance_id: str
    archive: list[Schedule]
    trace: list[dict]
    wall_time: float
    population: Population | None = None

    @property
    def front(self) -> list[ObjectiveVector]:
        return sorted(ObjectiveVector(s.f1, s.f2) for s in self.archive)


def rng_stream(seed: int, *key: int) -> random.Random:
    """Independent generator for a (seed, generation, worker, ...) key."""
    state = np.random.SeedSequence(entropy=seed, spawn_key=key).generate_state(2)
    return random.Random((int(state[0]) << 32) | int(state[1]))


# --------------------------------------------------------------------------- constructors


def rgha(
    instance: Instance,
    pool: Sequence[int],
    bmr: float,
    rng: random.Random,
    partial: Schedule | None = None,
    literal_bmr: bool = False,
) -> Schedule:
    """Random greedy heuristic: visit by priority, place once, keep only if feasible."""
    if not 0.0 <= bmr <= 1.0:
        raise ValueError("BMR must lie in [0, 1]")
    sched = partial if partial is not None else Schedule(instance)
    tg = instance.targets
    order = sorted(pool, key=lambda t: (-tg[t].priority, tg[t].uid))
    for t in order:
        if t not in sched:
            rgha_place(sched, t, bmr, rng, literal_bmr)
    return sched


def _construct(
    instance: Instance,
    pool: Sequence[int],
    adaptive: AdaptiveLayer,
    rng: random.Random,
    look_ahead: bool,
    partial: Schedule | None = None,
) -> tuple[Schedule, list[OperatorId]]:
    sort_op = adaptive.select(SORT, rng)
    order = sort_targets(instance, pool, sort_op.variant, rng)
    sched = partial if partial is not None else Schedule(instance)
    tg = instance.targets
    for t in order:
        if t in sched:
            continue
        d0 = tg[t].d0
        if look_ahead:
            top = min(tg[t].vtw.e - tg[t].vtw.s, free_span(sched, t))
            for d in range(top, d0 - 1, -1):
                b = dichotomize_schedule(sched, t, d)
                if b is not None:
                    sched.insert(t, b, b + d)
                    break
        else:
            b = dichotomize_schedule(sched, t, d0)
            if b is not None:
                sched.insert(t, b, b + d0)
    expand_op = adaptive.select(EXPAND, rng)
    expand_scheduled(sched, expand_op.variant, rng)
    return sched, [sort_op, expand_op]


def pd_construct(instance, pool, adaptive, rng, partial=None):
    """Priority dispatch: sort, place each target at d0 by dichotomization, expand."""
    return _construct(instance, pool, adaptive, rng, look_ahead=False, partial=partial)


def la_construct(instance, pool, adaptive, rng, partial=None):
    """Look-ahead: as PD but each target takes the longest duration that can be placed."""
    return _construct(instance, pool, adaptive, rng, look_ahead=True, partial=partial)


def alns_iterate(
    instance: Instance,
    parent: Schedule,
    adaptive: AdaptiveLayer,
    bank: TabooBank,
    unscheduled: Sequence[int],
    rng: random.Random,
    config: RunConfig,
) -> tuple[Schedule, list[OperatorId]]:
    """One destroy (Delete or Short) followed by one repair (Insert or Expand)."""
    child = parent.copy()
    bank.clear()
    wd, wsh = adaptive.family_weight(DELETE), adaptive.family_weight(SHORT)
    bank.split(wd / (wd + wsh))
    family = DELETE if rng.random() * (wd + wsh) < wd else SHORT
    destroy = adaptive.select(family, rng)
    q = rng.uniform(*config.destroy_range)
    count = math.ceil(q * len(child))
    if family == DELETE:
        delete_op(child, destroy.variant, bank, min(count, bank.db_room), rng)
    else:
        short_op(child, destroy.variant, bank, min(count, bank.sb_room), rng)

    wi, we = adaptive.family_weight(INSERT), adaptive.family_weight(EXPAND)
    family = INSERT if rng.random() * (wi + we) < wi else EXPAND
    repair = adaptive.select(family, rng)
    if family == INSERT:
        insert_op(child, repair.variant, unscheduled, bank, rng, config.bmr, config.literal_bmr)
    else:
        expand_scheduled(child, repair.variant, rng)
    return child, [destroy, repair]


# --------------------------------------------------------------------------- offspring tasks

_WORKER_INSTANCE: Instance | None = None


def _init_worker(instance: Instance) -> None:
    global _WORKER_INSTANCE
    _WORKER_INSTANCE = instance


def breed(instance: Instance, config: RunConfig, adaptive: AdaptiveLayer, parent, key: tuple[int, ...]):
    """Produce one evaluated solution; deterministic in ``(config.seed, key)``.

    ``parent`` is a list of (target, b, e) triples for ALNS offspring and
    None for constructor runs (including the ALNS initial RGHA runs).
    """
    rng = rng_stream(config.seed, *key)
    everyone = range(instance.n)
    pool = select_targets(everyone, config.rs, rng)
    algo = config.algorithm
    if algo == "ALNS":
        if parent is None:
            sched, ops = rgha(instance, pool, config.bmr, rng, literal_bmr=config.literal_bmr), []
        else:
            parent_s = Schedule(instance, parent)
            present = set(parent_s.targets)
            free = [t for t in pool if t not in present]
            bank = TabooBank(max(1, math.ceil(config.bank_fraction * instance.n)))
            sched, ops = alns_iterate(instance, parent_s, adaptive, bank, free, rng, config)
    elif algo == "PD":
        sched, ops = pd_construct(instance, pool, adaptive, rng)
    else:
        sched, ops = la_construct(instance, pool, adaptive, rng)
    vec = evaluate(sched)
    return vec, sched.triples(), ops


def _breed_task(args):
    return breed(_WORKER_INSTANCE, *args)


class _Breeder:
    def __init__(self, instance: Instance, workers: int):
        self.instance = instance
        self.pool = None
        if workers > 1:
            self.pool = ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(instance,))

    def map(self, tasks: list[tuple]):
        if self.pool is None:
            return [breed(self.instance, *t) for t in tasks]
        return list(self.pool.map(_breed_task, tasks, chunksize=max(1, len(tasks) // 16)))

    def close(self):
        if self.pool is not None:
            self.pool.shutdown()


# --------------------------------------------------------------------------- main loop


def _trace_record(iteration: int, adaptive: AdaptiveLayer, archive, families) -> dict:
    vecs = [v for v, _ in archive]
    return {
        "iteration": iteration,
        "weights": {op: w for op, w in adaptive.weights.items() if op.family in families},
        "archive_size": len(archive),
        "best_f1": min(v[0] for v in vecs),
        "best_f2": min(v[1] for v in vecs),
        "hypervolume": hypervolume(vecs),
    }


def run(config: RunConfig, instance: Instance, workers: int = 1, progress=None) -> RunResult:
    """Evolve a Pareto archive for ``instance``; results do not depend on ``workers``."""
    start = time.perf_counter()
    families = FAMILIES_USED[config.algorithm]
    adaptive = AdaptiveLayer(lam=config.lam, sigma=config.sigma, families=families)
    breeder = _Breeder(instance, workers)
    try:
        init = breeder.map([(config, adaptive, None, (0, i)) for i in range(config.ns)])
        population = [(vec, triples) for vec, triples, _ in init]
        archive = update_archive([], population, config.na)
        pop = Population(population, elite(population, config.nbest), archive)
        trace = [_trace_record(0, adaptive, archive, families)]

        for gen in range(1, config.max_iter + 1):
            front = [v for v, _ in archive]
            tasks = []
            for i in range(config.ns):
                parent = None
                if config.algorithm == "ALNS":
                    k = box_select_parent(front, rng_stream(config.seed, gen, i, 1), config.na)
                    parent = archive[k][1]
                tasks.append((config, adaptive, parent, (gen, i, 0)))
            offspring = breeder.map(tasks)

            for vec, _, ops in offspring:
                adaptive.reward(ops, score_solution(vec, front, config.sigma))
            children = [(vec, triples) for vec, triples, _ in offspring]
            merged = population + children
            keep = environmental_selection([v for v, _ in merged], config.ns)
            population = [merged[i] for i in keep]
            archive = update_archive(archive, children, config.na)
            pop = Population(population, population[: config.nbest], archive)
            adaptive.update_weights()
            trace.append(_trace_record(gen, adaptive, archive, families))
            if progress is not None:
                progress(gen, trace[-1])
    finally:
        breeder.close()

    schedules = []
    for vec, triples in sorted(archive, key=lambda x: (x[0][0], x[0][1])):
        s = Schedule(instance, triples)
        s.f1, s.f2 = vec
        schedules.append(s)
    return RunResult(config, instance.id, schedules, trace, time.perf_counter() - start, pop)


def elite(population: list, nbest: int) -> list:
    """The first ``nbest`` members of a population under front/crowding order."""
    order = rank_order([v for v, _ in population])
    return [population[i] for i in order[:nbest]]
