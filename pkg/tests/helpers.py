import random

from oswvid.model import Instance, Schedule
from oswvid.operators import fits


def random_feasible_schedule(inst: Instance, rng: random.Random, keep: float | None = None) -> Schedule:
    """Random subset, random durations and random starts; placements that do not fit are skipped."""
    keep = rng.random() if keep is None else keep
    order = [t for t in range(inst.n) if rng.random() < keep]
    rng.shuffle(order)
    s = Schedule(inst)
    for t in order:
        tg = inst.targets[t]
        L = tg.vtw.e - tg.vtw.s
        d = rng.randint(tg.d0, L)
        b = rng.randint(tg.vtw.s, tg.vtw.e - d)
        if fits(s, t, b, b + d):
            s.insert(t, b, b + d)
    return s


def peel_fronts(points):
    """Reference non-dominated sorting by repeated peeling (quadratic per front)."""
    remaining = list(range(len(points)))
    fronts = []
    while remaining:
        front = []
        for i in remaining:
            pi = points[i]
            if not any(
                points[j][0] <= pi[0] and points[j][1] <= pi[1] and (points[j][0] < pi[0] or points[j][1] < pi[1])
                for j in remaining
                if j != i
            ):
                front.append(i)
        fronts.append(sorted(front))
        remaining = [i for i in remaining if i not in set(front)]
    return fronts
