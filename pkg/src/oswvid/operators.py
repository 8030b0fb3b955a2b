"""Sort / Expand / Delete / Short / Insert operators and dichotomization placement.

All operators mutate and return the schedule they are given; callers copy
first when they need to keep the parent. Every placement goes through
:func:`fits`, so operator outputs are feasible by construction.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence, TypeVar

from .guidance import congestion_values, gf_e, gf_p
from .kinematics import MIN_TRANSITION, transition_time
from .model import Instance, Schedule

SORT, EXPAND, DELETE, SHORT, INSERT = "Sort", "Expand", "Delete", "Short", "Insert"
FAMILIES = (SORT, EXPAND, DELETE, SHORT, INSERT)
VARIANTS = ("R", "P", "E", "C")

T = TypeVar("T")


class OperatorId(NamedTuple):
    family: str
    variant: str

    def __str__(self) -> str:
        return f"{self.variant}-{self.family}"


@dataclass
class TabooBank:
    """Targets deleted (DB) or shortened (SB) during the current ALNS iteration."""

    capacity: int
    db_limit: int = 0
    sb_limit: int = 0
    deleted: set[int] = field(default_factory=set)
    shorted: set[int] = field(default_factory=set)

    def __post_init__(self):
        if self.capacity < 1:
            raise ValueError("taboo bank capacity must be positive")
        if not self.db_limit and not self.sb_limit:
            self.split(0.5)

    def split(self, delete_share: float) -> None:
        """Divide the capacity between DB and SB; ``delete_share`` in [0, 1]."""
        self.db_limit = int(round(self.capacity * delete_share))
        self.sb_limit = self.capacity - self.db_limit

    def clear(self) -> None:
        self.deleted.clear()
        self.shorted.clear()

    @property
    def db_room(self) -> int:
        return self.db_limit - len(self.deleted)

    @property
    def sb_room(self) -> int:
        return self.sb_limit - len(self.shorted)

    def __contains__(self, t: int) -> bool:
        return t in self.deleted or t in self.shorted


# --------------------------------------------------------------------------- placement test


def fits(schedule: Schedule, t: int, b: int, e: int) -> bool:
    """Would observing target ``t`` over ``[b, e]`` keep the schedule feasible?

    ``t`` must not currently be in the schedule. Only the two neighbours in
    begin-time order are examined.
    """
    inst = schedule.instance
    tg = inst.targets
    target = tg[t]
    w = target.vtw
    if b < w.s or e > w.e or e - b < target.d0:
        return False
    begins = schedule.begins
    i = bisect_left(begins, b)
    n = len(begins)
    if i < n and begins[i] == b:
        return False
    ws = w.s
    vel = inst.velocities
    if i > 0:
        pe = schedule.ends[i - 1]
        gap = b - pe
        if gap < MIN_TRANSITION:
            return False
        pw = tg[schedule.targets[i - 1]].vtw
        k = pe - pw.s
        dg = abs(w.pitch[b - ws] - pw.pitch[k]) + abs(w.roll[b - ws] - pw.roll[k])
        if gap < transition_time(dg, vel):
            return False
    if i < n:
        nb = begins[i]
        gap = nb - e
        if gap < MIN_TRANSITION:
            return False
        nw = tg[schedule.targets[i]].vtw
        k = nb - nw.s
        dg = abs(nw.pitch[k] - w.pitch[e - ws]) + abs(nw.roll[k] - w.roll[e - ws])
        if gap < transition_time(dg, vel):
            return False
    return True


# --------------------------------------------------------------------------- selection and scoring


def select_targets(pool: Sequence[T], rs: float, rng: random.Random) -> list[T]:
    """Keep each item iff a fresh uniform draw exceeds ``rs``."""
    if not 0.0 <= rs < 1.0:
        raise ValueError(f"RS must lie in [0, 1), got {rs}")
    return [x for x in pool if rng.random() > rs]


def _guidance(
    instance: Instance,
    items: Sequence[int],
    variant: str,
    rng: random.Random,
    schedule: Schedule | None = None,
) -> dict[int, float]:
    """Per-target guidance values.

    Without a schedule the required-duration forms are used (Sort/Insert);
    with one, durations and attitudes come from the current windows.
    """
    tg = instance.targets
    if variant == "R":
        return {t: rng.random() for t in items}
    if variant == "C":
        return congestion_values(instance, items)
    if schedule is None:
        if variant == "P":
            return {t: gf_p(tg[t]) for t in items}
        if variant == "E":
            return {t: gf_e(instance, tg[t]) for t in items}
    else:
        windows = dict(zip(schedule.targets, zip(schedule.begins, schedule.ends)))
        if variant == "P":
            return {t: gf_p(tg[t], windows[t][1] - windows[t][0]) for t in items}
        if variant == "E":
            return {t: gf_e(instance, tg[t], windows[t]) for t in items}
    raise ValueError(f"unknown operator variant {variant!r}")


def _ordered(instance: Instance, scores: dict[int, float], descending: bool = False) -> list[int]:
    tg = instance.targets
    sign = -1.0 if descending else 1.0
    return sorted(scores, key=lambda t: (sign * scores[t], tg[t].uid))


def sort_targets(instance: Instance, pool: Sequence[int], variant: str, rng: random.Random) -> list[int]:
    """Order a pool ascending by the variant's guidance value (ties by target uid)."""
    return _ordered(instance, _guidance(instance, pool, variant, rng))


# --------------------------------------------------------------------------- dichotomization


def dichotomize_schedule(schedule: Schedule, t: int, d: int) -> int | None:
    """Find a begin time for a ``d``-second window of ``t`` by bisection.

    The best-quality start (centred on b0) is tried first, then the earliest
    and latest starts; the search then narrows towards the best-quality start
    from whichever end was feasible. Returns the begin time, or None.
    """
    target = schedule.instance.targets[t]
    w = target.vtw
    if d < target.d0 or d > w.e - w.s:
        raise ValueError(f"duration {d} outside [{target.d0}, {w.e - w.s}] for {target.uid}")
    if t in schedule:
        raise ValueError(f"target {target.uid} already scheduled")
    eb, lb = w.s, w.e - d
    hb = min(max(w.b0 - math.ceil(d / 2), eb), lb)
    if fits(schedule, t, hb, hb + d):
        return hb
    if fits(schedule, t, eb, eb + d):
        lb = hb
        while lb - eb > 1:
            hb = (eb + lb) // 2
            if fits(schedule, t, hb, hb + d):
                eb = hb
            else:
                lb = hb
        return eb
    if fits(schedule, t, lb, lb + d):
        eb = hb
        while lb - eb > 1:
            hb = (eb + lb) // 2
            if fits(schedule, t, hb, hb + d):
                lb = hb
            else:
                eb = hb
        return lb
    return None


def free_span(schedule: Schedule, t: int) -> int:
    """Upper bound on the duration any feasible window of ``t`` could have right now."""
    w = schedule.instance.targets[t].vtw
    begins, ends = schedule.begins, schedule.ends
    lo = w.s
    best = 0
    i = bisect_left(ends, w.s)
    # ends are sorted too because windows never overlap in a feasible schedule
    if i > 0:
        lo = max(lo, math.ceil(ends[i - 1] + MIN_TRANSITION))
    n = len(begins)
    while i < n and begins[i] <= w.e:
        hi = min(w.e, math.floor(begins[i] - MIN_TRANSITION))
        best = max(best, hi - lo)
        lo = max(lo, math.ceil(ends[i] + MIN_TRANSITION))
        i += 1
    best = max(best, w.e - lo)
    return best


# --------------------------------------------------------------------------- expand


def expand_window(schedule: Schedule, t: int) -> None:
    """Grow one scheduled window: earliest feasible begin first, then latest feasible end."""
    w = schedule.instance.targets[t].vtw
    b, e = schedule.remove(t)
    begins = schedule.begins
    i = bisect_left(begins, b)
    lo = w.s
    if i > 0:
        lo = max(lo, schedule.ends[i - 1] + 1)
    if lo < b and fits(schedule, t, lo, e):
        b = lo
    else:
        hi = b
        while lo < hi:
            mid = (lo + hi) // 2
            if fits(schedule, t, mid, e):
                hi = mid
            else:
                lo = mid + 1
        b = hi
    hi = w.e
    if i < len(begins):
        hi = min(hi, begins[i] - 1)
    lo = e
    if hi > e and fits(schedule, t, b, hi):
        e = hi
    else:
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if fits(schedule, t, b, mid):
                lo = mid
            else:
                hi = mid - 1
        e = lo
    schedule.insert(t, b, e)


def expand_scheduled(schedule: Schedule, variant: str, rng: random.Random) -> Schedule:
    if not len(schedule):
        return schedule
    inst = schedule.instance
    order = _ordered(inst, _guidance(inst, list(schedule.targets), variant, rng, schedule))
    for t in order:
        expand_window(schedule, t)
    return schedule


# --------------------------------------------------------------------------- destroy


def delete_op(schedule: Schedule, variant: str, bank: TabooBank, count: int, rng: random.Random) -> Schedule:
    """Remove ``count`` scheduled targets, highest guidance value first."""
    if count > bank.db_room:
        raise ValueError(f"cannot delete {count} targets, DB has room for {bank.db_room}")
    if not len(schedule) or count <= 0:
        return schedule
    inst = schedule.instance
    order = _ordered(inst, _guidance(inst, list(schedule.targets), variant, rng, schedule), descending=True)
    for t in order[:count]:
        schedule.remove(t)
        bank.deleted.add(t)
    return schedule


def _best_subwindows(w, b: int, e: int, d: int) -> list[int]:
    starts = range(b, e - d + 1)
    return sorted(starts, key=lambda k: (-w.quality_sum(k, k + d), k))


def short_op(schedule: Schedule, variant: str, bank: TabooBank, count: int, rng: random.Random) -> Schedule:
    """Shrink up to ``count`` windows to their required duration.

    The shrunk window is the highest-quality ``d0``-second stretch of the
    current window that still fits; targets already at ``d0`` are skipped.
    """
    if count > bank.sb_room:
        raise ValueError(f"cannot shorten {count} targets, SB has room for {bank.sb_room}")
    inst = schedule.instance
    tg = inst.targets
    longer = [t for t, b, e in schedule.triples() if e - b > tg[t].d0]
    if not longer or count <= 0:
        return schedule
    order = _ordered(inst, _guidance(inst, longer, variant, rng, schedule), descending=True)
    done = 0
    for t in order:
        if done >= count:
            break
        target = tg[t]
        b, e = schedule.remove(t)
        for k in _best_subwindows(target.vtw, b, e, target.d0):
            if fits(schedule, t, k, k + target.d0):
                schedule.insert(t, k, k + target.d0)
                bank.shorted.add(t)
                done += 1
                break
        else:
            schedule.insert(t, b, e)
    return schedule


# --------------------------------------------------------------------------- repair


def rgha_place(schedule: Schedule, t: int, bmr: float, rng: random.Random, literal_bmr: bool = False) -> bool:
    """One randomised placement attempt at the required duration.

    With probability ``bmr`` the window is centred on the best-quality moment,
    otherwise its begin is uniform over the window. ``literal_bmr`` flips the
    comparison (best-quality placement when the draw exceeds ``bmr``).
    """
    target = schedule.instance.targets[t]
    w = target.vtw
    d0 = target.d0
    tau = rng.random()
    best = tau > bmr if literal_bmr else tau < bmr
    if best:
        b = min(max(w.b0 - math.ceil(d0 / 2), w.s), w.e - d0)
    else:
        b = rng.randint(w.s, w.e - d0)
    if fits(schedule, t, b, b + d0):
        schedule.insert(t, b, b + d0)
        return True
    return False


def insert_op(
    schedule: Schedule,
    variant: str,
    unscheduled: Iterable[int],
    bank: TabooBank,
    rng: random.Random,
    bmr: float = 0.7,
    literal_bmr: bool = False,
) -> Schedule:
    """Try every non-taboo unscheduled target, in ascending guidance order."""
    present = set(schedule.targets)
    cands = [t for t in unscheduled if t not in bank and t not in present]
    if not cands:
        return schedule
    for t in sort_targets(schedule.instance, cands, variant, rng):
        rgha_place(schedule, t, bmr, rng, literal_bmr)
    return schedule
