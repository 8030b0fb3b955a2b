"""Image quality, energy accounting, the two objectives and the feasibility checker."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .kinematics import AttitudePair, delta_g, transition_time
from .model import GroundTarget, Instance, ObservationWindow, Schedule

logger = logging.getLogger(__name__)


class ObjectiveVector(NamedTuple):
    f1: float  # loss rate of image quality
    f2: float  # normalised energy consumption


@dataclass(frozen=True)
class EnergyBreakdown:
    ot: float
    ct: float
    E: float
    MEC: float


class DegenerateInstanceError(ValueError):
    pass


def instant_quality(a: Sequence[float]) -> float:
    pitch, roll = a[0], a[1]
    if not (-90.0 <= pitch <= 90.0 and -90.0 <= roll <= 90.0):
        raise ValueError(f"attitude {tuple(a)} outside [-90, 90]")
    return (1.0 - abs(pitch) / 90.0) * (1.0 - abs(roll) / 90.0)


def cumulative_quality(target: GroundTarget, ow: ObservationWindow | tuple[int, int]) -> float:
    """Share of the window's achievable quality captured by ``ow``.

    Both sums run over the integer seconds of a half-open interval, so
    observing the full visible window gives exactly 1.
    """
    b, e = (ow.b, ow.e) if isinstance(ow, ObservationWindow) else ow
    w = target.vtw
    denom = w.total_quality
    if denom <= 0.0:
        raise DegenerateInstanceError(f"target {target.uid}: zero quality over its visible window")
    return w.quality_sum(b, e) / denom


def energy(schedule: Schedule) -> EnergyBreakdown:
    inst = schedule.instance
    tg = inst.targets
    ot = float(sum(e - b for b, e in zip(schedule.begins, schedule.ends)))
    ct = 0.0
    prev = None
    for t, b, e in zip(schedule.targets, schedule.begins, schedule.ends):
        w = tg[t].vtw
        if prev is not None:
            pw, pe = prev
            dg = delta_g(
                (pw.pitch[pe - pw.s], pw.roll[pe - pw.s]),
                (w.pitch[b - w.s], w.roll[b - w.s]),
            )
            ct += transition_time(dg, inst.velocities)
        prev = (w, e)
    E = inst.eo * ot + inst.ec * ct
    return EnergyBreakdown(ot=ot, ct=ct, E=E, MEC=inst.mec)


def evaluate(schedule: Schedule) -> ObjectiveVector:
    """Compute (f1, f2) and cache them on the schedule."""
    inst = schedule.instance
    tg = inst.targets
    gained = 0.0
    for t, b, e in zip(schedule.targets, schedule.begins, schedule.ends):
        target = tg[t]
        gained += target.priority * cumulative_quality(target, (b, e))
    f1 = 1.0 - gained / inst.total_priority
    en = energy(schedule)
    f2 = en.E / en.MEC
    if f2 > 1.0:
        logger.warning("f2=%.6f exceeds 1 on instance %s", f2, inst.id)
    schedule.f1, schedule.f2 = f1, f2
    return ObjectiveVector(f1, f2)


def find_violations(instance: Instance, assignments: Sequence[tuple[int, int, int]]) -> list[str]:
    """Check raw ``(target, b, e)`` triples against the model constraints.

    This is deliberately written from scratch and does not reuse the
    incremental placement tests used by the operators.
    """
    out: list[str] = []
    tg = instance.targets
    counts: dict[int, int] = {}
    for t, _, _ in assignments:
        counts[t] = counts.get(t, 0) + 1
    for t, c in counts.items():
        if c > 1:
            out.append(f"(18) target {tg[t].uid} observed {c} times")

    for t, b, e in assignments:
        w = tg[t].vtw
        if b < w.s or e > w.e or e <= b:
            out.append(f"(19) target {tg[t].uid}: ow [{b},{e}] not inside vtw [{w.s},{w.e}]")
        if e - b < tg[t].d0:
            out.append(f"(20) target {tg[t].uid}: d={e - b} < d0={tg[t].d0}")

    ordered = sorted(assignments, key=lambda a: a[1])
    for (tk, bk, ek), (tj, bj, ej) in zip(ordered, ordered[1:]):
        if not bj > bk:
            out.append(f"(21) targets {tg[tk].uid},{tg[tj].uid}: begin times not strictly ordered")
            continue
        wk, wj = tg[tk].vtw, tg[tj].vtw
        if not (wk.s <= ek <= wk.e and wj.s <= bj <= wj.e):
            continue  # already reported under (19)
        end_att = AttitudePair(wk.pitch[ek - wk.s], wk.roll[ek - wk.s])
        begin_att = AttitudePair(wj.pitch[bj - wj.s], wj.roll[bj - wj.s])
        need = transition_time(delta_g(end_att, begin_att), instance.velocities)
        if bj - ek < need:
            out.append(
                f"(21) targets {tg[tk].uid}->{tg[tj].uid}: gap {bj - ek} < transition {need:.4f}"
            )
    return out


def check_feasible(schedule: Schedule) -> list[str]:
    out = find_violations(schedule.instance, schedule.triples())
    if not out and len(schedule):
        en = energy(schedule)
        if en.E > en.MEC:
            out.append(f"(15) f2 = {en.E / en.MEC:.6f} exceeds 1")
    return out
