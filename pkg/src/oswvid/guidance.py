"""Guidance scores used to order targets inside the operators.

Lower scores are scheduled first by Sort/Insert/Expand and removed last by
Delete/Short.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .kinematics import (
    DEFAULT_VELOCITIES,
    MIN_TRANSITION,
    delta_g,
    transition_time,
    transition_time_array,
)
from .model import GroundTarget, Instance

_INV_E = math.exp(-1.0)


def nod(values: Sequence[float]) -> list[float]:
    """Dimensionless rescaling ``1 / exp(1 - x / max(x))``; an all-zero set maps to zeros."""
    if len(values) == 0:
        raise ValueError("nod() of an empty set")
    mx = max(values)
    if mx <= 0:
        return [0.0] * len(values)
    return [math.exp(x / mx - 1.0) for x in values]


def gf_p(target: GroundTarget, duration: int | None = None) -> float:
    d = target.d0 if duration is None else duration
    return d / target.priority


def gf_e(instance: Instance, target: GroundTarget, window: tuple[int, int] | None = None) -> float:
    """Observation energy plus the slew energy from the nadir attitude.

    With ``window=None`` the required duration and the best-quality moment are
    used; otherwise the true (b, e) of the observation window.
    """
    w = target.vtw
    if window is None:
        d, t = target.d0, w.b0
    else:
        d, t = window[1] - window[0], window[0]
    att = (w.pitch[t - w.s], w.roll[t - w.s])
    ote = instance.ec * transition_time(delta_g((0.0, 0.0), att), instance.velocities)
    return d * instance.eo + ote


# --------------------------------------------------------------------------- conflicts


def _order_feasible(a: GroundTarget, b: GroundTarget, velocities) -> bool:
    """Can ``a`` (at d0) be observed before ``b`` (at d0) inside their windows?"""
    wa, wb = a.vtw, b.vtw
    first_end = wa.s + a.d0
    last_begin = wb.e - b.d0
    if last_begin <= wa.s or last_begin - first_end < MIN_TRANSITION:
        return False
    need = transition_time(
        delta_g(
            (wa.pitch[first_end - wa.s], wa.roll[first_end - wa.s]),
            (wb.pitch[last_begin - wb.s], wb.roll[last_begin - wb.s]),
        ),
        velocities,
    )
    if last_begin - first_end >= need:
        return True
    ba = np.arange(wa.s, wa.e - a.d0 + 1)
    bb = np.arange(wb.s, wb.e - b.d0 + 1)
    ea = ba + a.d0
    pa = np.asarray(wa.pitch)[ea - wa.s]
    ra = np.asarray(wa.roll)[ea - wa.s]
    pb = np.asarray(wb.pitch)[bb - wb.s]
    rb = np.asarray(wb.roll)[bb - wb.s]
    gap = bb[None, :] - ea[:, None]
    ok = (gap >= MIN_TRANSITION) & (bb[None, :] > ba[:, None])
    if not ok.any():
        return False
    dg = np.abs(pb[None, :] - pa[:, None]) + np.abs(rb[None, :] - ra[:, None])
    return bool(np.any(ok & (gap >= transition_time_array(dg, velocities))))


def _slew_bound(a: GroundTarget, b: GroundTarget, velocities) -> float:
    """Upper bound on the slew time between any attitude of ``a`` and any of ``b``."""
    wa, wb = a.vtw, b.vtw
    dp = max(abs(max(wa.pitch) - min(wb.pitch)), abs(max(wb.pitch) - min(wa.pitch)))
    dr = max(abs(max(wa.roll) - min(wb.roll)), abs(max(wb.roll) - min(wa.roll)))
    return transition_time(dp + dr, velocities)


def _interacting(a: GroundTarget, b: GroundTarget, velocities) -> bool:
    wa, wb = a.vtw, b.vtw
    if wa.s > wb.s:
        wa, wb = wb, wa
    if wb.s <= wa.e:
        return True
    return wb.s - wa.e < _slew_bound(a, b, velocities)


def conflict_distance(a: GroundTarget, b: GroundTarget, velocities=DEFAULT_VELOCITIES) -> float:
    """1 for an either-or conflict, 0.5 for a reconcilable one, 0 when independent."""
    if not _interacting(a, b, velocities):
        return 0.0
    if not (_order_feasible(a, b, velocities) or _order_feasible(b, a, velocities)):
        return 1.0
    return 0.5


def conflict_table(instance: Instance) -> list[dict[int, float]]:
    """Non-zero conflict distances for every target, found with a sweep over window starts."""
    tg = instance.targets
    v = instance.velocities
    table: list[dict[int, float]] = [dict() for _ in tg]
    reach = transition_time(360.0, v)
    order = sorted(range(len(tg)), key=lambda i: tg[i].vtw.s)
    for pos, i in enumerate(order):
        limit = tg[i].vtw.e + reach
        for j in order[pos + 1:]:
            if tg[j].vtw.s >= limit:
                break
            d = conflict_distance(tg[i], tg[j], v)
            if d:
                table[i][j] = d
                table[j][i] = d
    return table


def congestion(target: GroundTarget, pool: Sequence[GroundTarget], velocities=DEFAULT_VELOCITIES) -> float:
    """Workpiece congestion of ``target`` against ``pool`` (which must exclude it)."""
    if not pool:
        return 0.0
    xs = [p.priority * conflict_distance(target, p, velocities) for p in pool]
    return sum(nod(xs))


def congestion_values(instance: Instance, pool: Iterable[int]) -> dict[int, float]:
    """Congestion of every pool member against the rest of the pool, from the cached table."""
    pool = list(pool)
    members = set(pool)
    m = len(pool) - 1
    tg = instance.targets
    table = instance.conflicts
    out: dict[int, float] = {}
    for i in pool:
        xs = [tg[j].priority * d for j, d in table[i].items() if j in members]
        if not xs:
            out[i] = 0.0
            continue
        mx = max(xs)
        out[i] = sum(math.exp(x / mx - 1.0) for x in xs) + (m - len(xs)) * _INV_E
    return out
