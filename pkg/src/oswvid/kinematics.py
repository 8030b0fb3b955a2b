"""Attitude lookup and time-dependent slew (transition) time."""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

DEFAULT_VELOCITIES = (1.5, 2.0, 2.5, 3.0)  # deg/s
MIN_TRANSITION = 35.0 / 3.0


class AttitudePair(NamedTuple):
    pitch: float
    roll: float


def attitude_at(vtw, t: float) -> AttitudePair:
    """Attitude of the satellite when pointing at the target of ``vtw`` at time ``t``.

    Integer times return the stored samples; fractional times are linearly
    interpolated between the two neighbouring samples.
    """
    if t < vtw.s or t > vtw.e:
        raise ValueError(f"t={t} outside visible window [{vtw.s}, {vtw.e}]")
    off = t - vtw.s
    i = int(math.floor(off))
    frac = off - i
    if frac == 0.0:
        return AttitudePair(vtw.pitch[i], vtw.roll[i])
    p = vtw.pitch[i] + frac * (vtw.pitch[i + 1] - vtw.pitch[i])
    r = vtw.roll[i] + frac * (vtw.roll[i + 1] - vtw.roll[i])
    return AttitudePair(p, r)


def delta_g(a: Sequence[float], b: Sequence[float]) -> float:
    """Total attitude change between two (pitch, roll) pairs; yaw is held fixed."""
    return abs(b[0] - a[0]) + abs(b[1] - a[1])


def transition_time(dg: float, velocities: Sequence[float] = DEFAULT_VELOCITIES) -> float:
    """Slew time in seconds for a total attitude change of ``dg`` degrees.

    Intervals are left-open / right-closed: ``dg == 30`` falls in the
    ``10 < dg <= 30`` branch.
    """
    if dg < 0:
        raise ValueError(f"attitude change must be non-negative, got {dg}")
    if dg <= 10:
        return MIN_TRANSITION
    if dg <= 30:
        return 5.0 + dg / velocities[0]
    if dg <= 60:
        return 10.0 + dg / velocities[1]
    if dg <= 90:
        return 16.0 + dg / velocities[2]
    return 22.0 + dg / velocities[3]


def transition_time_array(dg, velocities: Sequence[float] = DEFAULT_VELOCITIES):
    """Vectorised :func:`transition_time` over a numpy array of changes."""
    import numpy as np

    dg = np.asarray(dg, dtype=float)
    v1, v2, v3, v4 = velocities
    return np.select(
        [dg <= 10, dg <= 30, dg <= 60, dg <= 90],
        [np.full_like(dg, MIN_TRANSITION), 5.0 + dg / v1, 10.0 + dg / v2, 16.0 + dg / v3],
        default=22.0 + dg / v4,
    )
