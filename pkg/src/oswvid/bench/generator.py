"""Synthetic CD/WD-style instance generator.

CD instances draw window starts from five temporal clusters (congested),
WD instances spread them uniformly over the horizon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..model import GroundTarget, Instance, VisibleTimeWindow, validate, with_congestion

FAMILIES = ("CD", "WD")
N_CLUSTERS = 5


class GenerationError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorSpec:
    family: str = "WD"
    n_targets: int = 100
    horizon: int = 10800
    seed: int = 0
    density: float = 1.0  # CD cluster tightness; larger packs windows closer together
    tp: tuple[float, float] = (0.5, 0.9)
    vtw_length: tuple[int, int] = (60, 300)
    pitch_span: float = 45.0
    roll_span: float = 45.0
    jitter: float = 0.1

    def __post_init__(self):
        object.__setattr__(self, "family", self.family.upper())
        if self.family not in FAMILIES:
            raise GenerationError(f"family must be CD or WD, got {self.family!r}")
        if self.n_targets < 1:
            raise GenerationError("n_targets must be >= 1")
        lo, hi = self.tp
        if not 0.0 < lo <= hi <= 1.0:
            raise GenerationError(f"tp range must lie in (0, 1], got {self.tp}")
        if self.density <= 0:
            raise GenerationError("density must be positive")
        if not 1 <= self.vtw_length[0] <= self.vtw_length[1]:
            raise GenerationError("bad window length range")
        if self.horizon < self.vtw_length[1]:
            raise GenerationError(
                f"horizon {self.horizon}s shorter than the longest window {self.vtw_length[1]}s"
            )


def _best_moment(pitch: np.ndarray, roll: np.ndarray) -> int:
    q = (1.0 - np.abs(pitch) / 90.0) * (1.0 - np.abs(roll) / 90.0)
    return int(np.argmax(q[:-1]))  # b0 < e


def generate_instance(spec: GeneratorSpec) -> Instance:
    rng = np.random.default_rng(spec.seed)
    n, H = spec.n_targets, spec.horizon
    prio = rng.integers(1, 11, size=n)
    lengths = rng.integers(spec.vtw_length[0], spec.vtw_length[1] + 1, size=n)
    if spec.family == "WD":
        starts = np.floor(rng.random(n) * (H - lengths + 1)).astype(int)
    else:
        centres = rng.uniform(0.1 * H, 0.9 * H, size=N_CLUSTERS)
        which = rng.integers(0, N_CLUSTERS, size=n)
        spread = H / (10.0 * spec.density)
        raw = centres[which] + rng.normal(0.0, spread, size=n) - lengths / 2.0
        starts = np.clip(np.round(raw), 0, H - lengths).astype(int)
    rolls = rng.uniform(-spec.roll_span, spec.roll_span, size=n)
    tps = rng.uniform(spec.tp[0], spec.tp[1], size=n)
    jit = rng.uniform(-spec.jitter, spec.jitter, size=n)

    targets = []
    for k in range(n):
        L = int(lengths[k])
        s = int(starts[k])
        pitch = np.linspace(-spec.pitch_span, spec.pitch_span, L + 1)
        roll = np.full(L + 1, rolls[k])
        d0 = int(min(L, max(1, math.ceil(tps[k] * L * (1.0 + jit[k])))))
        vtw = VisibleTimeWindow(
            id=f"w{k}",
            s=s,
            e=s + L,
            b0=s + _best_moment(pitch, roll),
            pitch=tuple(float(x) for x in pitch),
            roll=tuple(float(x) for x in roll),
        )
        targets.append(GroundTarget(f"gt{k}", int(prio[k]), d0, vtw))

    inst = Instance(id=f"{spec.family}-{n}", horizon_start=0, horizon_end=H, targets=targets)
    problems = validate(inst)
    if problems:
        raise GenerationError("; ".join(problems))
    return with_congestion(inst)
