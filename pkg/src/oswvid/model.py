"""Domain types, validation and JSON I/O for scheduling instances and schedules.

Time is an integer one-second grid. A visible time window ``[s, e]`` carries
``e - s + 1`` attitude samples, one per second, inclusive of both ends.
"""

from __future__ import annotations

import json
from bisect import bisect_left
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable

from .kinematics import DEFAULT_VELOCITIES

DEFAULT_EO = 0.08  # W, observation
DEFAULT_EC = 0.05  # W, attitude conversion
DEFAULT_MAX_TRANS = 100.0


class InstanceError(ValueError):
    """Raised when an instance file cannot be parsed or violates an invariant."""


class ScheduleError(ValueError):
    pass


@dataclass(frozen=True)
class VisibleTimeWindow:
    id: str
    s: int
    e: int
    b0: int
    pitch: tuple[float, ...]
    roll: tuple[float, ...]

    @property
    def length(self) -> int:
        return self.e - self.s

    @cached_property
    def quality_prefix(self) -> list[float]:
        """Prefix sums of instant quality: ``prefix[k]`` sums seconds ``s .. s+k-1``."""
        out = [0.0]
        acc = 0.0
        for p, r in zip(self.pitch, self.roll):
            acc += (1.0 - abs(p) / 90.0) * (1.0 - abs(r) / 90.0)
            out.append(acc)
        return out

    def quality_sum(self, b: int, e: int) -> float:
        """Summed instant quality over the integer seconds of ``[b, e)``."""
        qp = self.quality_prefix
        return qp[e - self.s] - qp[b - self.s]

    @cached_property
    def total_quality(self) -> float:
        return self.quality_sum(self.s, self.e)


@dataclass(frozen=True)
class GroundTarget:
    id: str
    priority: int
    d0: int
    vtw: VisibleTimeWindow
    clone: int = 0
    uid: str = ""
    c0: float = 0.0

    def __post_init__(self):
        if not self.uid:
            object.__setattr__(self, "uid", self.id)


@dataclass(frozen=True)
class ObservationWindow:
    b: int
    e: int
    d: int
    p_o: float
    r_o: float
    p_inf: float
    r_inf: float

    @classmethod
    def within(cls, vtw: VisibleTimeWindow, b: int, e: int) -> "ObservationWindow":
        return cls(
            b=b,
            e=e,
            d=e - b,
            p_o=vtw.pitch[b - vtw.s],
            r_o=vtw.roll[b - vtw.s],
            p_inf=vtw.pitch[e - vtw.s],
            r_inf=vtw.roll[e - vtw.s],
        )


@dataclass
class Instance:
    id: str
    horizon_start: int
    horizon_end: int
    targets: list[GroundTarget]
    eo: float = DEFAULT_EO
    ec: float = DEFAULT_EC
    velocities: tuple[float, float, float, float] = DEFAULT_VELOCITIES
    max_trans: float = DEFAULT_MAX_TRANS

    @property
    def n(self) -> int:
        return len(self.targets)

    @cached_property
    def index(self) -> dict[str, int]:
        return {t.uid: i for i, t in enumerate(self.targets)}

    @cached_property
    def total_priority(self) -> int:
        return sum(t.priority for t in self.targets)

    @cached_property
    def mec(self) -> float:
        """Maximum energy: every window imaged in full plus a worst-case slew per target."""
        full = sum(self.eo * t.vtw.length for t in self.targets)
        return full + self.max_trans * self.ec * self.n

    @cached_property
    def conflicts(self) -> list[dict[int, float]]:
        """Sparse pairwise conflict distances (only non-zero entries stored)."""
        from .guidance import conflict_table

        return conflict_table(self)


class Schedule:
    """Ordered assignment of observation windows, kept sorted by begin time.

    Only bookkeeping lives here; feasibility is the caller's responsibility
    (see :mod:`oswvid.operators` and :func:`oswvid.objectives.check_feasible`).
    """

    __slots__ = ("instance", "begins", "ends", "targets", "f1", "f2")

    def __init__(self, instance: Instance, assignments: Iterable[tuple[int, int, int]] = ()):
        self.instance = instance
        self.begins: list[int] = []
        self.ends: list[int] = []
        self.targets: list[int] = []
        self.f1: float | None = None
        self.f2: float | None = None
        for t, b, e in assignments:
            self.insert(t, b, e)

    def __len__(self) -> int:
        return len(self.targets)

    def __contains__(self, t: int) -> bool:
        return t in self.targets

    def __eq__(self, other) -> bool:
        if not isinstance(other, Schedule):
            return NotImplemented
        return (
            self.instance is other.instance
            and self.begins == other.begins
            and self.ends == other.ends
            and self.targets == other.targets
        )

    def __repr__(self) -> str:
        return f"Schedule({self.instance.id!r}, n={len(self)}, f1={self.f1}, f2={self.f2})"

    def insert(self, t: int, b: int, e: int) -> None:
        i = bisect_left(self.begins, b)
        if i < len(self.begins) and self.begins[i] == b:
            raise ScheduleError(f"begin time {b} already taken")
        if t in self.targets:
            raise ScheduleError(f"target {t} already scheduled")
        self.begins.insert(i, b)
        self.ends.insert(i, e)
        self.targets.insert(i, t)
        self.f1 = self.f2 = None

    def remove(self, t: int) -> tuple[int, int]:
        i = self.targets.index(t)
        b, e = self.begins[i], self.ends[i]
        del self.begins[i], self.ends[i], self.targets[i]
        self.f1 = self.f2 = None
        return b, e

    def window(self, t: int) -> tuple[int, int]:
        i = self.targets.index(t)
        return self.begins[i], self.ends[i]

    def copy(self) -> "Schedule":
        new = Schedule.__new__(Schedule)
        new.instance = self.instance
        new.begins = self.begins[:]
        new.ends = self.ends[:]
        new.targets = self.targets[:]
        new.f1, new.f2 = self.f1, self.f2
        return new

    def triples(self) -> list[tuple[int, int, int]]:
        return list(zip(self.targets, self.begins, self.ends))

    def assignments(self) -> list[tuple[str, ObservationWindow]]:
        tg = self.instance.targets
        return [
            (tg[t].uid, ObservationWindow.within(tg[t].vtw, b, e))
            for t, b, e in zip(self.targets, self.begins, self.ends)
        ]


# --------------------------------------------------------------------------- validation


def _angle_ok(a: float) -> bool:
    return -90.0 <= a <= 90.0


def validate(instance: Instance) -> list[str]:
    """Return human-readable invariant violations; empty when the instance is well formed."""
    out: list[str] = []
    if not instance.horizon_end > instance.horizon_start:
        out.append("Instance.horizon: Et > St")
    if not instance.eo > 0:
        out.append("Instance.eo: eo > 0")
    if not instance.ec > 0:
        out.append("Instance.ec: ec > 0")
    if len(instance.velocities) != 4 or any(v <= 0 for v in instance.velocities):
        out.append("Instance.velocities: four positive velocities")
    seen: set[str] = set()
    for tg in instance.targets:
        w = tg.vtw
        name = tg.uid
        if name in seen:
            out.append(f"GroundTarget[{name}].uid: unique after cloning")
        seen.add(name)
        if tg.priority < 1:
            out.append(f"GroundTarget[{name}].priority: priority >= 1")
        if tg.d0 < 1:
            out.append(f"GroundTarget[{name}].d0: d0 >= 1")
        if tg.c0 < 0:
            out.append(f"GroundTarget[{name}].c0: c0 >= 0")
        if not w.s < w.e:
            out.append(f"VisibleTimeWindow[{name}].s: s < e")
            continue
        if tg.d0 > w.e - w.s:
            out.append(f"GroundTarget[{name}].d0: d0 <= vtw.e - vtw.s")
        if not w.s <= w.b0:
            out.append(f"VisibleTimeWindow[{name}].b0: s <= b0")
        if not w.b0 < w.e:
            out.append(f"VisibleTimeWindow[{name}].b0: b0 < e")
        if w.s < instance.horizon_start or w.e > instance.horizon_end:
            out.append(f"VisibleTimeWindow[{name}].s: window within horizon [St, Et]")
        n = w.e - w.s + 1
        if len(w.pitch) != n:
            out.append(f"VisibleTimeWindow[{name}].pitch: length e - s + 1 = {n}")
        if len(w.roll) != n:
            out.append(f"VisibleTimeWindow[{name}].roll: length e - s + 1 = {n}")
        if not all(_angle_ok(a) for a in w.pitch):
            out.append(f"VisibleTimeWindow[{name}].pitch: angle out of [-90,90]")
        if not all(_angle_ok(a) for a in w.roll):
            out.append(f"VisibleTimeWindow[{name}].roll: angle out of [-90,90]")
    return out


# --------------------------------------------------------------------------- instance I/O


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise InstanceError(f"{where}: missing field {key!r}")
    return obj[key]


def _as_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or value != int(value):
        raise InstanceError(f"{where}: expected integer seconds, got {value!r}")
    return int(value)


def _parse_vtw(raw: dict, where: str, default_id: str) -> VisibleTimeWindow:
    if not isinstance(raw, dict):
        raise InstanceError(f"{where}: expected an object")
    pitch = _require(raw, "pitch", where)
    roll = _require(raw, "roll", where)
    if not isinstance(pitch, list) or not isinstance(roll, list):
        raise InstanceError(f"{where}.pitch/roll: expected arrays")
    return VisibleTimeWindow(
        id=str(raw.get("id", default_id)),
        s=_as_int(_require(raw, "s", where), f"{where}.s"),
        e=_as_int(_require(raw, "e", where), f"{where}.e"),
        b0=_as_int(_require(raw, "b0", where), f"{where}.b0"),
        pitch=tuple(float(a) for a in pitch),
        roll=tuple(float(a) for a in roll),
    )


def instance_from_dict(data: dict) -> Instance:
    """Build and validate an instance, cloning multi-window targets into one target per window."""
    if not isinstance(data, dict):
        raise InstanceError("instance: expected a JSON object")
    horizon = _require(data, "horizon", "instance")
    if not isinstance(horizon, list) or len(horizon) != 2:
        raise InstanceError("instance.horizon: expected [St, Et]")
    velocities = tuple(float(v) for v in data.get("velocities", DEFAULT_VELOCITIES))
    if len(velocities) != 4:
        raise InstanceError("instance.velocities: expected four values")
    raw_targets = _require(data, "targets", "instance")
    targets: list[GroundTarget] = []
    base_ids: set[str] = set()
    for k, rt in enumerate(raw_targets):
        where = f"targets[{k}]"
        tid = str(_require(rt, "id", where))
        if tid in base_ids:
            raise InstanceError(f"{where}.id: duplicate target id {tid!r}")
        base_ids.add(tid)
        raw_w = rt.get("vtws", rt.get("vtw"))
        if raw_w is None:
            raise InstanceError(f"{where}: missing field 'vtw'")
        windows = raw_w if isinstance(raw_w, list) else [raw_w]
        if not windows:
            raise InstanceError(f"{where}.vtw: at least one window required")
        prio = _as_int(_require(rt, "priority", where), f"{where}.priority")
        d0 = _as_int(_require(rt, "d0", where), f"{where}.d0")
        for c, rw in enumerate(windows):
            vtw = _parse_vtw(rw, f"{where}.vtw", default_id=f"{tid}-w{c}")
            uid = tid if len(windows) == 1 else f"{tid}#{c}"
            targets.append(GroundTarget(tid, prio, d0, vtw, clone=c, uid=uid))
    inst = Instance(
        id=str(_require(data, "id", "instance")),
        horizon_start=_as_int(horizon[0], "instance.horizon[0]"),
        horizon_end=_as_int(horizon[1], "instance.horizon[1]"),
        targets=targets,
        eo=float(data.get("eo", DEFAULT_EO)),
        ec=float(data.get("ec", DEFAULT_EC)),
        velocities=velocities,  # type: ignore[arg-type]
        max_trans=float(data.get("max_trans", DEFAULT_MAX_TRANS)),
    )
    problems = validate(inst)
    if problems:
        raise InstanceError("; ".join(problems))
    return with_congestion(inst)


def with_congestion(inst: Instance) -> Instance:
    """Return ``inst`` with every target's ``c0`` filled over the whole target set."""
    from .guidance import congestion_values

    values = congestion_values(inst, range(inst.n))
    targets = [
        GroundTarget(t.id, t.priority, t.d0, t.vtw, t.clone, t.uid, values[i])
        for i, t in enumerate(inst.targets)
    ]
    new = Instance(
        inst.id, inst.horizon_start, inst.horizon_end, targets,
        inst.eo, inst.ec, inst.velocities, inst.max_trans,
    )
    # conflict distances depend only on windows, not on c0
    if "conflicts" in inst.__dict__:
        new.__dict__["conflicts"] = inst.__dict__["conflicts"]
    return new


def instance_to_dict(inst: Instance) -> dict:
    grouped: dict[str, list[GroundTarget]] = {}
    for t in inst.targets:
        grouped.setdefault(t.id, []).append(t)
    raw_targets = []
    for tid, clones in grouped.items():
        ws = [
            {"id": c.vtw.id, "s": c.vtw.s, "e": c.vtw.e, "b0": c.vtw.b0,
             "pitch": list(c.vtw.pitch), "roll": list(c.vtw.roll)}
            for c in sorted(clones, key=lambda c: c.clone)
        ]
        raw_targets.append({
            "id": tid,
            "priority": clones[0].priority,
            "d0": clones[0].d0,
            "vtw": ws[0] if len(ws) == 1 else ws,
        })
    return {
        "id": inst.id,
        "horizon": [inst.horizon_start, inst.horizon_end],
        "eo": inst.eo,
        "ec": inst.ec,
        "velocities": list(inst.velocities),
        "max_trans": inst.max_trans,
        "targets": raw_targets,
    }


def load_instance(path) -> Instance:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{path}: parse error: {exc}") from exc
    return instance_from_dict(data)


def save_instance(inst: Instance, path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(inst), separators=(",", ":")))


# --------------------------------------------------------------------------- schedule I/O


def schedule_to_dict(schedule: Schedule) -> dict:
    return {
        "instance_id": schedule.instance.id,
        "f1": schedule.f1,
        "f2": schedule.f2,
        "assignments": [
            {"target_id": uid, "b": ow.b, "e": ow.e, "d": ow.d,
             "p_o": ow.p_o, "r_o": ow.r_o, "p_inf": ow.p_inf, "r_inf": ow.r_inf}
            for uid, ow in schedule.assignments()
        ],
    }


def save_schedule(schedule: Schedule, path) -> None:
    Path(path).write_text(json.dumps(schedule_to_dict(schedule), indent=1))


def schedule_from_dict(data: dict, instance: Instance) -> Schedule:
    if data.get("instance_id") != instance.id:
        raise ScheduleError(
            f"schedule is for instance {data.get('instance_id')!r}, not {instance.id!r}"
        )
    sched = Schedule(instance)
    for a in data["assignments"]:
        try:
            t = instance.index[a["target_id"]]
        except KeyError:
            raise ScheduleError(f"unknown target {a['target_id']!r}") from None
        b, e = int(a["b"]), int(a["e"])
        if a.get("d", e - b) != e - b:
            raise ScheduleError(f"target {a['target_id']!r}: d != e - b")
        sched.insert(t, b, e)
    sched.f1 = data.get("f1")
    sched.f2 = data.get("f2")
    return sched


def load_schedule(path, instance: Instance) -> Schedule:
    return schedule_from_dict(json.loads(Path(path).read_text()), instance)

