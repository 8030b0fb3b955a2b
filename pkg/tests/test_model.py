import json

import pytest

from oswvid.model import (
    GroundTarget,
    Instance,
    InstanceError,
    Schedule,
    ScheduleError,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    load_schedule,
    save_instance,
    save_schedule,
    validate,
)
from oswvid.objectives import evaluate

from .conftest import make_instance, make_target, make_vtw


def raw_target(tid="a", s=0, e=10, d0=3, prio=2, pitch=None):
    n = e - s + 1
    return {
        "id": tid,
        "priority": prio,
        "d0": d0,
        "vtw": {"s": s, "e": e, "b0": s, "pitch": pitch or [0.0] * n, "roll": [0.0] * n},
    }


def raw_instance(*targets):
    return {
        "id": "unit",
        "horizon": [0, 1000],
        "eo": 0.08,
        "ec": 0.05,
        "velocities": [1.5, 2, 2.5, 3],
        "max_trans": 100,
        "targets": list(targets),
    }


def test_load_minimal(tmp_path):
    p = tmp_path / "i.json"
    p.write_text(json.dumps(raw_instance(raw_target())))
    inst = load_instance(p)
    assert inst.n == 1
    assert inst.targets[0].uid == "a"
    assert validate(inst) == []


def test_multi_window_targets_are_cloned():
    t = raw_target("x")
    t["vtw"] = [t["vtw"], {**t["vtw"], "s": 100, "e": 110, "b0": 100}]
    inst = instance_from_dict(raw_instance(t, raw_target("y", 200, 220)))
    assert inst.n == 3
    assert [g.id for g in inst.targets] == ["x", "x", "y"]
    assert [g.clone for g in inst.targets] == [0, 1, 0]
    assert len({g.uid for g in inst.targets}) == 3


def test_d0_longer_than_window_is_rejected():
    with pytest.raises(InstanceError, match="d0"):
        instance_from_dict(raw_instance(raw_target(d0=11)))


def test_parse_error(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(InstanceError, match="parse"):
        load_instance(p)


def test_missing_field_named():
    t = raw_target()
    del t["priority"]
    with pytest.raises(InstanceError, match="priority"):
        instance_from_dict(raw_instance(t))


def test_validate_reports_angle_and_b0():
    assert validate(instance_from_dict(raw_instance(raw_target()))) == []

    pitch = [0.0] * 5 + [91.0] + [0.0] * 5
    w = make_vtw(0, pitch, b0=0)
    bad_angle = Instance("x", 0, 100, [GroundTarget("a", 1, 3, w)])
    problems = validate(bad_angle)
    assert len(problems) == 1 and "angle out of [-90,90]" in problems[0]

    w = make_vtw(0, [0.0] * 11, b0=10)
    problems = validate(Instance("x", 0, 100, [GroundTarget("a", 1, 3, w)]))
    assert len(problems) == 1 and "b0 < e" in problems[0]


def test_instance_round_trip(tmp_path, wd50):
    p = tmp_path / "i.json"
    save_instance(wd50, p)
    back = load_instance(p)
    assert instance_to_dict(back) == instance_to_dict(wd50)
    assert [t.c0 for t in back.targets] == [t.c0 for t in wd50.targets]


def test_schedule_keeps_begin_order_and_rejects_ties():
    inst = make_instance([make_target("a", 0, 50, 5), make_target("b", 0, 50, 5)])
    s = Schedule(inst)
    s.insert(1, 30, 40)
    s.insert(0, 5, 10)
    assert s.begins == [5, 30] and s.targets == [0, 1]
    with pytest.raises(ScheduleError):
        s.insert(0, 12, 20)
    s2 = Schedule(inst, [(0, 5, 10)])
    with pytest.raises(ScheduleError):
        s2.insert(1, 5, 12)


def test_save_empty_schedule(tmp_path):
    inst = make_instance([make_target("a", 0, 50, 5)])
    s = Schedule(inst)
    evaluate(s)
    save_schedule(s, tmp_path / "s.json")
    data = json.loads((tmp_path / "s.json").read_text())
    assert data["assignments"] == []
    assert data["instance_id"] == inst.id


def test_schedule_round_trip(tmp_path):
    inst = make_instance([
        make_target("a", 0, 60, 5, sweep=(-30, 30)),
        make_target("b", 100, 60, 5, sweep=(-30, 30)),
    ])
    s = Schedule(inst, [(1, 110, 130), (0, 10, 20)])
    evaluate(s)
    save_schedule(s, tmp_path / "s.json")
    data = json.loads((tmp_path / "s.json").read_text())
    assert [a["b"] for a in data["assignments"]] == [10, 110]
    back = load_schedule(tmp_path / "s.json", inst)
    assert back == s
    assert (back.f1, back.f2) == (s.f1, s.f2)
    assert back.assignments() == s.assignments()
