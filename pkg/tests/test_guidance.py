import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oswvid.guidance import (
    conflict_distance,
    conflict_table,
    congestion,
    congestion_values,
    gf_e,
    gf_p,
    nod,
)
from oswvid.kinematics import transition_time

from .conftest import generated, make_instance, make_target


def order_ok(a, b):
    """Pure-python scan: does some (b_a, b_b) at d0 let ``a`` precede ``b``?"""
    wa, wb = a.vtw, b.vtw
    for ba in range(wa.s, wa.e - a.d0 + 1):
        ea = ba + a.d0
        att_a = (wa.pitch[ea - wa.s], wa.roll[ea - wa.s])
        for bb in range(max(wb.s, ba + 1), wb.e - b.d0 + 1):
            att_b = (wb.pitch[bb - wb.s], wb.roll[bb - wb.s])
            dg = abs(att_a[0] - att_b[0]) + abs(att_a[1] - att_b[1])
            if bb - ea >= transition_time(dg):
                return True
    return False


def test_nod_examples():
    assert nod([0, 5]) == pytest.approx([1 / math.e, 1.0])
    assert nod([0, 0, 0]) == [0.0, 0.0, 0.0]
    assert nod([3]) == [1.0]
    with pytest.raises(ValueError):
        nod([])


@given(st.lists(st.floats(0, 1e6), min_size=1, max_size=30))
def test_nod_range(xs):
    out = nod(xs)
    assert all(0.0 <= v <= 1.0 for v in out)
    if max(xs) > 0:
        assert out[xs.index(max(xs))] == 1.0


def test_gf_p_monotone_in_d0():
    a = make_target("a", 0, 100, 10, priority=4)
    b = make_target("b", 0, 100, 20, priority=4)
    assert gf_p(a) == 2.5 and gf_p(b) > gf_p(a)
    assert gf_p(a, 30) == 7.5


def test_gf_e_examples():
    inst = make_instance([make_target("a", 0, 100, 10), make_target("b", 0, 100, 10, pitch=45, roll=45)])
    assert gf_e(inst, inst.targets[0]) == pytest.approx(0.8 + 0.05 * 35 / 3, abs=1e-12)
    assert gf_e(inst, inst.targets[1]) - 0.8 == pytest.approx(2.6, abs=1e-12)
    assert gf_e(inst, inst.targets[0], (0, 20)) == pytest.approx(1.6 + 0.05 * 35 / 3)


def test_conflict_distance_examples():
    far_a = make_target("a", 0, 60, 10)
    far_b = make_target("b", 10_000, 60, 10)
    assert conflict_distance(far_a, far_b) == 0.0

    same_a = make_target("a", 0, 60, 31)
    same_b = make_target("b", 0, 60, 31)
    assert conflict_distance(same_a, same_b) == 1.0

    # b starts inside a's window and ends well after it: a-then-b fits, b-then-a does not
    a = make_target("a", 0, 60, 20)
    b = make_target("b", 40, 100, 20)
    assert order_ok(a, b) and not order_ok(b, a)
    assert conflict_distance(a, b) == 0.5


def test_conflict_distance_close_but_disjoint():
    a = make_target("a", 0, 30, 30)
    b = make_target("b", 35, 30, 30, pitch=60)
    # windows do not overlap but the slew from a's end to b's start does not fit
    assert not order_ok(a, b) and not order_ok(b, a)
    assert conflict_distance(a, b) == 1.0


def random_target(rng, tid, span=400):
    length = rng.randint(20, 120)
    s = rng.randint(0, span)
    lo = rng.uniform(-45, 45)
    hi = rng.uniform(-45, 45)
    d0 = rng.randint(1, length)
    return make_target(tid, s, length, d0, priority=rng.randint(1, 10), roll=rng.uniform(-45, 45), sweep=(lo, hi))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_conflict_distance_matches_scan_oracle(seed):
    rng = random.Random(seed)
    a, b = random_target(rng, "a"), random_target(rng, "b")
    d = conflict_distance(a, b)
    assert d == conflict_distance(b, a)
    ab, ba = order_ok(a, b), order_ok(b, a)
    if not ab and not ba:
        assert d == 1.0
    elif d == 0.0:
        # independent windows admit both orders
        assert ab or ba
    else:
        assert d == 0.5


def test_congestion_examples():
    t = make_target("t", 0, 60, 40)
    n1 = make_target("n1", 0, 60, 40, priority=4)
    n2 = make_target("n2", 0, 60, 40, priority=2)
    far = make_target("far", 50_000, 60, 10, priority=9)
    assert congestion(t, [far]) == 0.0
    assert congestion(t, [n1]) == 1.0
    assert congestion(t, [n1, n2]) == pytest.approx(1 + math.exp(-0.5), abs=1e-12)
    assert congestion(t, []) == 0.0


def test_fast_congestion_matches_direct(cd50):
    inst = cd50
    rng = random.Random(0)
    pool = rng.sample(range(inst.n), 30)
    fast = congestion_values(inst, pool)
    for i in pool:
        others = [inst.targets[j] for j in pool if j != i]
        assert fast[i] == pytest.approx(congestion(inst.targets[i], others, inst.velocities), abs=1e-12)


def test_conflict_table_matches_pairwise():
    inst = generated("CD", 50, 2)
    table = conflict_table(inst)
    for i in range(inst.n):
        for j in range(i + 1, inst.n):
            d = conflict_distance(inst.targets[i], inst.targets[j], inst.velocities)
            assert table[i].get(j, 0.0) == d == table[j].get(i, 0.0)
