import functools

import pytest

from oswvid.bench.generator import GeneratorSpec, generate_instance
from oswvid.model import GroundTarget, Instance, VisibleTimeWindow, with_congestion


def make_vtw(s, pitch, roll=None, b0=None, wid="w"):
    pitch = [float(p) for p in pitch]
    roll = [0.0] * len(pitch) if roll is None else [float(r) for r in roll]
    e = s + len(pitch) - 1
    if b0 is None:
        q = [(1 - abs(p) / 90) * (1 - abs(r) / 90) for p, r in zip(pitch, roll)]
        b0 = s + max(range(len(q) - 1), key=lambda k: (q[k], -k))
    return VisibleTimeWindow(wid, s, e, b0, tuple(pitch), tuple(roll))


def make_target(tid, s, length, d0, priority=1, pitch=0.0, roll=0.0, sweep=None):
    """Target whose window starts at ``s``; constant attitude unless ``sweep=(lo, hi)``."""
    if sweep is None:
        p = [pitch] * (length + 1)
    else:
        lo, hi = sweep
        p = [lo + (hi - lo) * k / length for k in range(length + 1)]
    return GroundTarget(tid, priority, d0, make_vtw(s, p, [roll] * (length + 1), wid=f"{tid}w"))


def make_instance(targets, horizon=None, iid="test"):
    end = horizon if horizon is not None else max(t.vtw.e for t in targets) + 10
    return with_congestion(Instance(iid, 0, end, list(targets)))


@functools.lru_cache(maxsize=None)
def generated(family="WD", n=50, seed=0):
    return generate_instance(GeneratorSpec(family, n, seed=seed))


@pytest.fixture(scope="session")
def wd50():
    return generated("WD", 50, 0)


@pytest.fixture(scope="session")
def cd50():
    return generated("CD", 50, 0)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
