"""Non-dominated sorting, crowding, survivor selection and the Pareto archive.

All objectives are minimised.
"""

from __future__ import annotations

import math
import random
from typing import Any, Sequence

import numpy as np

from .adaptive import DEFAULT_SIGMA, score_class

Vec = Sequence[float]


def dominates(a: Vec, b: Vec) -> bool:
    return a[0] <= b[0] and a[1] <= b[1] and (a[0] < b[0] or a[1] < b[1])


def nondominated_sort(points: Sequence[Vec]) -> list[list[int]]:
    """Fast non-dominated sorting; returns fronts as ascending index lists."""
    n = len(points)
    if n == 0:
        return []
    P = np.asarray(points, dtype=float)
    le = (P[:, None, :] <= P[None, :, :]).all(axis=2)
    lt = (P[:, None, :] < P[None, :, :]).any(axis=2)
    dom = le & lt  # dom[i, j]: i dominates j
    count = dom.sum(axis=0)
    done = np.zeros(n, dtype=bool)
    fronts = []
    current = np.flatnonzero(count == 0)
    while current.size:
        fronts.append(current.tolist())
        done[current] = True
        count = count - dom[current].sum(axis=0)
        current = np.flatnonzero((count == 0) & ~done)
    return fronts


def crowding_distance(front: Sequence[Vec]) -> list[float]:
    n = len(front)
    if n == 0:
        raise ValueError("crowding distance of an empty front")
    dist = [0.0] * n
    if n <= 2:
        return [math.inf] * n
    for m in range(len(front[0])):
        order = sorted(range(n), key=lambda i: (front[i][m], i))
        lo, hi = front[order[0]][m], front[order[-1]][m]
        dist[order[0]] = dist[order[-1]] = math.inf
        span = hi - lo
        if span <= 0:
            continue
        for k in range(1, n - 1):
            i = order[k]
            if dist[i] != math.inf:
                dist[i] += (front[order[k + 1]][m] - front[order[k - 1]][m]) / span
    return dist


def rank_order(points: Sequence[Vec]) -> list[int]:
    """All indices ordered by (front index, descending crowding distance, index)."""
    out: list[int] = []
    for front in nondominated_sort(points):
        cd = crowding_distance([points[i] for i in front])
        out.extend(i for _, i in sorted(zip(cd, front), key=lambda x: (-x[0], x[1])))
    return out


def environmental_selection(points: Sequence[Vec], ns: int) -> list[int]:
    """Indices of the ``ns`` survivors, best first."""
    if len(points) < ns:
        raise ValueError(f"need at least {ns} candidates, got {len(points)}")
    return rank_order(points)[:ns]


# --------------------------------------------------------------------------- hypervolume and archive


def hypervolume(points: Sequence[Vec], ref: Vec = (1.0, 1.0)) -> float:
    """Area dominated by ``points`` and bounded by ``ref`` (2 objectives)."""
    pts = sorted((p[0], p[1]) for p in points if p[0] < ref[0] and p[1] < ref[1])
    hv = 0.0
    best_f2 = ref[1]
    stair = []
    for f1, f2 in pts:
        if f2 < best_f2:
            stair.append((f1, f2))
            best_f2 = f2
    for k, (f1, f2) in enumerate(stair):
        nxt = stair[k + 1][0] if k + 1 < len(stair) else ref[0]
        hv += (nxt - f1) * (ref[1] - f2)
    return hv


def _nondominated_unique(entries: list[tuple[Vec, Any]]) -> list[tuple[Vec, Any]]:
    seen: set[tuple[float, float]] = set()
    uniq = []
    for v, payload in entries:
        key = (v[0], v[1])
        if key not in seen:
            seen.add(key)
            uniq.append((v, payload))
    if not uniq:
        return []
    first = nondominated_sort([v for v, _ in uniq])[0]
    return [uniq[i] for i in first]


def _contributions(vecs: list[Vec], ref: Vec) -> list[float]:
    """Exclusive hypervolume of each point of a mutually non-dominated 2-D set."""
    order = sorted(range(len(vecs)), key=lambda i: vecs[i][0])
    out = [0.0] * len(vecs)
    for k, i in enumerate(order):
        right = vecs[order[k + 1]][0] if k + 1 < len(order) else ref[0]
        up = vecs[order[k - 1]][1] if k > 0 else ref[1]
        out[i] = max(0.0, right - vecs[i][0]) * max(0.0, up - vecs[i][1])
    return out


def _truncate(entries: list[tuple[Vec, Any]], size: int, ref: Vec) -> list[tuple[Vec, Any]]:
    kept = list(entries)
    while len(kept) > size:
        contrib = _contributions([v for v, _ in kept], ref)
        worst = min(range(len(kept)), key=lambda i: (contrib[i], -i))
        del kept[worst]
    return kept


def update_archive(
    archive: list[tuple[Vec, Any]],
    newcomers: list[tuple[Vec, Any]],
    size: int,
    ref: Vec = (1.0, 1.0),
) -> list[tuple[Vec, Any]]:
    """Merge ``newcomers`` into a bounded archive of mutually non-dominated entries.

    When the merged front is too large the entry with the smallest exclusive
    hypervolume is dropped repeatedly. The result never has less hypervolume
    than the old archive: if truncation would lose area, each old entry is
    kept (or replaced by a newcomer dominating it) and the remaining slots are
    filled greedily by hypervolume gain.
    """
    merged = _nondominated_unique(list(archive) + list(newcomers))
    if len(merged) <= size:
        return merged
    kept = _truncate(merged, size, ref)
    old_hv = hypervolume([v for v, _ in archive], ref)
    if hypervolume([v for v, _ in kept], ref) >= old_hv:
        return kept

    base: list[tuple[Vec, Any]] = []
    used: set[int] = set()
    for v, _ in archive:
        for k, (m, _) in enumerate(merged):
            if k not in used and (m[0] <= v[0] and m[1] <= v[1]):
                base.append(merged[k])
                used.add(k)
                break
    rest = [merged[k] for k in range(len(merged)) if k not in used]
    while len(base) < size and rest:
        cur = hypervolume([v for v, _ in base], ref)
        gains = [hypervolume([v for v, _ in base] + [r[0]], ref) - cur for r in rest]
        k = max(range(len(rest)), key=lambda i: (gains[i], -i))
        base.append(rest.pop(k))
    return base


def box_select_parent(archive: Sequence[Vec], rng: random.Random, na: int = 100) -> int:
    """Pick an archive index: uniform over non-empty equal-width f1 boxes, then uniform in the box."""
    if not archive:
        raise ValueError("empty archive")
    if len(archive) == 1:
        return 0
    k = max(1, math.ceil(math.sqrt(na)))
    lo = min(v[0] for v in archive)
    hi = max(v[0] for v in archive)
    width = (hi - lo) / k
    boxes: dict[int, list[int]] = {}
    for i, v in enumerate(archive):
        j = min(int((v[0] - lo) / width), k - 1) if width > 0 else 0
        boxes.setdefault(j, []).append(i)
    keys = sorted(boxes)
    members = boxes[keys[rng.randrange(len(keys))]]
    return members[rng.randrange(len(members))]


def score_solution(offspring: Vec, front: Sequence[Vec], sigma=DEFAULT_SIGMA) -> float:
    """Reward class of an offspring measured against the current non-dominated set."""
    if not front:
        return sigma[0]
    dominated = any(dominates(p, offspring) for p in front)
    beaten = sum(1 for p in front if dominates(offspring, p))
    return score_class(sigma, beaten == len(front), beaten > 0, dominated)
