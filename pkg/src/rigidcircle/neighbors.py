"""Level-k neighbour rings and the ``z in 4D`` containment.

For a word ``w`` of level ``k`` the ring lists the disks adjacent to ``R^w``
in cyclic order.  A middle word has six::

    D^{w-1}(Ri), D^w(Ri), D^{w+1}(Ri), D^{w+1}(Le), D^w(Le), D^{w-1}(Le)

a bottom word drops the ``w-1`` disks and a top word the ``w+1`` disks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .report import Check, status_of
from .scalar import nv_compare, to_float
from .scene import LE, RI, Disk, SceneGraph, Word

MIDDLE, BOTTOM, TOP = "middle", "bottom", "top"

# default sample for the synthetic containment check
SYNTHETIC_TRIPLES = 10**6
# largest delta/r drawn by the synthetic check; the level inequalities force
# delta/r below exp(-(2N)^(2k)), so this is a generous superset
SYNTHETIC_MAX_GAP_RATIO = 0.5


@dataclass(frozen=True)
class NeighborRing:
    center: Word
    cls: str
    disks: tuple[Disk, ...]

    @property
    def ids(self) -> list[str]:
        return [d.id for d in self.disks]

    def pairs(self):
        """Consecutive pairs in cyclic order, closing with ``(last, first)``."""
        n = len(self.disks)
        return [(self.disks[i], self.disks[(i + 1) % n]) for i in range(n)]


def classify(w: Word | int, N_k: int) -> str:
    """Bottom, top or middle by the last index of ``w``.

    With ``N_k = 2`` both indices are bottom and top at once; index 1 is read
    as bottom and index 2 as top, the only choice for which every ``w +- 1``
    used by the ring exists.
    """
    n = w.n[-1] if isinstance(w, Word) else int(w)
    if N_k % 2 or N_k < 2:
        raise ValueError(f"N_k must be even and >= 2, got {N_k}")
    if not 1 <= n <= N_k:
        raise ValueError(f"index {n} outside 1..{N_k}")
    half = N_k // 2
    if half == 1:
        return BOTTOM if n == 1 else TOP
    if n in (1, half + 1):
        return BOTTOM
    if n in (half, N_k):
        return TOP
    return MIDDLE


_PATTERN = {
    MIDDLE: [(-1, RI), (0, RI), (1, RI), (1, LE), (0, LE), (-1, LE)],
    BOTTOM: [(0, RI), (1, RI), (1, LE), (0, LE)],
    TOP: [(-1, RI), (0, RI), (0, LE), (-1, LE)],
}


def neighbor_ring(scene: SceneGraph, w: Word) -> NeighborRing:
    N_k = scene.params[w.k - 1].N_int
    cls = classify(w, N_k)
    disks = tuple(scene.objects(w.shift(step)).disk(side) for step, side in _PATTERN[cls])
    return NeighborRing(w, cls, disks)


def _d2(p, q):
    dx, dy = p[0] - q[0], p[1] - q[1]
    return dx * dx + dy * dy


def corner_distances(scene: SceneGraph, w: Word) -> list[tuple[str, int, object, object]]:
    """``(disk id, corner index, |c - q|^2, (4 r)^2)`` for every ring disk and corner."""
    ring = neighbor_ring(scene, w)
    rect = scene.objects(w).rect
    out = []
    for d in ring.disks:
        lim = 16 * d.radius * d.radius
        for i, q in enumerate(rect.corners()):
            out.append((d.id, i, _d2(d.center, q), lim))
    return out


def check_containment(scene: SceneGraph, w: Word) -> Check:
    """Every point of ``R^w`` lies in ``4D`` for each ring disk ``D``.

    Distance to a fixed point is convex, so the four corners of ``R^w``
    are the worst cases; squared distances are compared exactly.
    """
    rows = corner_distances(scene, w)
    bad = [(ident, i) for ident, i, d2, lim in rows if nv_compare(d2, lim) >= 0]
    worst = max(rows, key=lambda row: to_float(row[2]) / to_float(row[3]))
    return Check(
        f"neighbors.{w.label}.in_4D",
        "points of R^w lie in 4D for every ring disk",
        status_of(not bad),
        {"pairs": len(rows), "worst_disk": worst[0], "worst_d2": worst[2],
         "limit_d2": worst[3], "violations": [f"{a}#{b}" for a, b in bad]},
    )


def ring_gaps(scene: SceneGraph, w: Word) -> list[tuple[str, str, object]]:
    """Squared-free gap between consecutive ring disks: ``|c1 - c2| - r1 - r2``
    for pairs at equal height (horizontal) or equal column (vertical), where
    it is a difference of exact coordinates."""
    ring = neighbor_ring(scene, w)
    out = []
    for a, b in ring.pairs():
        if a.center[1] == b.center[1]:
            gap = abs(a.center[0] - b.center[0]) - a.radius - b.radius
            out.append((a.id, b.id, gap, "horizontal"))
        elif a.center[0] == b.center[0]:
            gap = abs(a.center[1] - b.center[1]) - a.radius - b.radius
            out.append((a.id, b.id, gap, "vertical"))
        else:
            raise ValueError(f"ring disks {a.id}, {b.id} are neither level nor stacked")
    return out


def verify_ring(scene: SceneGraph, w: Word) -> list[Check]:
    ring = neighbor_ring(scene, w)
    p = scene.params[w.k - 1]
    out = []
    ids = ring.ids
    distinct = len(set(ids)) == len(ids)
    disjoint = all(
        nv_compare(_d2(a.center, b.center), (a.radius + b.radius) ** 2) > 0
        for i, a in enumerate(ring.disks) for b in ring.disks[i + 1:]
    )
    size_ok = len(ids) == (6 if ring.cls == MIDDLE else 4)
    out.append(Check(f"neighbors.{w.label}.ring", "ring has 4 or 6 distinct disjoint disks",
                     status_of(distinct and disjoint and size_ok),
                     {"class": ring.cls, "disks": ids}))
    bad = []
    for a, b, gap, kind in ring_gaps(scene, w):
        lim = p.delta if kind == "vertical" else 4 * p.t
        if nv_compare(gap, lim) > 0:
            bad.append(f"{a}|{b}")
    out.append(Check(f"neighbors.{w.label}.gaps", "consecutive ring gaps are delta_k or 4 t_k",
                     status_of(not bad), {"violations": bad}))
    out.append(check_containment(scene, w))
    return out


def synthetic_triples(count: int = SYNTHETIC_TRIPLES, seed: int = 0,
                      max_gap_ratio: float = SYNTHETIC_MAX_GAP_RATIO):
    """Random ``(t, r, delta)`` with ``t <= delta/100`` and ``delta <= max_gap_ratio * r``."""
    rng = np.random.default_rng(seed)
    r = 10.0 ** rng.uniform(-8, 0, count)
    d = r * max_gap_ratio * rng.uniform(0, 1, count) ** 2
    t = d / 100 * rng.uniform(0, 1, count)
    return t, r, d


def synthetic_containment(count: int = SYNTHETIC_TRIPLES, seed: int = 0,
                          max_gap_ratio: float = SYNTHETIC_MAX_GAP_RATIO) -> Check:
    t, r, d = synthetic_triples(count, seed, max_gap_ratio)
    fails = _kernels.ring_containment_failures(t, r, d)
    return Check("neighbors.synthetic.in_4D", "ring containment for random admissible (t, r, delta)",
                 status_of(fails == 0),
                 {"triples": count, "failures": fails, "seed": seed,
                  "max_gap_ratio": max_gap_ratio})


def verify_neighbors(scene: SceneGraph, synthetic: int = SYNTHETIC_TRIPLES) -> list[Check]:
    out = []
    for w in scene.level(1):
        out.extend(verify_ring(scene, w))
    if synthetic:
        out.append(synthetic_containment(synthetic))
    return out
