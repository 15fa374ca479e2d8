"""Moduli of curve families around the construction.

Closed forms for the three model families, the explicit families that join
consecutive ring disks around a rectangle, a finite-difference solver for the
modulus of a joining family, winding-number separation of a disk chain, the
overlap count of dilated disks and the arithmetic behind the distortion
constants.

Convention for segment families in a rectangle: the modulus of the family
joining two opposite sides is (length of those sides) / (distance between
them).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import spsolve

from . import _kernels
from .neighbors import neighbor_ring
from .report import Check, status_of
from .scalar import (
    NumericValue,
    nv_add,
    nv_compare,
    nv_exp,
    nv_log,
    to_float,
)
from .scene import RI, Disk, Rect, SceneGraph, Word, rect_point_d2

VERTICAL = "vertical_segments"
HORIZONTAL = "horizontal_segments"
CIRCLES = "circle_family"
ANNULUS = "joining_annulus"
ARCS = "arc_family"
KINDS = (VERTICAL, HORIZONTAL, CIRCLES, ANNULUS, ARCS)

MIN_FAMILY_BOUND = Fraction(1, 10)
ARC_SAMPLES = 720
FAR_POINT = (Fraction(20), Fraction(0))
ON_CHAIN_TOL = 1e-12
# stand-in for pi shared by every constant below, so that 20 pi = 10 * (2 pi)
TWO_PI = Fraction(2 * math.pi)


class NoClosedFormError(ValueError):
    pass


class ObstacleError(ValueError):
    """A family region meets a scene object it must avoid."""


class SingularSystemError(ValueError):
    pass


class ChainError(ValueError):
    pass


@dataclass(frozen=True)
class PathFamily:
    """One explicit curve family.

    Segment kinds carry a rectangle ``(x0, y0, x1, y1)``; circular kinds a
    centre, radius range ``(s1, s2)`` and, for arcs, which half-plane the arcs
    bend into (``below`` or ``above`` the centre).
    """

    kind: str
    rect: tuple | None = None
    center: tuple | None = None
    radii: tuple | None = None
    bend: str | None = None
    connects: tuple[str, str] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.kind in (VERTICAL, HORIZONTAL):
            x0, y0, x1, y1 = self.rect
            if nv_compare(x1, x0) <= 0 or nv_compare(y1, y0) <= 0:
                raise ValueError("family rectangle must have positive size")
        else:
            s1, s2 = self.radii
            if not (nv_compare(s1, 0) > 0 and nv_compare(s2, s1) > 0):
                raise ValueError("radius range needs 0 < s1 < s2")


def closed_form_modulus(f: PathFamily) -> NumericValue:
    """Exact modulus of the model families.

    Vertical segments in ``w x h`` have modulus ``w/h``, horizontal ones
    ``h/w``; full circles between radii ``s1 < s2`` give
    ``log(s2/s1)/(2 pi)`` and the family joining the two boundary circles
    ``2 pi / log(s2/s1)``.
    """
    if f.kind in (VERTICAL, HORIZONTAL):
        x0, y0, x1, y1 = f.rect
        w, h = x1 - x0, y1 - y0
        return w / h if f.kind == VERTICAL else h / w
    if f.kind == ARCS:
        raise NoClosedFormError("arc families have no closed form; bound them by full circles")
    s1, s2 = f.radii
    L = math.log(to_float(s2) / to_float(s1))
    return L / (2 * math.pi) if f.kind == CIRCLES else 2 * math.pi / L


def family_lower_bound(f: PathFamily) -> NumericValue:
    """Closed-form lower bound; arcs are bounded by the full-circle family
    over the same radii (every circle contains an arc of the family)."""
    if f.kind == ARCS:
        return closed_form_modulus(PathFamily(CIRCLES, center=f.center, radii=f.radii))
    return closed_form_modulus(f)


# ---------------------------------------------------------------- families


def _d2(p, q):
    dx, dy = p[0] - q[0], p[1] - q[1]
    return dx * dx + dy * dy


def _inside_disk(p, d: Disk) -> bool:
    return nv_compare(_d2(p, d.center), d.radius * d.radius) <= 0


def _open_rect_misses_box(rect, box) -> bool:
    x0, y0, x1, y1 = rect
    bx0, by0, bx1, by1 = box
    return (nv_compare(x1, bx0) <= 0 or nv_compare(bx1, x0) <= 0
            or nv_compare(y1, by0) <= 0 or nv_compare(by1, y0) <= 0)


def _open_rect_misses_disk(rect, d: Disk) -> bool:
    """The open rectangle misses the closed disk (touching its closure is fine)."""
    x0, y0, x1, y1 = rect
    box = Rect(((x0 + x1) / 2, (y0 + y1) / 2), (x1 - x0) / 2, (y1 - y0) / 2, bounds=rect)
    return nv_compare(rect_point_d2(box, d.center), d.radius * d.radius) >= 0


@dataclass
class Obstacles:
    """Closed sets a family must avoid: every disk and every J-span box."""

    disks: list[Disk]
    boxes: list[tuple]           # (owner label, kind, (x0, y0, x1, y1))

    @classmethod
    def from_scene(cls, scene: SceneGraph, k: int = 1):
        level = scene.level(k)
        disks = [d for wo in level.values() for d in wo.disks]
        boxes = []
        for wo in level.values():
            for kind, span in zip(("J_Do", "J_Up"), wo.spans):
                boxes.append((wo.word.label, kind, span.bounds))
        return cls(disks, boxes)


def _square(cx, cy, h):
    return (cx - h, cy - h, cx + h, cy + h)


def _segment_family(kind, rect, a: Disk, b: Disk) -> PathFamily:
    return PathFamily(kind, rect=rect, connects=(a.id, b.id))


def _joins(f: PathFamily, a: Disk, b: Disk) -> bool:
    """Both end sides of the square lie in the respective disks, so every
    segment of the family starts in one and ends in the other."""
    x0, y0, x1, y1 = f.rect
    if f.kind == VERTICAL:
        lo, hi = ((x0, y0), (x1, y0)), ((x0, y1), (x1, y1))
    else:
        lo, hi = ((x0, y0), (x0, y1)), ((x1, y0), (x1, y1))
    first, second = (a, b) if _d2(a.center, lo[0]) <= _d2(b.center, lo[0]) else (b, a)
    return all(_inside_disk(p, first) for p in lo) and all(_inside_disk(p, second) for p in hi)


def _segment_collisions(f: PathFamily, obstacles: Obstacles) -> list[str]:
    hits = []
    for d in obstacles.disks:
        if d.id in f.connects:
            continue
        if not _open_rect_misses_disk(f.rect, d):
            hits.append(d.id)
    for owner, kind, box in obstacles.boxes:
        if not _open_rect_misses_box(f.rect, box):
            hits.append(f"{owner}:{kind}")
    return hits


def _annulus_hits_disk(c, s1, s2, d: Disk) -> bool:
    """Closed annulus ``s1 <= |z - c| <= s2`` meets the closed disk."""
    d2 = _d2(c, d.center)
    if nv_compare(d2, (s2 + d.radius) ** 2) > 0:
        return False
    if nv_compare(d.radius, s1) >= 0:
        return True
    return nv_compare(d2, (s1 - d.radius) ** 2) >= 0


def _box_d2_range(c, box):
    x0, y0, x1, y1 = box
    cx, cy = c
    qx = min(max(cx, x0), x1)
    qy = min(max(cy, y0), y1)
    near = _d2(c, (qx, qy))
    far = max(_d2(c, p) for p in ((x0, y0), (x1, y0), (x0, y1), (x1, y1)))
    return near, far


def _arc_angles(c, rho: float, d: Disk, bend: str):
    """Angles where the arc of radius ``rho`` leaves the ``Ri`` disk and
    enters the ``Le`` disk, traversed through the bend side."""
    px = to_float(d.center[0]) - to_float(c[0])
    py = to_float(d.center[1]) - to_float(c[1])
    r = to_float(d.radius)
    P = math.hypot(px, py)
    ca = (rho * rho + P * P - r * r) / (2 * rho * P)
    alpha = math.acos(max(-1.0, min(1.0, ca)))
    base = math.atan2(py, px)
    if bend == "below":
        start = base - alpha
        return start, -math.pi - start
    start = base + alpha
    return start, math.pi - start


def _arc_family(scene, w: Word, above: bool, a: Disk, b: Disk) -> PathFamily:
    wo = scene.objects(w)
    r = scene.params[w.k - 1].r
    x, y = wo.rect.center
    c = (x, wo.rect.y1) if above else (x, wo.rect.y0)
    return PathFamily(ARCS, center=c, radii=(3 * r / 4, 3 * r / 2),
                      bend="above" if above else "below", connects=(a.id, b.id))


def _arc_collisions(f: PathFamily, scene: SceneGraph, w: Word, obstacles: Obstacles) -> list[str]:
    """The arcs lie in the closed annulus, on the bend side of the centre line
    except for short caps near the target disks where ``|x - x_c| >= r/2``.
    Obstacles must miss that region; the caps are checked numerically."""
    c, (s1, s2) = f.center, f.radii
    r = scene.params[w.k - 1].r
    hits = []
    for d in obstacles.disks:
        if d.id in f.connects:
            continue
        if _annulus_hits_disk(c, s1, s2, d):
            hits.append(d.id)
    half = r / 2
    for owner, kind, box in obstacles.boxes:
        near, far = _box_d2_range(c, box)
        if nv_compare(near, s2 * s2) > 0 or nv_compare(far, s1 * s1) < 0:
            continue
        x0, y0, x1, y1 = box
        # box on the far side of the centre line and within |x - x_c| < r/2
        if f.bend == "below":
            side_ok = nv_compare(y0, c[1]) >= 0
            line_pts = [(x0, y0), (x1, y0)] if y0 == c[1] else []
        else:
            side_ok = nv_compare(y1, c[1]) <= 0
            line_pts = [(x0, y1), (x1, y1)] if y1 == c[1] else []
        narrow = nv_compare(c[0] - half, x0) < 0 and nv_compare(x1, c[0] + half) < 0
        on_line_ok = all(nv_compare(_d2(c, p), s1 * s1) < 0 for p in line_pts)
        if not (side_ok and narrow and on_line_ok):
            hits.append(f"{owner}:{kind}")
    # caps: between leaving the Ri disk and crossing the centre line the arc
    # stays at |x - x_c| >= rho cos(cap angle); mirror image on the Le side
    ri = scene.objects(w).disk(RI)
    for rho in np.linspace(to_float(s1), to_float(s2), 257):
        start, _ = _arc_angles(c, rho, ri, f.bend)
        cap = max(start, 0.0) if f.bend == "below" else max(-start, 0.0)
        if cap > 0 and rho * math.cos(cap) < to_float(half):
            hits.append("cap")
            break
    return hits


@dataclass(frozen=True)
class FamilyResult:
    family: PathFamily
    bound: NumericValue
    joins: bool
    collisions: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return (self.joins and not self.collisions
                and nv_compare(self.bound, MIN_FAMILY_BOUND) >= 0)


def surrounding_families(scene: SceneGraph, w: Word, obstacles: Obstacles | None = None,
                         strict: bool = True) -> list[FamilyResult]:
    """One family per consecutive pair of the ring around ``R^w``.

    * same side, adjacent words: vertical segments in the square of
      half-side ``r/10`` centred in the gap between the two disks;
    * the two disks of ``w +- 1``: horizontal segments in the square of
      half-side ``10 t`` centred at ``(x, y^{w +- 1})``, inside the gap
      between that rectangle's J spans;
    * the two disks of ``w`` itself (bottom and top words): arcs of circles
      centred at the bottom (top) midpoint of ``R^w`` with radii in
      ``(3r/4, 3r/2)``, bending away from the rectangle.

    With ``strict`` a collision or a family that fails to join its disks
    raises ``ObstacleError``.
    """
    ring = neighbor_ring(scene, w)
    obstacles = obstacles or Obstacles.from_scene(scene, w.k)
    p = scene.params[w.k - 1]
    wo = scene.objects(w)
    x = wo.rect.center[0]
    out = []
    for a, b in ring.pairs():
        if a.side == b.side:
            lo, hi = (a, b) if nv_compare(a.center[1], b.center[1]) < 0 else (b, a)
            gap_mid = (lo.center[1] + lo.radius + hi.center[1] - hi.radius) / 2
            f = _segment_family(VERTICAL, _square(a.center[0], gap_mid, p.r / 10), a, b)
            joins, hits = _joins(f, a, b), _segment_collisions(f, obstacles)
        elif a.owner == w:
            f = _arc_family(scene, w, ring.cls == "top", a, b)
            joins, hits = True, _arc_collisions(f, scene, w, obstacles)
        else:
            y = a.center[1]
            f = _segment_family(HORIZONTAL, _square(x, y, 10 * p.t), a, b)
            joins, hits = _joins(f, a, b), _segment_collisions(f, obstacles)
        res = FamilyResult(f, family_lower_bound(f), joins, tuple(hits))
        if strict and (hits or not joins):
            raise ObstacleError(f"family {f.kind} for {a.id}-{b.id}: joins={joins}, hits={hits}")
        out.append(res)
    return out


# ---------------------------------------------------------------- chains


@dataclass
class Chain:
    """Ring disks alternating with one sampled path per family.

    ``paths[j]`` runs from ``disks[j]`` to ``disks[j + 1]`` (cyclically when
    ``closed``).
    """

    disks: list[Disk]
    paths: list[list[tuple]]
    closed: bool = True
    tol: float = 1e-9

    def __post_init__(self):
        need = len(self.disks) if self.closed else len(self.disks) - 1
        if len(self.paths) != need:
            raise ChainError(f"{len(self.disks)} disks need {need} paths, got {len(self.paths)}")
        for j, path in enumerate(self.paths):
            a, b = self.disks[j], self.disks[(j + 1) % len(self.disks)]
            for end, d in ((path[0], a), (path[-1], b)):
                dist = math.dist((to_float(end[0]), to_float(end[1])),
                                 (to_float(d.center[0]), to_float(d.center[1])))
                if dist > to_float(d.radius) * (1 + self.tol):
                    raise ChainError(f"path {j} does not meet disk {d.id}")

    def polyline(self) -> list[tuple]:
        """Closed curve through each disk centre and along each path; the
        centre-to-endpoint legs stay inside the (convex) disks."""
        pts = []
        for j, path in enumerate(self.paths):
            pts.append(self.disks[j].center)
            pts.extend(path)
        if not self.closed:
            pts.append(self.disks[-1].center)
        return pts


def sample_arc(f: PathFamily, ri: Disk, le: Disk, rho=None, samples: int = ARC_SAMPLES):
    """Polyline of the family arc of radius ``rho`` from the ``Ri`` disk to the ``Le`` disk."""
    if rho is None:
        rho = (f.radii[0] + f.radii[1]) / 2
    rho = to_float(rho)
    cx, cy = to_float(f.center[0]), to_float(f.center[1])
    start, end = _arc_angles(f.center, rho, ri, f.bend)
    th = np.linspace(start, end, samples)
    return [(cx + rho * math.cos(a), cy + rho * math.sin(a)) for a in th]


def build_chain(scene: SceneGraph, w: Word, samples: int = ARC_SAMPLES,
                families: list[FamilyResult] | None = None) -> Chain:
    """A closed chain around ``R^w``: one path per family, through the
    family's middle (segments) or at radius ``9r/8`` (arcs)."""
    ring = neighbor_ring(scene, w)
    families = families or surrounding_families(scene, w)
    paths = []
    for (a, b), fam in zip(ring.pairs(), families):
        f = fam.family
        if f.kind in (VERTICAL, HORIZONTAL):
            paths.append([a.center, b.center])
        else:
            ri, le = (a, b) if a.side == RI else (b, a)
            rho = 9 * scene.params[w.k - 1].r / 8
            pts = sample_arc(f, ri, le, rho, samples)
            if a.side != RI:
                pts = pts[::-1]
            paths.append(pts)
    return Chain(list(ring.disks), paths, closed=True)


def chain_outline(scene: SceneGraph, w: Word, samples: int = ARC_SAMPLES) -> list[tuple]:
    """Drawing loop around ``R^w`` through the ring disk centres.

    Segment families become straight legs between centres; the two disks of
    ``w`` itself are joined by a circular arc about the bottom (top) midpoint
    of ``R^w`` passing through both centres.  Unlike ``build_chain`` this
    needs no particular proportions, so it also draws presentation scenes.
    """
    ring = neighbor_ring(scene, w)
    rect = scene.objects(w).rect
    x = to_float(rect.center[0])
    pts = []
    for a, b in ring.pairs():
        ca = (to_float(a.center[0]), to_float(a.center[1]))
        pts.append(ca)
        if a.owner == w and b.owner == w:
            above = ring.cls == "top"
            c = (x, to_float(rect.y1 if above else rect.y0))
            ri = a if a.side == RI else b
            p = (to_float(ri.center[0]) - c[0], to_float(ri.center[1]) - c[1])
            rho = math.hypot(*p)
            start = math.atan2(p[1], p[0])
            end = (math.pi if above else -math.pi) - start
            th = np.linspace(start, end, samples)[1:-1]
            arc = [(c[0] + rho * math.cos(t), c[1] + rho * math.sin(t)) for t in th]
            pts.extend(arc if a is ri else arc[::-1])
    return pts


def _exact_winding(pt, poly) -> tuple[int, bool]:
    px, py = pt
    wn = 0
    on = False
    n = len(poly)
    for i in range(n):
        (x0, y0), (x1, y1) = poly[i], poly[(i + 1) % n]
        left = (x1 - x0) * (py - y0) - (px - x0) * (y1 - y0)
        if left == 0 and min(x0, x1) <= px <= max(x0, x1) and min(y0, y1) <= py <= max(y0, y1):
            on = True
        if y0 <= py:
            if y1 > py and left > 0:
                wn += 1
        elif y1 <= py and left < 0:
            wn -= 1
    return wn, on


def winding_number(poly, pt, tol: float = ON_CHAIN_TOL) -> int:
    """Winding number of a closed polyline about ``pt``.

    Exact when every coordinate is a ``Fraction``; otherwise binary64 with
    a clearance test relative to the polyline's size.
    """
    if all(isinstance(v, Fraction) for p in poly for v in p) and all(
            isinstance(v, Fraction) for v in pt):
        wn, on = _exact_winding(pt, poly)
        if on:
            raise ChainError("point lies on the chain")
        return wn
    xs = np.array([to_float(p[0]) for p in poly])
    ys = np.array([to_float(p[1]) for p in poly])
    wn, dist = _kernels.winding(to_float(pt[0]), to_float(pt[1]), xs, ys)
    scale = max(np.ptp(xs), np.ptp(ys), 1e-300)
    if dist <= tol * scale:
        raise ChainError("point lies on the chain within tolerance")
    return wn


def separation_check(chain: Chain, z, far=FAR_POINT) -> bool:
    """True iff the chain winds once around ``z`` and not around ``far``."""
    if not chain.closed:
        raise ChainError("separation needs a closed chain")
    poly = chain.polyline()
    return abs(winding_number(poly, z)) == 1 and winding_number(poly, far) == 0


# ---------------------------------------------------------------- discrete modulus


@dataclass
class GridProblem:
    """Node grid for the discrete Dirichlet problem.

    ``region`` marks free nodes, ``side_a``/``side_b`` the nodes held at 0
    and 1.  ``wx[i, j]`` weights the edge ``(i, j)-(i, j+1)`` and ``wy[i, j]``
    the edge ``(i, j)-(i+1, j)``; a zero weight removes the edge.  ``ghosts``
    are extra Dirichlet edges ``(node index, value, weight)`` for boundaries
    that cut an edge.
    """

    region: np.ndarray
    side_a: np.ndarray
    side_b: np.ndarray
    wx: np.ndarray | None = None
    wy: np.ndarray | None = None
    ghosts: list = field(default_factory=list)


def _edges(prob: GridProblem):
    ny, nx = prob.region.shape
    active = prob.region | prob.side_a | prob.side_b
    wx = np.ones((ny, nx - 1)) if prob.wx is None else prob.wx
    wy = np.ones((ny - 1, nx)) if prob.wy is None else prob.wy
    idx = np.arange(ny * nx).reshape(ny, nx)
    mx = active[:, :-1] & active[:, 1:] & (wx > 0)
    my = active[:-1, :] & active[1:, :] & (wy > 0)
    i = np.concatenate([idx[:, :-1][mx], idx[:-1, :][my]])
    j = np.concatenate([idx[:, 1:][mx], idx[1:, :][my]])
    w = np.concatenate([wx[mx], wy[my]])
    return i, j, w


def solve_potential(prob: GridProblem):
    """Discrete-harmonic potential: returns ``(u, energy)``."""
    region, A, B = prob.region, prob.side_a, prob.side_b
    if region.shape != A.shape or region.shape != B.shape:
        raise ValueError("masks must share one shape")
    if not A.any() and not any(g[1] == 0 for g in prob.ghosts):
        raise ValueError("side A is empty")
    if not B.any() and not any(g[1] == 1 for g in prob.ghosts):
        raise ValueError("side B is empty")
    if (A & B).any():
        raise ValueError("sides A and B overlap")
    free = (region & ~A & ~B).ravel()
    size = free.size
    value = np.full(size, np.nan)
    value[A.ravel()] = 0.0
    value[B.ravel()] = 1.0
    i, j, w = _edges(prob)
    fi, fj = free[i], free[j]
    unknown = np.flatnonzero(free)
    pos = np.full(size, -1)
    pos[unknown] = np.arange(len(unknown))
    n = len(unknown)
    both = fi & fj
    rows = np.concatenate([pos[i[both]], pos[j[both]], pos[i[both]], pos[j[both]]])
    cols = np.concatenate([pos[j[both]], pos[i[both]], pos[i[both]], pos[j[both]]])
    vals = np.concatenate([-w[both], -w[both], w[both], w[both]])
    rhs = np.zeros(n)
    diag = np.zeros(n)
    anchored = np.zeros(n, dtype=bool)
    for a, b, mask in ((i, j, fi & ~fj), (j, i, fj & ~fi)):
        np.add.at(diag, pos[a[mask]], w[mask])
        np.add.at(rhs, pos[a[mask]], w[mask] * value[b[mask]])
        anchored[pos[a[mask]]] = True
    for node, g, wt in prob.ghosts:
        if not free[node]:
            continue
        diag[pos[node]] += wt
        rhs[pos[node]] += wt * g
        anchored[pos[node]] = True
    L = sp.coo_matrix((np.concatenate([vals, diag]),
                       (np.concatenate([rows, np.arange(n)]), np.concatenate([cols, np.arange(n)]))),
                      shape=(n, n)).tocsr()
    # every component of free nodes must touch a Dirichlet value
    adj = sp.coo_matrix((np.ones(both.sum()), (pos[i[both]], pos[j[both]])), shape=(n, n))
    ncomp, labels = connected_components(adj, directed=False)
    has_bc = np.zeros(ncomp, dtype=bool)
    has_bc[labels[anchored]] = True
    if not has_bc.all():
        raise SingularSystemError(f"{int((~has_bc).sum())} region component(s) touch neither side")
    u_free = spsolve(L.tocsc(), rhs) if n else np.zeros(0)
    u = value.copy()
    u[unknown] = u_free
    live = ~np.isnan(u[i]) & ~np.isnan(u[j])
    energy = float(np.sum(w[live] * (u[i[live]] - u[j[live]]) ** 2))
    for node, g, wt in prob.ghosts:
        if free[node]:
            energy += wt * (u[node] - g) ** 2
    return u.reshape(region.shape), energy


def discrete_modulus(region, side_a, side_b, n: int | None = None, wx=None, wy=None,
                     ghosts=None) -> float:
    """Modulus of the family joining ``side_a`` to ``side_b`` inside ``region``.

    Potential 0 on A, 1 on B, discrete-harmonic on free nodes, Neumann
    elsewhere; the modulus is the Dirichlet energy ``sum w (du)^2``.  The
    plain 5-point graph carries an ``O(1/n)`` bias: a unit square gives
    ``1 + 1/n``.
    """
    region = np.asarray(region, dtype=bool)
    n = n if n is not None else min(region.shape) - 1
    if n < 16:
        raise ValueError("grid resolution n must be >= 16")
    prob = GridProblem(region, np.asarray(side_a, bool), np.asarray(side_b, bool), wx, wy,
                       list(ghosts or []))
    return float(solve_potential(prob)[1])


def rectangle_problem(width: int, height: int, n: int, across: str = "horizontal") -> GridProblem:
    """``width x height`` rectangle (integer side lengths) at ``n`` nodes per
    unit; ``horizontal`` joins the left and right sides."""
    nx, ny = width * n + 1, height * n + 1
    region = np.ones((ny, nx), dtype=bool)
    A = np.zeros_like(region)
    B = np.zeros_like(region)
    if across == "horizontal":
        A[:, 0] = B[:, -1] = True
    else:
        A[0, :] = B[-1, :] = True
    return GridProblem(region, A, B)


def _crossing(p0, p1, R):
    """Fraction ``theta`` along ``p0 -> p1`` where ``|z| = R`` first."""
    d = p1 - p0
    a = d.real ** 2 + d.imag ** 2
    b = 2 * (p0.real * d.real + p0.imag * d.imag)
    c = p0.real ** 2 + p0.imag ** 2 - R * R
    disc = math.sqrt(max(b * b - 4 * a * c, 0.0))
    roots = [t for t in ((-b - disc) / (2 * a), (-b + disc) / (2 * a)) if 0 <= t <= 1]
    return min(roots) if roots else 1.0


def annulus_problem(s1: float, s2: float, n: int) -> GridProblem:
    """Annulus ``s1 < |z| < s2`` on the square ``[-s2, s2]^2`` with ``2n + 1``
    nodes per side.  Edges cut by a circle are shortened to the crossing,
    which carries the boundary value (weight ``1/theta``)."""
    h = s2 / n
    coords = np.arange(-n, n + 1) * h
    X, Y = np.meshgrid(coords, coords)
    R = np.hypot(X, Y)
    region = (R > s1) & (R < s2)
    A = np.zeros_like(region)
    B = np.zeros_like(region)
    idx = np.arange(region.size).reshape(region.shape)
    ghosts = []
    ny, nx = region.shape
    for dy, dx in ((0, 1), (1, 0), (0, -1), (-1, 0)):
        sl_a = (slice(max(0, -dy), ny - max(0, dy)), slice(max(0, -dx), nx - max(0, dx)))
        sl_b = (slice(max(0, dy), ny - max(0, -dy) if dy < 0 else ny),
                slice(max(0, dx), nx - max(0, -dx) if dx < 0 else nx))
        inside = region[sl_a]
        outside = ~region[sl_b]
        for a_node, b_node in zip(idx[sl_a][inside & outside], idx[sl_b][inside & outside]):
            za = complex(X.flat[a_node], Y.flat[a_node])
            zb = complex(X.flat[b_node], Y.flat[b_node])
            if abs(zb) <= s1:
                g, rad = 0.0, s1
            else:
                g, rad = 1.0, s2
            theta = max(_crossing(za, zb, rad), 1e-6)
            ghosts.append((int(a_node), g, 1.0 / theta))
    wx = np.ones((ny, nx - 1))
    wy = np.ones((ny - 1, nx))
    # edges between free nodes only; cut edges are represented by ghosts
    wx[~(region[:, :-1] & region[:, 1:])] = 0
    wy[~(region[:-1, :] & region[1:, :])] = 0
    return GridProblem(region, A, B, wx, wy, ghosts)


def _solve(prob: GridProblem) -> float:
    return float(solve_potential(prob)[1])


def square_modulus(n: int) -> float:
    return _solve(rectangle_problem(1, 1, n))


def rectangle_modulus(width: int, height: int, n: int, across: str = "horizontal") -> float:
    return _solve(rectangle_problem(width, height, n, across))


def annulus_modulus(s1: float, s2: float, n: int) -> float:
    """Joining family of the annulus; the circle family is its reciprocal."""
    return _solve(annulus_problem(s1, s2, n))


# ---------------------------------------------------------------- overlap count


def _circle_intersections(c1, r1, c2, r2):
    d = math.dist(c1, c2)
    if d == 0 or d > r1 + r2 or d < abs(r1 - r2):
        return []
    a = (r1 * r1 - r2 * r2 + d * d) / (2 * d)
    h = math.sqrt(max(r1 * r1 - a * a, 0.0))
    ux, uy = (c2[0] - c1[0]) / d, (c2[1] - c1[1]) / d
    mx, my = c1[0] + a * ux, c1[1] + a * uy
    return [(mx - h * uy, my + h * ux), (mx + h * uy, my - h * ux)]


def overlap_count(disks: list[Disk], dilation: float = 5, grid: int = 400,
                  rel_tol: float = 1e-9) -> int:
    """Largest number of dilated closed disks ``dilation * D`` sharing a point.

    Candidates: a ``grid x grid`` lattice over the dilated bounding box, all
    centres and all pairwise intersections of dilated boundary circles (the
    maximum of a union of closed disks is attained at one of the latter when
    the deepest cell has a corner, or at a centre otherwise).
    """
    if not disks:
        return 0
    radii = {d.radius for d in disks}
    if len(radii) != 1:
        raise ValueError("overlap_count needs disks of one radius")
    cs = [(to_float(d.center[0]), to_float(d.center[1])) for d in disks]
    R = to_float(disks[0].radius) * dilation
    for i in range(len(disks)):
        for j in range(i + 1, len(disks)):
            if nv_compare(_d2(disks[i].center, disks[j].center), (2 * disks[0].radius) ** 2) < 0:
                raise ValueError(f"disks {disks[i].id} and {disks[j].id} overlap")
    cx = np.array([c[0] for c in cs])
    cy = np.array([c[1] for c in cs])
    xs = np.linspace(cx.min() - R, cx.max() + R, grid)
    ys = np.linspace(cy.min() - R, cy.max() + R, grid)
    GX, GY = np.meshgrid(xs, ys)
    sx, sy = list(GX.ravel()) + list(cx), list(GY.ravel()) + list(cy)
    for i in range(len(cs)):
        for j in range(i + 1, len(cs)):
            for p in _circle_intersections(cs[i], R, cs[j], R):
                sx.append(p[0])
                sy.append(p[1])
    counts = _kernels.cover_counts(cx, cy, np.full(len(cs), R), np.array(sx), np.array(sy),
                                   rel_tol * R)
    return int(counts.max())


# ---------------------------------------------------------------- constants


def verify_distortion_constants(ring_sizes: list[int] | None = None) -> list[Check]:
    """Arithmetic behind the distortion estimate, in log scale.

    (a) ``2 pi / log(e^{20 pi} + 1) < 1/10``;
    (b) ``12 (2 + e^{20 pi}) <= 10^29``;
    (c) ``6 (2 + 2 (e^{20 pi} + 1)) <= 10^29`` (diameter of a six-disk chain
        in units of the radius);
    (d) ``1 + 10^29 <= 10^30``;
    (e) rings have at most six disks.
    """
    big = nv_exp(10 * TWO_PI)                      # e^{20 pi}
    L = nv_log(nv_add(big, 1))
    ratio = TWO_PI / L
    out = [Check("constants.two_pi_over_log", "2 pi / log(e^{20 pi} + 1) < 1/10",
                 status_of(nv_compare(ratio, Fraction(1, 10)) < 0),
                 {"log": L, "ratio": ratio, "margin": Fraction(1, 10) - ratio})]
    lhs = 12 * nv_add(2, big)
    out.append(Check("constants.twelve_sum", "12 (2 + e^{20 pi}) <= 10^29",
                     status_of(nv_compare(lhs, Fraction(10**29)) <= 0), {"lhs": lhs}))
    diam = 6 * nv_add(2, 2 * nv_add(big, 1))
    out.append(Check("constants.chain_diameter", "6 (2 + 2 (e^{20 pi} + 1)) <= 10^29",
                     status_of(nv_compare(diam, Fraction(10**29)) <= 0), {"lhs": diam}))
    out.append(Check("constants.headroom", "1 + 10^29 <= 10^30",
                     status_of(1 + 10**29 <= 10**30), {}))
    sizes = ring_sizes if ring_sizes is not None else [6]
    out.append(Check("constants.ring_size", "rings have at most 6 disks",
                     status_of(max(sizes) <= 6), {"max": max(sizes)}))
    return out


def verify_modulus(scene: SceneGraph) -> list[Check]:
    """Families, chains and overlap at level 1 of ``scene``."""
    out = []
    far = FAR_POINT
    for w in scene.level(1):
        fams = surrounding_families(scene, w, strict=False)
        for j, fr in enumerate(fams):
            out.append(Check(
                f"modulus.{w.label}.gamma{j + 1}",
                "family joins its ring disks, avoids obstacles, modulus >= 1/10",
                status_of(fr.ok),
                {"kind": fr.family.kind, "bound": fr.bound if fr.family.kind != ARCS else float(fr.bound),
                 "connects": list(fr.family.connects), "collisions": list(fr.collisions),
                 "joins": fr.joins}))
        try:
            chain = build_chain(scene, w, families=fams)
            ok = separation_check(chain, scene.objects(w).rect.center, far)
        except (ChainError, ObstacleError) as exc:
            ok = False
            out.append(Check(f"modulus.{w.label}.separation", "chain separates R^w from infinity",
                             "fail", note=str(exc)))
            continue
        out.append(Check(f"modulus.{w.label}.separation", "chain separates R^w from infinity",
                         status_of(ok), {"far": list(far)}))
    disks = scene.disks(1)
    count = overlap_count(disks, 5)
    out.append(Check("modulus.overlap", "points lie in at most 36 of the disks 5D",
                     status_of(count <= 36), {"max_count": count}))
    return out


__all__ = [
    "ANNULUS",
    "ARCS",
    "CIRCLES",
    "HORIZONTAL",
    "VERTICAL",
    "Chain",
    "ChainError",
    "FamilyResult",
    "GridProblem",
    "NoClosedFormError",
    "ObstacleError",
    "Obstacles",
    "PathFamily",
    "SingularSystemError",
    "annulus_modulus",
    "annulus_problem",
    "build_chain",
    "chain_outline",
    "closed_form_modulus",
    "discrete_modulus",
    "family_lower_bound",
    "overlap_count",
    "rectangle_modulus",
    "rectangle_problem",
    "separation_check",
    "square_modulus",
    "surrounding_families",
    "verify_distortion_constants",
    "verify_modulus",
    "winding_number",
]
