"""Reflections in the complementary disks and the words they generate.

Points are ``(x, y)`` pairs.  Inversion needs no square roots, so with
rational input every result here is exact; floats are accepted as well.
``g = R_{D_1} o ... o R_{D_l}`` is stored as the generator sequence
``(D_1, ..., D_l)`` with no letter repeated twice in a row.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .scalar import to_float
from .scene import SceneGraph

DEFAULT_WORD_CAP = 100_000


class _Infinity:
    """The point at infinity of the Riemann sphere."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()


class SchottkyError(ValueError):
    pass


@dataclass(frozen=True)
class Circle:
    center: tuple
    radius: object
    id: str = ""

    def __post_init__(self):
        if not self.radius > 0:
            raise SchottkyError("radius must be positive")

    def as_float(self) -> Circle:
        return Circle((float(self.center[0]), float(self.center[1])), float(self.radius), self.id)


def circle_of(d) -> Circle:
    """``Circle`` from a scene disk (exact coordinates required)."""
    if isinstance(d, Circle):
        return d
    vals = (d.center[0], d.center[1], d.radius)
    if not all(isinstance(v, Fraction) for v in vals):
        vals = tuple(to_float(v) for v in vals)
    return Circle((vals[0], vals[1]), vals[2], d.id)


def generators_from_scene(scene: SceneGraph, k: int = 1) -> list[Circle]:
    """Level-``k`` disks in canonical order."""
    return [circle_of(d) for d in scene.disks(k)]


def invert_point(D: Circle, p):
    """Reflection of ``p`` in the circle ``dD``; the centre goes to ``INFINITY``."""
    if p is INFINITY:
        return D.center
    cx, cy = D.center
    dx, dy = p[0] - cx, p[1] - cy
    d2 = dx * dx + dy * dy
    if d2 == 0:
        return INFINITY
    f = D.radius * D.radius / d2
    return (cx + f * dx, cy + f * dy)


def invert_disk(D: Circle, E: Circle, check: bool = True) -> Circle:
    """Image of the closed disk ``E`` under reflection in ``dD``.

    ``E`` must not contain the centre of ``D`` (else the image is unbounded).
    """
    cx, cy = D.center
    ex, ey = E.center[0] - cx, E.center[1] - cy
    d2 = ex * ex + ey * ey - E.radius * E.radius
    if d2 <= 0:
        raise SchottkyError(f"disk {E.id or E.center} contains the centre of {D.id or D.center}")
    R2 = D.radius * D.radius
    f = R2 / d2
    img = Circle((cx + f * ex, cy + f * ey), R2 * E.radius / d2, E.id)
    if check and not isinstance(f, Fraction):
        _check_image(D, E, img)
    return img


def _check_image(D, E, img, tol=1e-9):
    """Three boundary points of ``E`` must land on the image circle."""
    for ang in (0.0, 2.0943951023931953, 4.1887902047863905):
        p = (E.center[0] + E.radius * math.cos(ang), E.center[1] + E.radius * math.sin(ang))
        q = invert_point(D, p)
        dist = math.dist(q, img.center)
        if abs(dist - img.radius) > tol * max(img.radius, math.dist(img.center, (0.0, 0.0)), 1e-300):
            raise ArithmeticError("inverted disk disagrees with its boundary sample")


def _check_reduced(word):
    for a, b in zip(word, word[1:]):
        if a == b:
            raise SchottkyError(f"word repeats generator {a!r}")


def apply_word(word: list[Circle], obj):
    """``R_{D_1} o ... o R_{D_l}`` applied to a point or a circle."""
    for D in reversed(word):
        obj = invert_disk(D, obj) if isinstance(obj, Circle) else invert_point(D, obj)
    return obj


def word_count(m: int, L: int) -> int:
    """Number of reduced words of length ``1..L`` over ``m`` letters."""
    return sum(m * (m - 1) ** (j - 1) for j in range(1, L + 1))


@dataclass(frozen=True)
class WordImage:
    word: tuple[str, ...]
    disks: tuple[Circle, ...]       # g(D) for every generator D != last letter
    points: tuple                   # g(p) for the sample points


def enumerate_words(generators, L: int, points=(), cap: int = DEFAULT_WORD_CAP,
                    min_length: int = 1, exact: bool = False) -> list[WordImage]:
    """All reduced words of length ``min_length..L``, shortest first, each
    length in lexicographic generator order.

    ``points`` are sample points of the limit-set pieces (for instance
    rectangle centres); each word also carries their images.  Geometry is
    binary64 unless ``exact``.
    """
    if not 1 <= min_length <= L:
        raise SchottkyError("need 1 <= min_length <= L")
    gens = [circle_of(g) for g in generators]
    if not exact:
        gens = [g.as_float() for g in gens]
        points = [(float(p[0]), float(p[1])) for p in points]
    ids = [g.id or str(i) for i, g in enumerate(gens)]
    if len(set(ids)) != len(ids):
        raise SchottkyError("generator ids must be unique")
    m = len(gens)
    total = word_count(m, L) - word_count(m, min_length - 1)
    if total > cap:
        raise SchottkyError(f"{total} words exceed the cap {cap}")
    out = []
    for length in range(min_length, L + 1):
        for combo in itertools.product(range(m), repeat=length):
            if any(a == b for a, b in zip(combo, combo[1:])):
                continue
            word = [gens[i] for i in combo]
            last = combo[-1]
            imgs = tuple(apply_word(word, gens[j]) for j in range(m) if j != last)
            pts = tuple(apply_word(word, p) for p in points)
            out.append(WordImage(tuple(ids[i] for i in combo), imgs, pts))
    return out


@dataclass(frozen=True)
class DiskNest:
    generators: tuple[str, ...]
    disks: tuple[Circle, ...]       # B_1 superset B_2 superset ...

    @property
    def limit(self):
        """Centre of the last disk; every nest point lies within ``error``."""
        return self.disks[-1].center

    @property
    def error(self):
        return self.disks[-1].radius

    def ratios(self) -> list[float]:
        return [float(b.radius / a.radius) for a, b in zip(self.disks, self.disks[1:])]


def strictly_inside(inner: Circle, outer: Circle) -> bool:
    """``|c_i - c_o| + r_i < r_o``, decided without square roots."""
    gap = outer.radius - inner.radius
    if gap <= 0:
        return False
    dx = inner.center[0] - outer.center[0]
    dy = inner.center[1] - outer.center[1]
    return dx * dx + dy * dy < gap * gap


def build_nest(sequence, J: int) -> DiskNest:
    """``B_1 = D_1`` and ``B_{j+1} = R_{D_1} o ... o R_{D_j}(D_{j+1})``.

    A sequence shorter than ``J`` is repeated cyclically.  Strict
    containment ``B_{j+1} in B_j`` is checked at every step.
    """
    if J < 1:
        raise SchottkyError("J must be >= 1")
    seq = [circle_of(d) for d in sequence]
    if not seq:
        raise SchottkyError("empty generator sequence")
    seq = [seq[i % len(seq)] for i in range(J)]
    names = [g.id or repr(g.center) for g in seq]
    _check_reduced([g.center + (g.radius,) for g in seq])
    disks = [seq[0]]
    for j in range(1, J):
        B = apply_word(seq[:j], seq[j])
        if not strictly_inside(B, disks[-1]):
            raise SchottkyError(f"B_{j + 1} is not strictly inside B_{j}")
        disks.append(B)
    return DiskNest(tuple(names), tuple(disks))


def invert_points_batch(D: Circle, xs, ys):
    """Float inversion of many points at once (kernel-backed)."""
    D = D.as_float()
    return _kernels.invert_points(D.center[0], D.center[1], D.radius,
                                  np.asarray(xs, float), np.asarray(ys, float))


def eccentricity_upper_bound(disks, points=(), pitch=None) -> float:
    """Upper bound on ``inf {M : B in A in M B}`` for ``A`` a union of disks
    and points.

    Candidate centres are the disk centres and a grid of pitch
    ``min radius / 8``; at each the inscribed disk is the largest one inside
    a single component disk and the enclosing disk reaches the farthest
    point of ``A``.
    """
    ds = [((float(c.center[0]), float(c.center[1])), float(c.radius))
          for c in map(circle_of, disks)]
    if not ds:
        raise SchottkyError("set has empty interior")
    C = np.array([c for c, _ in ds])
    r = np.array([rr for _, rr in ds])
    P = np.array([(float(p[0]), float(p[1])) for p in points]).reshape(-1, 2)
    pitch = pitch or float(r.min()) / 8
    lo, hi = (C - r[:, None]).min(axis=0), (C + r[:, None]).max(axis=0)
    nx, ny = (np.minimum(400, (hi - lo) / pitch + 1)).astype(int)
    GX, GY = np.meshgrid(np.linspace(lo[0], hi[0], nx), np.linspace(lo[1], hi[1], ny))
    cand = np.concatenate([C, np.stack([GX.ravel(), GY.ravel()], axis=1)])
    dist = np.hypot(cand[:, None, 0] - C[None, :, 0], cand[:, None, 1] - C[None, :, 1])
    rho = (r[None, :] - dist).max(axis=1)
    R = (dist + r[None, :]).max(axis=1)
    if len(P):
        dp = np.hypot(cand[:, None, 0] - P[None, :, 0], cand[:, None, 1] - P[None, :, 1])
        R = np.maximum(R, dp.max(axis=1))
    ok = rho > 0
    return max(float(np.min(R[ok] / rho[ok])), 1.0)


__all__ = [
    "INFINITY",
    "Circle",
    "DiskNest",
    "SchottkyError",
    "WordImage",
    "apply_word",
    "build_nest",
    "circle_of",
    "eccentricity_upper_bound",
    "enumerate_words",
    "generators_from_scene",
    "invert_disk",
    "invert_point",
    "invert_points_batch",
    "strictly_inside",
    "word_count",
]
