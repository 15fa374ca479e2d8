"""Words, rectangles, disks and segments of the nested construction.

Objects are addressed by words ``w = (m, n)`` with ``m_j in {Le, Ri}`` and
``n_j in {1..N_j}``.  Level 1 is two copies of the basic block translated to
``x = -2`` and ``x = 2``.  A level-``k`` word spawns ``2 N_k`` children: the
block with ``N_k/2`` intervals is pulled back into the lower (``Do``) or upper
(``Up``) half of the parent's vertical sides and shifted sideways by a quarter
of the parent's width.

In exact mode only level 1 can be enumerated (``N_2 = 19990000``); level-2
objects are computed per word on request.  Presentation mode swaps in a small
parameter table so that a few levels can be drawn.
"""

from __future__ import annotations

import json
import re
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .params import LevelParams, LevelRangeError, block_side, param_table
from .report import Check, status_of
from .scalar import (
    NumericValue,
    is_log,
    nv_add,
    nv_compare,
    nv_isclose,
    to_float,
    to_json,
)

LE, RI = "Le", "Ri"
DO, UP = "Do", "Up"
SIDES = (LE, RI)
SEGMENT_KINDS = ("I", "J_Do", "J_Up")

EXACT, PRESENTATION = "exact", "presentation"
MAX_EXACT_DEPTH = 2          # level 2 only lazily
MAX_PRESENTATION_DEPTH = 4
# presentation table: N per level, gap ratio a/s, slack of the width fit
PRESENTATION_N = (2, 4, 4, 8)
PRESENTATION_RATIO = Fraction(1, 10)
PRESENTATION_SLACK = Fraction(11, 10)
# refuse to enumerate more objects than this
ENUMERATION_LIMIT = 200_000

_SIDE_ORDER = {LE: 0, RI: 1}


class SceneSizeError(ValueError):
    """Requested enumeration is too large to materialize."""


class BlockError(ValueError):
    pass


@dataclass(frozen=True)
class Word:
    m: tuple[str, ...]
    n: tuple[int, ...]

    def __post_init__(self):
        if len(self.m) != len(self.n) or not self.m:
            raise ValueError("word needs equal, nonzero numbers of m and n letters")
        if any(x not in SIDES for x in self.m):
            raise ValueError(f"m letters must be Le/Ri, got {self.m}")
        if any(not isinstance(x, int) or x < 1 for x in self.n):
            raise ValueError(f"n letters must be positive integers, got {self.n}")

    @property
    def k(self) -> int:
        return len(self.m)

    @property
    def label(self) -> str:
        return ".".join(f"{a}{b}" for a, b in zip(self.m, self.n))

    def __str__(self):
        return self.label

    def sort_key(self):
        return (self.k, tuple(_SIDE_ORDER[x] for x in self.m), self.n)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    @property
    def parent(self) -> Word:
        if self.k == 1:
            raise ValueError("level-1 words have no parent")
        return Word(self.m[:-1], self.n[:-1])

    def child(self, side: str, n: int) -> Word:
        return Word(self.m + (side,), self.n + (n,))

    def shift(self, step: int) -> Word:
        """``w + step``: same prefix, last index moved by ``step``."""
        return Word(self.m, self.n[:-1] + (self.n[-1] + step,))

    @classmethod
    def parse(cls, text: str) -> Word:
        """Accepts ``Le1.Ri3`` and ``(Le,1)`` / ``(Le.Ri,1.3)``."""
        text = text.strip()
        m = re.fullmatch(r"\(\s*([A-Za-z.]+)\s*,\s*([0-9.]+)\s*\)", text)
        if m:
            ms = tuple(m.group(1).split("."))
            ns = tuple(int(x) for x in m.group(2).split("."))
            return cls(ms, ns)
        parts = text.split(".")
        ms, ns = [], []
        for p in parts:
            mm = re.fullmatch(r"(Le|Ri)([0-9]+)", p)
            if not mm:
                raise ValueError(f"cannot parse word {text!r}")
            ms.append(mm.group(1))
            ns.append(int(mm.group(2)))
        return cls(tuple(ms), tuple(ns))


@dataclass(frozen=True)
class Rect:
    center: tuple[NumericValue, NumericValue]
    t: NumericValue   # half-width
    r: NumericValue   # half-height
    owner: Word | None = None
    # (x0, y0, x1, y1); given explicitly when center -+ extent would cancel
    bounds: tuple | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.bounds is None:
            (x, y), t, r = self.center, self.t, self.r
            object.__setattr__(self, "bounds", (x - t, y - r, x + t, y + r))

    @property
    def x0(self):
        return self.bounds[0]

    @property
    def y0(self):
        return self.bounds[1]

    @property
    def x1(self):
        return self.bounds[2]

    @property
    def y1(self):
        return self.bounds[3]

    def corners(self):
        return [(self.x0, self.y0), (self.x1, self.y0), (self.x1, self.y1), (self.x0, self.y1)]


@dataclass(frozen=True)
class Disk:
    center: tuple[NumericValue, NumericValue]
    radius: NumericValue
    side: str
    owner: Word | None = None

    @property
    def id(self) -> str:
        return f"{self.owner.label}:{self.side}" if self.owner else f"?:{self.side}"


@dataclass(frozen=True)
class VSegment:
    x: NumericValue
    y_lo: NumericValue
    y_hi: NumericValue
    kind: str
    side: str
    owner: Word | None = None


@dataclass(frozen=True)
class WordObjects:
    """Everything owned by one word: its rectangle, two disks, six segments."""

    word: Word
    rect: Rect
    disks: tuple[Disk, Disk]          # (Le, Ri)
    segments: tuple[VSegment, ...]
    # closed boxes between the J segments (Do, Up); the Cantor product
    # inside R^w lies in their union
    spans: tuple[Rect, Rect]

    def disk(self, side: str) -> Disk:
        return self.disks[_SIDE_ORDER[side]]


@dataclass(frozen=True)
class Vertical:
    """Heights inside one rectangle: bottom, J_Do top, centre, J_Up bottom, top."""

    lo: NumericValue
    jdo: NumericValue
    y: NumericValue
    jup: NumericValue
    hi: NumericValue


def local_vertical(n: int, a, s, base=Fraction(0), scale=Fraction(1)) -> Vertical:
    """Heights of the ``n``-th block interval mapped by ``u -> base + scale*u``.

    Offsets are formed in block coordinates first so that a tangency such as
    ``lo = base`` stays exact even for log-scale lengths.
    """
    off = (n - 1) * (2 * s + a)
    return Vertical(
        lo=base + off * scale,
        jdo=base + (off + s - a / 2) * scale,
        y=base + (off + s) * scale,
        jup=base + (off + s + a / 2) * scale,
        hi=base + (off + 2 * s) * scale,
    )


def make_objects(word: Word, x, v: Vertical, t, r, delta) -> WordObjects:
    """Rectangle, disks and segments of a word at column ``x``."""
    rect = Rect((x, v.y), t, r, word, (x - t, v.lo, x + t, v.hi))
    off = 2 * t + r
    disks = (Disk((x - off, v.y), r, LE, word), Disk((x + off, v.y), r, RI, word))
    segs = []
    for side, sx in ((LE, x - t), (RI, x + t)):
        segs.append(VSegment(sx, v.lo, v.hi, "I", side, word))
        segs.append(VSegment(sx, v.lo, v.jdo, "J_Do", side, word))
        segs.append(VSegment(sx, v.jup, v.hi, "J_Up", side, word))
    h = (r - delta / 2) / 2
    spans = (Rect((x, v.lo + h), t, h, word, (x - t, v.lo, x + t, v.jdo)),
             Rect((x, v.jup + h), t, h, word, (x - t, v.jup, x + t, v.hi)))
    return WordObjects(word, rect, disks, tuple(segs), spans)


# ---------------------------------------------------------------- basic block


@dataclass(frozen=True)
class BlockLayout:
    N: int
    a: NumericValue
    s: NumericValue
    eps: NumericValue
    intervals: tuple            # I_*^n as (lo, hi)
    centers: tuple              # y^n
    objects: tuple              # WordObjects with single-letter placeholder words


def block_center(n: int, a, s):
    """Centre ``y^n`` of the ``n``-th interval of a block."""
    return (n - 1) * (2 * s + a) + s


def block(N: int, a, s, eps, tol: float = 1e-12) -> BlockLayout:
    """Lay out the basic block on ``[0, 1]``.

    ``N`` closed intervals of length ``2s`` separated by gaps ``a``; each
    interval loses a middle gap of length ``a``, leaving the ``Do``/``Up``
    halves.  Rectangles have vertical sides at ``x = +-eps``, disks of radius
    ``s`` are centred at ``+-(2 eps + s) + i y^n``.
    """
    if not isinstance(N, int) or N < 2 or N % 2:
        raise BlockError(f"N must be an even integer >= 2, got {N!r}")
    if nv_compare(eps, 0) <= 0 or nv_compare(s, 0) <= 0 or nv_compare(a, 0) <= 0:
        raise BlockError("a, s and eps must be positive")
    total = N * 2 * s + (N - 1) * a
    if nv_compare(total, 1) != 0 and (not (is_log(total)) or not nv_isclose(total, 1, tol)):
        raise BlockError(f"block lengths sum to {total!r}, not 1")
    intervals, centers, objs = [], [], []
    for n in range(1, N + 1):
        v = local_vertical(n, a, s)
        centers.append(v.y)
        intervals.append((v.lo, v.hi))
        objs.append(make_objects(Word((LE,), (n,)), Fraction(0), v, eps, s, a))
    return BlockLayout(N, a, s, eps, tuple(intervals), tuple(centers), tuple(objs))


# ---------------------------------------------------------------- parameters


def presentation_table(depth: int) -> list[LevelParams]:
    """Non-conforming parameters for drawings.

    ``N = (2, 4, 4, 8)``, ``a/s = 1/10``; the deepest level uses
    ``eps = a/10`` and shallower widths are the smallest that hold the next
    level's columns with 10% slack.
    """
    if not 1 <= depth <= MAX_PRESENTATION_DEPTH:
        raise SceneSizeError(f"presentation depth must be 1..{MAX_PRESENTATION_DEPTH}")
    Ns = PRESENTATION_N[:depth]
    ratio = PRESENTATION_RATIO
    s_list = [block_side(Ns[0], ratio)] + [block_side(N // 2, ratio) for N in Ns[1:]]
    a_list = [ratio * s for s in s_list]
    eps = [None] * depth
    eps[-1] = a_list[-1] / 10
    for i in range(depth - 2, -1, -1):
        ehat = 2 * PRESENTATION_SLACK * (2 * eps[i + 1] + 2 * s_list[i + 1])
        eps[i] = ehat * (s_list[i] - a_list[i] / 2)
    table = []
    scale = Fraction(1)
    for i in range(depth):
        if i:
            prev = table[-1]
            scale = prev.r - prev.delta / 2
        t, r, d = eps[i] * scale, s_list[i] * scale, a_list[i] * scale
        table.append(LevelParams(k=i + 1, N=Fraction(Ns[i]), a=a_list[i], s=s_list[i],
                                 eps=eps[i], ehat=t / (r - d / 2), t=t, r=r, delta=d,
                                 scale=scale))
    return table


# ---------------------------------------------------------------- geometry


def _N(p: LevelParams) -> int:
    return p.N_int


def validate_word(params: list[LevelParams], w: Word):
    if w.k > len(params):
        raise KeyError(f"word {w} is deeper than the available {len(params)} levels")
    for j, (nj, p) in enumerate(zip(w.n, params), start=1):
        if nj > _N(p):
            raise KeyError(f"word {w}: n_{j} = {nj} exceeds N_{j} = {_N(p)}")


def word_frame(params: list[LevelParams], w: Word) -> tuple[NumericValue, Vertical]:
    """Column ``x^m`` and heights of ``R^w``."""
    validate_word(params, w)
    p1 = params[0]
    x = Fraction(-2) if w.m[0] == LE else Fraction(2)
    v = local_vertical(w.n[0], p1.a, p1.s)
    for j in range(1, w.k):
        prev, cur = params[j - 1], params[j]
        half = _N(cur) // 2
        x = x - prev.t / 2 if w.m[j] == LE else x + prev.t / 2
        nj = w.n[j]
        if nj <= half:
            base = v.lo
        else:
            base = v.jup
            nj -= half
        v = local_vertical(nj, cur.a, cur.s, base, cur.scale)
    return x, v


def word_center(params: list[LevelParams], w: Word):
    """Centre ``(x^m, y^n)`` of ``R^w``."""
    x, v = word_frame(params, w)
    return x, v.y


def word_objects(params: list[LevelParams], w: Word) -> WordObjects:
    x, v = word_frame(params, w)
    p = params[w.k - 1]
    return make_objects(w, x, v, p.t, p.r, p.delta)


def level_size(params: list[LevelParams], k: int) -> int:
    """Number of words (= rectangles) at level ``k``."""
    count = 2**k
    for p in params[:k]:
        count *= _N(p)
    return count


def iter_words(params: list[LevelParams], k: int) -> Iterator[Word]:
    """Words of level ``k`` in canonical order."""
    if k == 1:
        for m in SIDES:
            for n in range(1, _N(params[0]) + 1):
                yield Word((m,), (n,))
        return
    Nk = _N(params[k - 1])
    for parent in iter_words(params, k - 1):
        for m in SIDES:
            for n in range(1, Nk + 1):
                yield parent.child(m, n)


class ChildSequence(Sequence):
    """Lazily computed children of one word, in canonical order."""

    def __init__(self, params: list[LevelParams], parent: Word):
        self._params = params
        self._parent = parent
        self._N = _N(params[parent.k])

    def __len__(self):
        return 2 * self._N

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        if i < 0:
            i += len(self)
        if not 0 <= i < len(self):
            raise IndexError(i)
        side = SIDES[i // self._N]
        w = self._parent.child(side, i % self._N + 1)
        return word_objects(self._params, w)

    def __iter__(self):
        if len(self) > ENUMERATION_LIMIT:
            raise SceneSizeError(
                f"{len(self)} children; index them individually instead of iterating"
            )
        return (self[i] for i in range(len(self)))


# ---------------------------------------------------------------- scene graph


@dataclass
class SceneGraph:
    mode: str
    depth: int
    params: list[LevelParams]
    levels: list[dict[Word, WordObjects]] = field(default_factory=list)

    @property
    def materialized_depth(self) -> int:
        return len(self.levels)

    def level(self, k: int) -> dict[Word, WordObjects]:
        if k > self.depth:
            raise KeyError(f"level {k} beyond scene depth {self.depth}")
        if k > len(self.levels):
            raise SceneSizeError(
                f"level {k} has {level_size(self.params, k):,} words and is only "
                "available per word (scene.objects / children)"
            )
        return self.levels[k - 1]

    def objects(self, w: Word) -> WordObjects:
        if w.k > self.depth:
            raise KeyError(f"word {w} deeper than scene depth {self.depth}")
        if w.k <= len(self.levels):
            try:
                return self.levels[w.k - 1][w]
            except KeyError:
                raise KeyError(f"unknown word {w}") from None
        return word_objects(self.params, w)

    def disks(self, k: int) -> list[Disk]:
        return [d for wo in self.level(k).values() for d in wo.disks]

    def disk_by_id(self, ident: str) -> Disk:
        label, side = ident.split(":")
        return self.objects(Word.parse(label)).disk(side)

    def all_objects(self) -> list[WordObjects]:
        return [wo for lvl in self.levels for wo in lvl.values()]

    def to_dict(self) -> dict:
        objs = []
        for wo in self.all_objects():
            objs.extend(_object_records(wo))
        return {
            "mode": self.mode,
            "depth": self.depth,
            "params": [p.to_dict() for p in self.params],
            "objects": objs,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"


def _pt(p):
    return [to_json(p[0]), to_json(p[1])]


def _object_records(wo: WordObjects) -> list[dict]:
    w = wo.word.label
    out = [{"word": w, "type": "rect", "center": _pt(wo.rect.center),
            "half_width": to_json(wo.rect.t), "half_height": to_json(wo.rect.r)}]
    for d in wo.disks:
        out.append({"word": w, "type": "disk", "side": d.side, "center": _pt(d.center),
                    "radius": to_json(d.radius)})
    for s in wo.segments:
        out.append({"word": w, "type": "segment", "kind": s.kind, "side": s.side,
                    "x": to_json(s.x), "y_lo": to_json(s.y_lo), "y_hi": to_json(s.y_hi)})
    return out


def generation(k_max: int, mode: str = EXACT) -> SceneGraph:
    """Build the scene down to level ``k_max``.

    Exact mode materializes level 1; ``k_max = 2`` is accepted and its words
    are generated on demand.  Presentation mode materializes up to level 4.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    if mode == EXACT:
        if k_max > MAX_EXACT_DEPTH:
            params = param_table(min(k_max, 3))
            raise SceneSizeError(
                f"exact geometry is limited to depth {MAX_EXACT_DEPTH}: level 1 has "
                f"{level_size(params, 1)} words, level 2 has {level_size(params, 2):,} "
                "(per-word only) and level 3 has about exp(2.6e30)"
            )
        params = param_table(k_max)
        materialize = 1
    elif mode == PRESENTATION:
        params = presentation_table(k_max)
        materialize = k_max
    else:
        raise ValueError(f"unknown mode {mode!r}")
    levels = []
    for k in range(1, materialize + 1):
        if level_size(params, k) > ENUMERATION_LIMIT:
            raise SceneSizeError(f"level {k} has {level_size(params, k):,} words")
        levels.append({w: word_objects(params, w) for w in iter_words(params, k)})
    return SceneGraph(mode, k_max, params, levels)


def children(scene: SceneGraph, w: Word) -> ChildSequence:
    """Level-``(k+1)`` objects of ``w``: ``Le`` children first, ``n`` ascending."""
    if w.k >= scene.depth:
        raise KeyError(f"scene depth {scene.depth} has no children below level {w.k}")
    validate_word(scene.params, w)
    return ChildSequence(scene.params, w)


# ---------------------------------------------------------------- Cantor covers


@dataclass(frozen=True)
class CantorCover:
    k: int
    e_count: int
    e_intervals: tuple | None      # None when too many to list
    f_count: int
    f_intervals: tuple | None
    e_total: NumericValue          # 2^k * 2 t_k
    ratio_to_previous: NumericValue | None


def _x_columns(params, k):
    xs = [Fraction(-2), Fraction(2)]
    for j in range(1, k):
        h = params[j - 1].t / 2
        xs = [x + d for x in xs for d in (-h, h)]
    return xs


def _f_spans(params, k):
    p1 = params[0]
    vs = [local_vertical(n, p1.a, p1.s) for n in range(1, _N(p1) + 1)]
    for j in range(1, k):
        cur = params[j]
        half = _N(cur) // 2
        vs = [local_vertical(n if n <= half else n - half, cur.a, cur.s,
                             v.lo if n <= half else v.jup, cur.scale)
              for v in vs for n in range(1, _N(cur) + 1)]
    return [(v.lo, v.hi) for v in vs]


def cantor_cover(params: list[LevelParams], k: int, list_limit: int = 10_000) -> CantorCover:
    """Level-``k`` covers of the two Cantor factors.

    ``E`` is covered by ``2^k`` intervals of length ``2 t_k``, ``F`` by
    ``prod N_j`` intervals of length ``2 r_k``.
    """
    if not 1 <= k <= len(params):
        raise ValueError(f"k must be in 1..{len(params)}")
    p = params[k - 1]
    e_count = 2**k
    e_int = None
    if e_count <= list_limit:
        e_int = tuple((x - p.t, x + p.t) for x in _x_columns(params, k))
    f_count = None
    f_int = None
    try:
        f_count = 1
        for q in params[:k]:
            f_count *= _N(q)
    except LevelRangeError:
        f_count = None
    if f_count is not None and f_count <= list_limit:
        f_int = tuple(_f_spans(params, k))
    total = 2**k * 2 * p.t
    ratio = None
    if k >= 2:
        ratio = total / (2 ** (k - 1) * 2 * params[k - 2].t)
    return CantorCover(k, e_count, e_int, f_count, f_int, total, ratio)


def verify_cantor_cover(params: list[LevelParams]) -> list[Check]:
    out = []
    c1 = cantor_cover(params, 1)
    out.append(Check("scene.cover.t1_le_hundredth", "t_1 <= 1/100",
                     status_of(nv_compare(params[0].t, Fraction(1, 100)) <= 0),
                     {"t_1": params[0].t, "E_total": c1.e_total}))
    for k in range(2, len(params) + 1):
        c = cantor_cover(params, k)
        ok = nv_compare(c.ratio_to_previous, Fraction(1, 50)) <= 0
        out.append(Check(f"scene.cover.k{k}.shrink", "2^k t_k shrinks by <= 1/50 per level",
                         status_of(ok), {"ratio": c.ratio_to_previous, "E_total": c.e_total}))
    return out


def point_locate(params: list[LevelParams], address: Word):
    """Canonical representative of the Cantor-product points with this prefix.

    Returns ``((x, y), (t_k, r_k))``: the centre of ``R^address`` and the
    half-extents bounding the distance to any such point.
    """
    x, y = word_center(params, address)
    p = params[address.k - 1]
    return (x, y), (p.t, p.r)


# ---------------------------------------------------------------- invariants


def _diff(u, v):
    # coordinates stored identically (same row, same column) differ by zero
    return Fraction(0) if nv_compare(u, v) == 0 else u - v


def _d2(p, q):
    dx, dy = _diff(p[0], q[0]), _diff(p[1], q[1])
    return dx * dx + dy * dy


def disks_disjoint(d1: Disk, d2: Disk) -> bool:
    s = d1.radius + d2.radius
    return nv_compare(_d2(d1.center, d2.center), s * s) > 0


def rects_disjoint(a: Rect, b: Rect) -> bool:
    return (nv_compare(a.x1, b.x0) < 0 or nv_compare(b.x1, a.x0) < 0
            or nv_compare(a.y1, b.y0) < 0 or nv_compare(b.y1, a.y0) < 0)


def rect_point_d2(rect: Rect, p):
    """Squared distance from ``p`` to the closed rectangle."""
    def clamp(v, lo, hi):
        if nv_compare(v, lo) < 0:
            return lo
        if nv_compare(v, hi) > 0:
            return hi
        return v
    q = (clamp(p[0], rect.x0, rect.x1), clamp(p[1], rect.y0, rect.y1))
    return _d2(p, q)


def rect_disk_disjoint(rect: Rect, d: Disk) -> bool:
    return nv_compare(rect_point_d2(rect, d.center), d.radius * d.radius) > 0


def _inside_rect(inner_box, rect: Rect) -> bool:
    x0, y0, x1, y1 = inner_box
    return (nv_compare(rect.x0, x0) <= 0 and nv_compare(x1, rect.x1) <= 0
            and nv_compare(rect.y0, y0) <= 0 and nv_compare(y1, rect.y1) <= 0)


def _box(obj):
    if isinstance(obj, Rect):
        return (obj.x0, obj.y0, obj.x1, obj.y1)
    if isinstance(obj, Disk):
        (x, y), r = obj.center, obj.radius
        return (x - r, y - r, x + r, y + r)
    return (obj.x, obj.y_lo, obj.x, obj.y_hi)


def _pairs_close(boxes):
    """Index pairs whose boxes may touch.

    A float prefilter with a relative margin far above rounding error; every
    returned pair is then decided exactly by the caller.
    """
    if len(boxes) < 2:
        return []
    arr = np.array([[to_float(v) for v in b] for b in boxes])
    span = float(np.max(np.abs(arr))) or 1.0
    pairs = _kernels.box_pairs(arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3], 1e-9 * span)
    return [(int(i), int(j)) for i, j in pairs]


def verify_scene(scene: SceneGraph) -> list[Check]:
    """Disjointness within each materialized level and nesting across levels."""
    out = []
    for k in range(1, scene.materialized_depth + 1):
        objs = list(scene.level(k).values())
        rects = [wo.rect for wo in objs]
        disks = [d for wo in objs for d in wo.disks]
        bad_r = [(a, b) for a, b in _pairs_close([_box(r) for r in rects])
                 if not rects_disjoint(rects[a], rects[b])]
        bad_d = [(a, b) for a, b in _pairs_close([_box(d) for d in disks])
                 if not disks_disjoint(disks[a], disks[b])]
        items = rects + disks
        bad_rd = []
        for a, b in _pairs_close([_box(o) for o in items]):
            o1, o2 = items[a], items[b]
            if isinstance(o1, Rect) != isinstance(o2, Rect):
                rr, dd = (o1, o2) if isinstance(o1, Rect) else (o2, o1)
                if not rect_disk_disjoint(rr, dd):
                    bad_rd.append((a, b))
        out.append(Check(f"scene.k{k}.rects_disjoint", "level rectangles pairwise disjoint",
                         status_of(not bad_r), {"count": len(rects), "violations": len(bad_r)}))
        out.append(Check(f"scene.k{k}.disks_disjoint", "level disks pairwise disjoint",
                         status_of(not bad_d), {"count": len(disks), "violations": len(bad_d)}))
        out.append(Check(f"scene.k{k}.disks_avoid_rects", "disks disjoint from level rectangles",
                         status_of(not bad_rd), {"violations": len(bad_rd)}))
        radii = {d.radius for d in disks}
        out.append(Check(f"scene.k{k}.equal_radii", "all level disks have radius r_k",
                         status_of(radii == {scene.params[k - 1].r}), {"r_k": scene.params[k - 1].r}))
        if k >= 2:
            bad = 0
            for wo in objs:
                parent = scene.objects(wo.word.parent).rect
                for o in (wo.rect, *wo.disks, *wo.segments):
                    if not _inside_rect(_box(o), parent):
                        bad += 1
            out.append(Check(f"scene.k{k}.inside_parent", "children lie in parent rectangle",
                             status_of(bad == 0), {"violations": bad}))
    return out


def _le(u, v) -> bool:
    """``u <= v`` on stored values; log-scale pairs agreeing to 1e-12 in log
    count as touching (their true order sits below the stored precision and
    is certified separately by the parameter containment margin)."""
    if nv_compare(u, v) <= 0:
        return True
    return (is_log(u) or is_log(v)) and nv_compare(u, 0) > 0 and nv_isclose(u, v)


def _disk_inside(d: Disk, rect: Rect) -> bool:
    """Disk in the closed rectangle, compared without forming ``y - r``
    (that difference cancels exactly for disks tangent to the bottom)."""
    (x, y), r = d.center, d.radius
    return (_le(nv_add(rect.x0, r), x) and _le(nv_add(x, r), rect.x1)
            and _le(nv_add(rect.y0, r), y) and _le(nv_add(y, r), rect.y1))


def _box_inside(box, rect: Rect) -> bool:
    x0, y0, x1, y1 = box
    return _le(rect.x0, x0) and _le(x1, rect.x1) and _le(rect.y0, y0) and _le(y1, rect.y1)


def verify_sampled_children(scene: SceneGraph, per_parent: int = 3) -> list[Check]:
    """Nesting and disjointness for a few lazily built children of every
    level-1 word (first, middle and last of each side)."""
    if scene.depth < 2:
        return []
    out = []
    for w in scene.level(1):
        seq = children(scene, w)
        N = len(seq) // 2
        picks = sorted({i for base in (0, N) for i in (base, base + N // 2, base + N - 1)})
        kids = [seq[i] for i in picks[: 2 * per_parent]]
        parent = scene.objects(w).rect
        outside = sum(not _disk_inside(d, parent) for wo in kids for d in wo.disks)
        outside += sum(not _box_inside(_box(o), parent)
                       for wo in kids for o in (wo.rect, *wo.segments))
        overlaps = sum(not rects_disjoint(a.rect, b.rect)
                       for i, a in enumerate(kids) for b in kids[i + 1:])
        overlaps += sum(not disks_disjoint(d, e)
                        for i, a in enumerate(kids) for b in kids[i + 1:]
                        for d in a.disks for e in b.disks)
        out.append(Check(f"scene.k2.{w.label}.sampled_children",
                         "sampled children lie in the parent and are disjoint",
                         status_of(outside == 0 and overlaps == 0),
                         {"children": len(seq), "sampled": [k.word.label for k in kids],
                          "outside": outside, "overlaps": overlaps}))
    return out
