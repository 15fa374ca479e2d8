"""Logarithmic capacity of the removed intervals.

``cap([c, d]) = (d - c)/4``.  For pieces of diameter below ``delta``,
subadditivity gives ``1/log(delta/cap(E)) <= sum 1/log(delta/cap(E_l))``;
with ``delta = 2`` the union of the intervals removed from ``[0, 1]`` has
capacity at most ``2 exp(-1/S)``.  ``S`` is evaluated from the level
parameters (``formula``) or from the true gap census (``actual``).  A
boundary-element solver gives an independent numerical value for explicit
interval sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .params import LevelParams, param_table
from .report import Check, status_of
from .scalar import (
    NumericValue,
    nv_add,
    nv_compare,
    nv_div,
    nv_exp,
    nv_log,
    nv_mul,
    nv_neg,
    nv_pow,
    to_float,
)

FORMULA, ACTUAL = "formula", "actual"
DELTA = Fraction(2)
CAP_UNIT = Fraction(1, 4)
MIN_PANELS = 16


class IntervalError(ValueError):
    pass


def interval_capacity(c, d) -> NumericValue:
    if nv_compare(c, d) >= 0:
        raise IntervalError(f"need c < d, got [{c}, {d}]")
    return (d - c) / 4


@dataclass(frozen=True)
class IntervalSet:
    """Disjoint closed intervals, or a census ``count x length`` when the
    intervals exist only in number."""

    intervals: tuple = ()
    census: tuple = ()          # ((count, length), ...)

    def __post_init__(self):
        ivs = tuple(sorted(self.intervals, key=lambda iv: to_float(iv[0])))
        for a, b in ivs:
            if nv_compare(a, b) >= 0:
                raise IntervalError(f"empty interval [{a}, {b}]")
        for (a0, b0), (a1, b1) in zip(ivs, ivs[1:]):
            if nv_compare(b0, a1) >= 0:
                raise IntervalError("intervals must be disjoint")
        object.__setattr__(self, "intervals", ivs)

    @property
    def explicit(self) -> bool:
        return not self.census

    def pieces(self) -> list[tuple]:
        """``(count, length)`` for every piece."""
        return [(1, b - a) for a, b in self.intervals] + list(self.census)


@dataclass(frozen=True)
class CensusLevel:
    k: int
    count: NumericValue
    length: NumericValue
    intervals: tuple | None     # explicit at level 1
    count_bound: NumericValue   # 2 N_k^k

    @property
    def within_bound(self) -> bool:
        return nv_compare(self.count, self.count_bound) <= 0


def removed_intervals(params: list[LevelParams], k_max: int) -> list[CensusLevel]:
    """Open intervals removed from ``[0, 1]`` at each level.

    Level 1 loses three gaps of length ``a_1``; from level 2 on every
    interval of the previous cover loses ``2 N_k - 2`` gaps of length
    ``delta_k``, so ``#_k = 2 (N_k - 1) prod_{j<k} N_j``.
    """
    if not 1 <= k_max <= len(params):
        raise ValueError(f"k_max must be in 1..{len(params)}")
    p1 = params[0]
    s, a = p1.s, p1.a
    ivs = ((s - a / 2, s + a / 2), (2 * s, 2 * s + a), (1 - s - a / 2, 1 - s + a / 2))
    out = [CensusLevel(1, Fraction(3), a, ivs, 2 * p1.N)]
    prod = p1.N
    for k in range(2, k_max + 1):
        p = params[k - 1]
        count = nv_mul(2 * (p.N - 1), prod)
        out.append(CensusLevel(k, count, p.delta, None, 2 * nv_pow(p.N, k)))
        prod = nv_mul(prod, p.N)
    return out


def _inv_log_ratio(count, length, delta) -> NumericValue:
    """``count / log(delta / cap)`` with ``cap = length/4``."""
    cap = length / 4
    if nv_compare(length, delta) >= 0:
        raise IntervalError("piece diameter must be below delta")
    return nv_div(count, nv_log(nv_div(delta, cap)))


def subadditive_sum(pieces, delta=DELTA) -> NumericValue:
    S = Fraction(0)
    for count, length in pieces:
        S = nv_add(S, _inv_log_ratio(count, length, delta))
    return S


def subadditive_capacity_bound(pieces, delta=DELTA) -> tuple[NumericValue, NumericValue]:
    """``(delta exp(-1/S), S)`` for pieces given as ``(count, length)`` pairs
    or as an ``IntervalSet``."""
    if isinstance(pieces, IntervalSet):
        pieces = pieces.pieces()
    S = subadditive_sum(pieces, delta)
    if nv_compare(S, 0) <= 0:
        raise IntervalError("empty census")
    return nv_mul(delta, nv_exp(nv_neg(nv_div(1, S)))), S


def formula_term(p: LevelParams) -> NumericValue:
    """``2 N_k^k / (log 8 + (2 N_k)^{2k})``."""
    k = p.k
    num = 2 * nv_pow(p.N, k)
    den = nv_add(Fraction(math.log(8)), nv_pow(2 * p.N, 2 * k))
    return nv_div(num, den)


def actual_term(level: CensusLevel) -> NumericValue:
    return _inv_log_ratio(level.count, level.length, DELTA)


@dataclass(frozen=True)
class SeriesResult:
    mode: str
    k_max: int
    terms: tuple
    tail: NumericValue
    S: NumericValue
    bound: NumericValue
    verdict: bool

    def to_dict(self) -> dict:
        return {"mode": self.mode, "k_max": self.k_max, "terms": list(self.terms),
                "tail": self.tail, "S": self.S, "bound": self.bound, "verdict": self.verdict}


def capacity_series(params: list[LevelParams] | None, k_max: int, mode: str = FORMULA) -> SeriesResult:
    """Truncated series ``S`` with a tail bound, and ``cap <= 2 exp(-1/S)``.

    The terms fall off faster than geometrically, so the tail past ``k_max``
    is bounded by twice the next term; that term is computed from level
    ``k_max + 1``.  The verdict compares the bound with ``cap([0, 1]) = 1/4``;
    in formula mode it also requires ``S <= 1/4``.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    if params is None or len(params) < k_max + 1:
        params = param_table(k_max + 1)
    if mode == FORMULA:
        terms = [formula_term(p) for p in params[:k_max]]
        nxt = formula_term(params[k_max])
    elif mode == ACTUAL:
        census = removed_intervals(params, k_max + 1)
        terms = [actual_term(lv) for lv in census[:k_max]]
        nxt = actual_term(census[k_max])
    else:
        raise ValueError(f"unknown mode {mode!r}")
    tail = 2 * nxt
    S = Fraction(0)
    for t in terms:
        S = nv_add(S, t)
    S = nv_add(S, tail)
    bound = nv_mul(DELTA, nv_exp(nv_neg(nv_div(1, S))))
    verdict = nv_compare(bound, CAP_UNIT) < 0
    if mode == FORMULA:
        verdict = verdict and nv_compare(S, CAP_UNIT) <= 0
    return SeriesResult(mode, k_max, tuple(terms), tail, S, bound, verdict)


# ---------------------------------------------------------------- numerics


def _panels(intervals, n: int):
    """Chebyshev-graded panels, ``n`` in total split by length with at least
    ``MIN_PANELS`` per interval."""
    lengths = np.array([float(b) - float(a) for a, b in intervals])
    share = np.maximum(MIN_PANELS, np.floor(n * lengths / lengths.sum())).astype(int)
    edges_a, edges_b = [], []
    for (a, b), m in zip(intervals, share):
        a, b = float(a), float(b)
        u = (1 - np.cos(np.pi * np.arange(m + 1) / m)) / 2
        e = a + (b - a) * u
        edges_a.append(e[:-1])
        edges_b.append(e[1:])
    return np.concatenate(edges_a), np.concatenate(edges_b)


def equilibrium_capacity(intervals, n: int = 512) -> float:
    """Capacity from a piecewise-constant equilibrium density.

    Collocation at panel midpoints with the exact panel integral of
    ``log|x - y|``; the potential ``V`` is constant on the set, the total
    mass is one and ``cap = exp(V)``.
    """
    if isinstance(intervals, IntervalSet):
        if not intervals.explicit:
            raise IntervalError("numerical capacity needs explicit intervals")
        intervals = intervals.intervals
    intervals = list(intervals)
    if not intervals:
        raise IntervalError("empty set")
    if n < 64:
        raise ValueError("need at least 64 panels")
    for a, b in intervals:
        if not float(b) > float(a):
            raise IntervalError(f"degenerate interval [{a}, {b}]")
    a, b = _panels(intervals, n)
    x = (a + b) / 2
    h = b - a
    m = len(x)
    M = np.zeros((m + 1, m + 1))
    M[:m, :m] = _kernels.log_panel_matrix(x, a, b)
    M[:m, m] = -1.0
    M[m, :m] = h
    rhs = np.zeros(m + 1)
    rhs[m] = 1.0
    try:
        sol = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as exc:
        raise IntervalError(f"singular system: {exc}") from None
    return float(math.exp(sol[m]))


def verify_capacity(k_max: int = 2) -> list[Check]:
    params = param_table(k_max + 1)
    out = []
    census = removed_intervals(params, k_max)
    for lv in census:
        out.append(Check(f"capacity.census.k{lv.k}", "#_k <= 2 N_k^k",
                         status_of(lv.within_bound),
                         {"count": lv.count, "bound": lv.count_bound, "length": lv.length}))
    iv = census[0].intervals
    ok = all(b - a == params[0].a for a, b in iv)
    out.append(Check("capacity.census.k1_lengths", "three level-1 gaps of length a_1",
                     status_of(ok and len(iv) == 3), {"intervals": [list(x) for x in iv]}))
    out.append(Check("capacity.unit_interval", "cap([0,1]) = 1/4",
                     status_of(interval_capacity(0, 1) == CAP_UNIT), {}))
    for mode in (FORMULA, ACTUAL):
        res = capacity_series(params, k_max, mode)
        values = {"S": res.S, "bound": res.bound, "tail": res.tail}
        values.update({f"term{i + 1}": t for i, t in enumerate(res.terms)})
        out.append(Check(f"capacity.{mode}.k{k_max}",
                         "sum bound gives cap([0,1] minus F) < cap([0,1])",
                         status_of(res.verdict), values))
    est = equilibrium_capacity([(0, 1)], 512)
    out.append(Check("capacity.numeric.unit", "numerical cap([0,1]) within 0.5% of 1/4",
                     status_of(abs(est - 0.25) <= 0.25 * 0.005), {"estimate": est}))
    return out


__all__ = [
    "ACTUAL",
    "FORMULA",
    "CensusLevel",
    "IntervalError",
    "IntervalSet",
    "SeriesResult",
    "capacity_series",
    "equilibrium_capacity",
    "formula_term",
    "interval_capacity",
    "removed_intervals",
    "subadditive_capacity_bound",
    "verify_capacity",
]
