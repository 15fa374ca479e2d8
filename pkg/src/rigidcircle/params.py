"""Per-level construction parameters and their verification.

Level 1 is exact: ``N_1 = 2`` and ``eps_1 = a_1/100 = s_1/10^5``.  From level 2
on the gap ratio ``a_k/s_k = exp(-(2 N_k)^(2k))`` forces log-scale values;
``N_2`` is still an exact integer, ``N_3`` onwards exist only in log scale.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from fractions import Fraction

from .report import DISCREPANCY, Check, status_of
from .scalar import (
    LogScale,
    NumericValue,
    is_log,
    nv_ceil,
    nv_compare,
    nv_exp,
    nv_isclose,
    nv_min,
    nv_mul,
    nv_neg,
    nv_pow,
    to_json,
)

# deepest level next_params will build; the nesting of log exponents grows by
# one per level and comparisons get slower, not less accurate
MAX_LEVEL = 8
# tolerance for inequalities that hold with equality in exact arithmetic
EQ_LOG_TOL = 1e-12


class LevelRangeError(ValueError):
    """Requested level is outside the supported numeric range."""


class ContainmentError(ValueError):
    """Child objects do not fit inside the parent rectangle."""


@dataclass(frozen=True)
class LevelParams:
    """All scalars of level ``k``.

    ``a, s, eps`` live in block coordinates (the unit interval); ``t, r,
    delta`` are absolute half-width, half-height and gap; ``scale`` maps block
    coordinates to absolute ones and ``ehat = t / (r - delta/2)`` is the
    relative half-width seen by the next level.
    """

    k: int
    N: NumericValue
    a: NumericValue
    s: NumericValue
    eps: NumericValue
    ehat: NumericValue
    t: NumericValue
    r: NumericValue
    delta: NumericValue
    scale: NumericValue

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("level index starts at 1")
        if not is_log(self.N):
            n = Fraction(self.N)
            if n.denominator != 1 or n < 2 or n.numerator % 2:
                raise ValueError(f"N_k must be an even integer >= 2, got {self.N}")
        for name in ("a", "s", "eps", "ehat", "t", "r", "delta", "scale"):
            if nv_compare(getattr(self, name), 0) <= 0:
                raise ValueError(f"{name} must be positive")

    @property
    def log_mode(self) -> bool:
        return is_log(self.delta)

    @property
    def N_int(self) -> int:
        """``N_k`` as a Python int; only available while it is exact."""
        if is_log(self.N):
            raise LevelRangeError(f"N_{self.k} exists only in log scale")
        return int(self.N)

    def to_dict(self) -> dict:
        out = {"k": self.k}
        for f in fields(self):
            if f.name != "k":
                out[f.name] = to_json(getattr(self, f.name))
        return out


def block_side(N, ratio) -> NumericValue:
    """Half-length ``s`` solving ``N*2s + (N-1)*a = 1`` with ``a = ratio*s``."""
    return 1 / (2 * N + (N - 1) * ratio)


def _relative_width(t, r, delta):
    return t / (r - delta / 2)


def initial_params() -> LevelParams:
    ratio = Fraction(1, 1000)
    s = block_side(2, ratio)
    a = ratio * s
    eps = s / 10**5
    one = Fraction(1)
    return LevelParams(
        k=1, N=Fraction(2), a=a, s=s, eps=eps,
        ehat=_relative_width(eps, s, a),
        t=eps, r=s, delta=a, scale=one,
    )


def next_params(prev: LevelParams) -> LevelParams:
    """Level ``k = prev.k + 1`` from the recurrence on ``N_k``, ``a_k/s_k`` and ``eps_k``."""
    k = prev.k + 1
    if k > MAX_LEVEL:
        raise LevelRangeError(f"level {k} is out of numeric range (max {MAX_LEVEL})")
    N = 2 * nv_ceil(100 / prev.ehat)
    ratio = nv_exp(nv_neg(nv_pow(2 * N, 2 * k)))
    M = N / 2
    s = block_side(M, ratio)
    a = s * ratio
    eps = nv_min(prev.ehat / 100, a / 100)
    scale = prev.r - prev.delta / 2
    t, r, delta = eps * scale, s * scale, a * scale
    return LevelParams(
        k=k, N=N, a=a, s=s, eps=eps, ehat=_relative_width(t, r, delta),
        t=t, r=r, delta=delta, scale=scale,
    )


def param_table(depth: int) -> list[LevelParams]:
    table = [initial_params()]
    while len(table) < depth:
        table.append(next_params(table[-1]))
    return table


def table_json(table: list[LevelParams]) -> str:
    return json.dumps([p.to_dict() for p in table], indent=2, sort_keys=True) + "\n"


def _le(x, y, tol=EQ_LOG_TOL) -> bool:
    if nv_compare(x, y) <= 0:
        return True
    return (is_log(x) or is_log(y)) and nv_isclose(x, y, tol)


def _le_check(cid, anchor, lhs, rhs, **extra) -> Check:
    values = {"lhs": lhs, "rhs": rhs, **extra}
    return Check(cid, anchor, status_of(_le(lhs, rhs)), values)


def verify_level_inequalities(cur: LevelParams, prev: LevelParams | None = None) -> list[Check]:
    """Check the per-level inequalities on ``t, delta, r, N``.

    At ``k = 1`` the clause ``delta_1 <= exp(-(2N_1)^2) r_1`` is false for the
    level-1 choice ``a_1 = s_1/1000``; it is evaluated and reported with status
    ``documented-discrepancy``.
    """
    k = cur.k
    if (prev is None) != (k == 1):
        raise ValueError("prev is required exactly when k >= 2")
    p = f"params.k{k}"
    gap_factor = nv_exp(nv_neg(nv_pow(2 * cur.N, 2 * k)))
    out = [
        _le_check(f"{p}.t_le_delta_over_100", "t_k <= delta_k/100", cur.t, cur.delta / 100),
        _le_check(f"{p}.delta_over_100_le_hundredth", "delta_k/100 <= 1/100",
                  cur.delta / 100, Fraction(1, 100)),
    ]
    thin = _le_check(f"{p}.delta_le_gapfactor_r", "delta_k <= exp(-(2N_k)^(2k)) r_k",
                     cur.delta, nv_mul(gap_factor, cur.r))
    if k == 1 and not thin.ok:
        thin.status = DISCREPANCY
        thin.note = ("fails for the level-1 values a_1 = s_1/1000; the capacity "
                     "census evaluates the true delta_1 instead")
    out.append(thin)
    out.append(_le_check(f"{p}.gapfactor_r_le_gapfactor", "exp(-(2N_k)^(2k)) r_k <= exp(-(2N_k)^(2k))",
                         nv_mul(gap_factor, cur.r), gap_factor))
    if k >= 2:
        out += [
            _le_check(f"{p}.N_ge_20N_prev", "N_k >= 20 N_(k-1)", 20 * prev.N, cur.N),
            _le_check(f"{p}.20N_prev_ge_40", "20 N_(k-1) >= 20 N_1 = 40", Fraction(40), 20 * prev.N),
            _le_check(f"{p}.r_le_delta_prev_over_100", "r_k <= delta_(k-1)/100", cur.r, prev.delta / 100),
            _le_check(f"{p}.delta_prev_over_100_le_1", "delta_(k-1)/100 <= 1", prev.delta / 100, Fraction(1)),
            _le_check(f"{p}.t_le_t_prev_over_100", "t_k <= t_(k-1)/100", cur.t, prev.t / 100),
        ]
        lhs, rhs = cur.t / prev.t, cur.eps / prev.ehat
        out.append(Check(f"{p}.t_ratio_identity", "t_k/t_(k-1) = eps_k/ehat_(k-1)",
                         status_of(nv_isclose(lhs, rhs, 1e-9)), {"lhs": lhs, "rhs": rhs}))
        even = is_log(cur.N) or int(cur.N) % 2 == 0
        out.append(Check(f"{p}.N_even", "N_k is even", status_of(even), {"N": cur.N}))
    return out


def containment_margin(cur: LevelParams, prev: LevelParams) -> dict:
    """Margins showing that level-``k`` objects fit inside the parent rectangle.

    Horizontally, a child column shifted by ``ehat_(k-1)/2`` extends another
    ``2 eps_k + 2 s_k`` (rectangle plus disk), which must stay below
    ``ehat_(k-1)``.  Vertically the block content spans ``[0, 1]`` exactly, so
    both vertical margins are zero and the bottom/top disks are tangent.
    """
    if cur.k < 2:
        raise ValueError("containment is defined for k >= 2")
    reach = 2 * cur.eps + 2 * cur.s
    half = prev.ehat / 2
    if nv_compare(reach, half) >= 0:
        raise ContainmentError(
            f"level-{cur.k} block reaches {reach!r} >= ehat/2 = {half!r}"
        )
    horizontal = half - reach
    M = cur.N / 2
    top = 2 * M * cur.s + (M - 1) * cur.a
    c_top = nv_compare(top, 1)
    if c_top > 0 and not nv_isclose(top, 1, EQ_LOG_TOL):
        raise ContainmentError(f"block content reaches {top!r} > 1")
    return {
        "horizontal": horizontal,
        "vertical_bottom": Fraction(0),
        "vertical_top": Fraction(0) if c_top == 0 or is_log(top) else 1 - top,
        "tangent": True,
    }


def containment_check(cur: LevelParams, prev: LevelParams) -> Check:
    try:
        m = containment_margin(cur, prev)
    except ContainmentError as exc:
        return Check(f"params.k{cur.k}.containment", "children lie in R^w", "fail", note=str(exc))
    return Check(f"params.k{cur.k}.containment", "children lie in R^w", "pass",
                 {k: v for k, v in m.items()})


def verify_params(depth: int = 3) -> list[Check]:
    table = param_table(depth)
    out = []
    for i, cur in enumerate(table):
        prev = table[i - 1] if i else None
        out += verify_level_inequalities(cur, prev)
        if prev is not None:
            out.append(containment_check(cur, prev))
    return out


__all__ = [
    "ContainmentError",
    "LevelParams",
    "LevelRangeError",
    "LogScale",
    "block_side",
    "containment_check",
    "containment_margin",
    "initial_params",
    "next_params",
    "param_table",
    "table_json",
    "verify_level_inequalities",
    "verify_params",
]
