"""Numeric tower: exact rationals and signed log-scale magnitudes.

A ``NumericValue`` is either a :class:`fractions.Fraction` (exact) or a
:class:`LogScale`, which stores a sign and the natural logarithm of the
magnitude.  The logarithm is itself a ``NumericValue``: an exact dyadic
``Fraction`` for magnitudes such as ``exp(-(2N)^4)``, or a nested
``LogScale`` once the exponent no longer fits any float (``exp(-(2N)^6)``
with ``N ~ exp(10^30)``).  Keeping the integer parts of exponents exact is
what lets two quantities of size ``exp(-2.5e30)`` be compared to within a
constant factor.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Union

__all__ = [
    "ABSORB_GAP",
    "CANCEL_GAP",
    "CancellationError",
    "LogScale",
    "LossyConversionError",
    "NumericValue",
    "from_json",
    "is_log",
    "nv_abs",
    "nv_add",
    "nv_ceil",
    "nv_compare",
    "nv_div",
    "nv_exp",
    "nv_isclose",
    "nv_log",
    "nv_max",
    "nv_min",
    "nv_mul",
    "nv_neg",
    "nv_pow",
    "nv_sub",
    "to_float",
    "to_json",
    "to_logscale",
    "to_rational",
]

# log-sum-exp drops the smaller operand beyond this gap and flags the result
ABSORB_GAP = 700
# same-magnitude opposite-sign sums closer than this (in log) are refused
CANCEL_GAP = 1e-9


class CancellationError(ArithmeticError):
    """Subtraction of nearly equal log-scale magnitudes."""


class LossyConversionError(TypeError):
    """A log-scale value cannot be turned back into an exact rational."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite float {x!r} is not a numeric value")
        return Fraction(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as a rational")


def _coerce(x):
    if isinstance(x, LogScale):
        return x
    return _as_fraction(x)


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def _ln_fraction(q: Fraction) -> Fraction:
    """Natural log of a positive rational, as the exact dyadic of a float."""
    if q <= 0:
        raise ValueError("log of a non-positive value")
    if q == 1:
        return Fraction(0)
    if Fraction(1, 10**300) < q < 10**300:
        return Fraction(math.log(float(q)))
    return Fraction(math.log(q.numerator)) - Fraction(math.log(q.denominator))


class LogScale:
    """Signed magnitude stored through its natural logarithm.

    ``LogScale(sign, ln)`` represents ``sign * exp(ln)``.  ``ln`` accepts an
    int, float, Fraction or another ``LogScale``; floats are converted to
    their exact dyadic value.  ``absorbed`` records that some log-sum-exp on
    the way here dropped a dominated term.
    """

    __slots__ = ("absorbed", "ln", "sign")

    def __init__(self, sign: int, ln=None, absorbed: bool = False):
        if sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {sign!r}")
        if sign == 0:
            ln = None
        elif ln is None:
            raise ValueError("nonzero LogScale needs a log magnitude")
        else:
            ln = _coerce(ln)
        object.__setattr__(self, "sign", sign)
        object.__setattr__(self, "ln", ln)
        object.__setattr__(self, "absorbed", bool(absorbed))

    def __setattr__(self, name, value):
        raise AttributeError("LogScale is immutable")

    def __repr__(self):
        if self.sign == 0:
            return "LogScale(0)"
        flag = ", absorbed" if self.absorbed else ""
        sign = "+" if self.sign > 0 else "-"
        return f"LogScale({sign}, ln={_short(self.ln)}{flag})"

    # arithmetic delegates to the module functions
    def __neg__(self):
        return nv_neg(self)

    def __pos__(self):
        return self

    def __abs__(self):
        return nv_abs(self)

    def __add__(self, other):
        return nv_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return nv_sub(self, other)

    def __rsub__(self, other):
        return nv_sub(other, self)

    def __mul__(self, other):
        return nv_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return nv_div(self, other)

    def __rtruediv__(self, other):
        return nv_div(other, self)

    def __pow__(self, n):
        return nv_pow(self, n)

    def __bool__(self):
        return self.sign != 0

    def __float__(self):
        return to_float(self)

    def __eq__(self, other):
        try:
            return nv_compare(self, other) == 0
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.sign, self.ln))

    def __lt__(self, other):
        return nv_compare(self, other) < 0

    def __le__(self, other):
        return nv_compare(self, other) <= 0

    def __gt__(self, other):
        return nv_compare(self, other) > 0

    def __ge__(self, other):
        return nv_compare(self, other) >= 0


NumericValue = Union[Fraction, LogScale]


def _short(v) -> str:
    if isinstance(v, LogScale):
        return repr(v)
    f = float(v) if abs(v) < 10**300 else math.copysign(math.inf, v)
    return f"{f:.6g}"


def is_log(x) -> bool:
    return isinstance(x, LogScale)


def to_logscale(x) -> LogScale:
    """Promote any numeric value to log scale (total)."""
    x = _coerce(x)
    if isinstance(x, LogScale):
        return x
    s = _sign(x)
    if s == 0:
        return LogScale(0)
    return LogScale(s, _ln_fraction(abs(x)))


def to_rational(x) -> Fraction:
    """Exact value of a rational; log-scale inputs are refused."""
    if isinstance(x, LogScale):
        if x.sign == 0:
            return Fraction(0)
        raise LossyConversionError("LogScale -> Rational conversion is lossy")
    return _as_fraction(x)


def to_float(x) -> float:
    """Nearest binary64, saturating to 0 or +-inf outside the float range."""
    x = _coerce(x)
    if isinstance(x, Fraction):
        try:
            return float(x)
        except OverflowError:
            return math.copysign(math.inf, x)
    if x.sign == 0:
        return 0.0
    ln = to_float(x.ln)
    if ln > 710:
        mag = math.inf
    elif ln < -746:
        mag = 0.0
    else:
        mag = math.exp(float(ln))
    return math.copysign(mag, x.sign)


def nv_neg(x):
    x = _coerce(x)
    if isinstance(x, Fraction):
        return -x
    return LogScale(-x.sign, x.ln, x.absorbed)


def nv_abs(x):
    x = _coerce(x)
    if isinstance(x, Fraction):
        return abs(x)
    return LogScale(abs(x.sign), x.ln, x.absorbed)


def nv_compare(x, y) -> int:
    """Three-way comparison returning -1, 0 or 1.

    Two rationals compare exactly.  Otherwise both sides are promoted to log
    scale and compared by sign, then by log magnitude.
    """
    x, y = _coerce(x), _coerce(y)
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return (x > y) - (x < y)
    x, y = to_logscale(x), to_logscale(y)
    if x.sign != y.sign:
        return (x.sign > y.sign) - (x.sign < y.sign)
    if x.sign == 0:
        return 0
    c = nv_compare(x.ln, y.ln)
    return c if x.sign > 0 else -c


def nv_mul(x, y):
    x, y = _coerce(x), _coerce(y)
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x * y
    if (isinstance(x, Fraction) and x == 0) or (isinstance(y, Fraction) and y == 0):
        return Fraction(0)
    x, y = to_logscale(x), to_logscale(y)
    if x.sign == 0 or y.sign == 0:
        return LogScale(0)
    return LogScale(x.sign * y.sign, nv_add(x.ln, y.ln), x.absorbed or y.absorbed)


def nv_div(x, y):
    x, y = _coerce(x), _coerce(y)
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x / y
    y = to_logscale(y)
    if y.sign == 0:
        raise ZeroDivisionError("division by a zero LogScale")
    inv = LogScale(y.sign, nv_neg(y.ln), y.absorbed)
    return nv_mul(x, inv)


def nv_pow(x, n: int):
    if not isinstance(n, int):
        raise TypeError("only integer powers are supported")
    x = _coerce(x)
    if isinstance(x, Fraction):
        return x**n
    if x.sign == 0:
        if n <= 0:
            raise ZeroDivisionError("zero to a non-positive power")
        return LogScale(0)
    sign = x.sign if n % 2 else 1
    return LogScale(sign, nv_mul(x.ln, n), x.absorbed)


def nv_exp(v) -> LogScale:
    """``exp(v)`` as a LogScale, for any numeric exponent."""
    return LogScale(1, _coerce(v))


def nv_log(x):
    """Natural log of a positive value.

    Rational inputs give the dyadic rational nearest ``math.log``; log-scale
    inputs return their stored exponent unchanged.
    """
    x = _coerce(x)
    if isinstance(x, Fraction):
        return _ln_fraction(x)
    if x.sign <= 0:
        raise ValueError("log of a non-positive value")
    return x.ln


def nv_add(x, y):
    """Sum; exact for two rationals, log-sum-exp otherwise.

    When the log magnitudes differ by more than ``ABSORB_GAP`` the smaller
    operand is dropped and ``absorbed`` is set.  Opposite-sign operands with
    identical log magnitudes (neither absorbed) give an exact zero; otherwise
    magnitudes agreeing to within ``CANCEL_GAP`` raise ``CancellationError``.
    """
    x, y = _coerce(x), _coerce(y)
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x + y
    # an exact zero leaves the other operand untouched
    if isinstance(x, Fraction) and x == 0:
        return y
    if isinstance(y, Fraction) and y == 0:
        return x
    x, y = to_logscale(x), to_logscale(y)
    if x.sign == 0:
        return y
    if y.sign == 0:
        return x
    flag = x.absorbed or y.absorbed
    c = nv_compare(x.ln, y.ln)
    big, small = (x, y) if c >= 0 else (y, x)
    if c == 0:
        if big.sign != small.sign and not flag:
            # identical stored magnitudes cancel to an exact zero
            return Fraction(0)
        gap = Fraction(0)
    else:
        gap = nv_sub(big.ln, small.ln)
    if nv_compare(gap, ABSORB_GAP) > 0:
        return LogScale(big.sign, big.ln, True)
    g = to_float(gap)
    if big.sign == small.sign:
        corr = math.log1p(math.exp(-g))
    else:
        if g < CANCEL_GAP:
            raise CancellationError(
                f"subtracting log-scale values whose magnitudes differ by {g:.3g} in log"
            )
        corr = math.log1p(-math.exp(-g))
    return LogScale(big.sign, nv_add(big.ln, Fraction(corr)), flag)


def nv_sub(x, y):
    return nv_add(x, nv_neg(y))


def nv_min(*xs):
    best = _coerce(xs[0])
    for x in xs[1:]:
        if nv_compare(x, best) < 0:
            best = _coerce(x)
    return best


def nv_max(*xs):
    best = _coerce(xs[0])
    for x in xs[1:]:
        if nv_compare(x, best) > 0:
            best = _coerce(x)
    return best


def nv_ceil(x):
    """Ceiling.  Exact on rationals; on log-scale values only above ``e**ABSORB_GAP``,
    where the change is a dominated relative perturbation (flagged)."""
    x = _coerce(x)
    if isinstance(x, Fraction):
        return Fraction(math.ceil(x))
    if x.sign > 0 and nv_compare(x.ln, ABSORB_GAP) > 0:
        return LogScale(1, x.ln, True)
    raise ValueError("ceiling of a moderate log-scale value is not representable")


def nv_isclose(x, y, rel_log_tol: float = 1e-12) -> bool:
    """True when two positive values agree to ``rel_log_tol`` in log magnitude.

    Rational pairs are compared exactly.  Nested exponents whose difference is
    below the cancellation guard count as close.
    """
    x, y = _coerce(x), _coerce(y)
    if nv_compare(x, y) == 0:
        return True
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return False
    lx, ly = nv_log(x), nv_log(y)
    try:
        d = nv_abs(nv_sub(lx, ly))
    except CancellationError:
        return True
    scale = nv_max(1, nv_abs(lx), nv_abs(ly))
    return nv_compare(d, nv_mul(scale, _as_fraction(rel_log_tol))) <= 0


def to_json(x):
    """``{"rat": "p/q"}`` or ``{"log": {"sign": s, "ln": <nested>}}``.

    The exponent of a log-scale value is serialized recursively so that the
    round trip is exact.
    """
    x = _coerce(x)
    if isinstance(x, Fraction):
        return {"rat": f"{x.numerator}/{x.denominator}"}
    body = {"sign": x.sign, "ln": None if x.sign == 0 else to_json(x.ln)}
    if x.absorbed:
        body["absorbed"] = True
    return {"log": body}


def from_json(obj):
    if "rat" in obj:
        return Fraction(obj["rat"])
    body = obj["log"]
    if body["sign"] == 0:
        return LogScale(0)
    return LogScale(body["sign"], from_json(body["ln"]), body.get("absorbed", False))
