import math
from fractions import Fraction

import mpmath
import pytest

from rigidcircle import params as P
from rigidcircle.report import DISCREPANCY, PASS
from rigidcircle.scalar import is_log, nv_compare, nv_div, nv_log, to_float


def solve_level1():
    """Independent solve: 4s + a = 1 with a = s/1000."""
    s = Fraction(1) / (4 + Fraction(1, 1000))
    a = s / 1000
    eps = s / 100_000
    ehat = eps / (s - a / 2)
    return s, a, eps, ehat


def test_level1_exact():
    p = P.initial_params()
    s, a, eps, ehat = solve_level1()
    assert (p.s, p.a, p.eps, p.ehat) == (s, a, eps, ehat)
    assert p.s == Fraction(1000, 4001)
    assert p.a == Fraction(1, 4001)
    assert p.eps == Fraction(1, 400100)
    assert p.ehat == Fraction(1, 99950)
    assert 4 * p.s + p.a == 1


def test_level2_frozen_values():
    p2 = P.param_table(2)[1]
    assert p2.N == 19_990_000
    assert p2.N_int == 19_990_000
    lnratio = nv_log(nv_div(p2.a, p2.s))
    want = -Fraction(39_980_000) ** 4
    assert nv_compare(lnratio, want) == 0
    # same number as an mpmath float, for scale
    assert math.isclose(to_float(lnratio), float(-mpmath.mpf(39_980_000) ** 4), rel_tol=1e-15)


def test_level2_block_sums_to_one():
    p2 = P.param_table(2)[1]
    M = p2.N / 2
    total = 2 * M * p2.s + (M - 1) * p2.a
    assert abs(to_float(total) - 1) < 1e-12


def test_level3_is_log_scale():
    p3 = P.param_table(3)[2]
    assert is_log(p3.N)
    with pytest.raises(P.LevelRangeError):
        p3.N_int


def test_max_level_guard():
    with pytest.raises(P.LevelRangeError):
        P.param_table(P.MAX_LEVEL + 1)


def test_verify_params_statuses():
    checks = P.verify_params(3)
    ids = [c.id for c in checks]
    assert len(ids) == len(set(ids))
    disc = [c for c in checks if c.status == DISCREPANCY]
    assert [c.id for c in disc] == ["params.k1.delta_le_gapfactor_r"]
    assert all(c.status == PASS for c in checks if c.id.startswith(("params.k2", "params.k3")))


def test_level1_delta_clause_misses_by_orders_of_magnitude():
    # delta_1 <= exp(-(2N_1)^2) r_1 = e^{-16} r_1 fails: a_1/s_1 = 1e-3 vs 1.1e-7
    p = P.initial_params()
    ratio = p.delta / p.r
    assert float(ratio) / math.exp(-16) > 1e3


def test_table_json_round_trip():
    text = P.table_json(P.param_table(3))
    assert text == P.table_json(P.param_table(3))


def test_containment_margin_positive():
    t = P.param_table(3)
    for cur, prev in zip(t[1:], t):
        assert P.containment_check(cur, prev).status == PASS
