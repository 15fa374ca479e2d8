import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigidcircle import capacity as C
from rigidcircle.params import param_table
from rigidcircle.report import PASS
from rigidcircle.scalar import nv_compare, to_float

# frozen oracles
TERM1 = 4 / (16 + math.log(8))          # 0.2212457...
ACTUAL_S = 0.289194                     # census sum with tail, k_max = 2
ACTUAL_BOUND = 2 * math.exp(-1 / 0.28919171555)


def test_interval_capacity():
    assert C.interval_capacity(0, 1) == Fraction(1, 4)
    assert C.interval_capacity(Fraction(1, 3), Fraction(1, 2)) == Fraction(1, 24)
    with pytest.raises(C.IntervalError):
        C.interval_capacity(1, 1)


def test_census_counts():
    lv = C.removed_intervals(param_table(3), 2)
    assert lv[0].count == 3 and lv[0].length == Fraction(1, 4001)
    # 2 (N_2 - 1) N_1 gaps at level 2
    assert lv[1].count == 2 * (19_990_000 - 1) * 2
    assert lv[1].count == 79_959_996
    assert lv[1].within_bound and lv[0].within_bound


def test_level1_gap_positions():
    iv = C.removed_intervals(param_table(2), 1)[0].intervals
    s, a = Fraction(1000, 4001), Fraction(1, 4001)
    assert iv == ((s - a / 2, s + a / 2), (2 * s, 2 * s + a), (1 - s - a / 2, 1 - s + a / 2))


def test_formula_terms():
    res = C.capacity_series(None, 2, C.FORMULA)
    assert abs(to_float(res.terms[0]) - TERM1) < 1e-5
    assert abs(to_float(res.terms[0]) - TERM1) < 1e-15
    assert nv_compare(res.terms[1], Fraction(1, 10**15)) <= 0
    assert res.verdict
    assert nv_compare(res.S, Fraction(1, 4)) < 0


def test_actual_census_sum():
    res = C.capacity_series(None, 2, C.ACTUAL)
    assert abs(to_float(res.S) - ACTUAL_S) < 1e-5
    assert abs(to_float(res.bound) - 0.0630) < 1e-4
    assert math.isclose(to_float(res.bound), ACTUAL_BOUND, rel_tol=1e-9)
    assert res.verdict


def test_actual_k1_by_hand():
    # three gaps of length a_1 = 1/4001: 3 / log(2 / (a_1/4)) = 3 / log(32008)
    res = C.capacity_series(None, 1, C.ACTUAL)
    assert math.isclose(to_float(res.terms[0]), 3 / math.log(32008), rel_tol=1e-12)


def test_unknown_mode():
    with pytest.raises(ValueError):
        C.capacity_series(None, 1, "guess")


def test_subadditive_bound_single_interval():
    # one piece: 2 exp(-log(2/cap)) = cap exactly
    bound, S = C.subadditive_capacity_bound([(1, Fraction(1, 10))])
    assert math.isclose(to_float(bound), 1 / 40, rel_tol=1e-12)


def test_interval_set_validation():
    with pytest.raises(C.IntervalError):
        C.IntervalSet(((0, 2), (1, 3)))
    with pytest.raises(C.IntervalError):
        C.IntervalSet(((1, 1),))


@pytest.mark.parametrize("iv,want,tol", [
    ([(0, 1)], 0.25, 0.005),
    ([(0, 1e-3)], 2.5e-4, 0.005),
    ([(-1, 1)], 0.5, 0.005),
])
def test_equilibrium_single_interval(iv, want, tol):
    assert abs(C.equilibrium_capacity(iv, 512) - want) <= tol * want


def test_equilibrium_two_intervals_elliptic():
    # cap([-1,-k] U [k,1]) = sqrt(1 - k^2)/2 for this symmetric pair
    k = 0.2
    got = C.equilibrium_capacity([(-1, -k), (k, 1)], 1024)
    assert abs(got - math.sqrt(1 - k * k) / 2) < 0.005 * got


def test_equilibrium_below_subadditive_bound():
    iv = C.removed_intervals(param_table(2), 1)[0].intervals
    est = C.equilibrium_capacity(iv, 512)
    bound, _ = C.subadditive_capacity_bound(C.IntervalSet(iv))
    assert est <= to_float(bound)


def families():
    def build(xs):
        xs = sorted(xs)
        return [(xs[i], xs[i + 1]) for i in range(0, len(xs) - 1, 2)]
    pts = st.lists(st.floats(0, 1), min_size=2, max_size=8, unique=True)
    return pts.map(build).filter(
        lambda iv: all(b - a > 1e-3 for a, b in iv)
        and all(c - b > 1e-3 for (_, b), (c, _) in zip(iv, iv[1:])))


@given(families(), st.floats(0.1, 10), st.floats(-5, 5))
@settings(max_examples=100, deadline=None)
def test_equilibrium_monotone_and_scaling(iv, lam, shift):
    base = C.equilibrium_capacity(iv, 256)
    grown = iv[:-1] + [(iv[-1][0], iv[-1][1] + 0.5)]
    assert C.equilibrium_capacity(grown, 256) >= base * (1 - 1e-3)
    moved = [(lam * a + shift, lam * b + shift) for a, b in iv]
    assert math.isclose(C.equilibrium_capacity(moved, 256), lam * base, rel_tol=1e-6)
    assert base <= C.equilibrium_capacity([(iv[0][0], iv[-1][1])], 256) * (1 + 1e-3)


def test_verify_capacity():
    checks = C.verify_capacity(2)
    assert all(c.status == PASS for c in checks)
    assert len({c.id for c in checks}) == len(checks)


def test_log_panel_kernels_agree():
    from rigidcircle import _kernels
    rng = np.random.default_rng(0)
    e = np.sort(rng.uniform(0, 1, 65))
    x = (e[:-1] + e[1:]) / 2
    mats = [impl(x, e[:-1], e[1:]) for impl in _kernels.IMPLEMENTATIONS["log_panel_matrix"].values()]
    for m in mats[1:]:
        assert np.allclose(m, mats[0], rtol=1e-13, atol=1e-15)
    # diagonal entry against direct quadrature of log|x - y|
    from scipy.integrate import quad
    i = 10
    want = quad(lambda y: math.log(abs(x[i] - y)), e[i], e[i + 1], points=[x[i]])[0]
    assert math.isclose(mats[0][i, i], want, rel_tol=1e-9)
