import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigidcircle import _kernels
from rigidcircle import neighbors as NB
from rigidcircle.report import PASS
from rigidcircle.scene import Word

r1 = Fraction(1000, 4001)
d1 = Fraction(1, 4001)
t1 = Fraction(1, 400100)


@pytest.mark.parametrize("n,N,cls", [
    (1, 2, NB.BOTTOM), (2, 2, NB.TOP),
    (1, 8, NB.BOTTOM), (4, 8, NB.TOP), (5, 8, NB.BOTTOM), (8, 8, NB.TOP),
    (2, 8, NB.MIDDLE), (3, 8, NB.MIDDLE), (6, 8, NB.MIDDLE), (7, 8, NB.MIDDLE),
])
def test_classify(n, N, cls):
    assert NB.classify(n, N) == cls


def test_classify_rejects_bad_index():
    with pytest.raises(ValueError):
        NB.classify(3, 2)
    with pytest.raises(ValueError):
        NB.classify(1, 3)


def test_rings_at_depth1(exact1):
    for w in exact1.level(1):
        ring = NB.neighbor_ring(exact1, w)
        assert len(ring.disks) == 4
        assert len(set(ring.ids)) == 4
        side = w.m[0]
        assert ring.ids == [f"{side}1:Ri", f"{side}2:Ri", f"{side}2:Le", f"{side}1:Le"]


def test_worst_corner_distance_frozen(exact1):
    # farthest pair for Le1: corner (-2 - t, 0) and the Le2:Ri centre
    # (-2 + 2t + r, 3r + delta); worked out by hand
    want = (3 * t1 + r1) ** 2 + (3 * r1 + d1) ** 2
    c = NB.check_containment(exact1, Word.parse("Le1"))
    assert c.status == PASS
    assert c.values["worst_d2"] == want
    assert round(math.sqrt(want), 6) == 0.790611
    assert c.values["limit_d2"] == 16 * r1 * r1


def test_all_ring_checks_pass(exact1):
    checks = NB.verify_neighbors(exact1, synthetic=10_000)
    assert len(checks) == 13
    assert all(c.status == PASS for c in checks)


def test_ring_gaps_exact(exact1):
    gaps = NB.ring_gaps(exact1, Word.parse("Ri1"))
    kinds = sorted(g[3] for g in gaps)
    assert kinds == ["horizontal", "horizontal", "vertical", "vertical"]
    for _, _, gap, kind in gaps:
        assert gap == (d1 if kind == "vertical" else 4 * t1)


def test_synthetic_million():
    c = NB.synthetic_containment(10**6)
    assert c.status == PASS and c.values["failures"] == 0


def test_literal_unit_gap_ratio_fails():
    # allowing delta up to r (not r/2) breaks the 4r containment for some triples
    c = NB.synthetic_containment(100_000, max_gap_ratio=1.0)
    assert c.values["failures"] > 0


@given(st.floats(1e-8, 1.0), st.floats(0, 0.5), st.floats(0, 1))
@settings(max_examples=200)
def test_containment_property(r, gap, u):
    d = r * gap
    t = d * u / 100
    arr = [np.array([v]) for v in (t, r, d)]
    for impl in _kernels.IMPLEMENTATIONS["ring_containment"].values():
        assert impl(*arr) == 0
