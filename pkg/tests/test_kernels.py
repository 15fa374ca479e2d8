import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from rigidcircle import _kernels as K

BACKENDS = sorted(K.IMPLEMENTATIONS["winding"])


def test_every_kernel_has_both_bodies():
    for name, impls in K.IMPLEMENTATIONS.items():
        assert "numpy" in impls, name
        if K.HAVE_NUMBA:
            assert "numba" in impls, name


@pytest.mark.parametrize("value,backend", [("1", "numpy"), ("true", "numpy"), ("", None)])
def test_env_flag_selects_backend(value, backend):
    env = dict(os.environ, RIGIDCIRCLE_DISABLE_NUMBA=value)
    out = subprocess.run([sys.executable, "-c", "from rigidcircle import _kernels as K; print(K.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True).stdout.strip()
    expected = backend or ("numba" if K.HAVE_NUMBA else "numpy")
    assert out == expected


finite = st.floats(-100, 100, allow_nan=False, allow_infinity=False)


@given(arrays(np.float64, st.integers(3, 30), elements=finite),
       arrays(np.float64, st.integers(3, 30), elements=finite), finite, finite)
@settings(max_examples=150, deadline=None)
def test_winding_backends_agree(xs, ys, px, py):
    n = min(len(xs), len(ys))
    xs, ys = np.ascontiguousarray(xs[:n]), np.ascontiguousarray(ys[:n])
    results = [K.IMPLEMENTATIONS["winding"][b](px, py, xs, ys) for b in BACKENDS]
    for wn, d in results[1:]:
        assert wn == results[0][0]
        assert np.isclose(d, results[0][1], rtol=1e-12, atol=1e-12)


@given(st.integers(1, 60), st.integers(0, 2**32 - 1), st.floats(0, 0.2))
@settings(max_examples=80, deadline=None)
def test_box_pairs_backends_agree_with_brute_force(n, seed, margin):
    rng = np.random.default_rng(seed)
    x0, y0 = rng.uniform(0, 5, n), rng.uniform(0, 5, n)
    x1, y1 = x0 + rng.uniform(0, 1, n), y0 + rng.uniform(0, 1, n)
    brute = sorted((i, j) for i in range(n) for j in range(i + 1, n)
                   if x0[i] <= x1[j] + margin and x0[j] <= x1[i] + margin
                   and y0[i] <= y1[j] + margin and y0[j] <= y1[i] + margin)
    for b in BACKENDS:
        got = [tuple(p) for p in K.IMPLEMENTATIONS["box_pairs"][b](x0, y0, x1, y1, margin)]
        assert got == brute


def test_public_wrappers_coerce_inputs():
    wn, d = K.winding(0, 0, [1, -1, -1, 1], [1, 1, -1, -1])
    assert (wn, d) == (1, 1.0)
    assert list(K.cover_counts([0], [0], [1], [0, 2], [0, 0])) == [1, 0]
    assert K.ring_containment_failures([0.0], [1.0], [0.1]) == 0
    K.warmup()
