"""Floating-point hot loops, compiled with numba when available.

Every kernel has a numba ``@njit`` body and a pure-numpy body with the same
signature.  The numpy path is used when numba is missing or when the
environment variable ``RIGIDCIRCLE_DISABLE_NUMBA`` is set to a true value
(``1``, ``true``, ``yes``).  ``IMPLEMENTATIONS`` exposes both for tests and
benchmarks.
"""

from __future__ import annotations

import os

import numpy as np

ENV_FLAG = "RIGIDCIRCLE_DISABLE_NUMBA"


def _disabled() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() in ("1", "true", "yes", "on")


try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _disabled()


# ---------------------------------------------------------------- numpy bodies


def _np_winding(px, py, xs, ys):
    """Winding number of the closed polyline ``(xs, ys)`` about ``(px, py)``
    and the minimum distance from the point to the polyline."""
    x0, y0 = xs, ys
    x1, y1 = np.roll(xs, -1), np.roll(ys, -1)
    left = (x1 - x0) * (py - y0) - (px - x0) * (y1 - y0)
    up = (y0 <= py) & (y1 > py) & (left > 0)
    down = (y0 > py) & (y1 <= py) & (left < 0)
    wn = int(np.count_nonzero(up)) - int(np.count_nonzero(down))
    dx, dy = x1 - x0, y1 - y0
    L2 = dx * dx + dy * dy
    with np.errstate(invalid="ignore", divide="ignore"):
        u = np.where(L2 > 0, ((px - x0) * dx + (py - y0) * dy) / L2, 0.0)
    u = np.clip(u, 0.0, 1.0)
    qx, qy = x0 + u * dx - px, y0 + u * dy - py
    return wn, float(np.sqrt(np.min(qx * qx + qy * qy)))


def _np_cover_counts(cx, cy, R, sx, sy, tol):
    """For each sample point, the number of closed disks (centres ``cx, cy``,
    radii ``R``) containing it, with absolute slack ``tol``."""
    out = np.zeros(len(sx), dtype=np.int64)
    chunk = max(1, 2_000_000 // max(1, len(cx)))
    for i in range(0, len(sx), chunk):
        dx = sx[i:i + chunk, None] - cx[None, :]
        dy = sy[i:i + chunk, None] - cy[None, :]
        inside = dx * dx + dy * dy <= (R[None, :] + tol) ** 2
        out[i:i + chunk] = inside.sum(axis=1)
    return out


def _np_ring_containment(t, r, d):
    """Count parameter triples violating ``|centre - corner| < 4 r`` for the
    six-disk ring around a rectangle of half-size ``(t, r)``.

    Rectangle centred at the origin; ring disks sit at ``x = -+(2t + r)`` and
    heights ``0, +-(2r + d)``; corners at ``(+-t, +-r)``.
    """
    off = 2 * t + r
    step = 2 * r + d
    lim = 16 * r * r
    bad = np.zeros(len(t), dtype=bool)
    for sx in (-1.0, 1.0):
        for k in (-1.0, 0.0, 1.0):
            for qx in (-1.0, 1.0):
                for qy in (-1.0, 1.0):
                    ddx = sx * off - qx * t
                    ddy = k * step - qy * r
                    bad |= ddx * ddx + ddy * ddy >= lim
    return int(np.count_nonzero(bad))


def _np_log_panel_matrix(x, a, b):
    """``M[i, j] = integral over [a_j, b_j] of log|x_i - y| dy``."""
    def G(u):
        au = np.abs(u)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = np.where(au > 0, u * np.log(au), 0.0)
        return v - u
    X = x[:, None]
    return G(X - a[None, :]) - G(X - b[None, :])


def _np_invert_points(cx, cy, R, px, py):
    """Inversion of many points in one circle; centre maps to ``inf``."""
    dx, dy = px - cx, py - cy
    d2 = dx * dx + dy * dy
    with np.errstate(divide="ignore", invalid="ignore"):
        f = np.where(d2 > 0, R * R / d2, np.inf)
        ox = np.where(d2 > 0, cx + f * dx, np.inf)
        oy = np.where(d2 > 0, cy + f * dy, 0.0)
    return ox, oy


def _np_box_pairs(x0, y0, x1, y1, margin):
    """Index pairs ``i < j`` whose boxes, grown by ``margin``, intersect."""
    n = len(x0)
    pi, pj = [], []
    chunk = max(1, 4_000_000 // max(1, n))
    for s in range(0, n, chunk):
        i = np.arange(s, min(n, s + chunk))[:, None]
        j = np.arange(n)[None, :]
        hit = ((x0[i] <= x1[None, :] + margin) & (x0[None, :] <= x1[i] + margin)
               & (y0[i] <= y1[None, :] + margin) & (y0[None, :] <= y1[i] + margin)
               & (j > i))
        a, b = np.nonzero(hit)
        pi.append(a + s)
        pj.append(b)
    if not pi:
        return np.zeros((0, 2), dtype=np.int64)
    return np.stack([np.concatenate(pi), np.concatenate(pj)], axis=1).astype(np.int64)


# ---------------------------------------------------------------- numba bodies

if HAVE_NUMBA:

    @njit(cache=True)
    def _nb_winding(px, py, xs, ys):
        n = len(xs)
        wn = 0
        best = np.inf
        for i in range(n):
            x0, y0 = xs[i], ys[i]
            j = i + 1 if i + 1 < n else 0
            x1, y1 = xs[j], ys[j]
            left = (x1 - x0) * (py - y0) - (px - x0) * (y1 - y0)
            if y0 <= py:
                if y1 > py and left > 0:
                    wn += 1
            elif y1 <= py and left < 0:
                wn -= 1
            dx, dy = x1 - x0, y1 - y0
            L2 = dx * dx + dy * dy
            u = 0.0
            if L2 > 0:
                u = ((px - x0) * dx + (py - y0) * dy) / L2
                if u < 0.0:
                    u = 0.0
                elif u > 1.0:
                    u = 1.0
            qx, qy = x0 + u * dx - px, y0 + u * dy - py
            d = qx * qx + qy * qy
            best = min(best, d)
        return wn, np.sqrt(best)

    @njit(cache=True)
    def _nb_cover_counts(cx, cy, R, sx, sy, tol):
        out = np.zeros(len(sx), dtype=np.int64)
        for i in range(len(sx)):
            c = 0
            for j in range(len(cx)):
                dx, dy = sx[i] - cx[j], sy[i] - cy[j]
                rr = R[j] + tol
                if dx * dx + dy * dy <= rr * rr:
                    c += 1
            out[i] = c
        return out

    @njit(cache=True)
    def _nb_ring_containment(t, r, d):
        bad = 0
        for i in range(len(t)):
            off = 2 * t[i] + r[i]
            step = 2 * r[i] + d[i]
            lim = 16 * r[i] * r[i]
            fail = False
            for sx in (-1.0, 1.0):
                for k in (-1.0, 0.0, 1.0):
                    for qx in (-1.0, 1.0):
                        for qy in (-1.0, 1.0):
                            ddx = sx * off - qx * t[i]
                            ddy = k * step - qy * r[i]
                            if ddx * ddx + ddy * ddy >= lim:
                                fail = True
            if fail:
                bad += 1
        return bad

    @njit(cache=True)
    def _nb_G(u):
        if u == 0.0:
            return 0.0
        return u * np.log(abs(u)) - u

    @njit(cache=True)
    def _nb_log_panel_matrix(x, a, b):
        n, m = len(x), len(a)
        M = np.empty((n, m))
        for i in range(n):
            for j in range(m):
                M[i, j] = _nb_G(x[i] - a[j]) - _nb_G(x[i] - b[j])
        return M

    @njit(cache=True)
    def _nb_invert_points(cx, cy, R, px, py):
        n = len(px)
        ox, oy = np.empty(n), np.empty(n)
        for i in range(n):
            dx, dy = px[i] - cx, py[i] - cy
            d2 = dx * dx + dy * dy
            if d2 > 0:
                f = R * R / d2
                ox[i], oy[i] = cx + f * dx, cy + f * dy
            else:
                ox[i], oy[i] = np.inf, 0.0
        return ox, oy

    @njit(cache=True)
    def _nb_box_pairs(x0, y0, x1, y1, margin):
        n = len(x0)
        order = np.argsort(x0)
        cap = 16
        out = np.empty((cap, 2), dtype=np.int64)
        cnt = 0
        for a in range(n):
            i = order[a]
            for b in range(a + 1, n):
                j = order[b]
                if x0[j] > x1[i] + margin:
                    break
                if y0[i] <= y1[j] + margin and y0[j] <= y1[i] + margin:
                    if cnt == cap:
                        cap *= 2
                        grown = np.empty((cap, 2), dtype=np.int64)
                        grown[:cnt] = out[:cnt]
                        out = grown
                    out[cnt, 0] = min(i, j)
                    out[cnt, 1] = max(i, j)
                    cnt += 1
        return out[:cnt]


def _pairs_sorted(p):
    p = np.asarray(p, dtype=np.int64).reshape(-1, 2)
    if len(p):
        p = p[np.lexsort((p[:, 1], p[:, 0]))]
    return p


IMPLEMENTATIONS = {
    "winding": {"numpy": _np_winding},
    "cover_counts": {"numpy": _np_cover_counts},
    "ring_containment": {"numpy": _np_ring_containment},
    "log_panel_matrix": {"numpy": _np_log_panel_matrix},
    "invert_points": {"numpy": _np_invert_points},
    "box_pairs": {"numpy": lambda *a: _pairs_sorted(_np_box_pairs(*a))},
}
if HAVE_NUMBA:
    IMPLEMENTATIONS["winding"]["numba"] = _nb_winding
    IMPLEMENTATIONS["cover_counts"]["numba"] = _nb_cover_counts
    IMPLEMENTATIONS["ring_containment"]["numba"] = _nb_ring_containment
    IMPLEMENTATIONS["log_panel_matrix"]["numba"] = _nb_log_panel_matrix
    IMPLEMENTATIONS["invert_points"]["numba"] = _nb_invert_points
    IMPLEMENTATIONS["box_pairs"]["numba"] = lambda *a: _pairs_sorted(_nb_box_pairs(*a))

BACKEND = "numba" if USE_NUMBA else "numpy"


def _f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def _impl(name):
    return IMPLEMENTATIONS[name][BACKEND]


def winding(px: float, py: float, xs, ys) -> tuple[int, float]:
    wn, d = _impl("winding")(float(px), float(py), _f64(xs), _f64(ys))
    return int(wn), float(d)


def cover_counts(cx, cy, R, sx, sy, tol: float = 0.0):
    return _impl("cover_counts")(_f64(cx), _f64(cy), _f64(R), _f64(sx), _f64(sy), float(tol))


def ring_containment_failures(t, r, d) -> int:
    return int(_impl("ring_containment")(_f64(t), _f64(r), _f64(d)))


def log_panel_matrix(x, a, b):
    return _impl("log_panel_matrix")(_f64(x), _f64(a), _f64(b))


def invert_points(cx: float, cy: float, R: float, px, py):
    return _impl("invert_points")(float(cx), float(cy), float(R), _f64(px), _f64(py))


def box_pairs(x0, y0, x1, y1, margin: float = 0.0):
    return _impl("box_pairs")(_f64(x0), _f64(y0), _f64(x1), _f64(y1), float(margin))


def warmup():
    """Compile every numba kernel on tiny inputs (no-op on the numpy path)."""
    one = np.ones(3)
    winding(0.0, 0.0, one, one)
    cover_counts(one, one, one, one, one)
    ring_containment_failures(one, one, one)
    log_panel_matrix(one, one - 1, one)
    invert_points(0.0, 0.0, 1.0, one, one)
    box_pairs(one, one, one, one)
