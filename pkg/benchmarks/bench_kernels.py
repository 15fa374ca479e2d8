"""Time every kernel on its numba and numpy bodies.

    python benchmarks/bench_kernels.py [--repeat 5] [--scale 1.0]

Each kernel runs once untimed (numba compiles on first call), then the best
of ``--repeat`` runs is reported.  Results of the two bodies are compared so
a speedup never hides a disagreement.
"""

import argparse
import time

import numpy as np

from rigidcircle._kernels import HAVE_NUMBA, IMPLEMENTATIONS


def cases(scale, rng):
    n = int(200_000 * scale)
    th = np.linspace(0, 2 * np.pi, int(20_000 * scale), endpoint=False)
    poly = (np.cos(th), np.sin(th))
    t, r = rng.uniform(0, 1e-3, n), rng.uniform(0.1, 1, n)
    d = r * 0.5 * rng.uniform(0, 1, n) ** 2
    cx, cy = rng.uniform(-1, 1, 200), rng.uniform(-1, 1, 200)
    sx, sy = rng.uniform(-1, 1, int(20_000 * scale)), rng.uniform(-1, 1, int(20_000 * scale))
    m = int(2000 * scale)
    edges = np.sort(rng.uniform(0, 1, m + 1))
    bx, by = rng.uniform(0, 100, int(5000 * scale)), rng.uniform(0, 100, int(5000 * scale))
    return {
        "winding": (0.1, 0.2, *poly),
        "cover_counts": (cx, cy, np.full(200, 0.1), sx, sy, 0.0),
        "ring_containment": (t * d / d.max() / 100, r, d),
        "log_panel_matrix": ((edges[:-1] + edges[1:]) / 2, edges[:-1], edges[1:]),
        "invert_points": (0.0, 0.0, 1.0, rng.normal(size=n), rng.normal(size=n)),
        "box_pairs": (bx, by, bx + 0.5, by + 0.5, 0.0),
    }


def best_of(fn, args, repeat):
    fn(*args)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), out


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.allclose(np.asarray(a, float), np.asarray(b, float), rtol=1e-12, atol=1e-12)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--scale", type=float, default=1.0)
    args = ap.parse_args()
    if not HAVE_NUMBA:
        print("numba is not installed; only the numpy bodies can run")
    rng = np.random.default_rng(1)
    print(f"{'kernel':<18}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}  agree")
    for name, kargs in cases(args.scale, rng).items():
        impl = IMPLEMENTATIONS[name]
        t_np, out_np = best_of(impl["numpy"], kargs, args.repeat)
        if "numba" in impl:
            t_nb, out_nb = best_of(impl["numba"], kargs, args.repeat)
            print(f"{name:<18}{t_np * 1e3:>12.2f}{t_nb * 1e3:>12.2f}{t_np / t_nb:>10.1f}  "
                  f"{same(out_np, out_nb)}")
        else:
            print(f"{name:<18}{t_np * 1e3:>12.2f}{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()
