"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--points 400] [--steps 4096] [--repeat 3]

Both paths run in the same process; the numpy path is forced with
``use_numba=False`` (monodromy) or by toggling the backend flag (Sturm
bisection), which is what ``PTMATHIEU_DISABLE_NUMBA=1`` does globally.
"""

import argparse
import time

import numpy as np

from ptmathieu import _accel
from ptmathieu.floquet import monodromy_batch
from ptmathieu.hill import build_hill_matrix, symmetrize, tridiagonal_eigenvalues


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_monodromy(points, steps, repeat):
    rng = np.random.default_rng(0)
    a = rng.uniform(-0.1, 0.5, points)
    eps = rng.uniform(0.0, 0.3, points)
    beta = rng.uniform(0.0, 1.0, points)
    monodromy_batch(a[:2], eps[:2], beta[:2], steps, use_numba=True)  # compile or load cache
    m_nb, _ = monodromy_batch(a, eps, beta, steps, use_numba=True)
    m_np, _ = monodromy_batch(a, eps, beta, steps, use_numba=False)
    t_nb = best_of(lambda: monodromy_batch(a, eps, beta, steps, use_numba=True), repeat)
    t_np = best_of(lambda: monodromy_batch(a, eps, beta, steps, use_numba=False), repeat)
    return t_nb, t_np, float(np.max(np.abs(m_nb - m_np)))


def bench_sturm(N, count, repeat):
    T = symmetrize(build_hill_matrix(0.5, 0.3, 0.5, N))
    saved = _accel.USE_NUMBA
    try:
        _accel.USE_NUMBA = True
        tridiagonal_eigenvalues(T, count)
        ev_nb = tridiagonal_eigenvalues(T, count)
        t_nb = best_of(lambda: tridiagonal_eigenvalues(T, count), repeat)
        _accel.USE_NUMBA = False
        ev_np = tridiagonal_eigenvalues(T, count)
        t_np = best_of(lambda: tridiagonal_eigenvalues(T, count), repeat)
    finally:
        _accel.USE_NUMBA = saved
    return t_nb, t_np, float(np.max(np.abs(ev_nb - ev_np)))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=400)
    ap.add_argument("--steps", type=int, default=4096)
    ap.add_argument("--trunc", type=int, default=32)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _accel.numba is None:
        raise SystemExit("numba is not importable; nothing to compare")

    t_nb, t_np, diff = bench_monodromy(args.points, args.steps, args.repeat)
    print(f"monodromy  {args.points} points x {args.steps} steps")
    print(f"  numba  {t_nb * 1e3:9.1f} ms  ({t_nb / args.points * 1e3:.3f} ms/point)")
    print(f"  numpy  {t_np * 1e3:9.1f} ms  ({t_np / args.points * 1e3:.3f} ms/point)")
    print(f"  speedup {t_np / t_nb:.1f}x, max |dM| {diff:.1e}")

    t_nb, t_np, diff = bench_sturm(args.trunc, 3, args.repeat * 10)
    print(f"sturm bisection  N={args.trunc}, lowest 3")
    print(f"  numba  {t_nb * 1e6:9.1f} us")
    print(f"  numpy  {t_np * 1e6:9.1f} us")
    print(f"  speedup {t_np / t_nb:.1f}x, max |d lambda| {diff:.1e}")


if __name__ == "__main__":
    main()
