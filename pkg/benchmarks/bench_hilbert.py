#!/usr/bin/env python
"""Benchmark the Hilbert-distance chord kernels: numba JIT vs the pure-numpy
fallback (the path selected by CUSPBEND_NO_NUMBA=1), plus the generic
per-pair oracle route for scale.

Usage: python benchmarks/bench_hilbert.py [--pairs 20000] [--repeats 5]
"""

import argparse
import time

import numpy as np

from cuspbend import _hilbert_kernels as kernels
from cuspbend.cusp_models import CuspParameter, ModelDomain, leaf_point
from cuspbend.hilbert import ball_oracle, hilbert_distance, model_domain_oracle


def best_of(repeats, fn):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def ball_pairs(rng, pairs, n):
    x = rng.uniform(-0.55, 0.55, (pairs, n))
    y = rng.uniform(-0.55, 0.55, (pairs, n))
    return x, y


def model_pairs(rng, pairs, psi):
    dom = ModelDomain(psi)
    t = psi.type
    pts = []
    for _ in range(2 * pairs):
        c = rng.uniform(0.1, 2.0)
        coords = list(rng.uniform(0.4, 2.0, t)) + \
            list(rng.uniform(-1.0, 1.0, psi.n - 1 - t))
        pts.append(np.asarray(leaf_point(dom, c, coords).chart(), dtype=float))
    pts = np.array(pts)
    return pts[:pairs], pts[pairs:]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--pairs", type=int, default=20000)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--generic-pairs", type=int, default=200,
                    help="pairs for the per-pair oracle route (slow)")
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    print(f"numba available: {kernels._HAVE_NUMBA}, "
          f"disabled by env: {kernels.NUMBA_DISABLED}")
    rows = []

    x, y = ball_pairs(rng, args.pairs, 3)
    if kernels._HAVE_NUMBA:
        kernels.ball_distances(x[:2], y[:2], jit=True)      # compile outside timing
        t_jit = best_of(args.repeats, lambda: kernels.ball_distances(x, y, jit=True))
        rows.append(("ball n=3, numba", args.pairs, t_jit))
    t_np = best_of(args.repeats, lambda: kernels.ball_distances(x, y, jit=False))
    rows.append(("ball n=3, numpy", args.pairs, t_np))
    dom = ball_oracle(3)
    xg, yg = x[:args.generic_pairs], y[:args.generic_pairs]
    t_gen = best_of(1, lambda: [hilbert_distance(dom, a, b) for a, b in zip(xg, yg)])
    rows.append(("ball n=3, generic oracle", args.generic_pairs, t_gen))

    psi = CuspParameter([1.0, 0.0, 0.0])
    xm, ym = model_pairs(rng, args.pairs, psi)
    psi_arr = np.array([1.0])
    if kernels._HAVE_NUMBA:
        kernels.model_distances(xm[:2], ym[:2], psi_arr, 1, jit=True)
        t_jit = best_of(args.repeats,
                        lambda: kernels.model_distances(xm, ym, psi_arr, 1, jit=True))
        rows.append(("model psi=(1,0,0), numba", args.pairs, t_jit))
    t_np = best_of(args.repeats,
                   lambda: kernels.model_distances(xm, ym, psi_arr, 1, jit=False))
    rows.append(("model psi=(1,0,0), numpy", args.pairs, t_np))
    mdom = model_domain_oracle(psi)
    t_gen = best_of(1, lambda: [hilbert_distance(mdom, a, b)
                                for a, b in zip(xm[:args.generic_pairs],
                                                ym[:args.generic_pairs])])
    rows.append(("model psi=(1,0,0), generic oracle", args.generic_pairs, t_gen))

    if kernels._HAVE_NUMBA:
        dj = kernels.ball_distances(x, y, jit=True)
        dn = kernels.ball_distances(x, y, jit=False)
        print(f"jit/numpy agreement (ball): max abs diff = {np.max(np.abs(dj - dn)):.3e}")

    print(f"\n{'case':40s} {'pairs':>8s} {'best':>10s} {'per pair':>12s}")
    for name, pairs, seconds in rows:
        print(f"{name:40s} {pairs:8d} {seconds:9.4f}s {seconds / pairs * 1e6:10.2f}us")


if __name__ == "__main__":
    main()
