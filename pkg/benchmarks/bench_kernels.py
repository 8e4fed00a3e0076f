#!/usr/bin/env python3
"""Benchmark: compiled term-op kernels vs the pure-Python twins.

Micro level: the raw kernel functions on representative inputs (the
dense inner loops of series products, polynomial recursion steps and big
evaluations).  Macro level: an end-to-end polynomial build run in a
subprocess with TIGHTWP_PURE_PY=1 forcing the fallback.

Run:  python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import os
import random
import subprocess
import sys
import time

from tightwp import _termops_py as pure
from tightwp.ring import Rational

try:
    from tightwp import _termops_cy as comp
except ImportError:
    comp = None


def make_pipoly_pair(rng, size):
    a = {e: Rational(rng.randint(-99, 99), rng.randint(1, 99))
         for e in rng.sample(range(size * 2), size)}
    b = {e: Rational(rng.randint(-99, 99), rng.randint(1, 99))
         for e in rng.sample(range(size * 2), size)}
    return a, b


def make_tp_pair(rng, width, size):
    def one():
        out = {}
        while len(out) < size:
            key = tuple(rng.randint(0, 3) for _ in range(width))
            out[key] = Rational(rng.randint(-99, 99), rng.randint(1, 99))
        return out
    return one(), one()


def time_call(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def micro(quick=False):
    rng = random.Random(20240601)
    rows = []
    conv_size = 60 if quick else 160
    a, b = make_pipoly_pair(rng, conv_size)
    rows.append(("conv_dicts (PiPoly product, "
                 f"{conv_size}x{conv_size} terms)",
                 time_call(pure.conv_dicts, a, b),
                 time_call(comp.conv_dicts, a, b) if comp else None))
    tp_size = 120 if quick else 400
    c, d = make_tp_pair(rng, 6, tp_size)
    rows.append((f"tp_mul (sparse poly product, {tp_size}x{tp_size})",
                 time_call(pure.tp_mul, c, d),
                 time_call(comp.tp_mul, c, d) if comp else None))
    rows.append(("tp_dm (derivative)",
                 time_call(pure.tp_dm, c, 3, Rational(1), repeat=20),
                 time_call(comp.tp_dm, c, 3, Rational(1), repeat=20)
                 if comp else None))
    rows.append(("add_dicts (term merge)",
                 time_call(pure.add_dicts, c, d, repeat=20),
                 time_call(comp.add_dicts, c, d, repeat=20)
                 if comp else None))
    import mpmath

    items = [(k, mpmath.mpf(str(v))) for k, v in c.items()]
    pows = [[mpmath.mpf(1 + i) ** e for e in range(4)] for i in range(6)]
    rows.append(("tp_eval (numeric evaluation)",
                 time_call(pure.tp_eval, items, pows, repeat=20),
                 time_call(comp.tp_eval, items, pows, repeat=20)
                 if comp else None))
    return rows


MACRO_SNIPPET = r"""
import time
from tightwp import kernels, tightpoly, moments
t0 = time.perf_counter()
tightpoly.p_gn({g}, {n})
build = time.perf_counter() - t0
t0 = time.perf_counter()
moments.volume_extract(2, 0, {pmax})
extract = time.perf_counter() - t0
print(kernels.BACKEND, build, extract)
"""


def macro(quick=False):
    g, n = (4, 2) if quick else (6, 2)
    pmax = 40 if quick else 80
    out = {}
    for env_flag in ("0", "1"):
        env = dict(os.environ)
        if env_flag == "1":
            env["TIGHTWP_PURE_PY"] = "1"
        else:
            env.pop("TIGHTWP_PURE_PY", None)
        best = None
        for _ in range(2):
            res = subprocess.run(
                [sys.executable, "-c", MACRO_SNIPPET.format(g=g, n=n,
                                                            pmax=pmax)],
                capture_output=True, text=True, env=env, check=True)
            backend, build, extract = res.stdout.split()
            trial = (float(build), float(extract))
            if best is None:
                best = trial
            else:
                best = (min(best[0], trial[0]), min(best[1], trial[1]))
        out[backend] = best
    return g, n, pmax, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args()

    print("== micro benchmarks (best of N) ==")
    print(f"{'kernel':52s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    for name, t_py, t_cy in micro(args.quick):
        if t_cy is None:
            print(f"{name:52s} {t_py * 1e3:9.2f}ms {'n/a':>10s}")
        else:
            print(f"{name:52s} {t_py * 1e3:9.2f}ms {t_cy * 1e3:9.2f}ms "
                  f"{t_py / t_cy:7.2f}x")

    print()
    print("== macro benchmark (fresh subprocess per backend) ==")
    g, n, pmax, out = macro(args.quick)
    if "cython" not in out:
        print("compiled backend unavailable; skipping comparison")
        return
    for backend in ("python", "cython"):
        b, e = out[backend]
        print(f"{backend:8s}  build P_({g},{n}): {b:6.2f}s   "
              f"volume series to order {pmax}: {e:6.2f}s")
    b_py, e_py = out["python"]
    b_cy, e_cy = out["cython"]
    print(f"speedup   build: {b_py / b_cy:.2f}x   series: {e_py / e_cy:.2f}x")


if __name__ == "__main__":
    main()
