#!/usr/bin/env python3
"""Benchmark the compiled tracking kernel against the pure-Python twin.

Times single-piece transport (segment and detour-circle, with and without
the cycle integral) and the full big-loop monodromy pipeline under each
backend. Run after `pip install -e .`:

    python benchmarks/bench_kernel.py [--repeat N]
"""

import argparse
import math
import time
from fractions import Fraction as F

from ovalmono import _core_py, kernel
from ovalmono.areafunc import monodromy_shift
from ovalmono.curve import (DirectionFrame, DomainSpec, critical_values,
                            fiber_roots, rotated_poly)
from ovalmono.poly import BivariatePoly


def circle_case():
    f = BivariatePoly([(2, 0, 1), (0, 2, 1), (0, 0, -1)])
    return DomainSpec(f, (F(0), F(0))), DirectionFrame(F(1), F(0))


def quartic_case():
    f = BivariatePoly([(0, 2, 1), (4, 0, 1), (2, 0, -2), (0, 0, F(-1, 4))])
    return DomainSpec(f, (F(1), F(0))), DirectionFrame(F(1), F(8))


def bench_piece(impl, C, kind, params, ys, cyc, repeat):
    kwargs = dict(rtol=1e-12, max_newton=12, h0=0.05, hmin=1e-11, hmax=0.2,
                  cyc_a=cyc[0], cyc_b=cyc[1], record=False)
    t0 = time.perf_counter()
    for _ in range(repeat):
        out = impl.track_piece(C, kind, *params, ys, **kwargs)
        assert out[4] == 0
    return (time.perf_counter() - t0) / repeat, out[3]


def piece_benchmarks(repeat):
    dom, fr = quartic_case()
    g = rotated_poly(dom.f, fr)
    C_np = g.coeff_matrix()
    C_list = [list(row) for row in C_np]
    cases = [
        ("segment, 4 roots", kernel.SEGMENT,
         (-9.5 + 0j, 9.5 + 1.5j, 0j, 0.0, 0.0, 0.0), -9.5, (-1, -1)),
        ("segment + integral", kernel.SEGMENT,
         (-9.5 + 0j, 9.5 + 1.5j, 0j, 0.0, 0.0, 0.0), -9.5, (0, 1)),
        ("detour circle", kernel.ARC,
         (0j, 0j, -7.962378787 + 0j, 0.25, 0.0, 2 * math.pi), -7.712378787,
         (-1, -1)),
        ("detour circle + integral", kernel.ARC,
         (0j, 0j, -7.962378787 + 0j, 0.25, 0.0, 2 * math.pi), -7.712378787,
         (0, 1)),
    ]
    print(f"{'piece':28s} {'steps':>6s} {'pure':>10s} {'compiled':>10s} "
          f"{'speedup':>8s}")
    for name, kind, params, t_start, cyc in cases:
        ys = list(fiber_roots(dom.f, fr, t_start).roots)
        t_pure, steps = bench_piece(_core_py, C_list, kind, params, ys, cyc,
                                    max(1, repeat // 4))
        if kernel.HAVE_COMPILED:
            from ovalmono import _core
            t_comp, _ = bench_piece(_core, C_np, kind, params, ys, cyc,
                                    repeat)
            print(f"{name:28s} {steps:6d} {t_pure * 1e3:9.2f}ms "
                  f"{t_comp * 1e3:9.2f}ms {t_pure / t_comp:7.1f}x")
        else:
            print(f"{name:28s} {steps:6d} {t_pure * 1e3:9.2f}ms "
                  f"{'n/a':>10s} {'':>8s}")


def pipeline_benchmark(repeat):
    print()
    print("full pipeline: big-loop monodromy, k=3")
    for name, (dom, fr) in (("circle", circle_case()),
                            ("quartic", quartic_case())):
        cd = critical_values(dom, fr)
        for backend, impl in (("pure", _core_py),) + (
                (("compiled", None),) if kernel.HAVE_COMPILED else ()):
            if impl is None:
                from ovalmono import _core as impl
            saved = kernel._impl
            kernel._impl = impl
            try:
                t0 = time.perf_counter()
                n = max(1, repeat // 8)
                for _ in range(n):
                    values, _, _ = monodromy_shift(dom, fr, cd, 3)
                dt = (time.perf_counter() - t0) / n
            finally:
                kernel._impl = saved
            print(f"   {name:8s} {backend:9s} {dt * 1e3:9.1f}ms "
                  f"(V_3 = {values[3].real:.6f})")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    print(f"compiled kernel available: {kernel.HAVE_COMPILED}")
    piece_benchmarks(args.repeat)
    pipeline_benchmark(args.repeat)


if __name__ == "__main__":
    main()
