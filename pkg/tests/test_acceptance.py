"""Acceptance suite: one test per criterion, each printing a PASS line with
its measured quantities when it holds. Run with `pytest tests/test_acceptance.py -v -s`."""

import json
import math
import random
import time
from fractions import Fraction as F

import numpy as np
import pytest

from ovalmono.areafunc import (area_continue, area_direct, default_basepoint,
                               default_nu, general_big_loop, initial_germ,
                               monodromy_shift, single_loop, total_area)
from ovalmono.capvol import polynomial_fit_test
from ovalmono.cli import main as cli_main
from ovalmono.curve import critical_values
from ovalmono.cycles import assemble_lattice, germ_exponent_fit
from ovalmono.lattice import (GramLattice, group_order_by_enumeration,
                              gram_kernel, irreducible_components, is_finite)
from ovalmono.paths import Segment, enclosing_circle_loop, standard_loops
from ovalmono.tracking import FiberTracker, compose_permutations

from conftest import FIXTURES


def _report(num, text):
    print(f"\nACCEPTANCE {num}: PASS  {text}")


def test_criterion_1_circle_progression(circle_domain, circle_frame):
    t0 = time.perf_counter()
    cd = critical_values(circle_domain, circle_frame)
    values, _, _ = monodromy_shift(circle_domain, circle_frame, cd, 5)
    elapsed = time.perf_counter() - t0
    V0 = values[0].real
    worst = 0.0
    for i, v in enumerate(values):
        expected = V0 + 2 * math.pi * i
        rel = abs(v - expected) / abs(expected)
        worst = max(worst, rel)
    assert worst < 1e-5
    assert elapsed < 10.0
    _report(1, f"k=5 progression V0 + 2*pi*k, max rel err {worst:.2e}, "
               f"{elapsed:.2f}s")


def test_criterion_2_single_loop_actions(circle_domain, circle_frame):
    cd = critical_values(circle_domain, circle_frame)
    nu = default_nu(cd)
    bp = default_basepoint(cd, nu)
    tracker = FiberTracker(circle_domain.f, circle_frame, cd.branch_points)
    germ = initial_germ(circle_domain, circle_frame, tracker, bp)
    neg, _ = area_continue(tracker, germ,
                           single_loop(cd, bp, nu, cd.m), circle_frame)
    err_m = abs(neg.value + germ.value)
    refl, _ = area_continue(tracker, germ,
                            single_loop(cd, bp, nu, cd.M), circle_frame)
    err_M = abs(refl.value - (2 * math.pi - germ.value))
    assert err_m < 1e-6 and err_M < 1e-6
    _report(2, f"minimum loop negates (err {err_m:.2e}), maximum loop "
               f"reflects through 2*Area (err {err_M:.2e})")


def test_criterion_3_quartic_progression(quartic_domain, quartic_frame):
    t0 = time.perf_counter()
    cd = critical_values(quartic_domain, quartic_frame)
    program = general_big_loop(quartic_domain, quartic_frame, cd)
    acts = [a for _, a in program.annotations]
    assert "turn-back" in acts and "half-circle-detour" in acts
    values, _, _ = monodromy_shift(quartic_domain, quartic_frame, cd, 3)
    elapsed = time.perf_counter() - t0
    increment = 2 * area_direct(quartic_domain, quartic_frame, cd.M - 1e-12)
    worst = 0.0
    for i, v in enumerate(values):
        expected = values[0].real + increment * i
        rel = abs(v - expected) / max(abs(expected), 1e-30)
        worst = max(worst, rel)
    assert worst < 1e-4
    assert elapsed < 60.0
    _report(3, f"general loop with {len(acts)} detour events; k=3 common "
               f"difference 2*Area, max rel err {worst:.2e}, {elapsed:.1f}s")


def test_criterion_4_lattice_pipeline(circle_domain, circle_frame,
                                      quartic_domain, quartic_frame,
                                      ellipse_domain):
    fixtures = [("circle", circle_domain, circle_frame),
                ("ellipse", ellipse_domain, circle_frame),
                ("quartic", quartic_domain, quartic_frame)]
    lines = []
    for name, dom, fr in fixtures:
        cd = critical_values(dom, fr)
        nu = default_nu(cd)
        bp = default_basepoint(cd, nu)
        latF, boundary, signs = assemble_lattice(dom, fr, cd, bp, nu=nu)
        g = latF.gram.gram
        n = latF.gram.rank
        assert all(g[i][i] == 2 for i in range(n))
        assert all(g[i][j] == g[j][i] for i in range(n) for j in range(n))
        assert signs                        # certificate succeeded
        verdict = is_finite(latF.gram)
        assert verdict.finite is False
        lines.append(f"{name}: rank {n}, certificate {tuple(signs)}, "
                     f"infinite reflection group")
    _report(4, "; ".join(lines))


def test_criterion_5_paper_matrix_fixture():
    gram = GramLattice(((2, -2, 0, 0), (-2, 2, 0, 0),
                        (0, 0, 2, -2), (0, 0, -2, 2)))
    verdict = is_finite(gram)
    assert verdict.finite is False
    kernel = gram_kernel(gram)
    assert kernel == [(0, 0, 1, 1), (1, 1, 0, 0)]
    comps = irreducible_components(gram)
    assert comps == [[0, 1], [2, 3]]
    _report(5, f"4x4 block fixture: infinite, kernel rank 2 with basis "
               f"{kernel}, components {comps}")


def test_criterion_6_enumeration_oracle():
    cases = [
        ("rank-2 hexagonal", GramLattice(((2, -1), (-1, 2))), 6),
        ("orthogonal pair", GramLattice(((2, 0), (0, 2))), 4),
        ("rank-3 chain", GramLattice(((2, -1, 0), (-1, 2, -1), (0, -1, 2))),
         24),
    ]
    for name, gram, expected in cases:
        verdict = is_finite(gram)
        order = group_order_by_enumeration(gram)
        assert verdict.finite is True
        assert order == expected
    degenerate = GramLattice(((2, -2), (-2, 2)))
    assert is_finite(degenerate).finite is False
    assert group_order_by_enumeration(degenerate, max_order=500) is None
    _report(6, "positive-definite verdicts match exact enumeration "
               "(orders 6, 4, 24); degenerate case exceeds any bound")


def _random_safe_path(rng, start, branch, safety, box):
    pts = [complex(start)]
    for _ in range(4):
        for _ in range(300):
            cand = complex(rng.uniform(*box[0]), rng.uniform(*box[1]))
            seg = Segment(pts[-1], cand)
            if all(seg.distance_to(b) > safety for b in branch):
                pts.append(cand)
                break
    pieces = tuple(Segment(a, b) for a, b in zip(pts, pts[1:]))
    return pieces


def test_criterion_7_tracking_invariants(circle_domain, circle_frame,
                                         quartic_domain, quartic_frame):
    from ovalmono.paths import ComplexPath
    rng = random.Random(900)
    fixtures = [
        ("circle", circle_domain, circle_frame, ((-2, 2), (-2, 2))),
        ("quartic", quartic_domain, quartic_frame, ((-13, 13), (-4, 4))),
    ]
    max_resid = 0.0
    for name, dom, fr, box in fixtures:
        cd = critical_values(dom, fr)
        nu = default_nu(cd)
        bp = default_basepoint(cd, nu)
        tracker = FiberTracker(dom.f, fr, cd.branch_points)
        base = tracker.start_state(bp)
        count = 0
        for _ in range(50):
            pieces = _random_safe_path(rng, bp, cd.branch_points,
                                       tracker.safety_radius * 1.02, box)
            if not pieces:
                continue
            path = ComplexPath(pieces)
            fwd, _, _ = tracker.run_path(path, base)
            back, _, _ = tracker.run_path(path.reversed(), fwd)
            drift = max(abs(a - b) for a, b in zip(back.roots, base.roots))
            assert drift < 1e-9
            resid = max(fwd.max_residual, back.max_residual)
            assert resid < 1e-10
            max_resid = max(max_resid, resid)
            count += 1
        assert count == 50
        # all generator loops in increasing real order track the same
        # permutation as one circle enclosing every branch point
        loops = standard_loops(cd, bp, nu, include_complex=True)
        acc = tuple(range(len(base.roots)))
        for lp in loops:
            end, _, _ = tracker.run_path(lp, base)
            acc = compose_permutations(tracker.match_to(end, base), acc)
        big = enclosing_circle_loop(bp, cd.branch_points, nu)
        end, _, _ = tracker.run_path(big, base)
        assert acc == tracker.match_to(end, base)
    _report(7, f"reversal identity on 2x50 random safe paths, loop "
               f"composition equals the enclosing circle, max relative "
               f"residual {max_resid:.2e}")


def test_criterion_8_asymptotic_exponent(circle_domain, circle_frame,
                                         quartic_domain, quartic_frame):
    from ovalmono.cycles import _tangency_side
    slopes = []
    for dom, fr in ((circle_domain, circle_frame),
                    (quartic_domain, quartic_frame)):
        cd = critical_values(dom, fr)
        nu = default_nu(cd)
        svals = np.geomspace(1e-4, 1e-1, 10) * nu
        for tj in cd.oval_values:
            kind, _ = _tangency_side(dom, fr, tj, nu)
            side = 1 if kind == "min" else -1
            slope = germ_exponent_fit(dom, fr, tj, side, svals)
            assert abs(slope - 1.5) < 0.05
            slopes.append(slope)
    _report(8, f"{len(slopes)} tangencies, fitted exponents in "
               f"[{min(slopes):.4f}, {max(slopes):.4f}] (target 1.5 +- 0.05)")


def test_criterion_9_odd_even_dichotomy():
    ball = polynomial_fit_test(3, (1, 1, 1))
    assert ball.achieved_degree == 3
    assert ball.residuals[3] < 1e-8
    disk = polynomial_fit_test(2, (1, 1), degree_max=12)
    assert disk.achieved_degree is None
    assert min(disk.residuals.values()) > 1e-3
    _report(9, f"3-ball exact at degree 3 (residual {ball.residuals[3]:.1e}); "
               f"disk residual stays above "
               f"{min(disk.residuals.values()):.1e} through degree 12")


def test_criterion_10_determinism(capsys):
    reports = []
    for _ in range(2):
        code = cli_main(["analyze", str(FIXTURES / "circle.curve"),
                         "--iterations", "2"])
        assert code == 0
        rep = json.loads(capsys.readouterr().out)
        rep.pop("timing")
        reports.append(json.dumps(rep, sort_keys=True))
    assert reports[0] == reports[1]
    with capsys.disabled():
        _report(10, "two analyze runs byte-identical modulo the timing field")
