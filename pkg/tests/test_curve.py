import math
import random
from fractions import Fraction as F

import numpy as np
import pytest

from ovalmono.curve import (DirectionFrame, DomainSpec, critical_values,
                            discriminant_t, fiber_roots, find_generic_frame,
                            genericity_check, parse_curve_text, real_slice,
                            rotated_poly, slice_topology)
from ovalmono.errors import GenericityError, InputError, ParseError
from ovalmono.poly import BivariatePoly

from conftest import circle_poly


def test_direction_frame_transforms():
    fr = DirectionFrame(F(1), F(8))
    t, w = fr.to_frame(F(1), F(0))
    assert (t, w) == (F(1), F(-8))
    x, y = fr.from_frame(t, w)
    assert (x, y) == (F(1), F(0))


def test_degenerate_direction_rejected():
    with pytest.raises(InputError):
        DirectionFrame(F(0), F(0))
    # a curve with no fiber dependence in the chosen frame
    vert = BivariatePoly([(1, 0, 1), (0, 0, -1)])        # x - 1
    with pytest.raises(InputError):
        discriminant_t(vert, DirectionFrame(F(1), F(0)))


def test_circle_discriminant():
    disc = discriminant_t(circle_poly(), DirectionFrame(F(1), F(0)))
    assert disc == [F(-1), F(0), F(1)]


def test_critical_values_circle(circle_domain, circle_frame):
    cd = critical_values(circle_domain, circle_frame)
    assert sorted(cd.real_values) == pytest.approx([-1.0, 1.0])
    assert cd.oval_values == pytest.approx([-1.0, 1.0])
    assert (cd.m, cd.M) == pytest.approx((-1.0, 1.0))


def test_critical_values_ellipse(ellipse_domain, circle_frame):
    cd = critical_values(ellipse_domain, circle_frame)
    assert sorted(cd.real_values) == pytest.approx([-2.0, 2.0])


def test_critical_values_quartic(quartic_domain, quartic_frame):
    cd = critical_values(quartic_domain, quartic_frame)
    assert len(cd.oval_values) == 6
    assert all(cv.is_real for cv in cd.values)
    gaps = np.diff(sorted(cd.real_values))
    assert gaps.min() > 0.5


def test_genericity_pass(circle_domain, circle_frame, quartic_domain,
                         quartic_frame, ellipse_domain):
    assert genericity_check(circle_domain, circle_frame)
    assert genericity_check(ellipse_domain, circle_frame)
    assert genericity_check(quartic_domain, quartic_frame)


def test_genericity_fails_nonreduced(circle_frame):
    sq = BivariatePoly([(4, 0, 1), (0, 4, 1), (2, 2, 2), (2, 0, -2),
                        (0, 2, -2), (0, 0, 1)])
    dom = DomainSpec(sq, (F(0), F(0)))
    rep = genericity_check(dom, circle_frame)
    assert not rep
    assert any("identically" in r for r in rep.reasons)


def test_genericity_fails_symmetric_direction(quartic_domain):
    # straight vertical projection: lobe tangencies share critical values
    rep = genericity_check(quartic_domain, DirectionFrame(F(0), F(1)))
    assert not rep


def test_find_generic_frame_rotates(quartic_domain):
    frame, rep = find_generic_frame(quartic_domain, DirectionFrame(F(0), F(1)))
    assert rep.passed
    assert (frame.a, frame.b) != (F(0), F(1))


def test_fiber_roots_circle(circle_domain, circle_frame):
    f = circle_domain.f
    s = fiber_roots(f, circle_frame, 0.0)
    assert sorted(r.real for r in s.roots) == pytest.approx([-1.0, 1.0])
    assert not s.on_discriminant
    s2 = fiber_roots(f, circle_frame, 2.0)
    assert sorted(r.imag for r in s2.roots) == pytest.approx(
        [-math.sqrt(3), math.sqrt(3)])
    s3 = fiber_roots(f, circle_frame, 1.0)
    assert s3.on_discriminant
    assert all(abs(r) < 1e-6 for r in s3.roots)


def test_fiber_root_count_matches_degree(quartic_domain, quartic_frame):
    g = rotated_poly(quartic_domain.f, quartic_frame)
    rng = random.Random(3)
    for _ in range(20):
        t = complex(rng.uniform(-12, 12), rng.uniform(-3, 3))
        s = fiber_roots(quartic_domain.f, quartic_frame, t)
        assert len(s.roots) == g.degree_in(1)


def test_fiber_degree_drop():
    f = BivariatePoly([(1, 2, 1), (0, 0, -1)])           # x y^2 - 1
    with pytest.raises(InputError):
        fiber_roots(f, DirectionFrame(F(1), F(0)), 0.0)


def test_collision_only_near_discriminant(quartic_domain, quartic_frame):
    cd = critical_values(quartic_domain, quartic_frame)
    rng = random.Random(5)
    for tj in cd.real_values:
        for _ in range(8):
            eps = 10 ** rng.uniform(-8, -5)
            ang = rng.uniform(0, 2 * math.pi)
            t = tj + eps * complex(math.cos(ang), math.sin(ang))
            s = fiber_roots(quartic_domain.f, quartic_frame, t)
            dmin = min(abs(a - b) for i, a in enumerate(s.roots)
                       for b in s.roots[i + 1:])
            assert dmin < 40 * math.sqrt(eps)


def test_real_slice_circle(circle_domain, circle_frame):
    assert real_slice(circle_domain, circle_frame, 0.0) == \
        [pytest.approx((-1.0, 1.0))]
    lo, hi = real_slice(circle_domain, circle_frame, 1 - 1e-4)[0]
    assert hi - lo == pytest.approx(2 * math.sqrt(2e-4 - 1e-8), rel=1e-6)
    assert real_slice(circle_domain, circle_frame, 1.5) == []


def test_real_slice_quartic_two_intervals(quartic_domain, quartic_frame):
    # between the waist and the lobe tops the slice has two intervals
    cd = critical_values(quartic_domain, quartic_frame)
    vals = sorted(cd.oval_values)
    mid = 0.5 * (vals[3] + vals[4])
    ivs = real_slice(quartic_domain, quartic_frame, mid)
    assert len(ivs) == 2
    assert ivs[0][1] < ivs[1][0]


def test_widths_integrate_to_area(quartic_domain, quartic_frame):
    from ovalmono.areafunc import area_direct
    topo = slice_topology(quartic_domain, quartic_frame)
    cd = critical_values(quartic_domain, quartic_frame)
    t0, t1 = cd.m + 0.3, cd.m + 2.1
    grid = np.linspace(t0, t1, 4001)
    widths = [topo.width(t) for t in grid]
    trap = np.trapezoid(widths, grid) / float(quartic_frame.norm2)
    direct = area_direct(quartic_domain, quartic_frame, t1) - \
        area_direct(quartic_domain, quartic_frame, t0)
    assert abs(trap - direct) < 1e-6


def test_seed_on_curve_rejected():
    with pytest.raises(InputError):
        DomainSpec(circle_poly(), (F(1), F(0)))


def test_unbounded_seed_rejected(circle_frame):
    hyper = BivariatePoly([(2, 0, 1), (0, 2, -1), (0, 0, -1)])   # x^2-y^2=1
    dom = DomainSpec(hyper, (F(0), F(0)))
    with pytest.raises(GenericityError):
        slice_topology(dom, circle_frame)


def test_parse_curve_text_roundtrip():
    text = "# c\n2 0 1\n0 2 1\n0 0 -1\nseed 0 0\n"
    dom = parse_curve_text(text)
    assert dom.f == circle_poly()
    assert dom.seed == (F(0), F(0))


def test_parse_curve_errors():
    with pytest.raises(ParseError):
        parse_curve_text("2 0 one\nseed 0 0\n")
    with pytest.raises(ParseError):
        parse_curve_text("2 0 1\n")
    with pytest.raises(ParseError):
        parse_curve_text("seed 0 0\n")
