from fractions import Fraction as F

import numpy as np
import pytest

from ovalmono.areafunc import default_basepoint, default_nu
from ovalmono.curve import DomainSpec, critical_values
from ovalmono.cycles import (GermLatticeF, VanishingCycle0, assemble_lattice,
                             boundary_class, chain_add, chain_permute,
                             component_kernel_sums, germ_exponent_fit,
                             gram_of_cycles, kernel_certificate, pl_reflect)
from ovalmono.errors import CertificateError, GenericityError
from ovalmono.lattice import is_finite
from ovalmono.paths import standard_loops
from ovalmono.poly import BivariatePoly
from ovalmono.tracking import FiberTracker


@pytest.fixture(scope="module")
def circle_lattice(circle_domain, circle_frame):
    cd = critical_values(circle_domain, circle_frame)
    nu = default_nu(cd)
    bp = default_basepoint(cd, nu)
    latF, boundary, signs = assemble_lattice(circle_domain, circle_frame,
                                             cd, bp, nu=nu)
    return circle_domain, circle_frame, cd, nu, bp, latF, boundary, signs


@pytest.fixture(scope="module")
def quartic_lattice(quartic_domain, quartic_frame):
    cd = critical_values(quartic_domain, quartic_frame)
    nu = default_nu(cd)
    bp = default_basepoint(cd, nu)
    latF, boundary, signs = assemble_lattice(quartic_domain, quartic_frame,
                                             cd, bp, nu=nu)
    return quartic_domain, quartic_frame, cd, nu, bp, latF, boundary, signs


def test_circle_cycles_share_support(circle_lattice):
    *_, latF, boundary, signs = circle_lattice
    assert len(latF.cycles) == 2
    supports = [frozenset((c.plus_label, c.minus_label))
                for c in latF.cycles]
    assert supports[0] == supports[1]
    assert latF.gram.gram in (((2, 2), (2, 2)), ((2, -2), (-2, 2)))


def test_quartic_cycle_count(quartic_lattice):
    *_, latF, boundary, signs = quartic_lattice
    assert len(latF.cycles) == 6


def test_gram_symmetric_diag_two(circle_lattice, quartic_lattice):
    for ctx in (circle_lattice, quartic_lattice):
        *_, latF, _, _ = ctx
        g = latF.gram.gram
        n = latF.gram.rank
        assert all(g[i][i] == 2 for i in range(n))
        assert all(g[i][j] == g[j][i] for i in range(n) for j in range(n))


def test_single_cycle_gram():
    g = gram_of_cycles([VanishingCycle0(1, 0, 0.0, "min")])
    assert g.gram == ((2,),)


def test_no_oval_critical_values_error(circle_frame):
    hyper = BivariatePoly([(2, 0, 1), (0, 2, -1), (0, 0, -1)])
    dom = DomainSpec(hyper, (F(0), F(0)))
    with pytest.raises(GenericityError):
        critical_values(dom, circle_frame)


def test_pl_reflect_examples(circle_lattice):
    *_, latF, _, _ = circle_lattice
    # generator reflects to its negative
    assert pl_reflect(latF, (1, 0), 0) == (-1, 0)
    c = latF.gram.gram[0][1]
    assert pl_reflect(latF, (1, 0), 1) == (1, -c)
    # kernel vectors are fixed
    from ovalmono.lattice import gram_kernel
    for v in gram_kernel(latF.gram):
        for j in range(latF.gram.rank):
            assert pl_reflect(latF, v, j) == v


def test_boundary_class_circle(circle_lattice):
    dom, fr, cd, nu, bp, latF, boundary, signs = circle_lattice
    assert sorted(boundary.values()) == [-1, 1]
    plus = next(k for k, v in boundary.items() if v == 1)
    minus = next(k for k, v in boundary.items() if v == -1)
    assert latF.base.roots[plus].real > latF.base.roots[minus].real


def test_boundary_class_two_interval_height(quartic_domain, quartic_frame):
    cd = critical_values(quartic_domain, quartic_frame)
    vals = sorted(cd.oval_values)
    mid = 0.5 * (vals[3] + vals[4])
    tracker = FiberTracker(quartic_domain.f, quartic_frame, cd.branch_points)
    base = tracker.start_state(mid)
    chain = boundary_class(quartic_domain, quartic_frame, mid, base)
    assert sorted(chain.values()) == [-1, -1, 1, 1]
    # alternating signs along the real fiber
    order = sorted(chain, key=lambda i: base.roots[i].real)
    assert [chain[i] for i in order] == [-1, 1, -1, 1]


def test_kernel_certificate_circle(circle_lattice):
    *_, latF, boundary, signs = circle_lattice
    assert set(signs) <= {1, -1}
    total = {}
    for c, s in zip(latF.cycles, signs):
        total = chain_add(total, c.chain(), s)
    assert total == {}
    gram = latF.gram.gram
    assert all(sum(gram[i][j] * signs[j] for j in range(len(signs))) == 0
               for i in range(len(signs)))


def test_kernel_certificate_negative_control(circle_lattice):
    dom, fr, cd, nu, bp, latF, boundary, signs = circle_lattice
    broken = GermLatticeF(
        [VanishingCycle0(0, 1, c.origin, c.kind) for c in latF.cycles[:1]]
        + latF.cycles[1:], latF.gram, latF.base, latF.basepoint)
    corrupted = dict(boundary)
    k = next(iter(corrupted))
    corrupted[k] += 2          # impossible boundary chain
    with pytest.raises(CertificateError):
        kernel_certificate(broken, corrupted)


def test_component_kernel_sums(circle_lattice, quartic_lattice):
    for ctx in (circle_lattice, quartic_lattice):
        *_, latF, boundary, signs = ctx
        rep = component_kernel_sums(latF, signs)
        assert rep.all_in_kernel


def test_component_kernel_sums_paper_blocks():
    # the displayed two-block matrix with unit signs: each block sum lies in
    # the kernel
    from ovalmono.lattice import GramLattice
    gram = GramLattice(((2, -2, 0, 0), (-2, 2, 0, 0),
                        (0, 0, 2, -2), (0, 0, -2, 2)))
    cycles = [VanishingCycle0(i + 1, 0, float(i), "min") for i in range(4)]
    latF = GermLatticeF(cycles, gram, None, 0.0)
    rep = component_kernel_sums(latF, (1, 1, 1, 1))
    assert rep.components == [[0, 1], [2, 3]]
    assert rep.all_in_kernel


def test_oval_lattices_never_finite(circle_lattice, quartic_lattice):
    # the computational echo of the non-integrability theorem
    for ctx in (circle_lattice, quartic_lattice):
        *_, latF, _, _ = ctx
        assert not is_finite(latF.gram).finite


def test_transport_matches_reflection_formula(circle_lattice):
    _transport_consistency(circle_lattice)


def test_transport_matches_reflection_formula_quartic(quartic_lattice):
    _transport_consistency(quartic_lattice)


def _transport_consistency(ctx):
    """Transporting cycle i around the generator loop of cycle j permutes its
    support exactly as the lattice reflection predicts."""
    dom, fr, cd, nu, bp, latF, boundary, signs = ctx
    tracker = FiberTracker(dom.f, fr, cd.branch_points)
    base = latF.base
    chains = [c.chain() for c in latF.cycles]
    origins = [c.origin for c in latF.cycles]
    loops = {c.origin: lp for c, lp in zip(
        sorted(latF.cycles, key=lambda c: c.origin),
        standard_loops([c.origin for c in latF.cycles], bp, nu))}
    gram = latF.gram.gram
    for j, cj in enumerate(latF.cycles):
        end, _, _ = tracker.run_path(loops[cj.origin], base)
        perm = tracker.match_to(end, base)
        for i, ci in enumerate(latF.cycles):
            transported = chain_permute(chains[i], perm)
            predicted = chain_add(chains[i], chains[j], -gram[j][i])
            assert transported == predicted, (i, j)


def test_germ_exponent(circle_lattice):
    dom, fr, cd, nu, bp, latF, *_ = circle_lattice
    svals = np.geomspace(1e-4, 1e-1, 8) * nu
    for c in latF.cycles:
        side = 1 if c.kind == "min" else -1
        slope = germ_exponent_fit(dom, fr, c.origin, side, svals)
        assert abs(slope - 1.5) < 0.05


def test_certificate_at_mid_band_basepoint(quartic_domain, quartic_frame):
    # four-point boundary chain: the left partial sum must still telescope
    cd = critical_values(quartic_domain, quartic_frame)
    nu = default_nu(cd)
    vals = sorted(cd.oval_values)
    bp = 0.5 * (vals[1] + vals[2])
    latF, boundary, signs = assemble_lattice(quartic_domain, quartic_frame,
                                             cd, bp, nu=nu)
    assert sorted(boundary.values()) == [-1, -1, 1, 1]
    assert component_kernel_sums(latF, signs).all_in_kernel


def test_lattice_independent_of_frame(quartic_domain):
    from ovalmono.curve import DirectionFrame
    fr2 = DirectionFrame(F(1), F(6))
    cd = critical_values(quartic_domain, fr2)
    nu = default_nu(cd)
    latF, boundary, signs = assemble_lattice(quartic_domain, fr2, cd,
                                             cd.m + nu / 2, nu=nu)
    assert len(latF.cycles) == 6
    assert not is_finite(latF.gram).finite
    assert component_kernel_sums(latF, signs).all_in_kernel


def test_constant_sum_germ_identity(circle_lattice, quartic_lattice):
    # signed sum of all transported germ values at the basepoint equals the
    # total area: the analytic face of the kernel certificate, tying the
    # orientation, transport and sign conventions together end to end
    from ovalmono.areafunc import total_area
    from ovalmono.cycles import germ_values_at_base
    for ctx in (circle_lattice, quartic_lattice):
        dom, fr, cd, nu, bp, latF, boundary, signs = ctx
        germs = germ_values_at_base(dom, fr, cd, latF, nu)
        total = sum(s * g for s, g in zip(signs, germs))
        assert abs(total - total_area(dom, fr)) < 1e-9


def test_local_germ_parity(quartic_lattice):
    # local germ values are real on the real-pair side of each tangency and
    # purely imaginary on the complex-conjugate side
    from ovalmono.cycles import vanishing_germ_value
    dom, fr, cd, nu, bp, latF, *_ = quartic_lattice
    for c in latF.cycles:
        real_side = 1 if c.kind == "min" else -1
        v_real = vanishing_germ_value(dom, fr, c.origin, real_side, nu / 2)
        v_imag = vanishing_germ_value(dom, fr, c.origin, -real_side, nu / 2)
        assert abs(v_real.imag) < 1e-10 * abs(v_real)
        assert abs(v_imag.real) < 1e-10 * abs(v_imag)


def test_triple_hump_sextic_stress():
    # degree-6 oval with ten tangencies: long walk itinerary, rank-10
    # lattice, thousand-pattern sign search, germ-sum identity
    from ovalmono.areafunc import monodromy_shift, total_area
    from ovalmono.cycles import germ_values_at_base
    sextic = BivariatePoly([(0, 2, 1), (6, 0, 1), (4, 0, -6), (2, 0, 9),
                            (0, 0, F(-17, 4))])
    dom = DomainSpec(sextic, (F(0), F(0)))
    from ovalmono.curve import DirectionFrame
    fr = DirectionFrame(F(1), F(10))
    cd = critical_values(dom, fr)
    assert len(cd.oval_values) == 10
    nu = default_nu(cd)
    bp = cd.m + nu / 2
    latF, boundary, signs = assemble_lattice(dom, fr, cd, bp, nu=nu)
    assert latF.gram.rank == 10
    assert not is_finite(latF.gram).finite
    assert component_kernel_sums(latF, signs).all_in_kernel
    area = total_area(dom, fr)
    germs = germ_values_at_base(dom, fr, cd, latF, nu)
    assert abs(sum(s * g for s, g in zip(signs, germs)) - area) < 1e-8
    values, program, _ = monodromy_shift(dom, fr, cd, 1)
    assert abs(values[1] - (values[0].real + 2 * area)) < 1e-6
    assert sum(1 for _, a in program.annotations if a == "turn-back") == 1
