import random
from fractions import Fraction as F

import pytest

from ovalmono.poly import (BivariatePoly, resultant_in_y, uroots,
                           usquarefree_decomposition, udivmod, umul, ugcd,
                           ueval)


def test_bivariate_basics():
    p = BivariatePoly([(2, 0, 1), (0, 2, 1), (0, 0, -1), (0, 0, 0)])
    assert p.total_degree == 2
    assert p.degree_in(0) == 2 and p.degree_in(1) == 2
    assert p.eval_exact(F(1), F(0)) == 0
    assert p.eval_exact(F(0), F(0)) == -1
    dp = p.diff(1)
    assert dp.monomials() == [(0, 1, F(2))]


def test_duplicate_monomials_merge():
    p = BivariatePoly([(1, 1, 1), (1, 1, 2)])
    assert p.monomials() == [(1, 1, F(3))]


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        BivariatePoly([(0, 0, 0)])
    with pytest.raises(ValueError):
        BivariatePoly([(1, 0, 1), (1, 0, -1)])


def test_substitute_linear_identity_and_rotation():
    p = BivariatePoly([(2, 0, 1), (0, 2, 1), (0, 0, -1)])
    same = p.substitute_linear(1, 0, 0, 1)
    assert same == p
    # x -> u+v, y -> u-v turns x^2+y^2 into 2u^2+2v^2
    rot = p.substitute_linear(1, 1, 1, -1)
    assert rot == BivariatePoly([(2, 0, 2), (0, 2, 2), (0, 0, -1)])


def test_clear_denominators_primitive():
    p = BivariatePoly([(1, 0, F(2, 3)), (0, 1, F(4, 3))])
    q = p.clear_denominators()
    assert q.monomials() == [(0, 1, F(2)), (1, 0, F(1))]


# --- resultants: hand-checked oracles ------------------------------------

def test_resultant_circle_discriminant():
    # Res_y(x^2+y^2-1, 2y) is 4(x^2-1) up to a constant; primitive: x^2 - 1
    circle = BivariatePoly([(2, 0, 1), (0, 2, 1), (0, 0, -1)])
    res = resultant_in_y(circle, circle.diff(1))
    assert res == [F(-1), F(0), F(1)]


def test_resultant_parabola():
    # Res_y(y^2 - x, 2y) = 4x; primitive: x
    p = BivariatePoly([(0, 2, 1), (1, 0, -1)])
    res = resultant_in_y(p, p.diff(1))
    assert res == [F(0), F(1)]


def test_resultant_linear_in_y_is_constant():
    # single root in y never collides: constant resultant
    p = BivariatePoly([(0, 1, 1), (2, 0, 1)])   # y + x^2
    res = resultant_in_y(p, p.diff(1))
    assert len(res) == 1 and res[0] != 0


def test_resultant_matches_root_products():
    # Res_y(f, g) vanishes exactly at x where f(x, .) and g(x, .) share a root
    f = BivariatePoly([(0, 1, 1), (1, 0, -1)])          # y - x
    g = BivariatePoly([(0, 1, 1), (0, 0, -2)])          # y - 2
    res = resultant_in_y(f, g)
    assert res == [F(-2), F(1)]                          # root at x = 2


# --- univariate helpers ----------------------------------------------------

def test_udivmod_and_gcd():
    # (x-1)(x-2) = x^2 - 3x + 2
    p = [F(2), F(-3), F(1)]
    q, r = udivmod(p, [F(-1), F(1)])
    assert r == [] and q == [F(-2), F(1)]
    g = ugcd(p, [F(-1), F(1)])
    assert g == [F(-1), F(1)]


def test_squarefree_decomposition():
    # (x-1)^2 (x+2)
    p = umul(umul([F(-1), F(1)], [F(-1), F(1)]), [F(2), F(1)])
    decomp = usquarefree_decomposition(p)
    assert sorted(mult for _, mult in decomp) == [1, 2]
    for fac, mult in decomp:
        if mult == 2:
            assert ueval(fac, F(1)) == 0
        else:
            assert ueval(fac, F(-2)) == 0


def test_uroots_polish():
    # roots of (x-1)(x-3)(x+5)
    p = umul(umul([F(-1), F(1)], [F(-3), F(1)]), [F(5), F(1)])
    roots = sorted(r.real for r in uroots(p))
    assert abs(roots[0] + 5) < 1e-12
    assert abs(roots[1] - 1) < 1e-12
    assert abs(roots[2] - 3) < 1e-12


def test_resultant_random_cross_check():
    # against the product formula Res(f,g) = lc(f)^deg(g) prod g(roots of f)
    rng = random.Random(7)
    for _ in range(5):
        a = [F(rng.randint(-3, 3)) for _ in range(3)] + [F(1)]
        b = [F(rng.randint(-3, 3)) for _ in range(2)] + [F(1)]
        f = BivariatePoly([(0, j, c) for j, c in enumerate(a) if c != 0])
        g = BivariatePoly([(0, j, c) for j, c in enumerate(b) if c != 0])
        res = resultant_in_y(f, g)
        assert len(res) == 1       # no x dependence: a number
        roots_f = uroots(a)
        prod = 1.0
        for r in roots_f:
            prod *= ueval([complex(c) for c in b], r)
        # primitive resultant only matches up to a rational factor; compare
        # vanishing/nonvanishing
        assert (abs(prod) < 1e-8) == (res[0] == 0)
