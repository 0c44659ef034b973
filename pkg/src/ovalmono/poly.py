"""Exact polynomial arithmetic over the rationals.

Bivariate polynomials are sparse maps (i, j) -> Fraction with i the degree in
the first variable (the projection parameter after a frame change) and j the
degree in the second. Univariate polynomials are dense Fraction lists indexed
by degree. Everything here is exact; floating point enters only through the
conversion helpers at the bottom.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import numpy as np

Monomial = tuple[int, int, Fraction]


class BivariatePoly:
    """Sparse exact polynomial in two variables."""

    def __init__(self, monomials):
        coeffs: dict[tuple[int, int], Fraction] = {}
        for i, j, c in monomials:
            if i < 0 or j < 0:
                raise ValueError("negative exponent")
            c = Fraction(c)
            if c == 0:
                continue
            key = (int(i), int(j))
            coeffs[key] = coeffs.get(key, Fraction(0)) + c
        self.coeffs = {k: v for k, v in sorted(coeffs.items()) if v != 0}
        if not self.coeffs:
            raise ValueError("zero polynomial")

    def monomials(self) -> list[Monomial]:
        return [(i, j, c) for (i, j), c in self.coeffs.items()]

    @property
    def total_degree(self) -> int:
        return max(i + j for i, j in self.coeffs)

    def degree_in(self, var: int) -> int:
        return max(k[var] for k in self.coeffs)

    def eval_exact(self, x: Fraction, y: Fraction) -> Fraction:
        x, y = Fraction(x), Fraction(y)
        return sum((c * x**i * y**j for (i, j), c in self.coeffs.items()),
                   Fraction(0))

    def eval_float(self, x: float, y: float) -> float:
        return float(sum(float(c) * x**i * y**j
                         for (i, j), c in self.coeffs.items()))

    def diff(self, var: int) -> "BivariatePoly":
        mono = []
        for (i, j), c in self.coeffs.items():
            e = (i, j)[var]
            if e == 0:
                continue
            if var == 0:
                mono.append((i - 1, j, c * e))
            else:
                mono.append((i, j - 1, c * e))
        return BivariatePoly(mono)

    def substitute_linear(self, m00, m01, m10, m11) -> "BivariatePoly":
        """Exact substitution x -> m00*u + m01*v, y -> m10*u + m11*v."""
        m00, m01, m10, m11 = (Fraction(m) for m in (m00, m01, m10, m11))
        # Precompute powers of the two linear forms as dense (u, v) grids.
        deg = self.total_degree
        xpow = _linear_powers(m00, m01, deg)
        ypow = _linear_powers(m10, m11, deg)
        out: dict[tuple[int, int], Fraction] = {}
        for (i, j), c in self.coeffs.items():
            for (a, b), cx in xpow[i].items():
                for (d, e), cy in ypow[j].items():
                    key = (a + d, b + e)
                    out[key] = out.get(key, Fraction(0)) + c * cx * cy
        return BivariatePoly([(i, j, c) for (i, j), c in out.items()])

    def clear_denominators(self) -> "BivariatePoly":
        """Scale to integer coefficients with content 1 and positive leading
        coefficient (lexicographic leading term)."""
        denoms = 1
        for c in self.coeffs.values():
            denoms = denoms * c.denominator // gcd(denoms, c.denominator)
        ints = {k: int(c * denoms) for k, c in self.coeffs.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, abs(v))
        lead = ints[max(ints)]
        sign = -1 if lead < 0 else 1
        return BivariatePoly([(i, j, Fraction(sign * v, g))
                              for (i, j), v in ints.items()])

    def y_coefficients(self) -> list[list[Fraction]]:
        """Coefficients as polynomials in the first variable: entry j is the
        dense coefficient list (in var 0) of (var 1)**j."""
        dy = self.degree_in(1)
        dx = self.degree_in(0)
        cols = [[Fraction(0)] * (dx + 1) for _ in range(dy + 1)]
        for (i, j), c in self.coeffs.items():
            cols[j][i] = c
        return cols

    def coeff_matrix(self) -> np.ndarray:
        """Dense complex coefficient matrix C[i, j] scaled to max |entry| 1."""
        dx, dy = self.degree_in(0), self.degree_in(1)
        mat = np.zeros((dx + 1, dy + 1), dtype=complex)
        scale = max(abs(c) for c in self.coeffs.values())
        for (i, j), c in self.coeffs.items():
            mat[i, j] = complex(Fraction(c, scale))
        return mat

    def __eq__(self, other):
        return isinstance(other, BivariatePoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs.items()))

    def __repr__(self):
        terms = " + ".join(f"{c}*x^{i}*y^{j}" for (i, j), c in self.coeffs.items())
        return f"BivariatePoly({terms})"


def _linear_powers(ca: Fraction, cb: Fraction, deg: int):
    """Powers (ca*u + cb*v)**k for k = 0..deg as sparse (u-deg, v-deg) maps."""
    powers = [{(0, 0): Fraction(1)}]
    for _ in range(deg):
        prev = powers[-1]
        nxt: dict[tuple[int, int], Fraction] = {}
        for (a, b), c in prev.items():
            if ca:
                nxt[(a + 1, b)] = nxt.get((a + 1, b), Fraction(0)) + c * ca
            if cb:
                nxt[(a, b + 1)] = nxt.get((a, b + 1), Fraction(0)) + c * cb
        powers.append(nxt)
    return powers


# ---------------------------------------------------------------------------
# dense univariate helpers (Fraction coefficients, index = degree)

def utrim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def udeg(p) -> int:
    return len(p) - 1


def uadd(p, q):
    n = max(len(p), len(q))
    out = [Fraction(0)] * n
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return utrim(out)


def uscale(p, c):
    c = Fraction(c)
    return utrim([ci * c for ci in p])


def umul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return utrim(out)


def udivmod(p, q):
    if not q:
        raise ZeroDivisionError("division by zero polynomial")
    r = list(p)
    quo = [Fraction(0)] * max(len(p) - len(q) + 1, 1)
    dq, lead = udeg(q), q[-1]
    while r and udeg(r) >= dq:
        k = udeg(r) - dq
        c = r[-1] / lead
        quo[k] = c
        for i, b in enumerate(q):
            r[i + k] -= c * b
        utrim(r)
    return utrim(quo), r


def uderiv(p):
    return utrim([p[i] * i for i in range(1, len(p))])


def ugcd(p, q):
    a, b = utrim(list(p)), utrim(list(q))
    while b:
        a, b = b, udivmod(a, b)[1]
    if a:
        a = uscale(a, 1 / a[-1])  # monic
    return a


def usquarefree_decomposition(p):
    """Yun's algorithm: return [(factor, multiplicity), ...] with squarefree
    pairwise-coprime factors. Input must be nonzero."""
    p = utrim(list(p))
    if udeg(p) < 1:
        return []
    out = []
    g = ugcd(p, uderiv(p))
    if udeg(g) == 0:
        return [(uscale(p, 1 / p[-1]), 1)]
    w = udivmod(p, g)[0]
    y = udivmod(uderiv(p), g)[0]
    z = uadd(y, uscale(uderiv(w), -1))
    mult = 1
    while udeg(w) > 0:
        f = ugcd(w, z)
        if udeg(f) > 0:
            out.append((f, mult))
        w = udivmod(w, f)[0]
        y = udivmod(z, f)[0]
        z = uadd(y, uscale(uderiv(w), -1))
        mult += 1
    return out


def ueval(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# integer univariate helpers used by the fraction-free resultant

def _iz_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _iz_mul(p, q):
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _iz_trim(out)


def _iz_sub(p, q):
    n = max(len(p), len(q))
    out = [0] * n
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] -= c
    return _iz_trim(out)


def _iz_exact_div(p, d):
    """Exact division of an integer polynomial by an integer polynomial
    known to divide it (Bareiss pivots)."""
    if len(d) == 1:
        return [c // d[0] for c in p]
    quo, rem = [0] * max(len(p) - len(d) + 1, 1), list(p)
    dd, lead = len(d) - 1, d[-1]
    while _iz_trim(rem) and len(rem) - 1 >= dd:
        k = len(rem) - 1 - dd
        c = rem[-1] // lead
        quo[k] = c
        for i, b in enumerate(d):
            rem[i + k] -= c * b
        _iz_trim(rem)
    return _iz_trim(quo)


def resultant_in_y(f: BivariatePoly, g: BivariatePoly) -> list[Fraction]:
    """Resultant of f and g with respect to the second variable, as a dense
    univariate polynomial in the first. Exact, via fraction-free Bareiss on
    the Sylvester matrix over Z[t]; result is primitive with positive leading
    coefficient (the resultant up to a nonzero rational factor)."""
    f = f.clear_denominators()
    g = g.clear_denominators()
    m, n = f.degree_in(1), g.degree_in(1)
    if m < 1 and n < 1:
        raise ValueError("both polynomials constant in the eliminated variable")
    fc = [_iz_trim([int(c) for c in col]) for col in f.y_coefficients()]
    gc = [_iz_trim([int(c) for c in col]) for col in g.y_coefficients()]
    size = m + n
    mat: list[list[list[int]]] = [[[] for _ in range(size)] for _ in range(size)]
    for r in range(n):  # rows of f coefficients
        for k in range(m + 1):
            mat[r][r + k] = list(fc[m - k])
    for r in range(m):  # rows of g coefficients
        for k in range(n + 1):
            mat[n + r][r + k] = list(gc[n - k])
    det = _bareiss_poly_det(mat)
    if not det:
        return []
    cont = 0
    for c in det:
        cont = gcd(cont, abs(c))
    sign = -1 if det[-1] < 0 else 1
    return [Fraction(sign * c, cont) for c in det]


def _bareiss_poly_det(mat):
    """Fraction-free determinant of a matrix with integer-polynomial entries."""
    n = len(mat)
    prev = [1]
    sign = 1
    a = [row[:] for row in mat]
    for k in range(n - 1):
        if not a[k][k]:
            swap = next((r for r in range(k + 1, n) if a[r][k]), None)
            if swap is None:
                return []
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = _iz_sub(_iz_mul(a[k][k], a[i][j]),
                              _iz_mul(a[i][k], a[k][j]))
                a[i][j] = _iz_exact_div(num, prev) if num else []
            a[i][k] = []
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return [sign * c for c in det]


# ---------------------------------------------------------------------------
# numeric root finding on exact univariate polynomials

def upoly_to_float(p) -> np.ndarray:
    """Dense float coefficients scaled to max |coeff| 1 (degree order kept)."""
    scale = max(abs(c) for c in p if c != 0)
    return np.array([float(Fraction(c, 1) / scale) for c in p], dtype=float)


def uroots(p, polish_iters: int = 8) -> np.ndarray:
    """All complex roots of an exact univariate polynomial, Newton-polished
    against the exact coefficients (evaluated in float)."""
    fp = upoly_to_float(utrim(list(p)))
    if len(fp) <= 1:
        return np.array([], dtype=complex)
    roots = np.roots(fp[::-1])
    dfp = np.array([fp[i] * i for i in range(1, len(fp))])
    for _ in range(polish_iters):
        val = np.polyval(fp[::-1], roots)
        dval = np.polyval(dfp[::-1], roots)
        step = np.where(np.abs(dval) > 1e-300, val / np.where(dval == 0, 1, dval), 0)
        roots = roots - step
    return np.sort_complex(roots)
