"""Plane algebraic boundary curves: frames, discriminants, fibers and the
slice topology of the seed-selected domain.

The curve is the zero locus of a bivariate polynomial with exact rational
coefficients. A DirectionFrame rotates the chosen linear projection onto the
first coordinate, so fibers are vertical lines t = const in the rotated
(t, w)-plane. The selected domain is the connected component of the
complement of the real curve containing the seed; its outer boundary oval is
recovered through a band sweep over the real critical values.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import GenericityError, InputError, ParseError
from .poly import (BivariatePoly, resultant_in_y, uroots,
                   usquarefree_decomposition, utrim)

REAL_TOL = 1e-9


@dataclass(frozen=True)
class DirectionFrame:
    """Projection direction l(x, y) = a x + b y with rational a, b.

    Rotated coordinates: t = a x + b y (the projection value) and
    w = -b x + a y (the fiber coordinate). The map scales areas by
    norm2 = a^2 + b^2 and fiber lengths by sqrt(norm2).
    """

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.a == 0 and self.b == 0:
            raise InputError("direction must be nonzero")

    @property
    def norm2(self) -> Fraction:
        return self.a * self.a + self.b * self.b

    @property
    def rotation(self):
        return ((self.a, self.b), (-self.b, self.a))

    def to_frame(self, x, y):
        """(x, y) -> (t, w), exact for Fraction inputs."""
        return (self.a * x + self.b * y, -self.b * x + self.a * y)

    def from_frame(self, t, w):
        d = self.norm2
        return ((self.a * t - self.b * w) / d, (self.b * t + self.a * w) / d)


@dataclass(frozen=True)
class DomainSpec:
    """Boundary polynomial plus an interior seed point selecting the domain."""

    f: BivariatePoly
    seed: tuple[Fraction, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "seed",
                           (Fraction(self.seed[0]), Fraction(self.seed[1])))
        if self.f.eval_exact(*self.seed) == 0:
            raise InputError("seed lies on the curve")

    def __hash__(self):
        return hash((tuple(self.f.monomials()), self.seed))


@dataclass(frozen=True)
class CriticalValue:
    t: complex
    multiplicity: int
    is_real: bool
    on_oval: bool


@dataclass(frozen=True)
class CriticalData:
    values: tuple[CriticalValue, ...]
    m: float
    M: float

    @property
    def real_values(self) -> list[float]:
        return [cv.t.real for cv in self.values if cv.is_real]

    @property
    def oval_values(self) -> list[float]:
        return [cv.t.real for cv in self.values if cv.on_oval]

    @property
    def branch_points(self) -> list[complex]:
        return [cv.t for cv in self.values]


@dataclass(frozen=True)
class FiberSample:
    roots: tuple[complex, ...]
    on_discriminant: bool


@functools.lru_cache(maxsize=64)
def rotated_poly(f: BivariatePoly, frame: DirectionFrame) -> BivariatePoly:
    """The curve polynomial in frame coordinates, g(t, w), exact with cleared
    denominators."""
    d = frame.norm2
    g = f.substitute_linear(frame.a / d, -frame.b / d, frame.b / d, frame.a / d)
    return g.clear_denominators()


def _rotated(domain: DomainSpec, frame: DirectionFrame) -> BivariatePoly:
    return rotated_poly(domain.f, frame)


def discriminant_t(f: BivariatePoly, frame: DirectionFrame):
    """Resultant of g and dg/dw in w: dense exact polynomial in t, primitive
    with positive leading coefficient."""
    g = rotated_poly(f, frame)
    if g.degree_in(1) < 1:
        raise InputError("curve does not depend on the fiber coordinate in "
                         "this frame (degenerate direction)")
    return resultant_in_y(g, g.diff(1))


def _real_w_roots(coef_cols, t: float) -> np.ndarray:
    """Sorted real roots in w of g(t, .) for real t; coef_cols are float
    coefficient lists in t per w-power."""
    wc = np.array([np.polyval(col[::-1], t) for col in coef_cols])
    wc = np.trim_zeros(wc, "b")
    if wc.size <= 1:
        return np.array([])
    roots = np.roots(wc[::-1])
    real = np.sort(roots[np.abs(roots.imag) < 1e-7 * (1 + np.abs(roots))].real)
    return real


def _float_cols(g: BivariatePoly):
    scale = max(abs(c) for c in g.coeffs.values())
    return [[float(c / scale) for c in col] for col in g.y_coefficients()]


@dataclass
class _Band:
    lo: float
    hi: float
    sample: float
    n_roots: int = 0
    # list of (lo_root_idx, hi_root_idx) pairs describing the filled domain
    # slice intervals; None until the sweep ran
    pattern: list[tuple[int, int]] = field(default_factory=list)


class SliceTopology:
    """Band sweep over the real critical values: region components of the
    complement of the real curve, the seed component, and the filled domain
    bounded by its outer oval."""

    def __init__(self, domain: DomainSpec, frame: DirectionFrame,
                 real_critical: list[float]):
        self.domain = domain
        self.frame = frame
        g = _rotated(domain, frame)
        self._cols = _float_cols(g)
        self._gpoly = g
        ts = sorted(real_critical)
        if not ts:
            raise GenericityError("no real critical values: the curve bounds "
                                  "no oval in this frame")
        spread = max(ts[-1] - ts[0], 1.0)
        edges = [ts[0] - 0.2 * spread - 1.0] + ts + [ts[-1] + 0.2 * spread + 1.0]
        self.bands = [_Band(edges[i], edges[i + 1],
                            0.5 * (edges[i] + edges[i + 1]))
                      for i in range(len(edges) - 1)]
        self._sweep()

    # -- sweep ------------------------------------------------------------

    def _intervals_at(self, t: float):
        """All complement intervals of the real slice at t: list of
        (lo, hi, sign) with infinite ends, plus the root array."""
        roots = _real_w_roots(self._cols, t)
        pts = [-np.inf] + list(roots) + [np.inf]
        out = []
        for i in range(len(pts) - 1):
            lo, hi = pts[i], pts[i + 1]
            if lo == -np.inf:
                mid = (hi - 1.0) if hi != np.inf else 0.0
            elif hi == np.inf:
                mid = lo + 1.0
            else:
                mid = 0.5 * (lo + hi)
            sgn = 1 if self._geval(t, mid) > 0 else -1
            out.append((lo, hi, sgn))
        return out, roots

    def _geval(self, t: float, w: float) -> float:
        acc = 0.0
        for j, col in enumerate(self._cols):
            acc += np.polyval(col[::-1], t) * w**j
        return acc

    def _sweep(self):
        nodes = []          # (band_index, interval_index)
        band_ivs = []       # cached intervals at band samples
        for bi, band in enumerate(self.bands):
            ivs, roots = self._intervals_at(band.sample)
            band.n_roots = len(roots)
            band_ivs.append(ivs)
            nodes.extend((bi, k) for k in range(len(ivs)))
        index = {nd: i for i, nd in enumerate(nodes)}
        parent = list(range(len(nodes)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        def union(i, j):
            parent[find(i)] = find(j)

        # adjacency across each interior band edge, matched just next to the
        # critical value on both sides and filtered by region sign
        for bi in range(len(self.bands) - 1):
            tcrit = self.bands[bi].hi
            h = 1e-4 * min(self.bands[bi].hi - self.bands[bi].lo,
                           self.bands[bi + 1].hi - self.bands[bi + 1].lo)
            lo_ivs, lo_roots = self._intervals_at(tcrit - h)
            hi_ivs, hi_roots = self._intervals_at(tcrit + h)
            if len(lo_roots) != self.bands[bi].n_roots or \
               len(hi_roots) != self.bands[bi + 1].n_roots:
                raise GenericityError(
                    f"unstable root count next to the branch point t={tcrit:.6g}")
            for a, (alo, ahi, asgn) in enumerate(lo_ivs):
                for b, (blo, bhi, bsgn) in enumerate(hi_ivs):
                    if asgn == bsgn and alo < bhi and blo < ahi:
                        union(index[(bi, a)], index[(bi + 1, b)])

        # unbounded-region components: any interval with an infinite end
        inf_roots = set()
        for bi, ivs in enumerate(band_ivs):
            for k, (lo, hi, _) in enumerate(ivs):
                if lo == -np.inf or hi == np.inf:
                    inf_roots.add(find(index[(bi, k)]))
        # also every interval in the sentinel bands is outside the oval span
        for bi in (0, len(self.bands) - 1):
            for k in range(len(band_ivs[bi])):
                inf_roots.add(find(index[(bi, k)]))

        # seed location
        ts, ws = self.frame.to_frame(*self.domain.seed)
        ts, ws = float(ts), float(ws)
        sbi = self._band_index(ts)
        if sbi is None:
            raise GenericityError("seed projects onto a critical value")
        seed_iv = None
        for k, (lo, hi, _) in enumerate(band_ivs[sbi]):
            if lo < ws < hi:
                seed_iv = k
                break
        if seed_iv is None:
            raise GenericityError("seed lies on the curve (numerically)")
        seed_comp = find(index[(sbi, seed_iv)])
        if seed_comp in inf_roots:
            raise GenericityError("seed component is unbounded: the seed "
                                  "must lie inside a bounded oval")
        self.seed_sign = band_ivs[sbi][seed_iv][2]

        # filled-domain pattern per band: seed-component intervals with the
        # enclosed gaps (gaps whose first interval is in a bounded component)
        for bi, band in enumerate(self.bands):
            ivs = band_ivs[bi]
            members = [k for k in range(len(ivs))
                       if find(index[(bi, k)]) == seed_comp]
            if not members:
                band.pattern = []
                continue
            merged = []
            cur_lo, cur_hi = members[0], members[0]
            for k in members[1:]:
                gap_first = find(index[(bi, cur_hi + 1)])
                if gap_first not in inf_roots:
                    cur_hi = k          # enclosed gap: fill through it
                else:
                    merged.append((cur_lo, cur_hi))
                    cur_lo = cur_hi = k
            merged.append((cur_lo, cur_hi))
            # interval k spans roots (k-1, k); store root index pairs
            band.pattern = [(lo - 1, hi) for lo, hi in merged]
            if any(lo < 0 or hi > band.n_roots - 1 for lo, hi in band.pattern):
                raise GenericityError("unbounded filled slice: inconsistent "
                                      "component data")

        occupied = [bi for bi, b in enumerate(self.bands) if b.pattern]
        if occupied != list(range(occupied[0], occupied[-1] + 1)):
            raise GenericityError("selected domain projects onto a "
                                  "disconnected parameter range")
        self.first_band = occupied[0]
        self.last_band = occupied[-1]
        self.m = self.bands[self.first_band].lo
        self.M = self.bands[self.last_band].hi

    def _band_index(self, t: float):
        for bi, band in enumerate(self.bands):
            if band.lo < t < band.hi:
                return bi
        return None

    # -- queries ----------------------------------------------------------

    def slice_intervals(self, t: float) -> list[tuple[float, float]]:
        """Filled-domain intervals [w-, w+] of the fiber at real t."""
        bi = self._band_index(t)
        if bi is None or not self.bands[bi].pattern:
            return []
        roots = _real_w_roots(self._cols, t)
        if len(roots) != self.bands[bi].n_roots:
            raise GenericityError(f"root count changed inside a band at t={t:.6g}")
        return [(roots[lo], roots[hi]) for lo, hi in self.bands[bi].pattern]

    def width(self, t: float) -> float:
        return sum(hi - lo for lo, hi in self.slice_intervals(t))

    def pattern_changes_at(self, tcrit: float) -> bool:
        """True when the filled-domain slice structure changes across the
        critical value: the tangency sits on the outer oval."""
        bi = next((i for i, b in enumerate(self.bands)
                   if abs(b.hi - tcrit) < 1e-12 * (1 + abs(tcrit))), None)
        if bi is None:
            return False
        h = 1e-4 * min(self.bands[bi].hi - self.bands[bi].lo,
                       self.bands[bi + 1].hi - self.bands[bi + 1].lo)
        lo = self.slice_intervals(tcrit - h)
        hi = self.slice_intervals(tcrit + h)
        if len(lo) != len(hi):
            return True
        return any(not (a_lo < b_hi and b_lo < a_hi)
                   for (a_lo, a_hi), (b_lo, b_hi) in zip(lo, hi))


@functools.lru_cache(maxsize=32)
def slice_topology(domain: DomainSpec, frame: DirectionFrame) -> SliceTopology:
    disc = discriminant_t(domain.f, frame)
    reals = _classified_roots(disc)[0]
    return SliceTopology(domain, frame, [r.real for r in reals])


def _classified_roots(disc):
    """(real roots, all roots with multiplicity) of an exact univariate
    polynomial; multiplicities from the exact squarefree decomposition."""
    if not utrim(list(disc)):
        raise GenericityError("discriminant vanishes identically: the curve "
                              "is non-reduced or contains a fiber line")
    factors = usquarefree_decomposition(disc)
    entries = []
    for fac, mult in factors:
        for r in uroots(fac):
            is_real = bool(abs(r.imag) < REAL_TOL * (1 + abs(r)))
            entries.append((complex(r.real, 0.0) if is_real else complex(r),
                            mult, is_real))
    entries.sort(key=lambda e: (round(e[0].real, 12), e[0].imag))
    reals = [e[0] for e in entries if e[2]]
    return reals, entries


def critical_values(domain: DomainSpec, frame: DirectionFrame) -> CriticalData:
    """Critical values of the projection on the complex curve, with the real
    ones attained on the selected outer oval marked, and the oval's extreme
    values m < M."""
    disc = discriminant_t(domain.f, frame)
    _, entries = _classified_roots(disc)
    if any(mult > 1 for _, mult, _ in entries):
        bad = [t for t, mult, _ in entries if mult > 1]
        raise GenericityError(f"multiple discriminant roots at {bad}: "
                              "direction is not strictly Morse")
    topo = slice_topology(domain, frame)
    values = []
    for t, mult, is_real in entries:
        on_oval = is_real and topo.pattern_changes_at(t.real)
        values.append(CriticalValue(t, mult, is_real, on_oval))
    if not any(v.on_oval for v in values):
        raise GenericityError("no critical values on the selected oval")
    return CriticalData(tuple(values), topo.m, topo.M)


def fiber_roots(f: BivariatePoly, frame: DirectionFrame, t: complex,
                collision_tol: float = 1e-9) -> FiberSample:
    """All complex w-roots of the fiber polynomial g(t, .), Newton-polished;
    count always equals the w-degree of g."""
    g = rotated_poly(f, frame)
    cols = _float_cols(g)
    wc = np.array([complex(np.polyval(np.array(col, dtype=complex)[::-1], t))
                   for col in cols])
    lead = wc[-1]
    scale = np.max(np.abs(wc)) or 1.0
    if abs(lead) < 1e-12 * scale:
        raise InputError(f"fiber degree drops at t={t}: root escapes to "
                         "infinity (leading coefficient vanishes)")
    roots = np.roots(wc[::-1])
    dwc = np.array([wc[j] * j for j in range(1, len(wc))])
    for _ in range(6):
        val = np.polyval(wc[::-1], roots)
        dval = np.polyval(dwc[::-1], roots)
        roots = roots - np.where(np.abs(dval) > 1e-30, val / np.where(dval == 0, 1, dval), 0)
    roots = np.array(sorted(roots, key=lambda z: (round(z.real, 12), z.imag)))
    dmin = np.inf
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            dmin = min(dmin, abs(roots[i] - roots[j]))
    return FiberSample(tuple(roots), bool(dmin < collision_tol))


def real_slice(domain: DomainSpec, frame: DirectionFrame, t: float
               ) -> list[tuple[float, float]]:
    """Ordered disjoint fiber intervals [w-, w+] of the selected domain
    (holes filled) at real t; empty outside (m, M)."""
    return slice_topology(domain, frame).slice_intervals(t)


@dataclass
class GenericityReport:
    passed: bool
    reasons: list[str] = field(default_factory=list)
    min_real_gap: float | None = None
    oval_critical_count: int = 0

    def __bool__(self):
        return self.passed


def genericity_check(domain: DomainSpec, frame: DirectionFrame
                     ) -> GenericityReport:
    """Morse-genericity report: squarefree discriminant, pairwise-distinct
    real critical values, nondegenerate quadratic tangencies on the oval and
    a valid bounded seed component."""
    reasons = []
    try:
        disc = discriminant_t(domain.f, frame)
    except InputError as exc:
        return GenericityReport(False, [str(exc)])
    if not utrim(list(disc)):
        return GenericityReport(False, ["discriminant vanishes identically "
                                        "(non-reduced curve polynomial)"])
    factors = usquarefree_decomposition(disc)
    if any(mult > 1 for _, mult in factors):
        reasons.append("discriminant has multiple roots")
    try:
        reals, _ = _classified_roots(disc)
    except GenericityError as exc:
        return GenericityReport(False, [str(exc)])
    gaps = [b.real - a.real for a, b in zip(reals, reals[1:])]
    min_gap = min(gaps) if gaps else None
    if min_gap is not None and min_gap < 1e-8:
        reasons.append(f"real critical values closer than tolerance ({min_gap:.3g})")
    topo = None
    try:
        topo = slice_topology(domain, frame)
    except GenericityError as exc:
        reasons.append(str(exc))
    oval_count = 0
    if topo is not None:
        g = _rotated(domain, frame)
        gw = g.diff(1)
        gww = gw.diff(1)
        gt = g.diff(0)
        scale = max(abs(float(c)) for c in g.coeffs.values())
        for tv in (r.real for r in reals):
            if not topo.pattern_changes_at(tv):
                continue
            oval_count += 1
            wc = _critical_point_w(g, tv)
            if wc is None:
                reasons.append(f"no tangency point found over t={tv:.6g}")
                continue
            if abs(gt.eval_float(tv, wc)) < 1e-7 * scale:
                reasons.append(f"curve is singular at the tangency over "
                               f"t={tv:.6g}")
            if abs(gww.eval_float(tv, wc)) < 1e-7 * scale:
                reasons.append(f"degenerate (non-quadratic) tangency over "
                               f"t={tv:.6g}")
        if oval_count < 2:
            reasons.append("fewer than two critical values on the oval")
    return GenericityReport(not reasons, reasons, min_gap, oval_count)


def _critical_point_w(g: BivariatePoly, tv: float):
    """Fiber coordinate of the tangency over a real critical value: the
    closest root pair midpoint of g(tv, .)."""
    cols = _float_cols(g)
    wc = np.array([np.polyval(np.array(col)[::-1], tv) for col in cols],
                  dtype=complex)
    wc = np.trim_zeros(wc, "b")
    if wc.size <= 2:
        return None
    roots = np.roots(wc[::-1])
    best, pair = np.inf, None
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            d = abs(roots[i] - roots[j])
            if d < best:
                best, pair = d, 0.5 * (roots[i] + roots[j])
    return None if pair is None else float(pair.real)


def find_generic_frame(domain: DomainSpec, initial: DirectionFrame,
                       attempts: int = 16):
    """The given frame when it passes, else deterministic rational rotations
    of it until one passes."""
    report = genericity_check(domain, initial)
    if report:
        return initial, report
    for k in range(1, attempts + 1):
        eps = Fraction(k, 16 + k * k)   # deterministic, slowly varying tilts
        cand = DirectionFrame(initial.a - eps * initial.b,
                              initial.b + eps * initial.a)
        report = genericity_check(domain, cand)
        if report:
            return cand, report
    raise GenericityError(f"no generic direction found after {attempts} "
                          "rotations")


# ---------------------------------------------------------------------------
# curve file format: lines "i j coeff" per monomial, "seed x y", "#" comments

def parse_curve_text(text: str) -> DomainSpec:
    mono = []
    seed = None
    for ln_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "seed":
                if len(parts) != 3:
                    raise ValueError("seed needs two coordinates")
                seed = (Fraction(parts[1]), Fraction(parts[2]))
            else:
                if len(parts) != 3:
                    raise ValueError("monomial line needs 'i j coeff'")
                mono.append((int(parts[0]), int(parts[1]), Fraction(parts[2])))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"line {ln_no}: {exc}") from None
    if seed is None:
        raise ParseError("missing 'seed x y' line")
    if not mono:
        raise ParseError("no monomials")
    try:
        f = BivariatePoly(mono)
        return DomainSpec(f, seed)
    except (ValueError, InputError) as exc:
        raise ParseError(str(exc)) from None


def format_curve_text(domain: DomainSpec) -> str:
    lines = [f"{i} {j} {c}" for i, j, c in domain.f.monomials()]
    lines.append(f"seed {domain.seed[0]} {domain.seed[1]}")
    return "\n".join(lines) + "\n"
