"""Vanishing 0-cycles of the fibered oval, their intersection lattice and
the sign certificate tying the boundary class to the lattice kernel.

At plane-curve scale the reduced fiber data is a finite point set, so each
vanishing cycle is a signed pair of base-fiber labels, the intersection
pairing is exact integer coefficient matching, and transporting cycles is
permuting labels."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .curve import (CriticalData, DirectionFrame, DomainSpec, fiber_roots,
                    slice_topology)
from .errors import CertificateError, GenericityError, InputError
from .lattice import GramLattice, LatticeVector, gram_kernel, \
    irreducible_components, reflect
from .paths import ComplexPath, Segment, bumpy_real_path
from .tracking import FiberState, FiberTracker, TrackingConfig

Chain = dict[int, int]   # base-fiber label -> integer coefficient


@dataclass(frozen=True)
class VanishingCycle0:
    plus_label: int
    minus_label: int
    origin: float              # critical value it collapses into
    kind: str                  # "min" (pair real above) or "max" (below)

    def chain(self) -> Chain:
        return {self.plus_label: 1, self.minus_label: -1}


@dataclass
class GermLatticeF:
    cycles: list[VanishingCycle0]
    gram: GramLattice
    base: FiberState
    basepoint: float


def chain_add(a: Chain, b: Chain, sign: int = 1) -> Chain:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + sign * v
    return {k: v for k, v in out.items() if v != 0}


def chain_permute(chain: Chain, perm: tuple[int, ...]) -> Chain:
    out: Chain = {}
    for k, v in chain.items():
        out[perm[k]] = out.get(perm[k], 0) + v
    return {k: v for k, v in out.items() if v != 0}


def _colliding_pair(roots, exclude_scale: float):
    """Indices and distance of the closest root pair; genericity error when a
    second pair comes within twice that distance."""
    pairs = sorted(
        ((abs(roots[i] - roots[j]), i, j)
         for i in range(len(roots)) for j in range(i + 1, len(roots))))
    d0, i0, j0 = pairs[0]
    rivals = [p for p in pairs[1:] if p[1] not in (i0, j0) and p[2] not in (i0, j0)]
    if rivals and rivals[0][0] < 2 * d0:
        raise GenericityError("two root pairs collide at comparable rates "
                              f"(distances {d0:.3g} and {rivals[0][0]:.3g})")
    if d0 > exclude_scale:
        raise GenericityError(f"no colliding pair found (closest {d0:.3g})")
    return i0, j0, d0


def _pair_at_side_point(domain: DomainSpec, frame: DirectionFrame,
                        tracker: FiberTracker, tj: float, kind: str,
                        p: float, nu: float):
    """Fiber at the side point p with the colliding pair's (plus, minus)
    indices: the pair is identified close to the tangency, where the
    square-root collision dominates every other root distance, and then
    transported radially out to p."""
    delta = (p - tj) * 0.02
    t_id = tj + delta
    roots = list(fiber_roots(domain.f, frame, t_id).roots)
    i0, j0, d0 = _colliding_pair(
        roots, exclude_scale=10 * math.sqrt(abs(delta)) *
        (1 + max(abs(r) for r in roots)))
    # Morse collision-rate check: distance ~ sqrt(|t - tj|), so the
    # quarter-offset sample shows half the distance
    closer = fiber_roots(domain.f, frame, tj + delta * 0.25)
    _, _, d1 = _colliding_pair(list(closer.roots), exclude_scale=np.inf)
    ratio = d1 / d0
    if not 0.35 < ratio < 0.65:
        raise GenericityError(
            f"collision rate {ratio:.3f} at t={tj:.6g} is not the Morse "
            "square-root rate")
    ra, rb = roots[i0], roots[j0]
    if abs(ra.imag) > 1e-5 * (1 + abs(ra)) or \
       abs(rb.imag) > 1e-5 * (1 + abs(rb)):
        raise GenericityError(f"colliding pair at t={tj:.6g} is not real "
                              "on its real side")
    hi_idx, lo_idx = (i0, j0) if ra.real > rb.real else (j0, i0)
    leg = ComplexPath((Segment(complex(t_id), complex(p)),))
    out, _, _ = tracker.run_path(leg, FiberState(complex(t_id), tuple(roots)),
                                 enforce_safety=False)
    return out, hi_idx, lo_idx


def vanishing_cycles(domain: DomainSpec, frame: DirectionFrame,
                     critical: CriticalData, basepoint: float,
                     cfg: TrackingConfig | None = None,
                     nu: float | None = None):
    """One signed root pair per oval critical value, transported to the base
    fiber along the reversed standard paths (upper half-plane bumps).

    Returns (list of cycles ordered by critical value, base fiber state,
    tracker)."""
    from .areafunc import default_nu

    oval = critical.oval_values
    if not oval:
        raise GenericityError("no critical values on the selected oval "
                              "(not a bounded oval)")
    if nu is None:
        nu = default_nu(critical)
    tracker = FiberTracker(domain.f, frame, critical.branch_points, cfg)
    base = tracker.start_state(basepoint)
    reals = critical.real_values
    cycles = []
    for tj in oval:
        kind, p = _tangency_side(domain, frame, tj, nu)
        side_state, hi_idx, lo_idx = _pair_at_side_point(
            domain, frame, tracker, tj, kind, p, nu)
        path = bumpy_real_path(p, basepoint, reals, nu / 2)
        end, _, _ = tracker.run_path(path, side_state)
        perm = tracker.match_to(end, base)
        cycles.append(VanishingCycle0(perm[hi_idx], perm[lo_idx], tj, kind))
    return cycles, base, tracker


def _tangency_side(domain: DomainSpec, frame: DirectionFrame, tj: float,
                   nu: float):
    """("min", tj + nu/2) when the colliding pair is real above the critical
    value (slice opens rightward), ("max", tj - nu/2) when below."""
    topo = slice_topology(domain, frame)
    right = topo.slice_intervals(tj + nu / 2)
    left = topo.slice_intervals(tj - nu / 2)
    # the side where the slice gained an interval is the real side of the pair
    if len(right) > len(left):
        return "min", tj + nu / 2
    if len(left) > len(right):
        return "max", tj - nu / 2
    # interval counts equal: a merge (left pair real) or split; decide by
    # whether the closest pair is real on the right
    sample = fiber_roots(domain.f, frame, tj + nu / 2)
    roots = list(sample.roots)
    i0, j0, _ = _colliding_pair(roots, exclude_scale=np.inf)
    realish = abs(roots[i0].imag) < 1e-6 * (1 + abs(roots[i0]))
    return ("min", tj + nu / 2) if realish else ("max", tj - nu / 2)


def gram_of_cycles(cycles: list[VanishingCycle0]) -> GramLattice:
    """Intersection matrix of the cycles as exact coefficient products on
    matched labels (even-dimension sign is +1); diagonals come out 2."""
    if not cycles:
        raise InputError("no cycles")
    r = len(cycles)
    chains = [c.chain() for c in cycles]
    rows = []
    for i in range(r):
        row = []
        for j in range(r):
            row.append(sum(chains[i].get(k, 0) * chains[j].get(k, 0)
                           for k in chains[i]))
        rows.append(tuple(row))
    return GramLattice(tuple(rows))


def pl_reflect(latticeF: GermLatticeF, v: LatticeVector, j: int
               ) -> LatticeVector:
    """Continuation action of the loop around cycle j's critical value on a
    lattice element."""
    return reflect(latticeF.gram, v, j)


def boundary_class(domain: DomainSpec, frame: DirectionFrame,
                   basepoint: float, base: FiberState) -> Chain:
    """Outer-oval fiber points at the basepoint as a signed 0-chain: plus at
    each slice interval's upper endpoint, minus at the lower."""
    topo = slice_topology(domain, frame)
    chain: Chain = {}
    for lo, hi in topo.slice_intervals(basepoint):
        li = min(range(len(base.roots)), key=lambda i: abs(base.roots[i] - lo))
        hi_i = min(range(len(base.roots)), key=lambda i: abs(base.roots[i] - hi))
        chain[hi_i] = chain.get(hi_i, 0) + 1
        chain[li] = chain.get(li, 0) - 1
    return {k: v for k, v in chain.items() if v != 0}


def kernel_certificate(latticeF: GermLatticeF, boundary: Chain
                       ) -> tuple[int, ...]:
    """Signs eps with the full signed cycle sum vanishing as a 0-chain and
    the partial sum over critical values left of the basepoint equal to the
    boundary class; certifies gram . eps = 0 exactly.

    The vanished full sum is the reduced image of the filled-domain class;
    the left partial sum telescopes to the boundary class and pins the
    overall sign."""
    cycles = latticeF.cycles
    r = len(cycles)
    if r > 20:
        raise InputError(f"sign search capped at 20 cycles, got {r}")
    chains = [c.chain() for c in cycles]
    left = [i for i, c in enumerate(cycles) if c.origin < latticeF.basepoint]
    for signs in itertools.product((1, -1), repeat=r):
        total: Chain = {}
        part: Chain = {}
        for i, s in enumerate(signs):
            total = chain_add(total, chains[i], s)
            if i in left:
                part = chain_add(part, chains[i], s)
        if total == {} and part == boundary:
            gv = [sum(latticeF.gram.gram[i][j] * signs[j] for j in range(r))
                  for i in range(r)]
            if any(gv):
                raise CertificateError(
                    "matched signs are not a kernel vector: orientation "
                    f"convention broke (gram . eps = {gv})")
            return signs
    raise CertificateError("no sign pattern matches the boundary class")


@dataclass
class ComponentKernelReport:
    components: list[list[int]]
    sums_in_kernel: list[bool]

    @property
    def all_in_kernel(self) -> bool:
        return all(self.sums_in_kernel)


def component_kernel_sums(latticeF: GermLatticeF, signs: tuple[int, ...]
                          ) -> ComponentKernelReport:
    """Per irreducible component: does the signed generator sum sit in the
    form's kernel (exact integer check)?"""
    comps = irreducible_components(latticeF.gram)
    r = latticeF.gram.rank
    flags = []
    for comp in comps:
        vec = tuple(signs[i] if i in comp else 0 for i in range(r))
        gv = [sum(latticeF.gram.gram[i][j] * vec[j] for j in range(r))
              for i in range(r)]
        flags.append(not any(gv))
    return ComponentKernelReport(comps, flags)


def assemble_lattice(domain: DomainSpec, frame: DirectionFrame,
                     critical: CriticalData, basepoint: float,
                     cfg: TrackingConfig | None = None,
                     nu: float | None = None):
    """Full lattice pipeline: cycles, gram, boundary class and certificate.

    Returns (GermLatticeF, boundary chain, signs)."""
    cycles, base, tracker = vanishing_cycles(domain, frame, critical,
                                             basepoint, cfg, nu)
    gram = gram_of_cycles(cycles)
    latticeF = GermLatticeF(cycles, gram, base, basepoint)
    boundary = boundary_class(domain, frame, basepoint, base)
    signs = kernel_certificate(latticeF, boundary)
    return latticeF, boundary, signs


def kernel_chain_matches(latticeF: GermLatticeF) -> bool:
    """Every kernel basis vector of the gram pairs to zero with every
    generator (sanity restatement of the kernel definition)."""
    for vec in gram_kernel(latticeF.gram):
        gv = [sum(latticeF.gram.gram[i][j] * vec[j]
                  for j in range(latticeF.gram.rank))
              for i in range(latticeF.gram.rank)]
        if any(gv):
            return False
    return True


# ---------------------------------------------------------------------------
# local germ values near a critical value (square-root substitution)

_GL48 = np.polynomial.legendre.leggauss(48)


def vanishing_germ_value(domain: DomainSpec, frame: DirectionFrame,
                         tj: float, side: int, s: float,
                         orient_pair=None) -> complex:
    """Integral of the colliding root-pair difference from the critical value
    to tj + side*s, with the square-root change of variable that makes the
    integrand analytic; the signed local germ value, scaling like s**1.5.

    orient_pair fixes which pair member counts positively: a (plus, minus)
    pair of approximate root positions at the far endpoint; by default the
    branch with larger real part at the far endpoint is positive."""
    if side not in (-1, 1) or s <= 0:
        raise InputError("side must be +-1 and s positive")
    nodes, weights = _GL48
    vmax = math.sqrt(s)
    acc = 0.0 + 0.0j
    prev_pair = orient_pair
    # march from the far endpoint toward the collision so the pair order is
    # pinned where the roots are well separated
    for x, wgt in sorted(zip(nodes, weights), key=lambda t: -t[0]):
        v = 0.5 * vmax * (x + 1)
        u = tj + side * v * v
        roots = list(fiber_roots(domain.f, frame, u).roots)
        if prev_pair is None:
            i0, j0, _ = _colliding_pair(roots, exclude_scale=np.inf)
            if roots[i0].real < roots[j0].real:
                i0, j0 = j0, i0
        else:
            i0 = min(range(len(roots)), key=lambda i: abs(roots[i] - prev_pair[0]))
            j0 = min(range(len(roots)), key=lambda i: abs(roots[i] - prev_pair[1]))
        prev_pair = (roots[i0], roots[j0])
        diff = roots[i0] - roots[j0]
        acc += wgt * diff * 2 * side * v * (0.5 * vmax)
    return complex(acc) / float(frame.norm2)


def vanishing_germ_magnitude(domain: DomainSpec, frame: DirectionFrame,
                             tj: float, side: int, s: float) -> float:
    return abs(vanishing_germ_value(domain, frame, tj, side, s))


def germ_values_at_base(domain: DomainSpec, frame: DirectionFrame,
                        critical: CriticalData, latticeF: GermLatticeF,
                        nu: float, cfg: TrackingConfig | None = None
                        ) -> list[complex]:
    """Numeric basepoint value of each transported vanishing germ: the local
    germ value on the tangency's real side continued along the reversed
    standard path. With the certificate signs these sum to the total area
    (the constant-germ identity behind the boundary-class certificate)."""
    tracker = FiberTracker(domain.f, frame, critical.branch_points, cfg)
    reals = critical.real_values
    scale = 1.0 / float(frame.norm2)
    out = []
    for c in latticeF.cycles:
        side = 1 if c.kind == "min" else -1
        p = c.origin + side * nu / 2
        state, hi, lo = _pair_at_side_point(domain, frame, tracker, c.origin,
                                            c.kind, p, nu)
        local = vanishing_germ_value(
            domain, frame, c.origin, side, nu / 2,
            orient_pair=(state.roots[hi], state.roots[lo]))
        path = bumpy_real_path(p, latticeF.basepoint, reals, nu / 2)
        _, integral, _ = tracker.run_path(path, state, cycle=(lo, hi))
        out.append(local + integral * scale)
    return out


def germ_exponent_fit(domain: DomainSpec, frame: DirectionFrame, tj: float,
                      side: int, s_values) -> float:
    """Least-squares slope of log-magnitude against log-offset."""
    xs, ys = [], []
    for s in s_values:
        mag = vanishing_germ_magnitude(domain, frame, tj, side, s)
        if mag > 0:
            xs.append(math.log(s))
            ys.append(math.log(mag))
    if len(xs) < 2:
        raise InputError("not enough usable samples for the exponent fit")
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = sum((x - mx) ** 2 for x in xs)
    return num / den
