"""The cut-area function of the selected domain: direct quadrature on the
real axis, analytic continuation along parameter-plane paths, and the big
monodromy loops that shift its value by twice the total area.

The area germ carries the two tracked fiber labels bounding the integration
cycle's slice segment; its derivative along the parameter is the difference
of those two roots (scaled by the frame normalization)."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

from scipy.integrate import quad

from .curve import (CriticalData, DirectionFrame, DomainSpec, slice_topology)
from .errors import ConstructionError, InputError
from .paths import (Arc, ComplexPath, Segment, bumpy_real_path, full_circle,
                    standard_loop)
from .tracking import FiberState, FiberTracker, TrackingConfig


@dataclass
class AreaGerm:
    t: complex
    value: complex
    cycle: tuple[int, int]          # (lower label a, upper label b): V' ~ y_b - y_a
    fiber: FiberState


@dataclass
class LoopProgram:
    path: ComplexPath
    annotations: list[tuple[float, str]] = field(default_factory=list)

    @property
    def basepoint(self) -> complex:
        return self.path.start


def default_nu(critical: CriticalData) -> float:
    """A quarter of the minimal gap between consecutive members of the real
    branch locus united with the oval extremes."""
    pts = sorted(set(critical.real_values) | {critical.m, critical.M})
    gaps = [b - a for a, b in zip(pts, pts[1:]) if b - a > 1e-12]
    if not gaps:
        raise InputError("cannot pick nu: no gaps between critical values")
    return 0.25 * min(gaps)


def default_basepoint(critical: CriticalData, nu: float) -> float:
    return critical.m + nu / 2


# ---------------------------------------------------------------------------
# direct quadrature

@functools.lru_cache(maxsize=32)
def _band_areas(domain: DomainSpec, frame: DirectionFrame):
    """Cumulative filled-slice area per occupied band, in domain-plane units."""
    topo = slice_topology(domain, frame)
    scale = 1.0 / float(frame.norm2)

    def width(t):
        return _robust_width(topo, t)

    cum = []
    total = 0.0
    for bi in range(topo.first_band, topo.last_band + 1):
        band = topo.bands[bi]
        val, _ = quad(width, band.lo, band.hi, epsabs=1e-11, epsrel=1e-12,
                      limit=300)
        cum.append((band.lo, band.hi, total, val * scale))
        total += val * scale
    return cum, total


def _robust_width(topo, t):
    try:
        return topo.width(t)
    except Exception:
        # next to a band edge the closing root pair may be classified
        # complex; the slice there has vanishing width anyway
        return 0.0


def area_direct(domain: DomainSpec, frame: DirectionFrame, t: float) -> float:
    """Area of the filled domain on the lower side of the fiber at t,
    clamped to [0, total area] outside the projection range."""
    cum, total = _band_areas(domain, frame)
    if t <= cum[0][0]:
        return 0.0
    if t >= cum[-1][1]:
        return total
    topo = slice_topology(domain, frame)
    scale = 1.0 / float(frame.norm2)
    for lo, hi, before, whole in cum:
        if t <= hi:
            if t >= hi - 1e-13 * (1 + abs(hi)):
                return before + whole
            val, _ = quad(lambda u: _robust_width(topo, u), lo, t,
                          epsabs=1e-11, epsrel=1e-12, limit=300)
            return before + val * scale
    return total


def total_area(domain: DomainSpec, frame: DirectionFrame) -> float:
    return _band_areas(domain, frame)[1]


# ---------------------------------------------------------------------------
# germs and continuation

def initial_germ(domain: DomainSpec, frame: DirectionFrame,
                 tracker: FiberTracker, basepoint: float) -> AreaGerm:
    """Real germ at a regular basepoint whose slice is one interval (the
    first band); the cycle is (lower endpoint, upper endpoint)."""
    topo = slice_topology(domain, frame)
    intervals = topo.slice_intervals(basepoint)
    if len(intervals) != 1:
        raise InputError(
            f"initial germ needs a single-interval slice at t={basepoint}; "
            f"found {len(intervals)} (pick a basepoint in the first band)")
    lo, hi = intervals[0]
    fiber = tracker.start_state(basepoint)
    ia = _nearest_label(fiber, lo)
    ib = _nearest_label(fiber, hi)
    if ia == ib:
        raise ConstructionError("slice endpoints match the same fiber root")
    value = area_direct(domain, frame, basepoint)
    return AreaGerm(complex(basepoint), complex(value), (ia, ib), fiber)


def _nearest_label(fiber: FiberState, w: float) -> int:
    return min(range(len(fiber.roots)), key=lambda i: abs(fiber.roots[i] - w))


def area_continue(tracker: FiberTracker, germ: AreaGerm, path: ComplexPath,
                  frame: DirectionFrame, record: bool = False):
    """Continue the germ along the path, transporting its cycle labels and
    integrating the root difference with the same adaptive steps.

    Returns (germ at path end, samples) with samples a list of
    (t, accumulated value) when record is set."""
    end, integral, samples = tracker.run_path(path, germ.fiber,
                                              cycle=germ.cycle, record=record)
    scale = 1.0 / float(frame.norm2)
    value = germ.value + integral * scale
    out_samples = None
    if record:
        out_samples = [(t, germ.value + v * scale) for t, v in samples]
    return AreaGerm(end.t, value, germ.cycle, end), out_samples


# ---------------------------------------------------------------------------
# big loops

def convex_big_loop(critical: CriticalData, basepoint: float,
                    nu: float) -> LoopProgram:
    """The two-tangency composite loop: around the oval minimum, then around
    the oval maximum, joined by real segments with detour bumps."""
    oval = critical.oval_values
    if len(oval) != 2:
        raise InputError(f"convex loop needs exactly 2 oval critical values, "
                         f"got {len(oval)} (use the general construction)")
    m, M = oval
    obstacles = critical.branch_points
    loop_m = standard_loop(basepoint, m, nu, obstacles)
    loop_M = standard_loop(basepoint, M, nu, obstacles)
    # maximum loop first: the composite then shifts the area germ by +2 Area
    # per turn (minimum-first negates the increment)
    program = LoopProgram(loop_M.concat(loop_m),
                          [(M, "turn-back"), (m, "full-circle")])
    return program


def single_loop(critical: CriticalData, basepoint: float, nu: float,
                target: float) -> ComplexPath:
    """Generator loop around one critical value from the basepoint."""
    return standard_loop(basepoint, target, nu, critical.branch_points)


# -- matched-pair walk ------------------------------------------------------

@dataclass
class _WalkState:
    t: float
    wa: float
    wb: float


class _PairWalker:
    """Predictor-corrector on the matched boundary-pair manifold
    {g(t, wa) = 0, g(t, wb) = 0} (equal projection values shared through t)."""

    def __init__(self, domain: DomainSpec, frame: DirectionFrame):
        from .curve import rotated_poly
        g = rotated_poly(domain.f, frame)
        scale = max(abs(float(c)) for c in g.coeffs.values())
        self._g = g
        self._scale = scale
        self._gt = g.diff(0)
        self._gw = g.diff(1)

    def residual(self, s: _WalkState):
        return (self._g.eval_float(s.t, s.wa) / self._scale,
                self._g.eval_float(s.t, s.wb) / self._scale)

    def tangent(self, s: _WalkState):
        """Null direction of the 2x3 Jacobian, unit length: components
        (dt, dwa, dwb)."""
        gta, gwa = self._gt.eval_float(s.t, s.wa), self._gw.eval_float(s.t, s.wa)
        gtb, gwb = self._gt.eval_float(s.t, s.wb), self._gw.eval_float(s.t, s.wb)
        v = (gwa * gwb, -gta * gwb, -gtb * gwa)
        norm = math.hypot(*v)
        if norm == 0:
            raise ConstructionError("walk tangent vanished (singular pair)")
        return tuple(c / norm for c in v)

    def correct(self, s: _WalkState, iters: int = 14, tol: float = 1e-11):
        size = 1 + abs(s.t) + abs(s.wa) + abs(s.wb)
        for _ in range(iters):
            fa = self._g.eval_float(s.t, s.wa)
            fb = self._g.eval_float(s.t, s.wb)
            gta, gwa = self._gt.eval_float(s.t, s.wa), self._gw.eval_float(s.t, s.wa)
            gtb, gwb = self._gt.eval_float(s.t, s.wb), self._gw.eval_float(s.t, s.wb)
            # minimal-norm Newton update for the underdetermined system
            a11 = gta * gta + gwa * gwa
            a12 = gta * gtb
            a22 = gtb * gtb + gwb * gwb
            det = a11 * a22 - a12 * a12
            if det == 0:
                return False
            la = (-fa * a22 + fb * a12) / det
            lb = (-fb * a11 + fa * a12) / det
            s.t += gta * la + gtb * lb
            s.wa += gwa * la
            s.wb += gwb * lb
            step = math.hypot(gta * la + gtb * lb, gwa * la, gwb * lb)
            if step < tol * size:
                return True
        return False


def general_big_loop(domain: DomainSpec, frame: DirectionFrame,
                     critical: CriticalData,
                     cfg: TrackingConfig | None = None,
                     nu: float | None = None,
                     half_plane: str = "upper",
                     max_steps: int = 400_000) -> LoopProgram:
    """Composite big loop for an arbitrary oval, built by walking the matched
    boundary pair from the projection minimum to the maximum.

    The walk emits a full detour circle each time its projection value
    reverses at a critical value, a half-circle each time it passes one
    monotonically, and a final turn-back circle at the maximum; the loop is
    the initial minimum circle, the forward walk path, the maximum circle
    and the reversed walk path."""
    if nu is None:
        nu = default_nu(critical)
    topo = slice_topology(domain, frame)
    m, M = topo.m, topo.M
    basepoint = m + nu / 2
    intervals = topo.slice_intervals(basepoint)
    if len(intervals) != 1:
        raise ConstructionError("slice next to the minimum is not a single "
                                "interval")
    walker = _PairWalker(domain, frame)
    state = _WalkState(basepoint, intervals[0][0], intervals[0][1])
    if not walker.correct(state):
        raise ConstructionError("cannot seed the boundary-pair walk")

    reals = sorted(critical.real_values)
    span = M - m
    h = 2e-3 * span
    hmin, hmax = 1e-9 * span, 8e-3 * span
    v = walker.tangent(state)
    if v[0] < 0:
        v = tuple(-c for c in v)
    events: list[tuple[float, str, int]] = []   # (t_j, kind, direction before)
    steps = 0
    while steps < max_steps:
        steps += 1
        trial = _WalkState(state.t + h * v[0], state.wa + h * v[1],
                           state.wb + h * v[2])
        if not walker.correct(trial):
            h *= 0.5
            if h < hmin:
                raise ConstructionError(
                    f"boundary-pair walk stalled at t={state.t:.6g} "
                    f"(events so far: {events})")
            continue
        vt = walker.tangent(trial)
        dot = sum(a * b for a, b in zip(v, vt))
        if dot < 0:
            vt = tuple(-c for c in vt)
        if dot == 0 or abs(dot) < 0.2:
            h *= 0.5
            if h < hmin:
                raise ConstructionError(
                    f"boundary-pair walk lost its direction at t={state.t:.6g}")
            continue
        direction_before = 1 if v[0] >= 0 else -1
        direction_after = 1 if vt[0] >= 0 else -1
        if direction_after != direction_before and abs(vt[0]) > 1e-10:
            # projection value reversed inside this step: a pair point hit a
            # tangency; attribute to the nearest critical value
            turn_t = max(state.t, trial.t) if direction_before > 0 \
                else min(state.t, trial.t)
            tj = min(reals, key=lambda r: abs(r - turn_t))
            if abs(tj - turn_t) > nu:
                raise ConstructionError(
                    f"walk reversed at t={turn_t:.6g}, far from any "
                    "critical value")
            if tj <= m + 1e-9 * span or (events and events[-1][0] == tj
                                         and events[-1][1] == "turn"):
                raise ConstructionError("walk bounced at the same tangency "
                                        "twice in a row")
            events.append((tj, "turn", direction_before))
        else:
            lo, hi = min(state.t, trial.t), max(state.t, trial.t)
            for tj in reals:
                if lo < tj < hi:
                    events.append((tj, "pass", direction_before))
        state = trial
        v = vt
        h = min(h * 1.3, hmax)
        if v[0] > 0 and state.t >= M - 0.6 * nu:
            break
    else:
        raise ConstructionError(
            f"boundary-pair walk did not reach the maximum in {max_steps} "
            f"steps (events: {events})")

    return _assemble_loop(basepoint, m, M, nu, events, half_plane)


def _assemble_loop(basepoint: float, m: float, M: float, nu: float, events,
                   half_plane: str) -> LoopProgram:
    r = nu / 2
    upper = half_plane != "lower"
    pieces: list = []
    annotations = []
    cur = basepoint
    forward: list = []
    for tj, kind, direction in events:
        if kind == "pass":
            if direction > 0:
                forward.append(Segment(complex(cur), complex(tj - r)))
                forward.append(Arc(complex(tj), r, math.pi, 0.0) if upper
                               else Arc(complex(tj), r, -math.pi, 0.0))
                cur = tj + r
            else:
                forward.append(Segment(complex(cur), complex(tj + r)))
                forward.append(Arc(complex(tj), r, 0.0, math.pi) if upper
                               else Arc(complex(tj), r, 0.0, -math.pi))
                cur = tj - r
            annotations.append((tj, "half-circle-detour"))
        else:
            if direction > 0:
                forward.append(Segment(complex(cur), complex(tj - r)))
                forward.append(Arc(complex(tj), r, math.pi, 3 * math.pi))
                cur = tj - r
            else:
                forward.append(Segment(complex(cur), complex(tj + r)))
                forward.append(Arc(complex(tj), r, 0.0, 2 * math.pi))
                cur = tj + r
            annotations.append((tj, "full-circle"))
    forward.append(Segment(complex(cur), complex(M - r)))
    forward = [p for p in forward if p.length > 0]
    back = [p.reversed() for p in reversed(forward)]
    pieces += forward
    pieces.append(Arc(complex(M), r, math.pi, 3 * math.pi))
    annotations.append((M, "turn-back"))
    pieces += back
    # closing minimum circle: the composite then shifts the germ by +2 Area
    pieces.append(full_circle(complex(m), r, 0.0))
    annotations.append((m, "full-circle"))
    return LoopProgram(ComplexPath(tuple(pieces)), annotations)


def monodromy_shift(domain: DomainSpec, frame: DirectionFrame,
                    critical: CriticalData, k: int,
                    cfg: TrackingConfig | None = None,
                    nu: float | None = None,
                    half_plane: str = "upper",
                    record: bool = False,
                    basepoint: float | None = None):
    """Values of the area germ after 0..k big-loop continuations; the
    expected contract is an arithmetic progression with step twice the total
    area.

    Returns (values, loop program, samples or None)."""
    if k < 0:
        raise InputError("iteration count must be nonnegative")
    if nu is None:
        nu = default_nu(critical)
    if basepoint is None:
        basepoint = default_basepoint(critical, nu)
    if len(critical.oval_values) == 2:
        program = convex_big_loop(critical, basepoint, nu)
    else:
        program = general_big_loop(domain, frame, critical, cfg, nu,
                                   half_plane)
        walk_base = program.basepoint.real
        if abs(basepoint - walk_base) > 1e-12 * (1 + abs(walk_base)):
            # conjugate the walk loop over to the requested basepoint
            connector = bumpy_real_path(basepoint, walk_base,
                                        critical.real_values, nu / 2)
            program = LoopProgram(
                connector.concat(program.path).concat(connector.reversed()),
                program.annotations)
    tracker = FiberTracker(domain.f, frame, critical.branch_points, cfg)
    germ = initial_germ(domain, frame, tracker, basepoint)
    values = [germ.value]
    all_samples = [] if record else None
    for _ in range(k):
        germ, samples = area_continue(tracker, germ, program.path, frame,
                                      record=record)
        values.append(germ.value)
        if record:
            all_samples.extend(samples)
    return values, program, all_samples


def real_sweep_samples(domain: DomainSpec, frame: DirectionFrame,
                       critical: CriticalData,
                       cfg: TrackingConfig | None = None,
                       nu: float | None = None):
    """Continue the germ along the real segment of the first band and sample
    (t, value) per accepted step: a direct cross-check against area_direct."""
    if nu is None:
        nu = default_nu(critical)
    basepoint = default_basepoint(critical, nu)
    reals_above = [r for r in critical.real_values if r > basepoint]
    t_stop = (min(reals_above) - nu / 2) if reals_above else critical.M - nu / 2
    tracker = FiberTracker(domain.f, frame, critical.branch_points, cfg)
    germ = initial_germ(domain, frame, tracker, basepoint)
    path = ComplexPath((Segment(complex(basepoint), complex(t_stop)),))
    _, samples = area_continue(tracker, germ, path, frame, record=True)
    return samples
