"""Numerical transport of fiber roots along parameter-plane paths: the
concrete realization of flat transport over the regular values, with
permutation monodromy of closed loops."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import kernel
from .curve import DirectionFrame, fiber_roots, rotated_poly
from .errors import InputError, TrackingError
from .paths import Arc, ComplexPath, standard_loops  # noqa: F401 (re-export)
from .poly import BivariatePoly


@dataclass(frozen=True)
class TrackingConfig:
    initial_step: float = 0.05
    min_step: float = 1e-11
    max_step: float = 0.25
    newton_tol: float = 1e-12
    max_newton_iters: int = 12
    safety_factor: float = 1.0
    precision_bits: int = 53

    def __post_init__(self):
        if not (self.min_step <= self.initial_step <= self.max_step):
            raise InputError("need min_step <= initial_step <= max_step")
        if not 0 < self.safety_factor <= 1:
            raise InputError("safety_factor must be in (0, 1]")


@dataclass(frozen=True)
class FiberState:
    t: complex
    roots: tuple[complex, ...]
    max_residual: float = 0.0


def canonical_order(roots) -> tuple[complex, ...]:
    return tuple(sorted((complex(r) for r in roots),
                        key=lambda z: (round(z.real, 12), z.imag)))


class FiberTracker:
    """Per-curve context: rotated polynomial, normalized coefficient matrix,
    branch points and the safety radius for path admission."""

    def __init__(self, f: BivariatePoly, frame: DirectionFrame,
                 branch_points, cfg: TrackingConfig | None = None):
        self.f = f
        self.frame = frame
        self.cfg = cfg or TrackingConfig()
        self.g = rotated_poly(f, frame)
        self.C = self.g.coeff_matrix()
        self.branch_points = [complex(p) for p in branch_points]
        gaps = [abs(a - b) for i, a in enumerate(self.branch_points)
                for b in self.branch_points[i + 1:]]
        self.min_gap = min(gaps) if gaps else 1.0
        self.safety_radius = 0.1 * self.min_gap * self.cfg.safety_factor
        self._mp_C = None

    # -- setup ------------------------------------------------------------

    def start_state(self, t: complex) -> FiberState:
        sample = fiber_roots(self.f, self.frame, complex(t))
        if sample.on_discriminant:
            raise TrackingError(f"basepoint t={t} lies on the discriminant")
        return FiberState(complex(t), canonical_order(sample.roots))

    def _mp_context(self):
        import mpmath
        mpmath.mp.prec = self.cfg.precision_bits
        if self._mp_C is None:
            scale = max(abs(c) for c in self.g.coeffs.values())
            dx, dy = self.g.degree_in(0), self.g.degree_in(1)
            rows = [[mpmath.mpc(0)] * (dy + 1) for _ in range(dx + 1)]
            for (i, j), c in self.g.coeffs.items():
                q = Fraction(c, scale)
                rows[i][j] = mpmath.mpf(q.numerator) / mpmath.mpf(q.denominator)
            self._mp_C = rows
        return mpmath.mp, self._mp_C

    # -- transport --------------------------------------------------------

    def _piece_caps(self, piece) -> float:
        hmax = self.cfg.max_step
        if self.branch_points:
            free = min(piece.distance_to(p) for p in self.branch_points)
            hmax = min(hmax, 0.4 * free) if free > 0 else hmax
        if isinstance(piece, Arc):
            hmax = min(hmax, 0.5 * piece.radius)
        return max(hmax, 4 * self.cfg.min_step)

    def check_path(self, path: ComplexPath):
        if self.branch_points:
            clearance = path.min_distance(self.branch_points)
            if clearance < self.safety_radius * (1 - 1e-9):
                raise TrackingError(
                    f"path clearance {clearance:.4g} below the safety radius "
                    f"{self.safety_radius:.4g}")

    def run_path(self, path: ComplexPath, state: FiberState,
                 cycle: tuple[int, int] | None = None, record: bool = False,
                 enforce_safety: bool = True):
        """Transport all roots along the path; when a cycle (a, b) is given,
        accumulate the integral of (root_b - root_a) dt with the same steps.

        enforce_safety=False skips the branch-point clearance gate for legs
        that intentionally run close to a tangency (radial identification
        moves); the adaptive step control still owns correctness there.

        Returns (FiberState at the end, integral, samples)."""
        cfg = self.cfg
        if abs(complex(state.t) - path.start) > 1e-9 * (1 + abs(path.start)):
            raise TrackingError("fiber state does not sit at the path start")
        if enforce_safety:
            self.check_path(path)
        mp_ctx = None
        C = self.C
        if cfg.precision_bits > 53:
            mp_ctx, C = self._mp_context()
        roots = list(state.roots)
        roots, ok = kernel.polish_all(C, complex(state.t), roots,
                                      cfg.newton_tol) if mp_ctx is None else \
            _mp_polish(C, state.t, roots, cfg, mp_ctx)
        if not ok:
            raise TrackingError("start fiber does not converge")
        ca, cb = (cycle if cycle is not None else (-1, -1))
        total = 0.0
        max_resid = state.max_residual
        all_samples = [] if record else None
        for piece in path.pieces:
            kind, p0, p1, center, radius, a0, a1 = _piece_params(piece)
            ys, integral, resid, _, status, samples = kernel.track_piece(
                C, kind, p0, p1, center, radius, a0, a1, roots,
                rtol=cfg.newton_tol, max_newton=cfg.max_newton_iters,
                h0=cfg.initial_step, hmin=cfg.min_step,
                hmax=self._piece_caps(piece),
                cyc_a=ca, cyc_b=cb, record=record, mp_ctx=mp_ctx)
            if status != kernel.OK:
                raise TrackingError(
                    f"tracking failed with {kernel.STATUS_NAMES[status]} on "
                    f"piece {piece.serialize()}")
            roots = ys
            if record:
                all_samples.extend((t, total + v) for t, v in samples)
            total = total + integral
            max_resid = max(max_resid, resid)
        end = FiberState(path.end, tuple(complex(r) for r in roots), max_resid)
        return end, complex(total), all_samples

    def match_to(self, state: FiberState, reference: FiberState
                 ) -> tuple[int, ...]:
        """Permutation sigma with state.roots[i] continuing reference root
        sigma[i]; nearest-neighbor with ambiguity rejection."""
        if abs(complex(state.t) - complex(reference.t)) > 1e-9 * (1 + abs(state.t)):
            raise TrackingError("fiber states sit at different parameters")
        ref = reference.roots
        out = []
        used = set()
        scale = 1 + max(abs(r) for r in ref)
        for r in state.roots:
            dists = sorted((abs(r - q), j) for j, q in enumerate(ref))
            d0, j0 = dists[0]
            if d0 > 1e-5 * scale:
                raise TrackingError("transported root matches no reference root")
            if len(dists) > 1 and dists[1][0] < 4 * d0:
                raise TrackingError("ambiguous root matching after transport")
            if j0 in used:
                raise TrackingError("two transported roots match one slot")
            used.add(j0)
            out.append(j0)
        return tuple(out)


def _mp_polish(C, t, roots, cfg, mp_ctx):
    from . import _core_py
    ys = [mp_ctx.mpc(r) for r in roots]
    out = []
    ok = True
    for y in ys:
        yy, conv, _ = _core_py.newton(C, mp_ctx.mpc(t), y, cfg.newton_tol, 20)
        ok = ok and conv
        out.append(yy)
    return out, ok


def _piece_params(piece):
    if isinstance(piece, Arc):
        return (kernel.ARC, 0j, 0j, piece.center, piece.radius,
                piece.a0, piece.a1)
    return (kernel.SEGMENT, piece.z0, piece.z1, 0j, 0.0, 0.0, 0.0)


# -- public operations ----------------------------------------------------

def track_fiber(f: BivariatePoly, frame: DirectionFrame, path: ComplexPath,
                start: FiberState, cfg: TrackingConfig | None = None,
                branch_points=()) -> FiberState:
    """End fiber after transporting the start fiber along the path."""
    tracker = FiberTracker(f, frame, branch_points, cfg)
    end, _, _ = tracker.run_path(path, start)
    return end


def loop_permutation(f: BivariatePoly, frame: DirectionFrame,
                     loop: ComplexPath, cfg: TrackingConfig | None = None,
                     branch_points=()) -> tuple[int, ...]:
    """Permutation of the base fiber induced by one closed loop: entry i is
    the start slot where transported root i lands."""
    if not loop.closed:
        raise InputError("loop is not closed")
    tracker = FiberTracker(f, frame, branch_points, cfg)
    base = tracker.start_state(loop.start)
    end, _, _ = tracker.run_path(loop, base)
    return tracker.match_to(end, base)


def compose_permutations(later: tuple[int, ...], earlier: tuple[int, ...]
                         ) -> tuple[int, ...]:
    """Permutation of running `earlier` then `later` (transport semantics:
    slot i goes to later[earlier[i]])."""
    return tuple(later[earlier[i]] for i in range(len(earlier)))


def inverse_permutation(perm: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(perm)
    for i, p in enumerate(perm):
        out[p] = i
    return tuple(out)
