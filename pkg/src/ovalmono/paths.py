"""Piecewise paths in the complex parameter plane: segments and circular
arcs, with clearance computations against branch points and the standard
loop constructions (real-axis walks with half-circle bumps, generator
circles, enclosing circles)."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InputError


@dataclass(frozen=True)
class Segment:
    z0: complex
    z1: complex

    @property
    def length(self) -> float:
        return abs(self.z1 - self.z0)

    def at(self, s: float) -> complex:
        # s in [0, length]
        if self.length == 0:
            return self.z0
        return self.z0 + (self.z1 - self.z0) * (s / self.length)

    def reversed(self) -> "Segment":
        return Segment(self.z1, self.z0)

    def distance_to(self, p: complex) -> float:
        d = self.z1 - self.z0
        L2 = abs(d) ** 2
        if L2 == 0:
            return abs(p - self.z0)
        u = ((p - self.z0).real * d.real + (p - self.z0).imag * d.imag) / L2
        u = min(1.0, max(0.0, u))
        return abs(p - (self.z0 + u * d))

    def serialize(self) -> str:
        return (f"seg {self.z0.real!r} {self.z0.imag!r} "
                f"{self.z1.real!r} {self.z1.imag!r}")


@dataclass(frozen=True)
class Arc:
    """Circular arc swept linearly from angle a0 to a1 (radians; the sweep
    a1 - a0 is signed and may exceed a full turn)."""

    center: complex
    radius: float
    a0: float
    a1: float

    @property
    def length(self) -> float:
        return self.radius * abs(self.a1 - self.a0)

    def at(self, s: float) -> complex:
        theta = self.a0 + (self.a1 - self.a0) * (s / self.length if self.length else 0.0)
        return self.center + self.radius * complex(math.cos(theta), math.sin(theta))

    @property
    def z0(self) -> complex:
        return self.center + self.radius * complex(math.cos(self.a0), math.sin(self.a0))

    @property
    def z1(self) -> complex:
        return self.center + self.radius * complex(math.cos(self.a1), math.sin(self.a1))

    def reversed(self) -> "Arc":
        return Arc(self.center, self.radius, self.a1, self.a0)

    def distance_to(self, p: complex) -> float:
        v = p - self.center
        r = abs(v)
        if abs(self.a1 - self.a0) >= 2 * math.pi:
            return abs(r - self.radius)
        ang = math.atan2(v.imag, v.real)
        lo, hi = min(self.a0, self.a1), max(self.a0, self.a1)
        # does some representative ang + 2k*pi fall into [lo, hi]?
        k0 = math.floor((lo - ang) / (2 * math.pi))
        inside = any(lo - 1e-12 <= ang + 2 * math.pi * k <= hi + 1e-12
                     for k in (k0, k0 + 1, k0 + 2))
        if inside:
            return abs(r - self.radius)
        return min(abs(p - self.z0), abs(p - self.z1))

    def serialize(self) -> str:
        return (f"arc {self.center.real!r} {self.center.imag!r} "
                f"{self.radius!r} {self.a0!r} {self.a1!r}")


Piece = Segment | Arc


@dataclass(frozen=True)
class ComplexPath:
    pieces: tuple[Piece, ...]

    def __post_init__(self):
        for a, b in zip(self.pieces, self.pieces[1:]):
            if abs(a.z1 - b.z0) > 1e-9 * (1 + abs(a.z1)):
                raise InputError(f"path pieces do not chain: {a.z1} vs {b.z0}")

    @property
    def start(self) -> complex:
        return self.pieces[0].z0

    @property
    def end(self) -> complex:
        return self.pieces[-1].z1

    @property
    def closed(self) -> bool:
        return abs(self.start - self.end) < 1e-9 * (1 + abs(self.start))

    @property
    def length(self) -> float:
        return sum(p.length for p in self.pieces)

    def reversed(self) -> "ComplexPath":
        return ComplexPath(tuple(p.reversed() for p in reversed(self.pieces)))

    def concat(self, other: "ComplexPath") -> "ComplexPath":
        return ComplexPath(self.pieces + other.pieces)

    def min_distance(self, points) -> float:
        best = math.inf
        for p in points:
            for piece in self.pieces:
                best = min(best, piece.distance_to(complex(p)))
        return best

    def serialize(self) -> list[str]:
        return [p.serialize() for p in self.pieces]


def parse_path_lines(lines) -> ComplexPath:
    pieces: list[Piece] = []
    for ln in lines:
        parts = ln.split()
        if not parts:
            continue
        if parts[0] == "seg" and len(parts) == 5:
            x0, y0, x1, y1 = map(float, parts[1:])
            pieces.append(Segment(complex(x0, y0), complex(x1, y1)))
        elif parts[0] == "arc" and len(parts) == 6:
            cx, cy, r, a0, a1 = map(float, parts[1:])
            pieces.append(Arc(complex(cx, cy), r, a0, a1))
        else:
            raise InputError(f"bad path line: {ln!r}")
    return ComplexPath(tuple(pieces))


def _norm_pieces(pieces) -> tuple[Piece, ...]:
    return tuple(p for p in pieces if p.length > 0)


def bumpy_real_path(t_from: float, t_to: float, obstacles, radius: float
                    ) -> ComplexPath:
    """Path along the real axis detouring over each obstacle (by real part)
    strictly between the endpoints with an upper half-circle of the given
    radius."""
    direction = 1 if t_to >= t_from else -1
    obs = sorted({complex(o).real for o in obstacles
                  if min(t_from, t_to) < complex(o).real < max(t_from, t_to)},
                 reverse=(direction < 0))
    slack = 1 - 1e-9      # endpoints exactly on a bump edge are fine
    for o in obs:
        if abs(o - t_from) < radius * slack or abs(o - t_to) < radius * slack:
            raise InputError("path endpoint inside a detour bump")
    for a, b in zip(obs, obs[1:]):
        if abs(b - a) < 2 * radius * slack:
            raise InputError("detour bumps overlap: obstacles too close")
    pieces: list[Piece] = []
    cur = float(t_from)
    for o in obs:
        pieces.append(Segment(complex(cur), complex(o - direction * radius)))
        if direction > 0:
            pieces.append(Arc(complex(o), radius, math.pi, 0.0))
        else:
            pieces.append(Arc(complex(o), radius, 0.0, math.pi))
        cur = o + direction * radius
    pieces.append(Segment(complex(cur), complex(float(t_to))))
    return ComplexPath(_norm_pieces(pieces) or
                       (Segment(complex(float(t_from)), complex(float(t_to))),))


def full_circle(center: complex, radius: float, start_angle: float,
                ccw: bool = True) -> Arc:
    sweep = 2 * math.pi if ccw else -2 * math.pi
    return Arc(complex(center), radius, start_angle, start_angle + sweep)


def standard_loop(basepoint: float, target: complex, nu: float, obstacles
                  ) -> ComplexPath:
    """Generator loop: real-axis approach with bumps to target + nu/2, a full
    counterclockwise circle of radius nu/2 around the target, and the reverse
    approach. Complex targets get a final vertical descent/ascent."""
    target = complex(target)
    r = nu / 2
    others = [o for o in obstacles if abs(complex(o) - target) > 1e-12]
    near_real = [o for o in others if abs(complex(o).imag) < r]
    if abs(target.imag) < 1e-12:
        approach = bumpy_real_path(basepoint, target.real + r,
                                   near_real + [target], r)
    else:
        approach = bumpy_real_path(basepoint, target.real + r, near_real, r)
        approach = approach.concat(ComplexPath(
            (Segment(complex(target.real + r), target + r),)))
    loop = ComplexPath(approach.pieces + (full_circle(target, r, 0.0),)
                       + approach.reversed().pieces)
    return loop


def standard_loops(critical_values, basepoint: float, nu: float,
                   include_complex: bool = False) -> list[ComplexPath]:
    """One generator loop per branch point, ordered by increasing real part.

    critical_values may be a CriticalData or a plain iterable of points.
    """
    points = list(getattr(critical_values, "branch_points", critical_values))
    gaps = [abs(complex(a) - complex(b))
            for i, a in enumerate(points) for b in points[i + 1:]]
    if gaps and nu >= min(gaps):
        raise InputError(f"nu={nu} too large for the minimal branch gap "
                         f"{min(gaps)}")
    if any(abs(basepoint - complex(p).real) < nu / 2 * (1 - 1e-9)
           for p in points):
        raise InputError("basepoint too close to a branch point")
    targets = [p for p in points
               if include_complex or abs(complex(p).imag) < 1e-12]
    targets.sort(key=lambda p: (complex(p).real, complex(p).imag))
    return [standard_loop(basepoint, p, nu, points) for p in targets]


def enclosing_circle_loop(basepoint: float, branch_points, nu: float,
                          margin: float = 1.0) -> ComplexPath:
    """Loop around one large circle enclosing every branch point, based at
    the basepoint via a bumpy real approach."""
    pts = [complex(p) for p in branch_points]
    radius = max(abs(p - basepoint) for p in pts) + margin
    approach = bumpy_real_path(basepoint, basepoint + radius, pts, nu / 2)
    return ComplexPath(approach.pieces
                       + (full_circle(complex(basepoint), radius, 0.0),)
                       + approach.reversed().pieces)
