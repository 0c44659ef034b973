"""Cap volumes of balls and ellipsoids in any dimension: the classical
contrast where odd-dimensional caps depend polynomially on the cutting
plane's offset while even-dimensional ones do not.

Volumes come from recursive slice quadrature (one adaptive 1-D integral per
dimension, lower-dimensional unit constants memoized), so the polynomial
fits are tested against values produced independently of any closed form."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import InputError


@dataclass(frozen=True)
class CapQuery:
    dimension: int
    semiaxes: tuple[float, ...]
    offset: float

    def __post_init__(self):
        if self.dimension < 1:
            raise InputError("dimension must be positive")
        if len(self.semiaxes) != self.dimension:
            raise InputError("need one semiaxis per dimension")
        if any(a <= 0 for a in self.semiaxes):
            raise InputError("semiaxes must be positive")


@functools.lru_cache(maxsize=32)
def unit_ball_volume(k: int) -> float:
    """k-dimensional unit ball volume by recursive slice quadrature."""
    if k == 0:
        return 1.0
    inner = unit_ball_volume(k - 1)
    val, _ = quad(lambda u: inner * (1 - u * u) ** ((k - 1) / 2), -1, 1,
                  epsabs=1e-13, epsrel=1e-13, limit=200)
    return val


def total_volume(q: CapQuery) -> float:
    return unit_ball_volume(q.dimension) * math.prod(q.semiaxes)


def cap_volume_numeric(q: CapQuery) -> float:
    """Volume of the ellipsoid part on the far side of the plane at the
    signed offset along the first axis."""
    a1 = q.semiaxes[0]
    t = q.offset
    if t >= a1:
        return 0.0
    if t <= -a1:
        return total_volume(q)
    n = q.dimension
    if n == 1:
        return a1 - t
    cross = unit_ball_volume(n - 1) * math.prod(q.semiaxes[1:])
    val, _ = quad(lambda u: cross * (1 - (u / a1) ** 2) ** ((n - 1) / 2),
                  t, a1, epsabs=1e-12, epsrel=1e-13, limit=200)
    return val


@dataclass
class FitReport:
    threshold: float
    residuals: dict[int, float] = field(default_factory=dict)
    achieved_degree: int | None = None

    @property
    def succeeded(self) -> bool:
        return self.achieved_degree is not None


def polynomial_fit_test(n: int, semiaxes, degree_max: int = 12,
                        threshold: float = 1e-8,
                        grid_fraction: float = 0.9) -> FitReport:
    """Least-squares polynomial fits of the cap volume on a Chebyshev grid
    over the central fraction of the offset interval, with residuals taken
    on a dense validation grid spanning nearly the full open interval (the
    tangency regions carry the fractional-power behavior that polynomials
    cannot reproduce)."""
    semiaxes = tuple(float(a) for a in semiaxes)
    a1 = semiaxes[0]
    npts = max(4 * degree_max, 48)
    k = np.arange(npts)
    nodes = grid_fraction * a1 * np.cos((2 * k + 1) * np.pi / (2 * npts))
    vals = np.array([cap_volume_numeric(CapQuery(n, semiaxes, t))
                     for t in nodes])
    tval = np.linspace(-0.999 * a1, 0.999 * a1, 2001)
    vval = np.array([cap_volume_numeric(CapQuery(n, semiaxes, t))
                     for t in tval])
    report = FitReport(threshold)
    x = nodes / a1            # column scaling: map to [-1, 1]
    xv = tval / a1
    for deg in range(degree_max + 1):
        design = np.polynomial.chebyshev.chebvander(x, deg)
        coef, *_ = np.linalg.lstsq(design, vals, rcond=None)
        resid = float(np.max(np.abs(
            np.polynomial.chebyshev.chebval(xv, coef) - vval)))
        report.residuals[deg] = resid
        if resid < threshold and report.achieved_degree is None:
            report.achieved_degree = deg
    return report


@dataclass
class CoverReport:
    endpoint_gap: float
    symmetric_residual: float
    symmetric_degree: int
    passes: bool


def four_valued_cover_check(r: float, n: int = 3,
                            samples: int = 1000) -> CoverReport:
    """Verify that {0, total, V(t), total - V(t)} closes into one algebraic
    branch family across the tangency offsets: the branches meet pairwise at
    t = +-r and the symmetric product V (total - V) is polynomial in t.

    For n = 2 the symmetric product is not polynomial; the report then fails
    by design (negative control)."""
    semiaxes = (float(r),) * n
    total = total_volume(CapQuery(n, semiaxes, 0.0))
    vp = cap_volume_numeric(CapQuery(n, semiaxes, r * (1 - 1e-12)))
    vm = cap_volume_numeric(CapQuery(n, semiaxes, -r * (1 - 1e-12)))
    endpoint_gap = max(abs(vp - 0.0), abs(vm - total))
    ts = np.linspace(-r, r, samples)
    vs = np.array([cap_volume_numeric(CapQuery(n, semiaxes, t)) for t in ts])
    prod = vs * (total - vs)
    deg = 2 * n
    design = np.polynomial.chebyshev.chebvander(ts / r, deg)
    coef, *_ = np.linalg.lstsq(design, prod, rcond=None)
    resid = float(np.max(np.abs(design @ coef - prod)))
    scale = max(1.0, float(np.max(np.abs(prod))))
    passes = endpoint_gap < 1e-9 * max(1.0, total) and resid < 1e-8 * scale
    return CoverReport(endpoint_gap, resid, deg, passes)
