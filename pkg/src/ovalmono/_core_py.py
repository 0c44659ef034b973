"""Pure-Python tracking kernel.

Reference implementation of the hot inner loop: adaptive Euler-predictor /
Newton-corrector transport of all fiber roots along one path piece, with
optional Gauss-Legendre accumulation of the cycle integral. The compiled
extension (_core) mirrors this module function for function; this version
additionally accepts an mpmath context for high-precision cross-checks.

Residuals are relative to the evaluation scale sum |c_ij| |t|^i |y|^j, the
natural backward-error denominator for a polynomial given by its
coefficients.
"""

from __future__ import annotations

import math

OK = 0
STEP_UNDERFLOW = 1
PATH_JUMP = 2
DEGREE_DROP = 3
CYCLE_COLLISION = 4

SEGMENT = 0
ARC = 1

# 5-point Gauss-Legendre rule on [0, 1]
_GL_X = (0.046910077030668004, 0.23076534494715845, 0.5,
         0.7692346550528415, 0.9530899229693319)
_GL_W = (0.11846344252809454, 0.23931433524968324, 0.28444444444444444,
         0.23931433524968324, 0.11846344252809454)


def eval3(C, t, y):
    """(g, dg/dy, dg/dt) at (t, y) for C[i][j] the coefficient of t^i y^j."""
    g = 0.0
    gt = 0.0
    gw = 0.0
    for row in reversed(C):
        rv = 0.0
        rd = 0.0
        for c in reversed(row):
            rd = rd * y + rv
            rv = rv * y + c
        gt = gt * t + g
        g = g * t + rv
        gw = gw * t + rd
    return g, gw, gt


def eval_scale(absC, t, y):
    """sum |c_ij| |t|^i |y|^j evaluated by Horner on the |.| coefficients."""
    at, ay = abs(t), abs(y)
    acc = 0.0
    for row in reversed(absC):
        rv = 0.0
        for c in reversed(row):
            rv = rv * ay + c
        acc = acc * at + rv
    return acc


def lead_coeff(C, t):
    acc = 0.0
    for row in reversed(C):
        acc = acc * t + row[-1]
    return acc


def abs_coeffs(C):
    return [[abs(c) for c in row] for row in C]


def newton(C, t, y, rtol, maxit):
    """Polish one root; returns (y, converged, iterations)."""
    for it in range(1, maxit + 1):
        g, gw, _ = eval3(C, t, y)
        if abs(gw) == 0:
            return y, False, it
        step = g / gw
        y = y - step
        if abs(step) <= rtol * (1 + abs(y)):
            return y, True, it
    return y, False, maxit


def polish_all(C, t, ys, rtol, maxit=12):
    out = []
    ok = True
    for y in ys:
        yy, conv, _ = newton(C, t, y, rtol, maxit)
        ok = ok and conv
        out.append(yy)
    return out, ok


def _piece_geometry(kind, p0, p1, center, radius, a0, a1, mp_ctx):
    """Returns (length, t_at(s), tangent_at(s))."""
    if mp_ctx is None:
        cos, sin = math.cos, math.sin
        mk = complex
    else:
        cos, sin = mp_ctx.cos, mp_ctx.sin
        mk = mp_ctx.mpc
    if kind == SEGMENT:
        length = abs(p1 - p0)
        direction = (p1 - p0) / length if length > 0 else mk(0)

        def t_at(s):
            return p0 + direction * s

        def tangent(s):
            return direction
        return length, t_at, tangent
    sweep = a1 - a0
    length = radius * abs(sweep)
    sgn = 1.0 if sweep >= 0 else -1.0

    def t_at(s):
        th = a0 + sweep * (s / length)
        return center + radius * mk(cos(th), sin(th))

    def tangent(s):
        th = a0 + sweep * (s / length)
        return sgn * mk(-sin(th), cos(th))
    return length, t_at, tangent


def track_piece(C, kind, p0, p1, center, radius, a0, a1, ys,
                rtol=1e-12, max_newton=12,
                h0=0.05, hmin=1e-11, hmax=0.25,
                cyc_a=-1, cyc_b=-1, record=False, mp_ctx=None):
    """Transport the full root vector along one piece.

    Returns (ys_end, integral, max_resid, n_steps, status, samples) where
    integral is of (y[cyc_b] - y[cyc_a]) dt when both indices are >= 0 and
    samples is a list of (t, running integral) per accepted step when
    record is set.
    """
    if mp_ctx is not None:
        mk = mp_ctx.mpc
        C = [[mk(c) for c in row] for row in C]
        p0, p1, center = mk(p0), mk(p1), mk(center)
        ys = [mk(y) for y in ys]
    else:
        ys = [complex(y) for y in ys]
    absC = abs_coeffs(C)
    n = len(ys)
    length, t_at, tangent = _piece_geometry(kind, p0, p1, center, radius,
                                            a0, a1, mp_ctx)
    integral = 0.0 if mp_ctx is None else mp_ctx.mpf(0)
    samples = [] if record else None
    max_resid = 0.0
    if length == 0:
        return ys, integral, max_resid, 0, OK, samples

    s = 0.0
    h = min(h0, hmax, length)
    t_cur = t_at(0.0)
    n_steps = 0
    while s < length - 1e-15 * length:
        h = min(h, length - s)
        t_new = t_at(s + h)
        if abs(lead_coeff(C, t_new)) < 1e-12:
            return ys, integral, max_resid, n_steps, DEGREE_DROP, samples
        # Euler predictor on dy/dt = -g_t/g_w, then Newton corrector
        dt = t_new - t_cur
        ok = True
        pred = []
        for y in ys:
            _, gw, gt = eval3(C, t_cur, y)
            if abs(gw) == 0:
                ok = False
                break
            pred.append(y - gt / gw * dt)
        new = []
        corr = []
        max_iters = 0
        if ok:
            for yp in pred:
                yy, conv, its = newton(C, t_new, yp, rtol, max_newton)
                if not conv:
                    ok = False
                    break
                new.append(yy)
                corr.append(abs(yy - yp))
                max_iters = max(max_iters, its)
        if ok:
            # correction-basin proximity guard: reject before roots can swap
            for i in range(n):
                for j in range(i + 1, n):
                    if abs(new[i] - new[j]) < 4 * (corr[i] + corr[j]):
                        ok = False
                        break
                if not ok:
                    break
        step_integral = None
        if ok and cyc_a >= 0 and cyc_b >= 0:
            step_integral = _gl_step(C, t_at, tangent, s, h,
                                     ys[cyc_a], new[cyc_a],
                                     ys[cyc_b], new[cyc_b],
                                     rtol)
            if step_integral is None:
                ok = False
        if not ok:
            h *= 0.5
            if h < hmin:
                return ys, integral, max_resid, n_steps, STEP_UNDERFLOW, samples
            continue
        # accepted: hard safety checks
        yscale = 1 + max(abs(y) for y in new)
        dmin = min((abs(new[i] - new[j])
                    for i in range(n) for j in range(i + 1, n)),
                   default=math.inf)
        if dmin < 2 * rtol * yscale:
            return new, integral, max_resid, n_steps, PATH_JUMP, samples
        if cyc_a >= 0 and cyc_b >= 0 and \
                abs(new[cyc_b] - new[cyc_a]) < 1e-6 * yscale:
            return new, integral, max_resid, n_steps, CYCLE_COLLISION, samples
        for y in new:
            g, _, _ = eval3(C, t_new, y)
            rel = abs(g) / eval_scale(absC, t_new, y)
            if rel > max_resid:
                max_resid = rel
        if step_integral is not None:
            integral = integral + step_integral
        ys = new
        t_cur = t_new
        s += h
        n_steps += 1
        if record:
            samples.append((t_cur, integral))
        if max_iters <= 3:
            h = min(h * 1.6, hmax)
    return ys, integral, max_resid, n_steps, OK, samples


def _gl_step(C, t_at, tangent, s, h, ya0, ya1, yb0, yb1, rtol):
    """Gauss-Legendre panel of (y_b - y_a) dt over one accepted step; the
    branch at each node is pinned by the linear interpolant of the accepted
    endpoint roots. None when a node refuses to converge."""
    acc = 0.0
    for x, wgt in zip(_GL_X, _GL_W):
        sn = s + x * h
        tn = t_at(sn)
        ya, conv_a, _ = newton(C, tn, ya0 + x * (ya1 - ya0), rtol, 10)
        yb, conv_b, _ = newton(C, tn, yb0 + x * (yb1 - yb0), rtol, 10)
        if not (conv_a and conv_b):
            return None
        acc = acc + wgt * (yb - ya) * tangent(sn)
    return acc * h
