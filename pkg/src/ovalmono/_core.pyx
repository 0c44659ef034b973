# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled tracking kernel: same contract as _core_py, C-speed inner loop.

Keep the step-control logic in lockstep with _core_py; the pure module is
the reference and the parity test compares the two on identical inputs.
"""

import numpy as np

from libc.math cimport cos, sin, INFINITY
from libc.stdlib cimport free, malloc

cdef extern from "complex.h" nogil:
    double cabs(double complex)

OK = 0
STEP_UNDERFLOW = 1
PATH_JUMP = 2
DEGREE_DROP = 3
CYCLE_COLLISION = 4

SEGMENT = 0
ARC = 1

cdef int K_SEGMENT = 0

cdef double[5] GL_X = [0.046910077030668004, 0.23076534494715845, 0.5,
                       0.7692346550528415, 0.9530899229693319]
cdef double[5] GL_W = [0.11846344252809454, 0.23931433524968324,
                       0.28444444444444444, 0.23931433524968324,
                       0.11846344252809454]


cdef inline void _eval3(double complex[:, ::1] C, int nt, int ny,
                        double complex t, double complex y,
                        double complex *g, double complex *gw,
                        double complex *gt) noexcept nogil:
    cdef double complex vg = 0, vgt = 0, vgw = 0, rv, rd
    cdef int i, j
    for i in range(nt - 1, -1, -1):
        rv = 0
        rd = 0
        for j in range(ny - 1, -1, -1):
            rd = rd * y + rv
            rv = rv * y + C[i, j]
        vgt = vgt * t + vg
        vg = vg * t + rv
        vgw = vgw * t + rd
    g[0] = vg
    gw[0] = vgw
    gt[0] = vgt


cdef inline double _eval_scale(double[:, ::1] absC, int nt, int ny,
                               double at, double ay) noexcept nogil:
    cdef double acc = 0, rv
    cdef int i, j
    for i in range(nt - 1, -1, -1):
        rv = 0
        for j in range(ny - 1, -1, -1):
            rv = rv * ay + absC[i, j]
        acc = acc * at + rv
    return acc


cdef inline double complex _lead(double complex[:, ::1] C, int nt, int ny,
                                 double complex t) noexcept nogil:
    cdef double complex acc = 0
    cdef int i
    for i in range(nt - 1, -1, -1):
        acc = acc * t + C[i, ny - 1]
    return acc


cdef inline int _newton(double complex[:, ::1] C, int nt, int ny,
                        double complex t, double complex *y, double rtol,
                        int maxit, int *iters) noexcept nogil:
    cdef double complex g, gw, gt, step
    cdef int it
    for it in range(1, maxit + 1):
        _eval3(C, nt, ny, t, y[0], &g, &gw, &gt)
        if cabs(gw) == 0:
            iters[0] = it
            return 0
        step = g / gw
        y[0] = y[0] - step
        if cabs(step) <= rtol * (1 + cabs(y[0])):
            iters[0] = it
            return 1
    iters[0] = maxit
    return 0


def eval3(C, t, y):
    """(g, dg/dy, dg/dt) at (t, y); C is a 2-D complex coefficient array."""
    cdef double complex[:, ::1] cm = np.ascontiguousarray(C, dtype=np.complex128)
    cdef double complex g, gw, gt
    _eval3(cm, cm.shape[0], cm.shape[1], t, y, &g, &gw, &gt)
    return g, gw, gt


def polish_all(C, t, ys, double rtol, int maxit=12):
    cdef double complex[:, ::1] cm = np.ascontiguousarray(C, dtype=np.complex128)
    cdef int nt = cm.shape[0], ny = cm.shape[1]
    cdef double complex yy
    cdef double complex tt = t
    cdef int conv, its
    out = []
    all_ok = True
    for y in ys:
        yy = y
        conv = _newton(cm, nt, ny, tt, &yy, rtol, maxit, &its)
        all_ok = all_ok and bool(conv)
        out.append(complex(yy))
    return out, all_ok


cdef inline double complex _t_at(int kind, double complex p0,
                                 double complex direction,
                                 double complex center, double radius,
                                 double a0, double sweep, double length,
                                 double s) noexcept nogil:
    cdef double th
    if kind == K_SEGMENT:
        return p0 + direction * s
    th = a0 + sweep * (s / length)
    return center + radius * (cos(th) + 1j * sin(th))


cdef inline double complex _tangent(int kind, double complex direction,
                                    double a0, double sweep, double length,
                                    double sgn, double s) noexcept nogil:
    cdef double th
    if kind == K_SEGMENT:
        return direction
    th = a0 + sweep * (s / length)
    return sgn * (-sin(th) + 1j * cos(th))


def track_piece(C, int kind, p0, p1, center, double radius, double a0,
                double a1, ys, double rtol=1e-12, int max_newton=12,
                double h0=0.05, double hmin=1e-11, double hmax=0.25,
                int cyc_a=-1, int cyc_b=-1, record=False, mp_ctx=None):
    """Mirror of _core_py.track_piece (mp_ctx must be None here)."""
    if mp_ctx is not None:
        raise ValueError("compiled kernel runs in double precision only")
    cdef double complex[:, ::1] cm = np.ascontiguousarray(C, dtype=np.complex128)
    absC_arr = np.abs(np.asarray(C, dtype=np.complex128)).astype(np.float64)
    cdef double[:, ::1] absC = np.ascontiguousarray(absC_arr)
    cdef int nt = cm.shape[0], ny = cm.shape[1]
    cdef int n = len(ys)
    cdef double complex cp0 = complex(p0), cp1 = complex(p1)
    cdef double complex ccenter = complex(center)
    cdef double sweep = a1 - a0
    cdef double length, sgn = 1.0 if sweep >= 0 else -1.0
    cdef double complex direction = 0

    if kind == SEGMENT:
        length = cabs(cp1 - cp0)
        if length > 0:
            direction = (cp1 - cp0) / length
    else:
        length = radius * (sweep if sweep >= 0 else -sweep)

    cdef double complex integral = 0
    cdef double max_resid = 0
    samples = [] if record else None
    cdef int n_steps = 0
    if length == 0:
        return list(ys), complex(integral), max_resid, 0, OK, samples

    cdef double complex *cur = <double complex *> malloc(n * sizeof(double complex))
    cdef double complex *pred = <double complex *> malloc(n * sizeof(double complex))
    cdef double complex *nroots = <double complex *> malloc(n * sizeof(double complex))
    cdef double *corr = <double *> malloc(n * sizeof(double))
    if not cur or not pred or not nroots or not corr:
        raise MemoryError
    cdef int i, j, its, max_iters, ok, status = OK
    cdef double s = 0, h, yscale, dmin, d, rel
    cdef double complex t_cur, t_new, dt, g, gw, gt, step_integral, tn, ya, yb
    cdef double sn
    cdef int conv_a, conv_b

    try:
        for i in range(n):
            cur[i] = ys[i]
        h = h0
        if hmax < h:
            h = hmax
        if length < h:
            h = length
        t_cur = _t_at(kind, cp0, direction, ccenter, radius, a0, sweep,
                      length, 0.0)
        while s < length - 1e-15 * length:
            if length - s < h:
                h = length - s
            t_new = _t_at(kind, cp0, direction, ccenter, radius, a0, sweep,
                          length, s + h)
            if cabs(_lead(cm, nt, ny, t_new)) < 1e-12:
                status = DEGREE_DROP
                break
            dt = t_new - t_cur
            ok = 1
            for i in range(n):
                _eval3(cm, nt, ny, t_cur, cur[i], &g, &gw, &gt)
                if cabs(gw) == 0:
                    ok = 0
                    break
                pred[i] = cur[i] - gt / gw * dt
            max_iters = 0
            if ok:
                for i in range(n):
                    nroots[i] = pred[i]
                    if not _newton(cm, nt, ny, t_new, &nroots[i], rtol,
                                   max_newton, &its):
                        ok = 0
                        break
                    corr[i] = cabs(nroots[i] - pred[i])
                    if its > max_iters:
                        max_iters = its
            if ok:
                for i in range(n):
                    for j in range(i + 1, n):
                        if cabs(nroots[i] - nroots[j]) < 4 * (corr[i] + corr[j]):
                            ok = 0
                            break
                    if not ok:
                        break
            step_integral = 0
            if ok and cyc_a >= 0 and cyc_b >= 0:
                for i in range(5):
                    sn = s + GL_X[i] * h
                    tn = _t_at(kind, cp0, direction, ccenter, radius, a0,
                               sweep, length, sn)
                    ya = cur[cyc_a] + GL_X[i] * (nroots[cyc_a] - cur[cyc_a])
                    yb = cur[cyc_b] + GL_X[i] * (nroots[cyc_b] - cur[cyc_b])
                    conv_a = _newton(cm, nt, ny, tn, &ya, rtol, 10, &its)
                    conv_b = _newton(cm, nt, ny, tn, &yb, rtol, 10, &its)
                    if not (conv_a and conv_b):
                        ok = 0
                        break
                    step_integral = step_integral + GL_W[i] * (yb - ya) * \
                        _tangent(kind, direction, a0, sweep, length, sgn, sn)
                step_integral = step_integral * h
            if not ok:
                h *= 0.5
                if h < hmin:
                    status = STEP_UNDERFLOW
                    break
                continue
            yscale = 1
            for i in range(n):
                if 1 + cabs(nroots[i]) > yscale:
                    yscale = 1 + cabs(nroots[i])
            dmin = INFINITY
            for i in range(n):
                for j in range(i + 1, n):
                    d = cabs(nroots[i] - nroots[j])
                    if d < dmin:
                        dmin = d
            for i in range(n):
                cur[i] = nroots[i]
            t_cur = t_new
            if dmin < 2 * rtol * yscale:
                status = PATH_JUMP
                break
            if cyc_a >= 0 and cyc_b >= 0 and \
                    cabs(cur[cyc_b] - cur[cyc_a]) < 1e-6 * yscale:
                status = CYCLE_COLLISION
                break
            for i in range(n):
                _eval3(cm, nt, ny, t_new, cur[i], &g, &gw, &gt)
                rel = cabs(g) / _eval_scale(absC, nt, ny, cabs(t_new),
                                            cabs(cur[i]))
                if rel > max_resid:
                    max_resid = rel
            if cyc_a >= 0 and cyc_b >= 0:
                integral = integral + step_integral
            s += h
            n_steps += 1
            if record:
                samples.append((complex(t_cur), complex(integral)))
            if max_iters <= 3:
                h = h * 1.6
                if h > hmax:
                    h = hmax
        out = [complex(cur[i]) for i in range(n)]
    finally:
        free(cur)
        free(pred)
        free(nroots)
        free(corr)
    return out, complex(integral), max_resid, n_steps, status, samples
