"""Kernel backend selection: the compiled extension when it built, otherwise
the pure-Python twin. High-precision (mpmath) tracking always routes through
the pure kernel."""

from __future__ import annotations

from . import _core_py

try:
    from . import _core as _impl
    HAVE_COMPILED = True
except ImportError:      # extension not built: pure-Python fallback
    _impl = _core_py
    HAVE_COMPILED = False

BACKEND = "compiled" if HAVE_COMPILED else "pure"

OK = _core_py.OK
STEP_UNDERFLOW = _core_py.STEP_UNDERFLOW
PATH_JUMP = _core_py.PATH_JUMP
DEGREE_DROP = _core_py.DEGREE_DROP
CYCLE_COLLISION = _core_py.CYCLE_COLLISION
SEGMENT = _core_py.SEGMENT
ARC = _core_py.ARC

STATUS_NAMES = {
    OK: "ok",
    STEP_UNDERFLOW: "step-underflow",
    PATH_JUMP: "path-jump-suspicion",
    DEGREE_DROP: "degree-drop",
    CYCLE_COLLISION: "vanishing-cycle-crossing",
}


def track_piece(C, kind, p0, p1, center, radius, a0, a1, ys, **kw):
    """Dispatch one-piece transport to the selected backend; mp_ctx forces
    the pure kernel."""
    if kw.get("mp_ctx") is not None:
        return _core_py.track_piece(C, kind, p0, p1, center, radius, a0, a1,
                                    ys, **kw)
    return _impl.track_piece(C, kind, p0, p1, center, radius, a0, a1, ys, **kw)


def polish_all(C, t, ys, rtol, maxit=12):
    return _impl.polish_all(C, t, ys, rtol, maxit)


def eval3(C, t, y):
    return _impl.eval3(C, t, y)
