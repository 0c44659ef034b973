"""Batch command-line front end: curve analysis reports, gram-matrix
verdicts, continuation traces and the cap-volume dichotomy, all as
machine-readable output with deterministic field ordering."""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import __version__, capvol, cycles as cyc, lattice as lat
from .areafunc import (default_basepoint, default_nu, monodromy_shift,
                       real_sweep_samples, total_area)
from .curve import (DirectionFrame, critical_values, genericity_check,
                    parse_curve_text)
from .errors import (CertificateError, ConstructionError, GenericityError,
                     InputError, OvalmonoError, ParseError, TrackingError)
from .kernel import BACKEND
from .tracking import TrackingConfig

EXIT_GENERICITY = 2
EXIT_TRACKING = 3
EXIT_PARSE = 4


def _direction(text: str) -> DirectionFrame:
    try:
        a, b = text.split(",")
        return DirectionFrame(Fraction(a.strip()), Fraction(b.strip()))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad direction {text!r}; expected 'a,b'") from None


def _tracking_config(args) -> TrackingConfig:
    return TrackingConfig(newton_tol=args.tolerance,
                          precision_bits=args.precision)


def _common_flags(p: argparse.ArgumentParser):
    p.add_argument("--direction", default="1,0",
                   help="projection direction a,b (rational; default 1,0)")
    p.add_argument("--nu", type=float, default=None,
                   help="detour diameter around critical values "
                        "(default: quarter of the minimal gap)")
    p.add_argument("--tolerance", type=float, default=1e-12,
                   help="Newton tolerance for tracking (default 1e-12)")
    p.add_argument("--iterations", type=int, default=3,
                   help="big-loop iteration count (default 3)")
    p.add_argument("--half-plane", choices=("upper", "lower"),
                   default="upper", help="half-plane for monotone detours")
    p.add_argument("--precision", type=int, default=53,
                   help="significand bits; above 53 switches to the "
                        "high-precision pure kernel")
    p.add_argument("--max-orbit", type=int, default=10_000,
                   help="orbit enumeration cap (default 10000)")


def _fr(x: Fraction) -> str:
    return str(x)


def cmd_analyze(args) -> int:
    t0 = time.perf_counter()
    domain = parse_curve_text(open(args.curve).read())
    frame = _direction(args.direction)
    report = genericity_check(domain, frame)
    if not report:
        _emit({"schema": 1, "genericity": {"passed": False,
                                           "reasons": report.reasons}},
              args.output)
        return EXIT_GENERICITY
    cfg = _tracking_config(args)
    critical = critical_values(domain, frame)
    nu = args.nu if args.nu is not None else default_nu(critical)
    basepoint = default_basepoint(critical, nu)
    latticeF, boundary, signs = cyc.assemble_lattice(
        domain, frame, critical, basepoint, cfg, nu)
    verdict = lat.is_finite(latticeF.gram, orbit_cap=args.max_orbit)
    comps = lat.irreducible_components(latticeF.gram)
    comp_report = cyc.component_kernel_sums(latticeF, signs)
    values, program, _ = monodromy_shift(domain, frame, critical,
                                         args.iterations, cfg, nu,
                                         args.half_plane)
    area = total_area(domain, frame)
    increment = 2 * area
    rel_errors = [abs(v - (values[0] + i * increment)) /
                  max(abs(values[0] + i * increment), 1e-30)
                  for i, v in enumerate(values)]
    out = {
        "schema": 1,
        "tool": {"name": "ovalmono", "version": __version__,
                 "backend": BACKEND},
        "curve": {"monomials": [[i, j, _fr(c)]
                                for i, j, c in domain.f.monomials()],
                  "seed": [_fr(domain.seed[0]), _fr(domain.seed[1])]},
        "config": {"direction": [_fr(frame.a), _fr(frame.b)], "nu": nu,
                   "basepoint": basepoint, "tolerance": args.tolerance,
                   "iterations": args.iterations,
                   "half_plane": args.half_plane,
                   "precision": args.precision,
                   "max_orbit": args.max_orbit},
        "genericity": {"passed": True, "reasons": []},
        "critical_values": [
            {"re": cv.t.real, "im": cv.t.imag,
             "multiplicity": cv.multiplicity, "is_real": cv.is_real,
             "on_oval": cv.on_oval} for cv in critical.values],
        "m": critical.m, "M": critical.M, "total_area": area,
        "cycles": [{"plus": c.plus_label, "minus": c.minus_label,
                    "origin": c.origin, "kind": c.kind}
                   for c in latticeF.cycles],
        "gram": [list(row) for row in latticeF.gram.gram],
        "finiteness": _verdict_dict(verdict),
        "components": comps,
        "kernel_certificate": {
            "signs": list(signs),
            "boundary_class": sorted(boundary.items()),
            "component_sums_in_kernel": comp_report.sums_in_kernel},
        "loop": {"annotations": [[t, act] for t, act in program.annotations],
                 "path": program.path.serialize()},
        "progression": {"values": [[v.real, v.imag] for v in values],
                        "expected_increment": increment,
                        "max_rel_error": max(rel_errors)},
        "timing": {"seconds": time.perf_counter() - t0},
    }
    if args.gram_out:
        with open(args.gram_out, "w") as fh:
            fh.write(lat.format_gram_text(latticeF.gram))
    _emit(out, args.output)
    return 0


def _verdict_dict(verdict: lat.FinitenessVerdict) -> dict:
    return {"finite": verdict.finite,
            "minors": [_fr(m) for m in verdict.minors],
            "kernel": [list(v) for v in verdict.kernel],
            "growth_witness": [list(v) for v in verdict.growth_witness]}


def cmd_reflection(args) -> int:
    try:
        gram = lat.parse_gram_text(open(args.matrix).read())
    except lat.LatticeError as exc:
        raise ParseError(str(exc)) from None
    verdict = lat.is_finite(gram, orbit_cap=args.max_orbit) \
        if gram.root_generated else None
    if verdict is None:
        raise ParseError("gram matrix has diagonal entries other than 2")
    out = {
        "schema": 1,
        "tool": {"name": "ovalmono", "version": __version__},
        "rank": gram.rank,
        "finiteness": _verdict_dict(verdict),
        "kernel": [list(v) for v in lat.gram_kernel(gram)],
        "components": lat.irreducible_components(gram),
    }
    if verdict.finite and gram.rank <= 6:
        out["order"] = lat.group_order_by_enumeration(gram, args.max_orbit)
    _emit(out, args.output)
    return 0


def cmd_continue_area(args) -> int:
    domain = parse_curve_text(open(args.curve).read())
    frame = _direction(args.direction)
    report = genericity_check(domain, frame)
    if not report:
        print("\n".join(report.reasons), file=sys.stderr)
        return EXIT_GENERICITY
    cfg = _tracking_config(args)
    critical = critical_values(domain, frame)
    nu = args.nu if args.nu is not None else default_nu(critical)
    stream = open(args.output, "w") if args.output else sys.stdout
    print("step,re_t,im_t,re_v,im_v", file=stream)
    samples = []
    if args.mode == "loops" and args.iterations > 0:
        _, _, samples = monodromy_shift(domain, frame, critical,
                                        args.iterations, cfg, nu,
                                        args.half_plane, record=True)
    elif args.mode == "sweep" or (args.mode == "loops"
                                  and args.iterations == 0):
        samples = real_sweep_samples(domain, frame, critical, cfg, nu)
    for i, (t, v) in enumerate(samples):
        print(f"{i},{complex(t).real!r},{complex(t).imag!r},"
              f"{complex(v).real!r},{complex(v).imag!r}", file=stream)
    if stream is not sys.stdout:
        stream.close()
    return 0


def cmd_oddcheck(args) -> int:
    semiaxes = tuple(float(s) for s in args.semiaxes.split(",")) \
        if args.semiaxes else (1.0,) * args.dimension
    if len(semiaxes) != args.dimension:
        raise InputError("need one semiaxis per dimension")
    fit = capvol.polynomial_fit_test(args.dimension, semiaxes,
                                     args.degree_max)
    cover = capvol.four_valued_cover_check(semiaxes[0], args.dimension) \
        if len(set(semiaxes)) == 1 else None
    out = {
        "schema": 1,
        "tool": {"name": "ovalmono", "version": __version__},
        "dimension": args.dimension,
        "semiaxes": list(semiaxes),
        "fit": {"threshold": fit.threshold,
                "achieved_degree": fit.achieved_degree,
                "residuals": {str(d): r for d, r in fit.residuals.items()}},
        "four_valued": None if cover is None else {
            "endpoint_gap": cover.endpoint_gap,
            "symmetric_residual": cover.symmetric_residual,
            "symmetric_degree": cover.symmetric_degree,
            "passes": cover.passes},
    }
    _emit(out, args.output)
    return 0


def _emit(payload: dict, output: str | None):
    text = json.dumps(payload, sort_keys=True, indent=2)
    if output:
        with open(output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ovalmono",
        description="cut-area monodromy and vanishing-cycle lattices of "
                    "plane algebraic ovals")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="full pipeline report for a curve")
    pa.add_argument("curve", help="curve file (monomials + seed)")
    _common_flags(pa)
    pa.add_argument("--output", default=None, help="write JSON here")
    pa.add_argument("--gram-out", default=None,
                    help="also write the gram matrix in the text format")
    pa.set_defaults(func=cmd_analyze)

    pr = sub.add_parser("reflection", help="finiteness verdict for a gram "
                                           "matrix file")
    pr.add_argument("matrix", help="gram matrix file (N, then N rows)")
    pr.add_argument("--max-orbit", type=int, default=10_000)
    pr.add_argument("--output", default=None)
    pr.set_defaults(func=cmd_reflection)

    pc = sub.add_parser("continue-area",
                        help="CSV trace of the area continuation")
    pc.add_argument("curve")
    _common_flags(pc)
    pc.add_argument("--mode", choices=("loops", "sweep", "none"),
                    default="loops",
                    help="loops: big-loop iterations; sweep: real segment; "
                         "none: header only")
    pc.add_argument("--output", default=None, help="write CSV here")
    pc.set_defaults(func=cmd_continue_area)

    po = sub.add_parser("oddcheck", help="cap-volume polynomiality report")
    po.add_argument("--dimension", type=int, default=3)
    po.add_argument("--semiaxes", default=None,
                    help="comma-separated; default: unit ball")
    po.add_argument("--degree-max", type=int, default=12)
    po.add_argument("--output", default=None)
    po.set_defaults(func=cmd_oddcheck)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except GenericityError as exc:
        print(f"genericity failure: {exc}", file=sys.stderr)
        return EXIT_GENERICITY
    except (TrackingError, ConstructionError, CertificateError) as exc:
        print(f"tracking failure: {exc}", file=sys.stderr)
        return EXIT_TRACKING
    except (InputError, OvalmonoError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRACKING


if __name__ == "__main__":
    sys.exit(main())
