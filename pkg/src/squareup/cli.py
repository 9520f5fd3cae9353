"""Command-line front end: analyze, square up, and generate plants.

Exit codes are a total function of the outcome class:

    0  clean run
    1  a structural assumption fails
    2  numerical failure (decompositions, generation retries exhausted)
    3  system file cannot be parsed
    4  plant has zeros no augmentation can move (not strictly stable)

Reports go to standard output as JSON; files are only written when
``--out`` is given.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .exceptions import (
    AssumptionError,
    GenerationError,
    NoStabilizingSolutionError,
    NumericalFailureError,
    SquareUpError,
    SystemFileError,
    UnstabilizableError,
)
from .generators import GenSpec, plant_zero, random_system
from .linalg import Tolerances, min_singular_value
from .statespace import StateSpace, check_assumptions, rosenbrock, transmission_zeros
from .synthesis import square_up
from .sysio import (
    assumptions_dict,
    complex_pairs,
    dump_system,
    load_system,
    save_system,
    tolerances_dict,
    zeroset_dict,
)

EXIT_OK = 0
EXIT_ASSUMPTIONS = 1
EXIT_NUMERICAL = 2
EXIT_PARSE = 3
EXIT_UNSTABILIZABLE = 4


def _add_tolerance_flags(parser):
    parser.add_argument("--tol-rank", type=float, default=Tolerances.rank_rel,
                        help="relative singular-value threshold for rank decisions")
    parser.add_argument("--tol-pbh", type=float, default=Tolerances.pbh,
                        help="absolute sigma_min threshold for rank-drop certificates")
    parser.add_argument("--tol-zero-match", type=float, default=Tolerances.zero_match,
                        help="absolute distance for matching complex zeros")
    parser.add_argument("--tol-care-residual", type=float, default=Tolerances.care_residual,
                        help="relative residual accepted from the Riccati solver")


def _tolerances(args) -> Tolerances:
    return Tolerances(
        rank_rel=args.tol_rank,
        pbh=args.tol_pbh,
        zero_match=args.tol_zero_match,
        care_residual=args.tol_care_residual,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="squareup",
        description="Analyze and square up fat LTI plants {A, B, C} with m > p.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="classify zeros and check assumptions")
    analyze.add_argument("path", help="system file (JSON with n, m, p, A, B, C)")
    analyze.add_argument("--transpose", action="store_true",
                         help="analyze the dual plant {A^T, C^T, B^T}")
    analyze.add_argument("--out", help="also write the report to this file")
    _add_tolerance_flags(analyze)

    squareup = sub.add_parser("squareup", help="synthesize the output augmentation Ca")
    squareup.add_argument("path", help="system file (JSON with n, m, p, A, B, C)")
    squareup.add_argument("--q-scale", type=float, default=1.0,
                          help="state-weight scale for zero placement (Q = scale * I)")
    squareup.add_argument("--r-scale", type=float, default=1.0,
                          help="input-weight scale for zero placement (R = scale * I)")
    squareup.add_argument("--transpose", action="store_true",
                          help="square up the dual plant (use for tall systems); "
                               "the written system is transposed back, so the original "
                               "plant gains pseudo-inputs instead of pseudo-outputs")
    squareup.add_argument("--out", help="write the augmented square system here")
    _add_tolerance_flags(squareup)

    gen = sub.add_parser("gen", help="generate a deterministic test plant")
    gen.add_argument("-n", type=int, required=True, help="state count")
    gen.add_argument("-m", type=int, required=True, help="input count")
    gen.add_argument("-p", type=int, required=True, help="output count")
    gen.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    gen.add_argument("--plant-zero", action="append", default=[], metavar="RE,IM",
                     help="plant a transmission zero here (repeatable; the conjugate "
                          "of a complex location is added automatically)")
    gen.add_argument("--unstable-a", action="store_true",
                     help="skip the Hurwitz shift applied to generated dynamics")
    gen.add_argument("--out", help="write the system file here instead of stdout")
    _add_tolerance_flags(gen)
    return parser


def _load(args) -> StateSpace:
    sys_ = load_system(args.path)
    if getattr(args, "transpose", False):
        sys_ = sys_.transposed()
    return sys_


def _base_report(args, sys_: StateSpace, tol: Tolerances, command: str) -> dict:
    return {
        "tool": "squareup",
        "version": __version__,
        "command": command,
        "tolerances": tolerances_dict(tol),
        "system": {"n": sys_.n, "m": sys_.m, "p": sys_.p},
        "transposed": bool(getattr(args, "transpose", False)),
    }


def _emit(report: dict, out_path=None) -> None:
    text = json.dumps(report, indent=2)
    print(text)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def cmd_analyze(args) -> int:
    tol = _tolerances(args)
    sys_ = _load(args)
    report = _base_report(args, sys_, tol, "analyze")
    assumptions = check_assumptions(sys_, tol)
    zeros = transmission_zeros(sys_, tol)
    report["assumptions"] = assumptions_dict(assumptions)
    report["zeros"] = zeroset_dict(zeros)
    report["minimum_phase"] = bool(
        not zeros.degenerate and all(z.real < 0.0 for z in zeros.transmission)
    )
    _emit(report, args.out)
    return EXIT_OK if assumptions.overall_pass else EXIT_ASSUMPTIONS


def cmd_squareup(args) -> int:
    tol = _tolerances(args)
    sys_ = _load(args)
    report = _base_report(args, sys_, tol, "squareup")
    try:
        result = square_up(sys_, q_scale=args.q_scale, r_scale=args.r_scale, tol=tol)
    except AssumptionError as exc:
        report["assumptions"] = assumptions_dict(exc.report)
        report["error"] = {"kind": "assumptions", "message": str(exc)}
        _emit(report)
        return EXIT_ASSUMPTIONS
    except UnstabilizableError as exc:
        report["unstabilizable_modes"] = complex_pairs(exc.modes)
        report["error"] = {"kind": "unstabilizable", "message": str(exc)}
        _emit(report)
        return EXIT_UNSTABILIZABLE

    report["assumptions"] = assumptions_dict(result.assumptions)
    report["zeros"] = zeroset_dict(result.plant_zeros)
    report["fixed_modes"] = complex_pairs(result.fixed_modes.modes)
    report["fixed_mode_matches"] = [
        {
            "mode": {"re": mode.real, "im": mode.imag},
            "transmission_zero": None if zero is None else {"re": zero.real, "im": zero.imag},
        }
        for mode, zero in result.fixed_modes.matches
    ]
    report["Ca"] = result.Ca.tolist()
    report["C22"] = result.C22.tolist()
    report["lqr_weights"] = {"q_scale": result.q_scale, "r_scale": result.r_scale}
    report["augmented_zeros"] = zeroset_dict(result.augmented_zeros)
    report["minimum_phase"] = bool(result.minimum_phase)
    report["preserved"] = bool(result.preserved)
    _emit(report)

    if args.out:
        augmented = StateSpace(sys_.A, sys_.B, np.vstack([sys_.C, result.Ca]))
        if args.transpose:
            augmented = augmented.transposed()
        save_system(augmented, args.out)
    return EXIT_OK


def cmd_gen(args) -> int:
    tol = _tolerances(args)
    requested = []
    for token in args.plant_zero:
        try:
            re_s, im_s = token.split(",")
            requested.append(complex(float(re_s), float(im_s)))
        except ValueError:
            raise SystemFileError(f"--plant-zero expects RE,IM, got {token!r}") from None
    planted = list(requested)
    for z in requested:
        if z.imag != 0.0 and not any(abs(w - z.conjugate()) <= tol.zero_match for w in planted):
            planted.append(z.conjugate())
    try:
        spec = GenSpec(
            n=args.n,
            m=args.m,
            p=args.p,
            seed=args.seed,
            planted_zeros=tuple(planted),
            stable_a=not args.unstable_a,
        )
    except ValueError as exc:
        raise GenerationError(str(exc)) from exc

    sys_ = plant_zero(spec, tol) if planted else random_system(spec, tol)
    for z in planted:
        sigma = min_singular_value(rosenbrock(sys_, z))
        print(f"certificate: sigma_min(R({z:.6g})) = {sigma:.3e}", file=sys.stderr)
    if not planted:
        print("certificate: structural checks passed on generated plant", file=sys.stderr)

    if args.out:
        save_system(sys_, args.out)
    else:
        sys.stdout.write(dump_system(sys_))
    return EXIT_OK


def _glue_plant_zero(argv):
    # argparse rejects option values that start with "-" unless they are
    # glued with "="; negative zero locations are the common case here.
    out = []
    i = 0
    while i < len(argv):
        if argv[i] == "--plant-zero" and i + 1 < len(argv):
            out.append(f"--plant-zero={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_glue_plant_zero(list(argv)))
    handlers = {"analyze": cmd_analyze, "squareup": cmd_squareup, "gen": cmd_gen}
    try:
        return handlers[args.command](args)
    except SystemFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UnstabilizableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSTABILIZABLE
    except AssumptionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ASSUMPTIONS
    except (NumericalFailureError, NoStabilizingSolutionError, GenerationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except SquareUpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
