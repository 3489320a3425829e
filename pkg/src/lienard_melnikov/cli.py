"""Command-line entry point: ``lienard-melnikov <command> [flags]``.

Every command prints one JSON document.  Exact quantities are rational
strings; floats only appear under ``numeric``.  Wall-clock data lives under
``timings`` so the rest of a report is reproducible byte for byte.

Exit codes: 0 success, 1 input error, 2 computation error, 3 selftest failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Any

from . import fixtures
from .algebra import as_rat
from .analysis import (
    InfeasibleSplit,
    bound_for,
    construct_sharp_detailed,
    positive_roots,
    roots_match,
    verify_bound,
)
from .forms import SpecError, SystemSpec
from .melnikov import DEFAULT_KMAX, Exhausted, MelnikovResult, first_nonvanishing
from .numeric import KERNEL_BACKEND
from .numeric.harness import (
    CalibrationError,
    ConvergenceFailure,
    NoReturn,
    NumericConfig,
    calibrate_sign,
    estimate_melnikov,
    find_limit_cycles,
    write_csv,
)
from .numeric.quadrature import circle_moment_numeric
from .reduction import circle_moment
from .specfile import dump, load, spec_to_doc

EXIT_OK, EXIT_INPUT, EXIT_COMPUTE, EXIT_SELFTEST = 0, 1, 2, 3
COMPUTE_ERRORS = (Exhausted, NoReturn, InfeasibleSplit, ConvergenceFailure, CalibrationError, ArithmeticError)


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"cannot parse number list {text!r}") from None


def _c_range(text: str) -> tuple[float, float]:
    vals = _float_list(text)
    if len(vals) != 2:
        raise InputError("--c-range expects A,B")
    return vals[0], vals[1]


def _poly_strings(P) -> list[str]:
    return [str(a) for a in P.coeffs]


def _result_doc(result: MelnikovResult) -> dict:
    return {
        "k": result.k,
        "terminated": result.terminated,
        "path": result.path,
        "L": {"P": _poly_strings(result.L.P), "convention": "I(c) = -pi*c*P(c), counterclockwise"},
        "trace": [
            {"order": l, "Omega": str(Omega), "Q": str(w.Q), "q": str(w.q), "verified": True}
            for l, (Omega, w) in enumerate(result.trace, start=1)
        ],
    }


def _config(args, base: NumericConfig | None) -> NumericConfig:
    d = (base or NumericConfig()).to_dict()
    if args.eps:
        d["eps"] = _float_list(args.eps)
    if args.c_range:
        d["c_min"], d["c_max"] = _c_range(args.c_range)
    if args.grid is not None:
        d["grid"] = args.grid
    if args.tol is not None:
        d["rtol"], d["atol"] = args.tol, args.tol / 100
    try:
        return NumericConfig(**d)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _need_spec(args) -> tuple[SystemSpec, NumericConfig | None]:
    if not args.spec:
        raise InputError("--spec is required for this command")
    return load(args.spec)


# ---------------------------------------------------------------- commands


def cmd_compute(args) -> dict:
    spec, _ = _need_spec(args)
    result = first_nonvanishing(spec, args.kmax, fast_path=args.fast_path)
    doc = _result_doc(result)
    doc["roots"] = positive_roots(result.L.P).to_dict()
    return {"spec": spec_to_doc(spec), "result": doc}


def cmd_roots(args) -> dict:
    spec, _ = _need_spec(args)
    result = first_nonvanishing(spec, args.kmax, fast_path=args.fast_path)
    return {
        "spec": spec_to_doc(spec),
        "k": result.k,
        "P": _poly_strings(result.L.P),
        "roots": positive_roots(result.L.P).to_dict(),
    }


def cmd_bound(args) -> dict:
    spec, _ = _need_spec(args)
    return {"spec": spec_to_doc(spec), "bound": bound_for(spec).to_dict()}


def cmd_verify(args) -> dict:
    spec, _ = _need_spec(args)
    report = bound_for(spec)
    if report.bound is None:
        raise InputError("no bound applies: g is not odd and F is not even past its first nonzero order")
    return {"spec": spec_to_doc(spec), "verdict": verify_bound(spec, args.kmax, args.fast_path).to_dict()}


def cmd_sharp(args) -> dict:
    if args.case is None or args.m is None:
        raise InputError("sharp needs --case and --m")
    if not args.out:
        raise InputError("sharp needs --out PATH for the synthesized system")
    try:
        targets = [as_rat(t.strip()) for t in (args.roots or "").split(",") if t.strip()]
    except (TypeError, ValueError) as exc:
        raise InputError(f"--roots: {exc}") from None
    try:
        built = construct_sharp_detailed(args.case, args.m, args.n, targets, seed=args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    dump(built.spec, args.out)
    result = first_nonvanishing(built.spec, args.kmax)
    return {
        "case": args.case,
        "m": args.m,
        "n": args.n,
        "targets": [str(t) for t in built.targets],
        "exact_factorization": built.exact,
        "attempts": built.attempts,
        "written": args.out,
        "spec": spec_to_doc(built.spec),
        "k": result.k,
        "roots": positive_roots(result.L.P).to_dict(),
        "exact_match": roots_match(result.L.P, built.targets),
    }


def cmd_simulate(args) -> dict:
    spec, numeric = _need_spec(args)
    config = _config(args, numeric)
    eps = _float_list(args.eps)[0] if args.eps else config.eps[-1]
    result = first_nonvanishing(spec, args.kmax)
    cycles = find_limit_cycles(spec, eps, (config.c_min, config.c_max), config)
    predicted = [
        r.label() for r in positive_roots(result.L.P).roots if config.c_min <= r.approx <= config.c_max
    ]
    return {
        "spec": spec_to_doc(spec),
        "k": result.k,
        "predicted_roots_in_range": predicted,
        "numeric": {"epsilon": eps, "c_range": [config.c_min, config.c_max], "limit_cycles": cycles,
                    "backend": KERNEL_BACKEND},
    }


def cmd_validate(args) -> dict:
    spec, numeric = _need_spec(args)
    config = _config(args, numeric)
    result = first_nonvanishing(spec, args.kmax)
    report = estimate_melnikov(spec, result.k, result.L, config)
    if args.csv:
        sign, k = report.sign, report.k
        write_csv(args.csv, report.samples, lambda s: s.epsilon**k * sign * result.L.integral(s.c))
    ok = report.passed and report.sign_consistent
    doc = {"spec": spec_to_doc(spec), "k": result.k, "status": "PASS" if ok else "FAIL",
           "numeric": report.to_dict()}
    if not ok:
        raise _Failed(doc, ConvergenceFailure(report))
    return doc


def _selftest_quadrature() -> dict:
    worst = 0.0
    for i in range(6):
        for j in range(6):
            for c in (Fraction(1, 2), Fraction(1), Fraction(2)):
                exact = circle_moment(i, j).integral(float(c))
                worst = max(worst, abs(circle_moment_numeric(i, j, float(c)) - exact) / abs(exact))
    return {"max_relative_error": worst, "ok": worst < 1e-9}


def cmd_selftest(args) -> dict:
    config = NumericConfig()
    checks: dict[str, Any] = {"quadrature": _selftest_quadrature()}
    sign = calibrate_sign(config)
    checks["calibration_sign"] = sign
    failed = not checks["quadrature"]["ok"]
    for fx in fixtures.ALL:
        result = first_nonvanishing(fx.spec, args.kmax)
        claim = result.k == fx.expected_k and roots_match(result.L.P, fx.expected_roots)
        conv = estimate_melnikov(fx.spec, result.k, result.L, config, sign=sign)
        roots = positive_roots(result.L.P)
        in_range = [r for r in roots.roots if config.c_min < r.approx < config.c_max]
        cycles = find_limit_cycles(fx.spec, fx.eps_cycles, (config.c_min, config.c_max), config)
        numeric_ok = conv.passed and conv.sign_consistent and len(cycles) == len(in_range)
        entry = {
            "k": result.k,
            "roots": roots.labels(),
            "claim_matches": claim,
            "disputed": fx.disputed,
            "numeric_agrees": numeric_ok,
            "ratios": conv.ratios,
            "limit_cycles": cycles,
        }
        checks[fx.name] = entry
        # a disputed claim is reported; engine/flow disagreement always fails
        if not numeric_ok or (not claim and not fx.disputed):
            failed = True
    doc = {"status": "FAIL" if failed else "PASS", "checks": checks, "backend": KERNEL_BACKEND}
    if failed:
        raise _Failed(doc, None, EXIT_SELFTEST)
    return doc


COMMANDS = {
    "compute": cmd_compute,
    "roots": cmd_roots,
    "bound": cmd_bound,
    "verify": cmd_verify,
    "sharp": cmd_sharp,
    "simulate": cmd_simulate,
    "validate": cmd_validate,
    "selftest": cmd_selftest,
}


class _Failed(Exception):
    def __init__(self, doc: dict, error: Exception | None, code: int = EXIT_COMPUTE):
        super().__init__(str(error))
        self.doc = doc
        self.error = error
        self.code = code


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--spec", help="system file (JSON)")
    common.add_argument("--kmax", type=int, default=DEFAULT_KMAX)
    common.add_argument("--eps", help="comma-separated epsilon values")
    common.add_argument("--c-range", dest="c_range", help="A,B")
    common.add_argument("--grid", type=int)
    common.add_argument("--out", help="output path (sharp: system file; otherwise a copy of the report)")
    common.add_argument("--csv", help="CSV side file for sampled displacements")
    common.add_argument("--tol", type=float, help="integrator relative tolerance")
    common.add_argument("--fast-path", dest="fast_path", action="store_true")
    parser = _Parser(prog="lienard-melnikov", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "sharp":
            p.add_argument("--case", choices=["a", "b"])
            p.add_argument("--m", type=int)
            p.add_argument("--n", type=int)
            p.add_argument("--roots", default="")
            p.add_argument("--seed", type=int, default=0)
    return parser


def _emit(doc: dict, out: str | None, command: str) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True, default=str)
    print(text)
    if out and command != "sharp":
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def main(argv: list[str] | None = None) -> int:
    start = time.perf_counter()
    command = None
    out = None
    try:
        args = build_parser().parse_args(argv)
        command, out = args.command, args.out
        if args.kmax < 1:
            raise InputError("--kmax must be positive")
        doc = COMMANDS[command](args)
        code = EXIT_OK
    except (InputError, SpecError) as exc:
        doc = {"error": {"type": "input", "field": getattr(exc, "field", None), "message": str(exc)}}
        code = EXIT_INPUT
    except _Failed as exc:
        doc = exc.doc
        if exc.error is not None:
            doc["error"] = {"type": type(exc.error).__name__, "message": str(exc.error)}
        code = exc.code
    except COMPUTE_ERRORS as exc:
        doc = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        if isinstance(exc, Exhausted):
            doc["error"]["k_max"] = exc.result.k
        code = EXIT_COMPUTE
    doc = {"command": command, **doc, "timings": {"total_s": round(time.perf_counter() - start, 6)}}
    _emit(doc, out, command or "")
    return code


if __name__ == "__main__":
    sys.exit(main())
