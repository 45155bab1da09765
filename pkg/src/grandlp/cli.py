"""Command-line front end.

Subcommands
-----------
norm         L_p or grand Lebesgue norm of a named function
fundamental  table of the fundamental function over a delta range
bound        continuity bound vs measured modulus over a delta range
sharpness    sharpness ratios of an extremal family
verify       one of the built-in verification suites, as JSON

Output is CSV (header row, '.' decimals, floats via repr) or JSON with the
fully resolved configuration embedded.  Identical configuration and seed
produce byte-identical output.  All delta values must lie in (0, 1/e); a
violation exits nonzero with a machine-readable error record on stderr.

A plain-text config file of ``key = value`` lines can pre-fill any flag
(flags given on the command line win).
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys

import numpy as np

from . import checks
from .bounds import bound_report, continuity_bound_1d, gradient_continuity_bound
from .errors import GrandLpError, InvalidParameterError
from .extremals import (FamilyKind, make_interval_log_family,
                        make_radial_log_family, make_shift_witness_family,
                        make_singular_radial_family, sharpness_ratio)
from .fundamental import (asymptotic_fundamental, fundamental_function,
                          truncated_fundamental)
from .gls import gls_norm, natural_psi
from .modulus import empirical_modulus
from .norms import DomainSpec, TestFunction, lp_norm, parse_domain_spec
from .psi import parse_psi_spec

DELTA_RANGE_HELP = ("single value '1e-3', comma list '1e-2,1e-3', or range "
                    "'1e-6..1e-2:log:9' (spacing 'log' or 'lin'); all values "
                    "must lie in (0, 1/e)")


def parse_delta_range(text: str) -> list[float]:
    if ".." in text:
        span, *rest = text.split(":")
        lo, hi = (float(v) for v in span.split(".."))
        spacing = rest[0] if rest else "log"
        count = int(rest[1]) if len(rest) > 1 else 9
        if spacing == "log":
            vals = np.geomspace(lo, hi, count)
        elif spacing == "lin":
            vals = np.linspace(lo, hi, count)
        else:
            raise InvalidParameterError(f"unknown spacing {spacing!r}")
        return [float(v) for v in vals]
    return [float(v) for v in text.split(",")]


def _check_deltas(deltas) -> None:
    for d in deltas:
        if not (0.0 < d < 1.0 / math.e):
            raise InvalidParameterError(
                f"delta = {d} outside the admissible range (0, 1/e)")


def parse_function_spec(text: str, seed: int = 0):
    """Build (function, domain, psi-or-None) from a named-function snippet.

    Known families: ``interval-log exponent=1``, ``radial-log beta=1 d=2``,
    ``radial-singular alpha=2 gamma=0.5 d=2``, ``shift-witness b=2 beta=0.5``,
    ``poly coeffs=0,1,...`` (on [0, 1]), ``tent``.
    """
    parts = text.split()
    name, kv = parts[0].lower(), {}
    for tok in parts[1:]:
        k, v = tok.split("=", 1)
        kv[k] = v
    if name == "interval-log":
        fam = make_interval_log_family(float(kv.get("exponent", 1.0)))
        return fam.function, fam.domain, fam.psi
    if name == "radial-log":
        fam = make_radial_log_family(float(kv.get("beta", 1.0)),
                                     int(kv.get("d", 2)))
        return fam.function, fam.domain, fam.psi
    if name == "radial-singular":
        fam = make_singular_radial_family(float(kv.get("alpha", 2.0)),
                                          float(kv.get("gamma", 0.5)),
                                          int(kv.get("d", 2)))
        return fam.function, fam.domain, fam.psi
    if name == "shift-witness":
        fam = make_shift_witness_family(float(kv.get("b", 2.0)),
                                        float(kv.get("beta", 0.5)))
        return fam.function, fam.domain, fam.psi
    if name == "poly":
        coeffs = [float(c) for c in kv.get("coeffs", "0,1").split(",")]
        poly = np.polynomial.Polynomial(coeffs)
        fn = TestFunction.one_dimensional(poly, poly.deriv(), name="poly")
        return fn, DomainSpec.unit_interval(), None
    if name == "tent":
        fn = TestFunction.one_dimensional(
            lambda x: np.minimum(x, 1.0 - x),
            vanishes_on_boundary=True, name="tent")
        return fn, DomainSpec.unit_interval(), None
    raise InvalidParameterError(f"unknown function family {name!r}")


def _emit(args, header: list[str], rows: list[list], meta: dict) -> None:
    if args.format == "json":
        payload = {"config": meta,
                   "rows": [dict(zip(header, row)) for row in rows]}
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        buf = io.StringIO()
        buf.write(",".join(header) + "\n")
        for row in rows:
            buf.write(",".join(repr(v) if isinstance(v, float) else str(v)
                               for v in row) + "\n")
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, payload: dict) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2, default=float) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _resolved_config(args, extra: dict | None = None) -> dict:
    keep = {k: v for k, v in vars(args).items()
            if k not in ("func", "config") and v is not None}
    if extra:
        keep.update(extra)
    return keep


def _cmd_norm(args) -> int:
    fn, domain, psi = parse_function_spec(args.f, args.seed)
    if args.domain:
        domain = parse_domain_spec(args.domain)
    if args.p is not None:
        value = lp_norm(fn, domain, args.p, args.quad_tol)
        rows = [["lp", args.p, value]]
    else:
        if args.psi:
            psi = parse_psi_spec(args.psi)
        if psi is None:
            raise InvalidParameterError("need --psi or --p for this function")
        res = gls_norm(fn, psi, domain, quad_tol=args.quad_tol)
        rows = [["gls", res.argmax_p, res.value]]
    _emit(args, ["kind", "p", "value"], rows, _resolved_config(args))
    return 0


def _cmd_fundamental(args) -> int:
    psi = parse_psi_spec(args.psi)
    deltas = parse_delta_range(args.delta)
    _check_deltas(deltas)
    rows = []
    for d in deltas:
        if args.truncate:
            lo, hi = (float(v) for v in args.truncate.split(","))
            res = truncated_fundamental(psi, lo, hi if math.isfinite(hi) else math.inf, d)
        else:
            res = fundamental_function(psi, d)
        row = [d, res.value, res.argmax_p if res.argmax_p is not None else ""]
        if args.asymptotic:
            row.append(asymptotic_fundamental(psi, d))
        rows.append(row)
    header = ["delta", "phi", "argmax_p"] + (["asymptotic"] if args.asymptotic else [])
    _emit(args, header, rows, _resolved_config(args))
    return 0


def _cmd_bound(args) -> int:
    fn, domain, family_psi = parse_function_spec(args.f, args.seed)
    if args.domain:
        domain = parse_domain_spec(args.domain)
    psi = parse_psi_spec(args.psi) if args.psi else family_psi
    if psi is None:
        raise InvalidParameterError("no psi available: pass --psi")
    deltas = parse_delta_range(args.delta)
    _check_deltas(deltas)

    if args.kind == "1d":
        bound_fn = lambda d: continuity_bound_1d(fn, psi, d, args.quad_tol)
    else:
        bound_fn = lambda d: gradient_continuity_bound(fn, psi, domain, d,
                                                       args.constant,
                                                       args.quad_tol)
    mod_fn = lambda d: empirical_modulus(fn, domain, d, budget=args.budget,
                                         seed=args.seed).value
    rep = bound_report(deltas, bound_fn, mod_fn,
                       params=_resolved_config(args, {"psi": psi.describe()}))
    if args.format == "json":
        _emit_json(args, rep.to_json_dict())
    else:
        rows = list(zip(rep.delta_grid, rep.bound_values,
                        rep.empirical_modulus, rep.ratios))
        _emit(args, ["delta", "bound", "empirical", "ratio"],
              [list(r) for r in rows], rep.params)
    return 0


def _cmd_sharpness(args) -> int:
    if args.family == "interval-log":
        fam = make_interval_log_family(args.exponent)
    elif args.family == "radial-log":
        fam = make_radial_log_family(args.beta, args.d)
    elif args.family == "radial-singular":
        fam = make_singular_radial_family(args.alpha, args.gamma, args.d)
    else:
        raise InvalidParameterError(f"unknown family {args.family!r}")
    deltas = parse_delta_range(args.delta)
    _check_deltas(deltas)
    ratios = sharpness_ratio(fam, deltas, budget=args.budget, seed=args.seed)
    rows = [[d, r] for d, r in zip(deltas, ratios)]
    _emit(args, ["delta", "ratio"], rows,
          _resolved_config(args, {"family_params": fam.params}))
    return 0


def _cmd_verify(args) -> int:
    suite = args.suite
    if suite == "degeneration":
        report = checks.lp_degeneration_check(seed=args.seed)
    elif suite == "fundamental":
        report = checks.fundamental_forms_check()
    elif suite == "sharpness-1d":
        report = checks.sharpness_1d_check(args.exponent, budget=args.budget,
                                           seed=args.seed)
        report["pass"] = bool(report["max_ratio"] <= 1.02
                              and report["final_ratio"] >= 0.75
                              and report["tail_increasing"])
    elif suite == "radial-band":
        report = checks.radial_band_check(args.beta, args.d,
                                          budget=args.budget, seed=args.seed)
        report["pass"] = bool(report["all_positive"]
                              and report["band_factor"] <= 5.0)
    elif suite == "gradient-asymptotics":
        report = checks.gradient_asymptotics_check()
        report["pass"] = bool(
            all(r["slope_rel_err"] <= 0.02 and r["level_rel_err"] <= 0.05
                for r in report["interval_log"].values())
            and report["pole"]["slope_rel_err"] <= 0.02)
    elif suite == "morrey":
        report = checks.morrey_arithmetic_check()
    elif suite == "higher-order":
        report = checks.higher_order_consistency_check()
    elif suite == "noncompactness":
        report = checks.noncompactness_suite(budget=args.budget, seed=args.seed)
    elif suite == "modulus-oracle":
        report = checks.modulus_oracle_check(seed=args.seed)
    else:
        raise InvalidParameterError(f"unknown suite {suite!r}")
    report["config"] = _resolved_config(args)
    _emit_json(args, report)
    return 0 if report.get("pass", True) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="grandlp",
        description="Grand Lebesgue norms, fundamental functions, and "
                    "modulus-of-continuity bounds.")
    ap.add_argument("--config", help="key = value file pre-filling any flag")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--quad-tol", dest="quad_tol", type=float, default=1e-9)
    common.add_argument("--opt-tol", dest="opt_tol", type=float, default=1e-10)
    common.add_argument("--budget", type=int, default=100_000,
                        help="evaluation budget for modulus estimation")

    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", parents=[common], help="L_p or grand norm")
    p.add_argument("--f", required=True, help="function spec, e.g. 'interval-log exponent=1'")
    p.add_argument("--domain", help="domain spec, e.g. 'ball d=2' (default: the function's)")
    p.add_argument("--psi", help="psi spec, e.g. 'exponent beta=1'")
    p.add_argument("--p", type=float, help="plain L_p norm instead of the grand norm")
    p.set_defaults(func=_cmd_norm)

    p = sub.add_parser("fundamental", parents=[common],
                       help="fundamental function table")
    p.add_argument("--psi", required=True)
    p.add_argument("--delta", required=True, help=DELTA_RANGE_HELP)
    p.add_argument("--truncate", help="window 'lo,hi' (hi may be inf)")
    p.add_argument("--asymptotic", action="store_true",
                   help="add the closed-form small-delta column")
    p.set_defaults(func=_cmd_fundamental)

    p = sub.add_parser("bound", parents=[common],
                       help="continuity bound vs measured modulus")
    p.add_argument("--kind", choices=("gradient", "1d"), default="gradient")
    p.add_argument("--f", required=True)
    p.add_argument("--domain")
    p.add_argument("--psi")
    p.add_argument("--delta", required=True, help=DELTA_RANGE_HELP)
    p.add_argument("--constant", type=float, default=1.0,
                   help="the free domain constant (default 1, echoed into reports)")
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("sharpness", parents=[common],
                       help="sharpness ratios of an extremal family")
    p.add_argument("--family", required=True,
                   choices=("interval-log", "radial-log", "radial-singular"))
    p.add_argument("--exponent", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--delta", required=True, help=DELTA_RANGE_HELP)
    p.set_defaults(func=_cmd_sharpness)

    p = sub.add_parser("verify", parents=[common], help="verification suites")
    p.add_argument("suite", choices=("degeneration", "fundamental",
                                     "sharpness-1d", "radial-band",
                                     "gradient-asymptotics", "morrey",
                                     "higher-order", "noncompactness",
                                     "modulus-oracle"))
    p.add_argument("--exponent", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--d", type=int, default=2)
    p.set_defaults(func=_cmd_verify, format="json")

    return ap


def _apply_config_file(ap: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Pre-fill defaults from a 'key = value' file; flags still win."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    path = argv[i + 1]
    defaults = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            k, _, v = line.partition("=")
            defaults[k.strip().replace("-", "_")] = v.strip()
    for action in ap._subparsers._group_actions[0].choices.values():  # noqa: SLF001
        known = {a.dest for a in action._actions}  # noqa: SLF001
        action.set_defaults(**{k: v for k, v in defaults.items() if k in known})
    return argv[:i] + argv[i + 2:]


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        argv = _apply_config_file(ap, argv)
        args = ap.parse_args(argv)
        return args.func(args)
    except (GrandLpError, OSError, KeyError) as exc:
        record = {"error": {"type": type(exc).__name__, "message": str(exc),
                            "admissible_delta": "(0, 1/e)"}}
        sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
