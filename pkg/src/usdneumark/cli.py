"""Command-line front end.

    usdneumark solve  --input in.json --output report.json [--format json|text]
    usdneumark verify --report report.json
    usdneumark oracle --input in.json --grid-step 1e-3

Exit codes: 0 success, 2 input/validation error, 3 numerical failure,
4 verification failure.
"""

import argparse
import json
import sys

import numpy as np

from .config import DEFAULT_TOLERANCES
from .ensemble import load_ensemble
from .errors import NumericalError, UsdError, ValidationError
from .ladder import build_ladder
from .pipeline import report_to_dict, run_pipeline, verify_report
from .usd_sdp import oracle_usd, reciprocal_states, solve_usd

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_VERIFY = 4


def _fmt_complex(z: complex) -> str:
    re, im = float(np.real(z)), float(np.imag(z))
    if abs(im) < 5e-5:
        return f"{re:8.4f}"
    sign = "+" if im >= 0 else "-"
    return f"{re:8.4f}{sign}{abs(im):.4f}i"


def _fmt_matrix(rows) -> str:
    mat = np.asarray(rows)
    return "\n".join(
        "  " + "  ".join(_fmt_complex(z) for z in row) for row in mat
    )


def _text_report(doc: dict) -> str:
    out = []
    ens = doc["ensemble"]
    out.append(f"states: {ens['n_states']}   dimension: {ens['dimension']}")
    out.append(f"priors: {', '.join(f'{x:.4f}' for x in ens['priors'])}")
    out.append("")
    out.append("ladder coefficients:")
    from .pipeline import parse_cmat
    out.append(_fmt_matrix(parse_cmat(doc["ladder"]["coefficients"])))
    out.append("")
    usd = doc["usd"]
    out.append(
        "detection probabilities: "
        + ", ".join(f"{x:.4f}" for x in usd["p"])
    )
    out.append(f"total detection probability: {usd['total_pd']:.4f}")
    out.append("")
    out.append("final-configuration amplitudes g:")
    g = parse_cmat(doc["final_configuration"]["g"])
    out.append(
        "  " + "  ".join(_fmt_complex(z).strip() for z in g)
    )
    out.append("")
    out.append("U0:")
    out.append(_fmt_matrix(parse_cmat(doc["ladder"]["u0"])))
    out.append("")
    out.append("U1:")
    out.append(_fmt_matrix(parse_cmat(doc["synthesis"]["u1"])))
    out.append("")
    out.append("U = U1 U0:")
    out.append(_fmt_matrix(parse_cmat(doc["synthesis"]["u_total"])))
    out.append("")
    out.append("two-level rotations (angles in degrees):")
    out.append(f"  {'plane':>8} {'alpha':>10} {'beta':>10} {'gamma/2':>10} {'delta':>10}")
    for s in doc["rotations"]["steps"]:
        out.append(
            f"  R_{s['k'] + 1},{s['l'] + 1:<4} "
            f"{s['alpha']:>10.4f} {s['beta']:>10.4f} "
            f"{s['gamma'] / 2:>10.4f} {s['delta']:>10.4f}"
        )
    out.append("")
    out.append("checks:")
    for name, chk in doc["checks"].items():
        flag = "ok" if chk["ok"] else "FAILED"
        out.append(f"  {name:30s} {chk['value']:.3e} <= {chk['bound']:.0e}  {flag}")
    out.append(f"status: {doc['status']}")
    return "\n".join(out) + "\n"


def _load_input(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read input file: {exc}") from exc
    return load_ensemble(text)


def cmd_solve(args) -> int:
    tol = DEFAULT_TOLERANCES
    overrides = {}
    if args.tol_unitary is not None:
        overrides["unitarity"] = args.tol_unitary
    if args.tol_gram is not None:
        overrides["gram"] = args.tol_gram
    if overrides:
        tol = tol.with_overrides(**overrides)
    ensemble = _load_input(args.input)
    rep = run_pipeline(ensemble, tol)
    doc = report_to_dict(rep)
    if args.format == "json":
        payload = json.dumps(doc, sort_keys=True, indent=1) + "\n"
    else:
        payload = _text_report(doc)
    if args.output == "-":
        sys.stdout.write(payload)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(payload)
    if not rep.passed:
        bad = [k for k, v in rep.checks.items() if not v["ok"]]
        print(f"FAILED checks: {', '.join(bad)}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        with open(args.report, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read report: {exc}") from exc
    failures = verify_report(doc)
    if failures:
        for name in failures:
            print(f"verification failed: {name}", file=sys.stderr)
        return EXIT_VERIFY
    print("report verified: all checks passed")
    return EXIT_OK


def cmd_oracle(args) -> int:
    ensemble = _load_input(args.input)
    ladder = build_ladder(ensemble)
    rec = reciprocal_states(ladder.coeffs)
    solved = solve_usd(ensemble, rec)
    oracle = oracle_usd(ensemble, rec, args.grid_step)
    gap = abs(solved.total_pd - oracle.total_pd)
    print(f"solver  total_pd = {solved.total_pd:.6f}  p = "
          + ", ".join(f"{x:.6f}" for x in solved.p))
    print(f"oracle  total_pd = {oracle.total_pd:.6f}  p = "
          + ", ".join(f"{x:.6f}" for x in oracle.p))
    print(f"gap = {gap:.3e} (grid step {args.grid_step:g})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="usdneumark",
        description="Optimal unambiguous discrimination of pure states "
        "via the Neumark extension",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run the full pipeline on an input file")
    p_solve.add_argument("--input", required=True)
    p_solve.add_argument("--output", required=True, help="report path ('-' for stdout)")
    p_solve.add_argument("--format", choices=("json", "text"), default="json")
    p_solve.add_argument("--tol-unitary", type=float, default=None)
    p_solve.add_argument("--tol-gram", type=float, default=None)
    p_solve.set_defaults(func=cmd_solve)

    p_verify = sub.add_parser("verify", help="re-check a JSON report independently")
    p_verify.add_argument("--report", required=True)
    p_verify.set_defaults(func=cmd_verify)

    p_oracle = sub.add_parser("oracle", help="compare the solver with the grid oracle")
    p_oracle.add_argument("--input", required=True)
    p_oracle.add_argument("--grid-step", type=float, default=1e-3)
    p_oracle.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except UsdError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
