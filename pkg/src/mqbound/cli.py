"""
Command-line interface.

Exit codes: 0 success, 2 usage or schema error, 3 numeric failure,
4 certification or lemma violation.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import jsonschema
import numpy as np

from mqbound import __version__
from mqbound.bounds import (choose_degree, compare_bounds, gamma_sequence, ln_new_bound,
                            new_constants, old_constants, proof_chain,
                            verify_factorial_lemma, verify_moment_lemma)
from mqbound.errors import (DomainError, MqboundError, NotDeterminingError,
                            SeminormError, SingularSystemError)
from mqbound.harness import (ExperimentConfig, certification_violations, emit,
                             run_convergence)
from mqbound.interpolation import InterpolationProblem, evaluate, fit
from mqbound.kernel import KernelParams
from mqbound.simplex import Simplex, equally_spaced_points
from mqbound.verify import verify_lebesgue_lemma, verify_measure_lemma

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_VIOLATION = 4

PROBLEM_SCHEMA = {
    "type": "object",
    "required": ["n", "beta", "c", "centers", "values"],
    "additionalProperties": False,
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "beta": {"type": "number"},
        "c": {"type": "number", "exclusiveMinimum": 0},
        "centers": {"type": "array", "minItems": 1,
                    "items": {"type": "array", "items": {"type": "number"}}},
        "values": {"type": "array", "minItems": 1, "items": {"type": "number"}},
    },
}

POINTS_SCHEMA = {
    "oneOf": [
        {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
        {"type": "object", "required": ["points"],
         "properties": {"points": {"type": "array",
                                   "items": {"type": "array", "items": {"type": "number"}}}}},
    ]
}

SIMPLEX_SCHEMA = {
    "type": "object",
    "required": ["vertices"],
    "properties": {"vertices": {"type": "array",
                                "items": {"type": "array", "items": {"type": "number"}}}},
}


class UsageError(Exception):
    pass


def _g17(x):
    return format(float(x), ".17g")


def _g6(x):
    return format(float(x), ".6g")


def _load_json(path, schema=None):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError("cannot read %s: %s" % (path, exc)) from exc
    if schema is not None:
        try:
            jsonschema.validate(data, schema)
        except jsonschema.ValidationError as exc:
            raise UsageError("%s: schema violation: %s" % (path, exc.message)) from exc
    return data


def _json_number(x):
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return None
    return float(_g17(x))


def _dump_json(obj):
    # floats are pre-rounded to 17 significant digits, which repr preserves
    return json.dumps(obj, indent=2) + "\n"


def cmd_constants(args, out):
    k = new_constants(args.n, args.beta, args.c, args.b0)
    report = {
        "n": k.n, "beta": k.beta, "c": k.c, "b0": k.b0, "m": k.m,
        "case": k.case_id, "s": k.s, "rho": k.rho,
        "Delta0": k.delta0_const, "ln_Delta0": k.ln_delta0_const,
        "C": k.C_big, "delta0": k.delta0,
        "lambda_prime": k.lambda_prime, "ln_lambda_prime": k.ln_lambda_prime,
    }
    old = None
    if args.old:
        old = old_constants(args.n, args.beta, args.c, args.b0, k.rho)
    if args.json:
        obj = {key: (_json_number(v) if isinstance(v, float) else v) for key, v in report.items()}
        if old is not None:
            obj["old"] = {
                "gamma": [int(g) for g in gamma_sequence(args.n)],
                "gamma_n": old.gamma_n,
                "rho_prime": _json_number(old.rho_prime),
                "ln_C_old": _json_number(old.ln_C_old),
                "ln_lambda_old": _json_number(old.ln_lambda_old),
                "ln_abs_ln_lambda_old": _json_number(old.ln_abs_ln_lambda_old),
            }
        out.write(_dump_json(obj))
        return EXIT_OK
    lines = ["case        %s" % k.case_id,
             "m           %d" % k.m,
             "s           %d" % k.s,
             "rho         %s" % _g6(k.rho),
             "Delta0      %s" % _g6(k.delta0_const),
             "C           %s" % _g6(k.C_big),
             "delta0      %s" % _g6(k.delta0),
             "lambda'     %s" % _g6(k.lambda_prime),
             "ln lambda'  %s" % _g6(k.ln_lambda_prime)]
    if old is not None:
        lines += ["gamma       %s" % ", ".join(str(g) for g in gamma_sequence(args.n)),
                  "gamma_n     %d" % old.gamma_n,
                  "ln C_old    %s" % _g6(old.ln_C_old),
                  "ln lambda   -exp(%s)" % _g6(old.ln_abs_ln_lambda_old),
                  "1 - lambda  %s" % _g6(old.one_minus_lambda)]
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_bound(args, out):
    k = new_constants(args.n, args.beta, args.c, args.b0)
    delta = args.delta if args.delta is not None else k.delta0 / 4.0
    l = choose_degree(delta, k.C_big)
    lnb = ln_new_bound(k, delta, args.seminorm)
    obj = {"delta": _json_number(delta), "l": l, "ln_bound": _json_number(lnb),
           "bound": _json_number(math.exp(lnb)) if lnb < 700 else None}
    if args.chain:
        ch = proof_chain(k, delta)
        obj["chain"] = [{"step": name, "ln_value": _json_number(v)} for name, v in ch.steps]
        obj["chain_final"] = _json_number(ch.final)
        obj["chain_end_to_end"] = ch.end_to_end()
    out.write(_dump_json(obj))
    return EXIT_OK


def cmd_compare(args, out):
    k = new_constants(args.n, args.beta, args.c, args.b0)
    deltas = args.delta or [k.delta0 / 2 ** j for j in range(5)]
    rows = compare_bounds(args.n, args.beta, args.c, args.b0, deltas)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["delta", "new_decay", "old_decay", "ln_ratio"])
    for r in rows:
        w.writerow([_g17(r.delta), _g17(r.new_decay), _g17(r.old_decay), _g17(r.ln_ratio)])
    out.write(buf.getvalue())
    return EXIT_OK


def cmd_points(args, out):
    if args.simplex:
        s = Simplex(_load_json(args.simplex, SIMPLEX_SCHEMA)["vertices"])
        if s.dim != args.n:
            raise UsageError("simplex dimension %d does not match --n %d" % (s.dim, args.n))
    else:
        s = Simplex.unit(args.n)
    lat = equally_spaced_points(s, args.l)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k%d" % (i + 1) for i in range(args.n + 1)]
               + ["x%d" % (i + 1) for i in range(args.n)])
    for k, p in zip(lat.multi_indices, lat.points):
        w.writerow([str(int(v)) for v in k] + [_g17(v) for v in p])
    out.write(buf.getvalue())
    return EXIT_OK


def cmd_interpolate(args, out):
    prob_data = _load_json(args.problem, PROBLEM_SCHEMA)
    pts_data = _load_json(args.eval, POINTS_SCHEMA)
    if isinstance(pts_data, dict):
        pts_data = pts_data["points"]
    n = prob_data["n"]
    centers = np.asarray(prob_data["centers"], dtype=float)
    if centers.ndim != 2 or centers.shape[1] != n:
        raise UsageError("centers must be points in R^%d" % n)
    if any(len(p) != n for p in pts_data):
        raise UsageError("evaluation points must be in R^%d" % n)
    pts = np.asarray(pts_data, dtype=float).reshape(-1, n)
    try:
        kernel = KernelParams(prob_data["beta"], prob_data["c"])
        prob = InterpolationProblem(kernel, centers, prob_data["values"])
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    spl = fit(prob)
    values = evaluate(spl, pts) if len(pts) else np.zeros(0)
    obj = {"values": [_json_number(v) for v in values],
           "seminorm": _json_number(spl.seminorm),
           "condition_diag": _json_number(spl.condition_diag)}
    out.write(_dump_json(obj))
    return EXIT_OK


def cmd_converge(args, out):
    raw = _load_json(args.config)
    if not isinstance(raw, dict):
        raise UsageError("config must be a JSON object")
    try:
        cfg = ExperimentConfig.from_dict(raw)
    except (DomainError, TypeError) as exc:
        raise UsageError("invalid config: %s" % exc) from exc
    fmt = args.format or cfg.output_format
    rows = run_convergence(cfg)
    data = emit(rows, fmt).decode("utf-8")
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(data)
    else:
        out.write(data)
    bad = certification_violations(rows)
    for r in bad:
        sys.stderr.write("certification violated at l=%d: ln max_error %.6g > ln_bound %.6g\n"
                         % (r.l, math.log(r.max_error), r.ln_bound))
    if bad:
        return EXIT_VIOLATION
    if any(r.error for r in rows):
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_verify(args, out):
    lemma = args.lemma
    if lemma == "factorial":
        rep = verify_factorial_lemma(args.lmax or 300)
    elif lemma == "moment":
        rep = verify_moment_lemma(args.n or 3, args.beta if args.beta is not None else 1.0,
                                  args.lmax or 60)
    elif lemma == "lebesgue":
        rep = verify_lebesgue_lemma(args.n or 1, args.lmax or 6)
    else:
        rep = verify_measure_lemma(args.n or 2, args.l or 3, trials=args.trials, seed=args.seed)
    worst = rep.worst
    out.write("lemma %s: %d instances, worst slack %s at %s\n"
              % (rep.name, len(rep.rows), _g6(worst[1]), worst[0]))
    for key, v in rep.detail.items():
        if isinstance(v, float):
            v = _g6(v)
        elif isinstance(v, dict):
            v = ", ".join("%s:%s" % (a, _g6(b)) for a, b in v.items())
        out.write("  %s = %s\n" % (key, v))
    for param, slack in rep.violations():
        out.write("VIOLATION at %s: slack %s\n" % (param, _g6(slack)))
    out.write("%s\n" % ("PASS" if rep.passed else "FAIL"))
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def _kernel_args(p, required=True):
    p.add_argument("--n", type=int, required=required)
    p.add_argument("--beta", type=float, required=required)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--b0", type=float, default=1.0)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mqbound",
        description="Multiquadric h-spline interpolation and exponential-type error bounds.")
    parser.add_argument("--header", action="store_true",
                        help="print a version comment line before the output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="bound constants rho, Delta0, C, delta0, lambda'")
    _kernel_args(p)
    p.add_argument("--old", action="store_true", help="also report gamma_n, C_old, lambda_old")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("bound", help="evaluate the improved bound at one delta")
    _kernel_args(p)
    p.add_argument("--delta", type=float)
    p.add_argument("--seminorm", type=float, default=1.0)
    p.add_argument("--chain", action="store_true", help="include the inequality chain")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("compare", help="log decay of the old and new bounds")
    _kernel_args(p)
    p.add_argument("--delta", type=float, action="append")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("points", help="equally spaced lattice points as CSV")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--simplex", help="JSON file {\"vertices\": [[...], ...]}")
    p.set_defaults(func=cmd_points)

    p = sub.add_parser("interpolate", help="fit an h-spline and evaluate it")
    p.add_argument("--problem", required=True)
    p.add_argument("--eval", required=True)
    p.set_defaults(func=cmd_interpolate)

    p = sub.add_parser("converge", help="run a convergence study")
    p.add_argument("--config", required=True)
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--output")
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("verify", help="numerically check a lemma")
    p.add_argument("--lemma", required=True, choices=["moment", "factorial", "lebesgue", "measure"])
    p.add_argument("--n", type=int)
    p.add_argument("--beta", type=float)
    p.add_argument("--lmax", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    if args.header:
        out.write("# mqbound %s\n" % __version__)
    try:
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write("mqbound: error: %s\n" % exc)
        return EXIT_USAGE
    except (SingularSystemError, NotDeterminingError, SeminormError, OverflowError) as exc:
        sys.stderr.write("mqbound: numeric failure: %s\n" % exc)
        return EXIT_NUMERIC
    except (DomainError, MqboundError) as exc:
        sys.stderr.write("mqbound: error: %s\n" % exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
