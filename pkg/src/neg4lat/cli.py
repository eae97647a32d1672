"""``neg4lat`` command line: JSON lines on stdout, diagnostics on stderr.

Exit codes: 0 success, 1 verification failures, 2 usage or domain errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import spheres, surgery, weyl
from .lattice import (
    DimensionError,
    DomainError,
    adjunction_genus,
    is_sphere_class,
    k_dot,
    normalize_trivial,
    pair,
    parse_class,
    square,
)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class _Out:
    def __init__(self, indent):
        self.indent = indent

    def emit(self, obj):
        sys.stdout.write(json.dumps(obj, indent=self.indent) + "\n")


def _class_arg(text):
    try:
        return parse_class(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _normal_for_screen(x, out_warn=True):
    nx = normalize_trivial(x)
    if nx != x and out_warn:
        print(f"note: screening the trivial normal form {nx} of {x}", file=sys.stderr)
    return nx


def cmd_pair(args, out):
    out.emit({"x": args.x.to_json(), "y": args.y.to_json(), "pair": pair(args.x, args.y)})


def cmd_info(args, out):
    x = args.x
    out.emit({
        "class": x.to_json(),
        "square": square(x),
        "k_dot": k_dot(x),
        "genus": str(adjunction_genus(x)),
        "sphere": is_sphere_class(x),
        "exceptional": weyl.is_exceptional(x),
        "normal_form": normalize_trivial(x).to_json(),
    })


def cmd_reduce(args, out):
    out.emit({"class": args.x.to_json(), "reduced": weyl.reduce(args.x).to_json()})


def cmd_orbit_eq(args, out):
    verdict = weyl.orbit_equivalent(args.x, args.y, args.cap, args.global_sign)
    out.emit({"x": args.x.to_json(), "y": args.y.to_json(), **verdict.to_json()})


def cmd_enum_reduced(args, out):
    for x in weyl.enumerate_reduced(args.k, args.square, args.max_a):
        out.emit(x.to_json())


def cmd_exceptional(args, out):
    for x in weyl.enumerate_exceptional(args.k, args.max_a):
        out.emit(x.to_json())


def cmd_value_set(args, out):
    x = _normal_for_screen(args.x)
    out.emit(spheres.value_set(x, args.ones_positive).to_json())


def cmd_screen(args, out):
    x = _normal_for_screen(args.x)
    a_max = spheres.DEFAULT_A_MAX if args.max_a is None else args.max_a
    out.emit(spheres.screen(x, a_max, args.ones_positive).to_json())


def cmd_verify_table(args, out):
    entries = spheres.load_table(args.table)
    a_max = spheres.DEFAULT_A_MAX if args.max_a is None else args.max_a
    report = spheres.verify_table(entries, a_max, args.cap, orbits=not args.no_orbits)
    for row in report["rows"]:
        out.emit({"row": row["entry"], "status": row["status"], "outcome": row["outcome"],
                  "square": row["square"], "problems": row["problems"]})
    for finding in report["orbit_findings"]:
        out.emit({"orbit_finding": finding})
    out.emit({"summary": report["counts"], "ok": report["ok"],
              "a_max": report["a_max"], "a_cap": report["a_cap"]})
    for row in report["rows"]:
        if row["status"] != spheres.PASS:
            print(f"{row['status']}: {row['entry']['xi']} {'; '.join(row['problems'])}", file=sys.stderr)
    return EXIT_OK if report["ok"] else EXIT_FAILED


def cmd_surgery_run(args, out):
    out.emit(surgery.run_pipeline(surgery.load_pipeline(args.pipeline)))


def cmd_classify(args, out):
    n_sm = args.nsm if args.nsm == surgery.UNBOUNDED else _nonneg_int(args.nsm, "--nsm")
    n_sy = None
    if args.nsy is not None:
        n_sy = args.nsy if args.nsy == surgery.UNBOUNDED else _nonneg_int(args.nsy, "--nsy")
    scenario = surgery.BlowdownScenario(surgery.Kappa.parse(args.kappa), n_sm, args.k,
                                        args.artificial, args.ruled, n_sy)
    result = surgery.classify_minus4(scenario)
    out.emit({"scenario": {"kappa_X": scenario.kappa_X.to_json(), "n_sm": n_sm, "n_sy": n_sy,
                           "k": args.k, "artificial": args.artificial, "ruled": args.ruled},
              **result.to_json()})


def _nonneg_int(v, flag):
    try:
        n = int(v)
    except ValueError:
        raise DomainError(f"{flag} expects a nonnegative integer or 'unbounded', got {v!r}") from None
    if n < 0:
        raise DomainError(f"{flag} must be nonnegative")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json-indent", type=int, default=argparse.SUPPRESS,
                        help="indent emitted JSON (default: one object per line)")

    parser = argparse.ArgumentParser(prog="neg4lat", parents=[common],
                                     description="Exact lattice and Kodaira-dimension toolkit for -4-spheres.")
    parser.add_argument("--max-a", type=int, default=None, dest="global_max_a", metavar="N",
                        help="default exceptional-class bound on a")
    parser.add_argument("--cap", type=int, default=None, dest="global_cap", metavar="N",
                        help="default |a| cap for orbit searches")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_, description=help_)
        p.set_defaults(func=func)
        return p

    p = add("pair", cmd_pair, "intersection pairing of two classes")
    p.add_argument("x", type=_class_arg)
    p.add_argument("y", type=_class_arg)

    p = add("info", cmd_info, "square, K_st-degree, adjunction genus of a class")
    p.add_argument("x", type=_class_arg)

    p = add("reduce", cmd_reduce, "Cremona descent to a reduced form")
    p.add_argument("x", type=_class_arg)

    p = add("orbit-eq", cmd_orbit_eq, "bounded orbit equivalence with a replayable witness")
    p.add_argument("x", type=_class_arg)
    p.add_argument("y", type=_class_arg)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--global-sign", action="store_true", help="also accept -y")

    p = add("enum-reduced", cmd_enum_reduced, "reduced classes of a given square")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--square", type=int, required=True)
    p.add_argument("--max-a", type=int, required=True)

    p = add("exceptional", cmd_exceptional, "exceptional classes with 0 <= a <= max-a")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max-a", type=int, required=True)

    p = add("value-set", cmd_value_set, "attainable K_st values of sign-adjusted -4-classes")
    p.add_argument("x", type=_class_arg)
    p.add_argument("--ones-positive", action="store_true", help="keep b_i = 1 entries positive")

    p = add("screen", cmd_screen, "representability screen for a -4-class")
    p.add_argument("x", type=_class_arg)
    p.add_argument("--max-a", type=int, default=None)
    p.add_argument("--ones-positive", action="store_true", help="keep b_i = 1 entries positive")

    p = add("verify-table", cmd_verify_table, "check every row of the orbit table")
    p.add_argument("--table", default=None, help="TSV file (default: bundled table)")
    p.add_argument("--max-a", type=int, default=None)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--no-orbits", action="store_true", help="skip the orbit findings report")

    p = sub.add_parser("surgery", parents=[common], help="invariant pipelines")
    ssub = p.add_subparsers(dest="surgery_command", metavar="ACTION")
    ssub.required = True
    r = ssub.add_parser("run", parents=[common], help="run a JSON pipeline of surgery steps")
    r.add_argument("pipeline")
    r.set_defaults(func=cmd_surgery_run)

    p = add("classify", cmd_classify, "Kodaira dimension after a -4-blow-down")
    p.add_argument("--kappa", required=True, help="-inf, 0, 1 or 2")
    p.add_argument("--nsm", required=True, help="integer or 'unbounded'")
    p.add_argument("--nsy", default=None)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--artificial", action="store_true")
    p.add_argument("--ruled", default=surgery.NOT_RULED,
                   choices=[surgery.NOT_RULED, surgery.RATIONAL, surgery.IRRATIONAL_RULED])
    return parser


def _glue_negative_values(argv):
    # let "--kappa -inf" through: argparse would read "-inf" as an option
    out = []
    for tok in argv:
        if out and out[-1] in ("--kappa", "--square") and tok.startswith("-") and tok != "--":
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negative_values(argv))
    if getattr(args, "max_a", None) is None and hasattr(args, "max_a"):
        args.max_a = args.global_max_a
    if getattr(args, "cap", None) is None and hasattr(args, "cap"):
        args.cap = args.global_cap
    out = _Out(getattr(args, "json_indent", None))
    try:
        code = args.func(args, out)
    except (DomainError, DimensionError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
