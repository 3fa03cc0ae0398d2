"""Command-line interface.

Exit codes: 0 all applicable checks pass; 2 structural failure (the input
is not an almost alpha-paracosymplectic structure); 3 a derived
identity failed; 4 parse or usage error.  Set PARACOSYM_VERBOSITY to 0, 1,
or 2 to control the text rendering.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from typing import List, Optional

from .catalog import catalog, catalog_entry
from .errors import DefinitionError, DeformationParameterError, EngineError, ParseError
from .parser import load_definition, parse_scalar
from .report import EXIT_PARSE, EXIT_STRUCTURAL, run_analyze, run_deform, run_verify


def _verbosity() -> int:
    raw = os.environ.get("PARACOSYM_VERBOSITY", "1")
    try:
        return max(0, min(2, int(raw)))
    except ValueError:
        return 1


def _load(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return load_definition(fh.read())


def _parse_point(raw: str, dim: int) -> List[Fraction]:
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != dim:
        raise DefinitionError(f"--point needs {dim} comma-separated rationals")
    return [Fraction(p) for p in parts]


def _emit(report, as_json: bool) -> int:
    if as_json:
        sys.stdout.write(report.to_json())
    else:
        sys.stdout.write(report.render_text(_verbosity()))
    return report.exit_code


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="paracosym",
        description="Exact verification and classification of almost "
        "alpha-paracosymplectic structures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="check the structural axioms and the alpha gate")
    p_verify.add_argument("file")
    p_verify.add_argument("--json", action="store_true")

    p_analyze = sub.add_parser("analyze", help="run the full analysis pipeline")
    p_analyze.add_argument("file")
    p_analyze.add_argument("--json", action="store_true")
    p_analyze.add_argument("--point", help="rational evaluation point, e.g. 1,1,0")

    p_deform = sub.add_parser("deform", help="apply a deformation and verify its laws")
    p_deform.add_argument("file")
    p_deform.add_argument("--json", action="store_true")
    p_deform.add_argument("--gamma", help="positive rational")
    p_deform.add_argument("--beta", help="scalar expression with d(beta) ^ eta = 0")
    p_deform.add_argument("--conformal-u", dest="u", help="scalar u with du = alpha*eta")

    p_cat = sub.add_parser("catalog", help="list or emit built-in charts")
    group = p_cat.add_mutually_exclusive_group()
    group.add_argument("--list", action="store_true")
    group.add_argument("--emit", metavar="NAME")

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except (ParseError, DefinitionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DeformationParameterError, EngineError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STRUCTURAL


def _dispatch(args) -> int:
    if args.command == "verify":
        return _emit(run_verify(_load(args.file)), args.json)

    if args.command == "analyze":
        defn = _load(args.file)
        point = _parse_point(args.point, defn.dim) if args.point else None
        return _emit(run_analyze(defn, point), args.json)

    if args.command == "deform":
        defn = _load(args.file)
        ctx = defn.context()
        if args.u is not None:
            if args.gamma or args.beta:
                raise DefinitionError("--conformal-u excludes --gamma/--beta")
            u = parse_scalar(args.u, ctx)
            return _emit(run_deform(defn, u=u), args.json)
        if not args.gamma or not args.beta:
            raise DefinitionError("deform needs --gamma and --beta, or --conformal-u")
        gamma = Fraction(args.gamma)
        beta = parse_scalar(args.beta, ctx)
        return _emit(run_deform(defn, gamma=gamma, beta=beta), args.json)

    if args.command == "catalog":
        if args.emit:
            try:
                entry = catalog_entry(args.emit)
            except KeyError as exc:
                print(f"error: {exc.args[0]}", file=sys.stderr)
                return EXIT_PARSE
            sys.stdout.write(entry.definition_text.lstrip("\n"))
            return 0
        for entry in catalog():
            marker = " (negative control)" if entry.negative_control else ""
            print(f"{entry.name}{marker}: {entry.notes}")
        return 0

    raise DefinitionError(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
