"""Command line: model, matrix, verify, certify, orientation.

Every command builds a report ``{config, results, versions}``; ``--json``
prints it with sorted keys so equal configurations give equal bytes.
"""
from __future__ import annotations

import argparse
import json
import platform
import sys
from typing import Optional

from . import __version__, suites
from .homology import HomologyModel, standard_model
from .mcg import AutoWordSyntaxError, Catalog, parse
from .representation import OrientationModel, induced_map, orientation_reps, rho_from_induced, varrho_from_rho
from .surface import CoverSpec, SurfacePresentation

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2  # argparse's own code
EXIT_PARSE = 3
EXIT_BOUNDS = 4


class BoundsError(ValueError):
    pass


def _model(args) -> HomologyModel:
    if args.r < 2:
        raise BoundsError("--r must be at least 2")
    if args.h < 1 or args.k < 1:
        raise BoundsError("--h and --k must be at least 1")
    if args.v:
        pres = SurfacePresentation(args.r)
        try:
            spec = CoverSpec.from_text(pres, args.h, args.k, args.v)
        except ValueError as e:
            raise AutoWordSyntaxError(f"--v: {e}", 0) from None
        return HomologyModel(pres, spec)
    return standard_model(args.r, args.h, args.k)


def _need_standard(args, why: str):
    if args.v:
        raise BoundsError(f"{why} uses the standard exponent table; drop --v")
    if args.h != args.k:
        raise BoundsError(f"{why} needs h = k")


def _rows_json(m) -> list:
    return [[str(x) for x in row] for row in m]


def _row(name, ok, details=None) -> dict:
    return {"name": name, "status": "pass" if ok else "fail", "details": details or {}}


# ---------------------------------------------------------------------------


def cmd_model(args) -> list[dict]:
    model = _model(args)
    rep = model.verify_structure()
    details = {
        "dimension": model.dimension,
        "coordinates": model.coord_names,
        "eigen_basis": model.eigen_symbols(),
        "eigenspaces": rep["eigenspaces"],
        "case": rep["case"],
    }
    return [_row("model", rep["ok"], details)]


def cmd_matrix(args) -> list[dict]:
    model = _model(args)
    word = parse(args.word)
    phi = Catalog(model.pres, max(model.k, 2)).evaluate(word)
    ind = induced_map(model, phi)
    if args.varrho:
        if not ind.is_equivariant():
            raise BoundsError("varrho needs a word in Gamma(v)")
        m = varrho_from_rho(model, rho_from_induced(ind, (0, 1)))
        m.basis = "varrho"
    else:
        m = rho_from_induced(ind, (args.alpha, args.beta))
    data = m.to_json()
    data["display"] = _rows_json(m.entries)
    data["word"] = str(word)
    return [_row("matrix", True, data)]


def cmd_verify(args) -> list[dict]:
    if args.suite == "paper-formulas":
        _need_standard(args, "paper-formulas")
    if args.suite == "identities" and args.h != args.k:
        raise BoundsError("identities needs h = k")
    model = _model(args)
    return suites.SUITES[args.suite](model, count=args.count, seed=args.seed)


def cmd_certify(args) -> list[dict]:
    from .steinberg import certify, replay

    if args.replay:
        with open(args.replay) as fh:
            data = json.load(fh)
        rep = replay(data)
        return [_row("replay", rep["ok"], rep)]
    _need_standard(args, "certify")
    model = _model(args)
    data = certify(model, seed=args.seed)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(data, fh, sort_keys=True, indent=1)
    conc = data.get("concentrate") or {}
    details = {
        "closed": data["closed"],
        "pending": data["pending"],
        "galois_product": data["galois_product"],
        "n": conc.get("n"),
        "witnesses": len(conc.get("witnesses", [])),
    }
    ok = data["closed"] and bool(conc.get("ok"))
    return [_row("certify", ok, details)]


def cmd_orientation(args) -> list[dict]:
    if args.r < 2:
        raise BoundsError("--r must be at least 2")
    pres = SurfacePresentation(args.r)
    rows = suites.orientation(pres, depth=args.depth)
    if args.word:
        om = OrientationModel(pres)
        phi = Catalog(pres, 2).evaluate(parse(args.word))
        plus, minus = orientation_reps(pres, phi, om)
        rows.append(_row(f"rho^+/rho^- of {args.word}", True, {"plus": _rows_json(plus), "minus": _rows_json(minus)}))
    return rows


COMMANDS = {
    "model": cmd_model,
    "matrix": cmd_matrix,
    "verify": cmd_verify,
    "certify": cmd_certify,
    "orientation": cmd_orientation,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--r", type=int, default=2)
    common.add_argument("--h", type=int, default=2)
    common.add_argument("--k", type=int, default=2)
    common.add_argument("--v", help='exponent table, e.g. "a1=(1,0),b1=(0,1)"')
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--depth", type=int, default=6, help="relator insertion depth for word problems")
    common.add_argument("--json", action="store_true", help="print the JSON report")

    p = argparse.ArgumentParser(prog="mcgcover", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("model", parents=[common], help="dimensions and bases")
    m = sub.add_parser("matrix", parents=[common], help="evaluate an automorphism word")
    m.add_argument("--word", required=True)
    m.add_argument("--alpha", type=int, default=0)
    m.add_argument("--beta", type=int, default=1)
    m.add_argument("--varrho", action="store_true", help="use the conjugated basis")
    v = sub.add_parser("verify", parents=[common], help="run a check suite")
    v.add_argument("--suite", required=True, choices=sorted(suites.SUITES))
    v.add_argument("--count", type=int, default=20, help="random samples for property suites")
    c = sub.add_parser("certify", parents=[common], help="build and check the elementary-matrix table")
    c.add_argument("--out")
    c.add_argument("--replay", metavar="PATH", help="re-verify a saved certificate instead")
    o = sub.add_parser("orientation", parents=[common], help="orientation cover data")
    o.add_argument("--word")
    return p


def report(args, results: list[dict]) -> dict:
    config = {k: v for k, v in sorted(vars(args).items()) if k != "json"}
    return {
        "config": config,
        "results": results,
        "versions": {"mcgcover": __version__, "python": platform.python_version()},
    }


def _print_text(rep: dict, out) -> None:
    for row in rep["results"]:
        print(f"{row['status'].upper():4}  {row['name']}", file=out)
        d = row["details"]
        if row["name"] == "matrix":
            print("\n".join("  " + "  ".join(c.rjust(8) for c in r) for r in d["display"]), file=out)
        elif row["name"] == "model":
            print(f"  dimension {d['dimension']}", file=out)
            print(f"  coordinates {' '.join(d['coordinates'])}", file=out)
            print(f"  eigen basis {' '.join(d['eigen_basis'])}", file=out)
            for e in d["eigenspaces"]:
                print(f"  label {tuple(e['label'])}: {e['dimension']}", file=out)
        elif row["status"] == "fail" and d:
            print(f"  {json.dumps(d, sort_keys=True)[:400]}", file=out)


def main(argv: Optional[list[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        results = COMMANDS[args.command](args)
    except (AutoWordSyntaxError, KeyError) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (BoundsError, ValueError) as e:
        print(f"bad parameters: {e}", file=sys.stderr)
        return EXIT_BOUNDS
    rep = report(args, results)
    if args.json:
        print(json.dumps(rep, sort_keys=True, indent=1), file=out)
    else:
        _print_text(rep, out)
    return EXIT_OK if all(r["status"] == "pass" for r in results) else EXIT_FAILED


if __name__ == "__main__":
    raise SystemExit(main())
