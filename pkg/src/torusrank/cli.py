"""Command-line entry point: ``torusrank <command> ...``.

Sources may be JSON files or inline generator specs such as ``rp:3``,
``crystal-torus:4``, ``tri-torus:2`` or ``staircase:5``; lattices may be
files or ``A:n`` / ``B:n``.

Exit codes: 0 pass, 1 usage error, 2 invalid input structure,
3 verification mismatch, 4 budget exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction
from typing import Optional

from . import cellcomplex as cc
from . import cohomology as coh
from . import detdecomp as dd
from . import lattice as lat
from . import periodic as per
from .errors import (
    BudgetExceeded,
    DomainError,
    InvalidTriangulation,
    NoValidOrder,
    NotACellComplex,
    ShapeError,
)
from .exactmath import determinant, rank

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_MISMATCH, EXIT_BUDGET = 0, 1, 2, 3, 4

GEN_CAPS = {"staircase": 9, "crystal-torus": 7, "tri-torus": 6, "rp": 12}


class InputError(Exception):
    """Unreadable or structurally invalid input (exit code 2)."""


# -- sources ----------------------------------------------------------------


def _is_spec(text: str) -> bool:
    return ":" in text and not os.path.exists(text)


def _parse_spec(text: str) -> tuple[str, int]:
    kind, _, arg = text.partition(":")
    try:
        return kind, int(arg)
    except ValueError:
        raise DomainError(f"bad generator spec {text!r}") from None


def generate(kind: str, n: int):
    if kind not in GEN_CAPS:
        raise DomainError(f"unknown generator {kind!r}; expected one of {sorted(GEN_CAPS)}")
    cap = GEN_CAPS[kind]
    if n > cap:
        raise BudgetExceeded(f"{kind} with n = {n} exceeds the cap n <= {cap}")
    if kind == "staircase":
        return per.staircase(n)
    if kind == "crystal-torus":
        return per.crystal_torus(n)
    if kind == "tri-torus":
        return per.tri_torus(n)
    return per.cross_polytope_rp(n)


def read_json(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    text = raw.decode("utf-8", errors="replace")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise InputError(f"parse error in {path} at byte {offset}: {exc.msg}") from None


def load_source(text: str):
    """Complex, quotient, periodic triangulation, lattice or decomposition."""
    if _is_spec(text):
        kind, n = _parse_spec(text)
        if kind in ("A", "B"):
            return lat.matrix_A(n) if kind == "A" else lat.matrix_B(n)
        return generate(kind, n)
    obj = read_json(text)
    try:
        if "cells" in obj:
            return cc.SimplicialCellComplex.from_json(obj)
        if "simplices" in obj:
            return per.PeriodicTriangulation.from_json(obj)
        if "basis" in obj:
            return lat.Lattice.from_json(obj)
        if "terms" in obj:
            return dd.DetDecomposition.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed {text}: {exc}") from None
    raise InputError(f"{text}: unrecognised file contents")


def _complex_of(src) -> cc.SimplicialCellComplex:
    if isinstance(src, per.QuotientComplex):
        return src.complex
    if isinstance(src, cc.SimplicialCellComplex):
        return src
    raise InputError("expected a cell complex source")


def _digest(args: argparse.Namespace) -> str:
    h = hashlib.sha256()
    for key in sorted(vars(args)):
        if key == "func":
            continue
        val = getattr(args, key)
        h.update(f"{key}={val!r};".encode())
        if isinstance(val, str) and os.path.isfile(val):
            with open(val, "rb") as fh:
                h.update(fh.read())
    return h.hexdigest()


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise PermissionError(f"cannot write {path}: {exc.strerror}") from None


# -- commands -----------------------------------------------------------------


def cmd_gen(args) -> tuple[dict, int]:
    obj = generate(args.kind, args.n)
    if isinstance(obj, per.PeriodicTriangulation):
        text = obj.dumps()
        res = {"kind": args.kind, "n": args.n, "vertex_orbits": len(obj.vertices),
               "simplex_orbits": len(obj.simplices)}
    else:
        X = _complex_of(obj)
        text = X.dumps()
        res = {"kind": args.kind, "n": args.n, "f_vector": list(X.f_vector()),
               "classification": str(cc.validate(X))}
        if isinstance(obj, per.QuotientComplex):
            res["lattice_index"] = obj.lattice.index
            res["distance"] = per.classify_distance(obj.source, obj.lattice)
    if args.out:
        _write(args.out, text)
        res["out"] = args.out
    return res, EXIT_OK


def cmd_validate(args) -> tuple[dict, int]:
    X = _complex_of(load_source(args.source))
    v = cc.validate(X)
    res = {"classification": v.kind, "reason": v.reason, "f_vector": list(X.f_vector())}
    return res, EXIT_OK if v.valid else EXIT_INVALID


def cmd_fvector(args) -> tuple[dict, int]:
    X = _complex_of(load_source(args.source))
    v = cc.validate(X)
    res = {"f_vector": list(X.f_vector()), "euler_characteristic": cc.euler_characteristic(X),
           "classification": v.kind}
    return res, EXIT_OK if v.valid else EXIT_INVALID


def cmd_cohomology(args) -> tuple[dict, int]:
    X = _complex_of(load_source(args.source))
    v = cc.validate(X)
    if not v.valid:
        return {"classification": v.kind, "reason": v.reason}, EXIT_INVALID
    if args.field == "f2":
        betti = [coh.betti_f2(X, k) for k in range(X.top_dim + 1)]
    else:
        ranks = [0] + [rank(cc.boundary_matrix(X, k, cc.Q)) for k in range(1, X.top_dim + 1)] + [0]
        betti = [f - ranks[k] - ranks[k + 1] for k, f in enumerate(X.f_vector())]
    return {"field": args.field.upper(), "betti": betti, "f_vector": list(X.f_vector())}, EXIT_OK


def _lattice_arg(text: str) -> lat.Lattice:
    obj = load_source(text)
    if not isinstance(obj, lat.Lattice):
        raise InputError(f"{text} is not a lattice")
    return obj


def cmd_detdecomp(args) -> tuple[dict, int]:
    src = load_source(args.source)
    res: dict = {}
    if args.eps is not None:
        if not isinstance(src, per.PeriodicTriangulation):
            raise InputError("--eps needs a periodic triangulation (e.g. staircase:2)")
        rep = dd.eps_term_bound(src, Fraction(args.eps))
        res["eps_report"] = rep.to_json()
        return res, EXIT_OK if rep.passed else EXIT_MISMATCH
    if isinstance(src, dd.DetDecomposition):
        D = src
    elif args.quotient:
        if isinstance(src, per.PeriodicTriangulation):
            if not args.lattice:
                raise InputError("--quotient on a periodic triangulation needs --lattice")
            Qc = per.quotient(src, _lattice_arg(args.lattice))
        elif isinstance(src, per.QuotientComplex):
            Qc = src
        else:
            raise InputError("--quotient needs crystal-torus:n, tri-torus:n or a periodic triangulation")
        D = dd.decompose_from_quotient(Qc, provenance=f"quotient:{args.source}")
    else:
        if not isinstance(src, per.PeriodicTriangulation):
            raise InputError("--lex needs a periodic triangulation (e.g. staircase:4)")
        D = dd.decompose_periodic_lex(src)
        D.provenance = f"periodic-lex:{args.source}"
    res["terms"] = len(D)
    code = EXIT_OK
    if args.verify:
        v = dd.verify_levi_civita(D)
        res["verification"] = v.to_json()
        rb = dd.rank_bound_report(D.n, D)
        res["rank_bound"] = rb.to_json()
        if not v.equal:
            code = EXIT_MISMATCH
    if args.out:
        _write(args.out, D.dumps())
        res["out"] = args.out
    return res, code


def cmd_latcheck(args) -> tuple[dict, int]:
    L = _lattice_arg(args.matrix)
    res = {"n": L.n, "basis": L.basis.tolist(), "determinant": determinant(L.basis),
           "hnf": L.hnf_basis.tolist(), "witnesses": {}}
    for fam in ("01", "012", "-101"):
        rep = lat.forbidden_vector_check(L, fam)
        res["witnesses"][fam] = [list(w) for w in rep.witnesses]
    return res, EXIT_OK


def cmd_latsearch(args) -> tuple[dict, int]:
    fams = tuple(args.families.split(","))
    for f in fams:
        if f not in lat.FAMILIES:
            raise DomainError(f"unknown family {f!r}")
    r = lat.min_index_search(args.n, fams, args.max_index)
    return r.to_json(), EXIT_OK


def cmd_theorem1(args) -> tuple[dict, int]:
    src = load_source(args.source)
    X = _complex_of(src)
    if args.cocycles == "dx":
        if not isinstance(src, per.QuotientComplex):
            raise InputError("--cocycles dx needs a torus generator spec")
        cocycles = [coh.to_f2(a) for a in coh.dx_cocycles(src)]
    elif args.cocycles == "auto":
        cocycles = coh.default_cocycles_f2(X)
    else:
        cocycles = []
        for path in args.cocycles.split(","):
            a = cc.Cochain.from_json(read_json(path))
            a.check(X)
            cocycles.append(a)
    mode = "sampled" if args.sample else "exhaustive"
    rep = coh.theorem1_witness_check(X, cocycles, mode=mode, samples=args.sample or 0, seed=args.seed)
    return rep.to_json(), EXIT_OK if rep.passed else EXIT_MISMATCH


# -- plumbing -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="torusrank", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=("json", "text"), default="json")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a construction")
    g.add_argument("kind", choices=sorted(GEN_CAPS))
    g.add_argument("n", type=int)
    g.add_argument("-o", "--out")
    g.set_defaults(func=cmd_gen)

    for name, fn, hlp in (("validate", cmd_validate, "classify a complex"),
                          ("fvector", cmd_fvector, "cell counts and Euler characteristic")):
        s = sub.add_parser(name, help=hlp)
        s.add_argument("source")
        s.set_defaults(func=fn)

    c = sub.add_parser("cohomology", help="Betti numbers")
    c.add_argument("source")
    c.add_argument("--field", choices=("f2", "q"), default="f2")
    c.set_defaults(func=cmd_cohomology)

    d = sub.add_parser("detdecomp", help="rank-one decomposition of det_n")
    d.add_argument("source")
    mode = d.add_mutually_exclusive_group()
    mode.add_argument("--lex", action="store_true", help="lexicographic limit (default)")
    mode.add_argument("--quotient", action="store_true")
    mode.add_argument("--eps", help="subdivision parameter, e.g. 1/16")
    d.add_argument("--lattice", help="lattice for --quotient on a periodic file (file, A:n, B:n)")
    d.add_argument("--verify", action="store_true")
    d.add_argument("-o", "--out")
    d.set_defaults(func=cmd_detdecomp)

    lc = sub.add_parser("latcheck", help="forbidden vectors of a lattice")
    lc.add_argument("matrix")
    lc.set_defaults(func=cmd_latcheck)

    ls = sub.add_parser("latsearch", help="smallest index of a forbidden-vector-free sublattice")
    ls.add_argument("n", type=int)
    ls.add_argument("max_index", type=int)
    ls.add_argument("--families", default="012,-101")
    ls.set_defaults(func=cmd_latsearch)

    t = sub.add_parser("theorem1", help="exhaustive coboundary-perturbation check")
    t.add_argument("source")
    t.add_argument("--cocycles", default="auto", help="auto, dx, or comma-separated cochain files")
    tm = t.add_mutually_exclusive_group()
    tm.add_argument("--exhaustive", action="store_true", help="(default)")
    tm.add_argument("--sample", type=int, metavar="K")
    t.add_argument("--seed", type=int, default=0)
    t.set_defaults(func=cmd_theorem1)
    return p


def _text(obj, indent: int = 0) -> list[str]:
    lines = []
    pad = " " * indent
    width = max((len(str(k)) for k in obj), default=0)
    for k, v in obj.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.extend(_text(v, indent + 2))
        else:
            lines.append(f"{pad}{str(k).ljust(width)}  {v}")
    return lines


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    start = time.perf_counter()
    try:
        results, code = args.func(args)
    except BudgetExceeded as exc:
        results, code = {"error": "budget exceeded", "detail": str(exc)}, EXIT_BUDGET
    except (InputError, ShapeError, InvalidTriangulation, NotACellComplex, NoValidOrder) as exc:
        results, code = {"error": type(exc).__name__, "detail": str(exc)}, EXIT_INVALID
    except (DomainError, PermissionError) as exc:
        results, code = {"error": type(exc).__name__, "detail": str(exc)}, EXIT_USAGE
    report = {
        "command": args.command,
        "inputs_digest": _digest(args),
        "results": results,
        "pass": code == EXIT_OK,
        "exit_code": code,
        "wall_time_s": round(time.perf_counter() - start, 3),
    }
    if args.format == "json":
        sys.stdout.write(json.dumps(report, sort_keys=True) + "\n")
    else:
        sys.stdout.write("\n".join(_text(report)) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
