"""Command-line interface: ``gorenstein <command> ...``.

Exit codes: 0 success, 2 a reference count does not match, 3 bad input,
4 an internal invariant failed.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
import time
from collections import Counter
from pathlib import Path

from .classify import ENGINE_VERSION, enumerate_polytopes
from .construct import ci_degrees, cayley_of_simplices, dilate, product, simplex, theorem_family
from .ehrhart import hstar, is_normal
from .errors import (GorensteinConditionViolated, LowerDimensional, OutOfRange,
                     PolytopeFormatError)
from .fixtures import fano_checks, table_checks
from .polytope import LatticePolytope, read_polytope, to_json, write_polytope
from .stringy import dual_gorenstein, hodge_table, stringy_E

OK, MISMATCH, BAD_INPUT, INTERNAL = 0, 2, 3, 4
MANIFEST = "manifest.json"
_DIGEST_FILE = re.compile(r"^[0-9a-f]{64}\.json$")


class InputError(Exception):
    pass


class InvariantError(Exception):
    pass


def _load(path) -> LatticePolytope:
    try:
        return read_polytope(path)
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    except PolytopeFormatError as e:
        raise InputError(f"{path}: {e}") from None
    except LowerDimensional as e:
        raise InputError(f"{path}: {e}; use restrict_to_span to re-coordinatize "
                         "the points in their affine hull") from None


def _default_db(d: int) -> Path:
    return Path("gorenstein-db") / f"d{d}"


# -- analyze ------------------------------------------------------------------

def describe(P: LatticePolytope) -> dict:
    g = P.gorenstein_index()
    h = hstar(P)
    return {
        "dim": P.dim,
        "vertices": P.n_vertices,
        "simple": P.is_simple(),
        "smooth": P.is_smooth(),
        "reflexive": P.is_reflexive(),
        "gorenstein_index": g.index if g else None,
        "cy_dim": g.cy_dim if g else None,
        "h_star": list(h.coeffs),
        "degree": h.degree,
        "codegree": h.codegree,
        "normal": is_normal(P),
        "digest": P.canonical_form().hexdigest,
    }


def _summary(info: dict) -> str:
    parts = ["smooth" if info["smooth"] else ("simple" if info["simple"] else "not simple")]
    if info["gorenstein_index"]:
        parts.append(f"Gorenstein index {info['gorenstein_index']}")
    else:
        parts.append("not Gorenstein")
    parts.append("h* = (" + ",".join(map(str, info["h_star"])) + ")")
    parts.append("normal" if info["normal"] else "not normal")
    return ", ".join(parts)


def cmd_analyze(args) -> int:
    info = describe(_load(args.file))
    print(_summary(info))
    for k, v in info.items():
        if isinstance(v, bool):
            v = str(v).lower()
        elif isinstance(v, list):
            v = "(" + ",".join(map(str, v)) + ")"
        print(f"{k}: {v}")
    return OK


# -- classify -----------------------------------------------------------------

def _class_record(c) -> dict:
    h = hstar(c.polytope)
    return {"digest": c.digest, "index": c.index, "fano_index": c.fano_index,
            "h_star": list(h.coeffs), "normal": is_normal(c.polytope)}


def write_database(run, out: Path) -> dict:
    out.mkdir(parents=True, exist_ok=True)
    records = sorted((_class_record(c) for c in run.results), key=lambda r: (r["index"], r["digest"]))
    digests = [r["digest"] for r in records]
    if len(set(digests)) != len(digests):
        raise InvariantError("two classes share a canonical digest")
    for c in run.results:
        (out / f"{c.digest}.json").write_text(to_json(c.polytope, canonical=True))
    keep = {f"{x}.json" for x in digests}
    for p in out.iterdir():
        if _DIGEST_FILE.match(p.name) and p.name not in keep:
            p.unlink()
    manifest = {
        "engine_version": ENGINE_VERSION,
        "d": run.d,
        "r_min": run.r_min,
        "r_max": run.r_max,
        "box": run.box,
        "counts": {str(r): n for r, n in run.counts().items()},
        "classes": records,
        "created": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }
    (out / MANIFEST).write_text(json.dumps(manifest, indent=1) + "\n")
    return manifest


def _print_checks(checks) -> bool:
    for c in checks:
        print("  " + c.line())
    return all(c.ok for c in checks)


def _count_checks(d, counts, r_min, r_max):
    return table_checks(d, counts, range(r_min, r_max + 1))


def cmd_classify(args) -> int:
    if args.dim < 1 or args.min_index < 1:
        raise InputError("need --dim >= 1 and --min-index >= 1")
    run = enumerate_polytopes(args.dim, args.min_index, box=args.box,
                              threads=args.threads, r_max=args.max_index)
    out = Path(args.out) if args.out else _default_db(args.dim)
    write_database(run, out)
    print(f"d={run.d}: {len(run.results)} classes written to {out}")
    for r, n in run.counts().items():
        print(f"  r={r}: {n}")
    ok = _print_checks(_count_checks(run.d, run.counts(), run.r_min, run.r_max))
    return OK if ok else MISMATCH


# -- construct ----------------------------------------------------------------

def _emit(polys, out, stem):
    """Write to ``out`` (one file per polytope) or print a single polytope."""
    if out is None:
        if len(polys) != 1:
            raise InputError("several polytopes: pass --out DIR")
        sys.stdout.write(to_json(polys[0]))
        return []
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    names = []
    for i, P in enumerate(polys):
        name = f"{stem}.json" if len(polys) == 1 else f"{stem}_{i}.json"
        write_polytope(P, out / name)
        names.append(name)
    return names


def cmd_construct(args) -> int:
    if args.family:
        d, r = args.family
        fam = theorem_family(d, r)
        polys = [P for _, P in fam]
        names = _emit(polys, args.out or ".", f"family_d{d}_r{r}")
        meta = []
        for name, (spec, P) in zip(names, fam):
            try:
                ci = ci_degrees(spec)
            except ValueError:
                ci = None
            g = P.gorenstein_index()
            meta.append({"file": name, "case": spec.case, "description": spec.describe(),
                         "partition": list(spec.partition.parts), "index": spec.r,
                         "computed_index": g.index if g else None,
                         "ci_degrees": None if ci is None else {"s": ci[0], "degrees": list(ci[1])}})
            print(f"{name}: {spec.describe()} (index {spec.r})")
        Path(args.out or ".", f"family_d{d}_r{r}.meta.json").write_text(json.dumps(meta, indent=1) + "\n")
        print(f"{len(fam)} polytopes")
        return OK
    if args.cayley:
        s, *bs = args.cayley
        if not bs:
            raise InputError("--cayley needs S and at least one dilation factor")
        P = cayley_of_simplices(s, bs)
        stem = f"cayley_{s}_" + "_".join(map(str, bs))
    elif args.product:
        P = product(_load(args.product[0]), _load(args.product[1]))
        stem = "product"
    elif args.simplex is not None:
        P = simplex(args.simplex)
        stem = f"simplex_{args.simplex}"
    elif args.input:
        P = _load(args.input)
        stem = Path(args.input).stem
    else:
        raise InputError("choose one of --family, --cayley, --product, --simplex, --input")
    if args.dilate:
        P = dilate(P, args.dilate)
        stem = f"{args.dilate}x_{stem}"
    _emit([P], args.out, stem)
    return OK


# -- stringy ------------------------------------------------------------------

def cmd_stringy(args) -> int:
    P = _load(args.file)
    pair = dual_gorenstein(P)
    if args.dual:
        pair = pair.swapped()
    n = pair.cy_dim
    E = stringy_E(pair)
    table = hodge_table(E, n)
    doc = {"dim": pair.dim, "index": pair.index, "cy_dim": n,
           "dual": bool(args.dual),
           "E": E.matrix(n) if n >= 0 else [],
           "E_terms": sorted([p, q, c] for (p, q), c in E.terms.items()),
           "hodge": [list(row) for row in table.entries]}
    if n == 3:
        doc["pair"] = list(table.pair)
    print(json.dumps(doc))
    print(f"E = {E!r}")
    if n >= 0:
        print(table.text())
    return OK


# -- db-verify and fano-table ---------------------------------------------------

def _read_manifest(root: Path) -> dict:
    path = root / MANIFEST
    if not path.exists():
        raise InputError(f"no classification database at {root} (missing {MANIFEST})")
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: {e}") from None


def verify_database(root: Path):
    """Per-file problems and the reference checks of a stored classification."""
    man = _read_manifest(root)
    problems = []
    seen = {}
    classes = man.get("classes", [])
    for rec in classes:
        name = f"{rec['digest']}.json"
        path = root / name
        try:
            P = read_polytope(path)
        except (OSError, ValueError) as e:
            problems.append(f"{name}: unreadable ({e})")
            continue
        dig = P.canonical_form().hexdigest
        if dig != rec["digest"]:
            problems.append(f"{name}: canonical digest is {dig}")
        if dig in seen:
            problems.append(f"{name}: digest collision with {seen[dig]}")
        seen[dig] = name
        if P.dim != man["d"]:
            problems.append(f"{name}: dimension {P.dim}, expected {man['d']}")
            continue
        if not P.is_smooth():
            problems.append(f"{name}: not smooth")
        g = P.gorenstein_index()
        if g is None or g.index != rec["index"]:
            problems.append(f"{name}: Gorenstein index {g.index if g else None}, expected {rec['index']}")
        if list(hstar(P).coeffs) != rec["h_star"]:
            problems.append(f"{name}: h* differs from the manifest")
        if is_normal(P) != rec["normal"]:
            problems.append(f"{name}: normality differs from the manifest")
    listed = {f"{r['digest']}.json" for r in classes}
    for p in sorted(root.iterdir()):
        if _DIGEST_FILE.match(p.name) and p.name not in listed:
            problems.append(f"{p.name}: not listed in the manifest")
    counts = Counter(r["index"] for r in classes)
    stored = {int(k): v for k, v in man.get("counts", {}).items()}
    if stored != dict(counts):
        problems.append(f"{MANIFEST}: counts {stored} disagree with the listed classes {dict(counts)}")
    r_max = man.get("r_max") or man["d"] + 1
    checks = _count_checks(man["d"], counts, man["r_min"], r_max)
    return problems, checks


def cmd_db_verify(args) -> int:
    problems, checks = verify_database(Path(args.dir))
    for p in problems:
        print(p)
    ok = _print_checks(checks)
    if problems:
        return INTERNAL
    return OK if ok else MISMATCH


def cmd_fano_table(args) -> int:
    root = Path(args.db) if args.db else _default_db(args.dim)
    man = _read_manifest(root)
    if man["d"] != args.dim or man["r_min"] != 1:
        raise InputError(f"{root} does not hold a full classification of dimension {args.dim}")
    hist = Counter(r["fano_index"] for r in man["classes"] if r["index"] == 1)
    hist = dict(sorted(hist.items(), reverse=True))
    print(f"toric Fano {args.dim}-folds by index i_X:")
    for i, n in hist.items():
        print(f"  i_X={i}: {n}")
    ok = _print_checks(fano_checks(args.dim, hist))
    return OK if ok else MISMATCH


# -- entry point ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gorenstein",
                                 description="Smooth Gorenstein polytopes and stringy E-polynomials.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="invariants of a polytope file")
    p.add_argument("file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("classify", help="classify smooth Gorenstein polytopes into a database")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--min-index", type=int, default=1)
    p.add_argument("--max-index", type=int, default=None)
    p.add_argument("--box", type=int, default=None,
                   help="optional cap on vertex coordinates of the dual search")
    p.add_argument("--out", default=None, help="database directory (default gorenstein-db/d<dim>)")
    p.add_argument("--threads", type=int, default=None,
                   help="worker processes (default GORENSTEIN_THREADS or the CPU count)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("construct", help="build polytopes")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--family", type=int, nargs=2, metavar=("D", "R"),
                   help="all smooth Gorenstein D-polytopes of index R > (D+3)/3")
    g.add_argument("--cayley", type=int, nargs="+", metavar="N",
                   help="S B1 B2 ...: the Cayley polytope B1 S_S * B2 S_S * ...")
    g.add_argument("--product", nargs=2, metavar="FILE")
    g.add_argument("--simplex", type=int, metavar="N")
    g.add_argument("--input", metavar="FILE")
    p.add_argument("--dilate", type=int, default=None, metavar="K")
    p.add_argument("--out", default=None, help="output directory (default: print to stdout)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("stringy", help="stringy E-polynomial and Hodge table")
    p.add_argument("file")
    p.add_argument("--dual", action="store_true", help="compute for the dual Gorenstein polytope")
    p.set_defaults(func=cmd_stringy)

    p = sub.add_parser("db-verify", help="recheck every class of a database")
    p.add_argument("dir")
    p.set_defaults(func=cmd_db_verify)

    p = sub.add_parser("fano-table", help="toric Fano manifolds by index from a database")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--db", default=None, help="database directory (default gorenstein-db/d<dim>)")
    p.set_defaults(func=cmd_fano_table)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return BAD_INPUT
    except (OutOfRange, GorensteinConditionViolated, LowerDimensional, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return BAD_INPUT
    except (InvariantError, AssertionError, ArithmeticError, RuntimeError) as e:
        print(f"internal error: {e}", file=sys.stderr)
        return INTERNAL


if __name__ == "__main__":
    sys.exit(main())
