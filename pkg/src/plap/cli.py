"""Command-line interface: ``plap <command> ...``.

Exit status is 0 on success, 1 on bad input or usage, and 2 when an
internal cross-check fails (for instance ``--self-check`` disagreeing with
the homology oracle).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .chains import WeightReport, check_weight_preserving
from .errors import InvariantError, PlapError
from .fixtures import fixture_files, list_fixtures
from .io import load_complex, load_map
from .linalg import ExactMatrix, symmetric_spectrum
from .linalg.schur_checks import verify_schur_properties
from .oracle import cochain_duality_check, oracle_persistent_betti
from .persistent import laplacian_report, persistent_betti, spectrum
from .tower import Tower, monotonicity_report


class UsageError(PlapError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_q(text: str) -> list[int]:
    """``1``, ``0-2`` or ``0,2``."""
    out: list[int] = []
    try:
        for part in text.split(","):
            lo, sep, hi = part.partition("-")
            out.extend(range(int(lo), int(hi) + 1) if sep else [int(lo)])
    except ValueError:
        raise UsageError(f"--q expects an integer, a range like 0-2 or a list like 0,2; got {text!r}") from None
    if not out or any(q < 0 for q in out):
        raise UsageError("--q values must be non-negative")
    return out


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="plap", description="Persistent Laplacians of weight preserving simplicial maps.")
    p.add_argument("--version", action="version", version=f"plap {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    common.add_argument("--tol", type=_positive, default=1e-9, help="eigenvalue tolerance")
    common.add_argument("--jobs", type=int, default=1, help="compute degrees q in parallel")
    mapq = _Parser(add_help=False)
    mapq.add_argument("--map", required=True, help="map file, or fixture:NAME[/FILE]")
    mapq.add_argument("--q", default="1", help="degree: 1, 0-2 or 0,2 (default 1)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("validate", parents=[common], help="parse and validate a complex or a map")
    g = v.add_mutually_exclusive_group(required=True)
    g.add_argument("--complex")
    g.add_argument("--map")

    w = sub.add_parser("check-wp", parents=[common], help="report weight preservation violations")
    w.add_argument("--map", required=True)
    w.add_argument("--q", default=None, help="restrict to these degrees (default: all)")

    lap = sub.add_parser("laplacian", parents=[common, mapq], help="matrix of a persistent Laplacian")
    lap.add_argument("--which", choices=("up", "down", "full", "ess-up"), default="full")
    lap.add_argument("--backend", choices=("exact", "float"), default="exact")
    lap.add_argument("--intermediates", action="store_true", help="include N, X, ..., SchQ")

    b = sub.add_parser("betti", parents=[common, mapq], help="persistent Betti number (exact nullity)")
    b.add_argument("--backend", choices=("exact", "float"), default="exact")
    b.add_argument("--self-check", action="store_true", help="compare with the homology oracle")

    s = sub.add_parser("spectrum", parents=[common, mapq], help="persistent eigenvalues")
    s.add_argument("--which", choices=("up", "down", "full", "ess-up"), default="full")
    s.add_argument("--backend", choices=("exact", "float"), default="exact",
                   help="arithmetic used to build the matrix; eigenvalues are always floating point")

    t = sub.add_parser("tower", parents=[common], help="monotonicity report along a tower of maps")
    t.add_argument("maps", nargs="+", help="map files in order K0->K1, K1->K2, ...")
    t.add_argument("--q", default="1")
    t.add_argument("--report", choices=("monotonicity",), default="monotonicity")

    o = sub.add_parser("oracle", help="independent cross-checks")
    osub = o.add_subparsers(dest="oracle", required=True, parser_class=_Parser)
    ob = osub.add_parser("betti", parents=[common, mapq], help="Betti number from homology ranks")
    ob.add_argument("--self-check", action="store_true")
    osc = osub.add_parser("schur", parents=[common], help="Schur complement identities on random instances")
    osc.add_argument("--seed", type=int, default=0)
    osc.add_argument("--count", type=int, default=1)
    osub.add_parser("cochain", parents=[common, mapq], help="chain/cochain duality check")

    f = sub.add_parser("fixtures", parents=[common], help="list the shipped fixtures")
    f.add_argument("--files", action="store_true", help="also list each fixture's files")
    return p


# -- output ---------------------------------------------------------------------


def _json(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _cell(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
    return buf.getvalue().rstrip("\n")


def _pretty_matrix(m) -> list[str]:
    rows = [[_cell(x) for x in r] for r in m]
    if not rows:
        return ["(empty)"]
    width = max(len(c) for r in rows for c in r)
    return ["  [" + "  ".join(c.rjust(width) for c in r) + "]" for r in rows]


def _pretty(obj, indent: str = "") -> str:
    lines = []
    for k, v in obj.items():
        if isinstance(v, list) and v and all(isinstance(r, list) for r in v):
            lines.append(f"{indent}{k}:")
            lines.extend(indent + line for line in _pretty_matrix(v))
        elif isinstance(v, dict):
            lines.append(f"{indent}{k}:")
            lines.append(_pretty(v, indent + "  "))
        else:
            lines.append(f"{indent}{k}: {_cell(v) if not isinstance(v, list) else ', '.join(map(_cell, v))}")
    return "\n".join(lines)


def emit(records: list[dict], fmt: str, csv_rows=None) -> str:
    if fmt == "json":
        return _json(records[0] if len(records) == 1 else records)
    if fmt == "csv":
        return _csv(csv_rows if csv_rows is not None else records)
    return "\n\n".join(_pretty(r) for r in records)


def _matrix_out(m):
    if isinstance(m, ExactMatrix):
        return m.to_json()
    return np.asarray(m, dtype=float).tolist()


# -- commands -------------------------------------------------------------------


def _fail(message: str, records, fmt: str, rows=None) -> InvariantError:
    # the report is still printed before exiting with status 2
    exc = InvariantError(message)
    exc.output = emit(records, fmt, rows)
    return exc


def _per_q(fn, qs: list[int], jobs: int) -> list:
    if jobs > 1 and len(qs) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, qs))
    return [fn(q) for q in qs]


def cmd_validate(args) -> tuple[list[dict], None]:
    if args.complex:
        K = load_complex(args.complex)
        return [{"valid": True, "kind": "complex", "counts": [K.n(q) for q in range(K.dim + 1)]}], None
    f = load_map(args.map)
    return [{
        "valid": True,
        "kind": "map",
        "domain_counts": [f.domain.n(q) for q in range(f.domain.dim + 1)],
        "codomain_counts": [f.codomain.n(q) for q in range(f.codomain.dim + 1)],
        "weight_preserving": check_weight_preserving(f).ok,
    }], None


def cmd_check_wp(args):
    f = load_map(args.map)
    if args.q is None:
        report = check_weight_preserving(f)
    else:
        reports = [check_weight_preserving(f, q) for q in parse_q(args.q)]
        report = WeightReport(tuple(q for r in reports for q in r.dimensions),
                              tuple(v for r in reports for v in r.violations))
    rows = [v.to_json() for v in report.violations]
    return [report.to_json()], rows


def cmd_laplacian(args):
    f = load_map(args.map)

    def one(q):
        rep = laplacian_report(f, q, backend=args.backend)
        out = {"q": q, "which": args.which, "backend": args.backend,
               "basis": rep.image_simplices if args.which != "ess-up" else None,
               "matrix": _matrix_out(rep.matrix(args.which))}
        if args.backend == "exact":
            out["nullity"] = rep.nullity
        if args.intermediates:
            out["intermediates"] = rep.to_json()["intermediates"]
        if out["basis"] is None:
            del out["basis"]
        return out

    records = _per_q(one, parse_q(args.q), args.jobs)
    rows = [{"q": r["q"], "row": i, **{f"c{j}": x for j, x in enumerate(row)}}
            for r in records for i, row in enumerate(r["matrix"])]
    return records, rows


def cmd_betti(args):
    if args.backend != "exact":
        raise UsageError("betti numbers are exact nullities; --backend float is refused")
    f = load_map(args.map)

    def one(q):
        beta = persistent_betti(f, q)
        out = {"q": q, "betti": beta, "nullity": beta}
        if args.self_check:
            oracle = oracle_persistent_betti(f, q)
            out["oracle"] = oracle
            if oracle != beta:
                raise InvariantError(f"q={q}: nullity {beta} differs from the homology oracle's {oracle}")
        return out

    return _per_q(one, parse_q(args.q), args.jobs), None


def _float_spectrum(f, q, which, tol):
    rep = laplacian_report(f, q, backend="float")
    if which == "ess-up":
        raise UsageError("the essential up spectrum needs the exact backend")
    a = np.asarray(rep.matrix(which), dtype=float)
    s = np.sqrt(np.array([float(w) for w in rep.image_weights]))
    sym = a * (s[None, :] / s[:, None]) if a.size else a
    return symmetric_spectrum(sym, tol)


def cmd_spectrum(args):
    f = load_map(args.map)

    def one(q):
        if args.backend == "exact":
            spec = spectrum(f, q, args.which, tol=args.tol)
        else:
            spec = _float_spectrum(f, q, args.which, args.tol)
        return {"q": q, "which": args.which, "eigenvalues": spec.to_json()}

    records = _per_q(one, parse_q(args.q), args.jobs)
    rows = [{"q": r["q"], "which": r["which"], "k": k + 1, "eigenvalue": x}
            for r in records for k, x in enumerate(r["eigenvalues"])]
    return records, rows


def cmd_tower(args):
    tower = Tower([load_map(m) for m in args.maps])
    qs = parse_q(args.q)
    reports = _per_q(lambda q: monotonicity_report(tower, q, args.tol), qs, args.jobs)
    records = [{"wp": tower.wp, **r.to_json(), "padded_up_violation": r.padded_up_violation} for r in reports]
    rows = [row for r in reports for row in r.rows()]
    if any(not r.ok for r in reports):
        failures = [f"triple {t.index}, q={t.q}: {v.theorem}" for r in reports for t in r.triples
                    for v in t.verdicts if v.failed]
        raise _fail("monotonicity violated: " + "; ".join(failures), records, args.format, rows)
    return records, rows


def cmd_oracle(args):
    if args.oracle == "betti":
        f = load_map(args.map, validate=True)

        def one(q):
            out = {"q": q, "betti": oracle_persistent_betti(f, q)}
            if args.self_check:
                nullity = persistent_betti(f, q)
                out["nullity"] = nullity
                if nullity != out["betti"]:
                    raise InvariantError(f"q={q}: oracle {out['betti']} differs from nullity {nullity}")
            return out

        return _per_q(one, parse_q(args.q), args.jobs), None
    if args.oracle == "schur":
        reports = [verify_schur_properties(args.seed + i) for i in range(args.count)]
        records = [r.to_json() for r in reports]
        rows = [{"seed": r.seed, **r.results} for r in reports]
        if not all(r.ok for r in reports):
            raise _fail("a Schur complement identity failed", records, args.format, rows)
        return records, rows
    f = load_map(args.map)
    checks = _per_q(lambda q: cochain_duality_check(f, q), parse_q(args.q), args.jobs)
    records = [c.to_json() for c in checks]
    if not all(c.ok for c in checks):
        raise _fail("chain and cochain persistent Laplacians disagree", records, args.format)
    return records, None


def cmd_fixtures(args):
    names = list_fixtures()
    if args.files:
        return [{n: fixture_files(n) for n in names}], None
    return [names] if args.format == "json" else [{"fixtures": names}], [{"fixture": n} for n in names]


COMMANDS = {
    "validate": cmd_validate,
    "check-wp": cmd_check_wp,
    "laplacian": cmd_laplacian,
    "betti": cmd_betti,
    "spectrum": cmd_spectrum,
    "tower": cmd_tower,
    "oracle": cmd_oracle,
    "fixtures": cmd_fixtures,
}


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be at least 1")
        records, rows = COMMANDS[args.command](args)
        if args.command == "fixtures" and args.format == "json" and not args.files:
            text = _json(records[0])
        else:
            text = emit(records, args.format, rows)
        out.write(text + "\n")
        return 0
    except InvariantError as exc:
        if getattr(exc, "output", None):
            out.write(exc.output + "\n")
        print(f"invariant failure: {exc}", file=sys.stderr)
        return 2
    except PlapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
