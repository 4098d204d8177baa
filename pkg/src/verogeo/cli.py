"""Command-line interface: build geometries, run verification suites, and
emit machine-readable reports.

Exit codes: 0 when every requested check passes, 1 when a check fails
(the report names the claim and carries the witness), 2 for usage or
capacity errors.  Reports are byte-identical across runs on equal inputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import verify as verify_mod
from .algebra import (AlternatingMultiForm, BilinearForm, QuadraticForm,
                      standard_symplectic)
from .hyperplanes import (VeroneseHyperplane, extract_h_function,
                          hyperplane_from_alternating,
                          hyperplane_from_symplectic)
from .incidence import CapacityError, IncidenceStructure
from .reduct import build_reduct, net_violation_witness, recover_veronese
from .configs import check_net_axiom
from .parallelism import search_leaf_closed_parallelism
from .spaces import (affine_space, polar_space_quadratic,
                     polar_space_symplectic, projective_space)
from .veronese import VeroneseSpace, build_veronese


class UsageError(RuntimeError):
    pass


def _write_json(data: dict, path: Optional[str]) -> None:
    text = json.dumps(data, sort_keys=True, indent=1)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _standard_quadric(n: int, p: int, kind: str) -> QuadraticForm:
    dim = n + 1
    M = [[0] * dim for _ in range(dim)]
    if kind == "hyperbolic":
        if dim % 2:
            raise UsageError("hyperbolic quadrics need even vector dimension")
        for i in range(0, dim, 2):
            M[i][i + 1] = 1
    elif kind == "parabolic":
        if dim % 2 == 0:
            raise UsageError("parabolic quadrics need odd vector dimension")
        M[0][0] = 1
        for i in range(1, dim, 2):
            M[i][i + 1] = 1
    elif kind == "elliptic":
        if dim % 2:
            raise UsageError("elliptic quadrics need even vector dimension")
        non_square = next(a for a in range(2, p)
                          if all(b * b % p != a for b in range(p)))
        M[0][0] = 1
        M[1][1] = (-non_square) % p
        for i in range(2, dim, 2):
            M[i][i + 1] = 1
    else:
        raise UsageError(f"unknown quadric type {kind!r}")
    return QuadraticForm(p, tuple(tuple(r) for r in M))


def _build_named(kind: str, n: int, p: int, quadric_type: str = "hyperbolic"
                 ) -> IncidenceStructure:
    if kind == "pg":
        return projective_space(n, p)
    if kind == "ag":
        return affine_space(n, p).base
    if kind == "w":
        if (n + 1) % 2:
            raise UsageError("symplectic polar spaces need even vector dimension")
        return polar_space_symplectic(standard_symplectic(n + 1, p))
    if kind == "quadric":
        structure, _kept = polar_space_quadratic(_standard_quadric(n, p, quadric_type))
        return structure
    raise UsageError(f"unknown space kind {kind!r}")


def _load_base(token: str) -> IncidenceStructure:
    if ":" in token:
        parts = token.split(":")
        kind = parts[0]
        if kind in ("pg", "ag", "w") and len(parts) == 3:
            return _build_named(kind, int(parts[1]), int(parts[2]))
        if kind == "quadric" and len(parts) == 4:
            return _build_named(kind, int(parts[1]), int(parts[2]), parts[3])
        raise UsageError(f"bad named space {token!r}")
    with open(token) as fh:
        return IncidenceStructure.from_json(json.load(fh))


def _load_veronese(path: str) -> VeroneseSpace:
    with open(path) as fh:
        data = json.load(fh)
    if data.get("kind") != "veronese":
        raise UsageError(f"{path} does not hold a Veronese space")
    base = IncidenceStructure.from_json(data["base"])
    V = build_veronese(base, data["level"])
    stored = IncidenceStructure.from_json(data["structure"])
    if set(stored.lines) != set(V.structure.lines):
        raise UsageError(f"{path} is inconsistent: stored lines differ from "
                         "the deterministic rebuild")
    return V


def _load_form(path: str):
    with open(path) as fh:
        data = json.load(fh)
    if "arity" in data:
        return AlternatingMultiForm.from_json(data)
    if data.get("kind") == "quadratic":
        return QuadraticForm.from_json(data)
    return BilinearForm.from_json(data)


def _load_hyperplane(path: str, V: VeroneseSpace) -> VeroneseHyperplane:
    with open(path) as fh:
        data = json.load(fh)
    points = frozenset(data["points"])
    return VeroneseHyperplane(V, points, extract_h_function(V, points),
                              degenerate=data.get("degenerate", False),
                              source=data.get("source", "file"))


# ---------------------------------------------------------------------------
# subcommands


def cmd_build(args) -> int:
    structure = _build_named(args.kind, args.n, args.p, args.quadric_type)
    _write_json(structure.to_json(), args.out)
    return 0


def cmd_veronese(args) -> int:
    base = _load_base(args.base)
    V = build_veronese(base, args.level)
    _write_json(V.to_json(), args.out)
    return 0


def cmd_hyperplane(args) -> int:
    V = _load_veronese(args.space)
    form = _load_form(args.form)
    if isinstance(form, AlternatingMultiForm) and form.arity > 2:
        H = hyperplane_from_alternating(V, form)
    elif isinstance(form, AlternatingMultiForm):
        M = [[0] * form.dim for _ in range(form.dim)]
        for (i, j), c in form.coeffs:
            M[i][j] = c
            M[j][i] = (-c) % form.p
        H = hyperplane_from_symplectic(V, BilinearForm(form.p, tuple(map(tuple, M))))
    elif isinstance(form, BilinearForm):
        H = hyperplane_from_symplectic(V, form)
    else:
        raise UsageError("quadratic forms do not define Veronese hyperplanes")
    _write_json(H.to_json(), args.out)
    return 0


def cmd_reduct(args) -> int:
    V = _load_veronese(args.space)
    H = _load_hyperplane(args.hyperplane, V)
    A = build_reduct(V, H)
    data = {
        "kind": "reduct",
        "space": V.to_json(),
        "hyperplane": H.to_json(),
        "proper_points": [list(V.points[a].to_pairs()) for a in A.amb_of],
        "lines": [{"points": sorted(t.points), "parent": t.parent,
                   "infinite": t.infinite} for t in A.lines],
        "classes": {str(e): list(members) for e, members in A.classes.items()},
    }
    _write_json(data, args.out)
    return 0


def _rebuild_reduct(path: str):
    with open(path) as fh:
        data = json.load(fh)
    if data.get("kind") != "reduct":
        raise UsageError(f"{path} does not hold a reduct")
    base = IncidenceStructure.from_json(data["space"]["base"])
    V = build_veronese(base, data["space"]["level"])
    points = frozenset(data["hyperplane"]["points"])
    H = VeroneseHyperplane(V, points, extract_h_function(V, points),
                           degenerate=data["hyperplane"].get("degenerate", False),
                           source=data["hyperplane"].get("source", "file"))
    return build_reduct(V, H), data


def cmd_recover(args) -> int:
    A, _data = _rebuild_reduct(args.reduct)
    report = recover_veronese(A)
    result = {"points": report.point_count, "lines": report.line_count,
              "points_match": report.points_match,
              "lines_match": report.lines_match,
              "missing_lines": report.missing_lines,
              "extra_lines": report.extra_lines}
    if args.check_against:
        V = _load_veronese(args.check_against)
        result["ambient_agrees"] = (
            set(V.structure.lines) == set(A.ambient.structure.lines))
    _write_json(result, args.out)
    ok = report.ok and result.get("ambient_agrees", True)
    return 0 if ok else 1


def cmd_parallelism_search(args) -> int:
    V = _load_veronese(args.space)
    if args.mode != "leaf-closed":
        raise UsageError(f"unknown search mode {args.mode!r}")
    result = search_leaf_closed_parallelism(V, budget_nodes=args.budget)
    _write_json({"found": result.parallelism is not None,
                 "exhaustive": result.exhaustive,
                 "nodes": result.nodes,
                 "certificate": result.certificate,
                 "note": "unconstrained parallelism existence stays open"},
                args.out)
    return 0


def cmd_verify(args) -> int:
    if args.space:
        return _verify_on_space(args)
    names = sorted(verify_mod.SUITES) if args.suite == "all" else [args.suite]
    if any(n not in verify_mod.SUITES for n in names):
        raise UsageError(f"unknown suite {args.suite!r}; known: "
                         + ", ".join(sorted(verify_mod.SUITES)) + ", all")
    verdicts = verify_mod.run_suites(names)
    lines = [json.dumps(v.to_json(), sort_keys=True) for v in verdicts]
    text = "\n".join(lines)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    failed = [v for v in verdicts if not v.ok]
    print(f"# {len(verdicts) - len(failed)}/{len(verdicts)} checks passed",
          file=sys.stderr)
    return 1 if failed else 0


def _verify_on_space(args) -> int:
    if args.suite != "net-axiom":
        raise UsageError("--space applies to the net-axiom suite only")
    try:
        A, _ = _rebuild_reduct(args.space)
    except (UsageError, KeyError):
        A = None
    if A is not None:
        witness = net_violation_witness(A)
        verdict = {"claim": "net-axiom-on-reduct", "ok": not witness["found"],
                   "witness": witness if witness["found"] else None,
                   "details": witness}
        print(json.dumps(verdict, sort_keys=True))
        return 1 if witness["found"] else 0
    V = _load_veronese(args.space)
    tops = [V.block_top[i] for i in range(len(V.structure.lines))]
    report = check_net_axiom(V.structure, tops)
    verdict = {"claim": "net-axiom-on-space", "ok": report.ok,
               "witness": None if report.ok else repr(report.witness),
               "checked": report.checked}
    print(json.dumps(verdict, sort_keys=True))
    return 0 if report.ok else 1


def cmd_report(args) -> int:
    with open(args.infile) as fh:
        rows = [json.loads(line) for line in fh if line.strip()]
    width = max(len(r["claim"]) for r in rows) if rows else 8
    failed = 0
    for r in rows:
        status = "pass" if r["ok"] else "FAIL"
        if not r["ok"]:
            failed += 1
        print(f"{status}  {r['claim']:<{width}}  {r.get('runtime_s', '')}"
              f"  {r.get('instance', '')}")
    print(f"{len(rows) - failed}/{len(rows)} passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="verogeo",
        description="finite incidence geometry: Veronese spaces, "
                    "hyperplanes, reducts, and verification suites")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct a named geometry")
    p.add_argument("kind", choices=["pg", "ag", "w", "quadric"])
    p.add_argument("n", type=int)
    p.add_argument("p", type=int)
    p.add_argument("--quadric-type", default="hyperbolic",
                   choices=["hyperbolic", "elliptic", "parabolic"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("veronese", help="build a Veronese space")
    p.add_argument("--base", required=True,
                   help="incidence json file or named space like pg:3:3")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_veronese)

    p = sub.add_parser("hyperplane", help="hyperplane from a form")
    p.add_argument("--space", required=True)
    p.add_argument("--form", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_hyperplane)

    p = sub.add_parser("reduct", help="affine reduct of a Veronese space")
    p.add_argument("--space", required=True)
    p.add_argument("--hyperplane", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduct)

    p = sub.add_parser("recover", help="rebuild the ambient space from a reduct")
    p.add_argument("--reduct", required=True)
    p.add_argument("--check-against")
    p.add_argument("--out")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("parallelism-search",
                       help="search for a leaf-closed parallelism")
    p.add_argument("--space", required=True)
    p.add_argument("--mode", default="leaf-closed")
    p.add_argument("--budget", type=int, default=2_000_000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_parallelism_search)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", default="all")
    p.add_argument("--profile", default="desk", choices=["desk"])
    p.add_argument("--space", help="check one space instead of the battery")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="summarize a verdict report")
    p.add_argument("infile")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (UsageError, CapacityError, FileNotFoundError, KeyError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
