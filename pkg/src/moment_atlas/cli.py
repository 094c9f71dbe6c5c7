"""Command-line front end: JSON in, JSON out.

Exit codes: 0 success, 2 input/validation problems, 3 mathematical
preconditions failing (off-curve paths, invalid cube families, degenerate
geometry), 64 usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import acceptance, fixtures, serialize
from .center import DecideOptions, OdeSystem, decide
from .curve_model import trace_path
from .errors import FormatError, MomentAtlasError
from .moments import (
    MomentSpec,
    MonomialTable,
    face_coefficients,
    moment_quadrature,
    moment_via_homology,
    vanishing_scan,
)
from .planar_geometry import extract_faces, n_bound_2d, n_bound_nd
from .projection import expansion_check, project, restricted_moment, sample_direction
from .topology import (
    betti1,
    cycle_basis,
    euler_classify,
    homology_coefficients,
    reduce_word,
)
from . import approx as apx

USAGE_EXIT = 64
VALIDATION_EXIT = 2
MATH_EXIT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("error: %s\n" % message)
        raise SystemExit(USAGE_EXIT)


def _emit(doc):
    json.dump(doc, sys.stdout, indent=2, sort_keys=False)
    sys.stdout.write("\n")


def _spec_doc(spec: MomentSpec):
    return {"powers": list(spec.powers), "i": spec.i}


def _word_doc(word):
    return [[e, s] for e, s in word]


def _cmd_analyze(args):
    complex = serialize.load(args.complex, "complex")
    report = {
        "format": serialize.FORMAT,
        "kind": "analysis",
        "complex": {
            "dim": complex.dim,
            "vertices": complex.n_vertices,
            "edges": complex.n_edges,
            "m": betti1(complex),
            "euler": euler_classify(complex).kind,
        },
    }
    if complex.dim == 2:
        faceset = extract_faces(complex, inscribed_eps=args.eps)
        report["faces"] = [
            {"A": f.area, "r": f.inscribed_side} for f in faceset.faces
        ]
        report["d"] = faceset.half_side if faceset.m else None
        report["N"] = n_bound_2d(faceset)
    else:
        cubes = serialize.load(args.cubes, "cubes") if args.cubes else None
        n_val, family = n_bound_nd(complex, cubes)
        report["N"] = n_val
        report["cubes"] = family.size if family is not None else 0
    paths = [serialize.load(p, "path") for p in args.paths]
    if paths:
        report["paths"] = []
        for path in paths:
            entry = {"samples": path.n_samples, "closed": path.closed}
            word = trace_path(path, complex)
            basis = cycle_basis(complex)
            entry["word_length"] = len(word)
            entry["homology"] = [
                int(c) for c in homology_coefficients(word, basis, complex)
            ]
            entry["contractible"] = len(reduce_word(word, basis, complex)) == 0
            if complex.dim == 2 and path.closed:
                faceset = extract_faces(complex, inscribed_eps=args.eps)
                coeffs = face_coefficients(path, faceset)
                entry["moments"] = _moment_rows(path, faceset, coeffs, args.max_degree)
            report["paths"].append(entry)
    _emit(report)
    return 0


def _moment_rows(path, faceset, coeffs, max_degree, pipeline="both"):
    specs = [
        MomentSpec(powers=(d1, d2), i=i)
        for d1 in range(max_degree + 1)
        for d2 in range(max_degree + 1 - d1)
        for i in (1, 2)
    ]
    specs.sort(key=lambda s: s.sort_key())
    table = (
        MonomialTable(faceset, max_degree + 2)
        if faceset is not None and pipeline in ("homology", "both")
        else None
    )
    rows = []
    for spec in specs:
        row = {"spec": _spec_doc(spec)}
        if pipeline in ("quad", "both"):
            row["value_quadrature"] = moment_quadrature(path, spec)
        if table is not None:
            row["value_homology"] = moment_via_homology(faceset, coeffs, spec, table)
        if "value_quadrature" in row and "value_homology" in row:
            row["agreement"] = abs(row["value_quadrature"] - row["value_homology"])
        rows.append(row)
    return rows


def _cmd_nbound(args):
    complex = serialize.load(args.complex, "complex")
    if complex.dim == 2 and not args.cubes:
        faceset = extract_faces(complex, inscribed_eps=args.eps)
        _emit(
            {
                "format": serialize.FORMAT,
                "kind": "nbound",
                "m": faceset.m,
                "faces": [{"A": f.area, "r": f.inscribed_side} for f in faceset.faces],
                "d": faceset.half_side if faceset.m else None,
                "N": n_bound_2d(faceset),
            }
        )
        return 0
    cubes = serialize.load(args.cubes, "cubes") if args.cubes else None
    n_val, family = n_bound_nd(complex, cubes)
    lo, hi = complex.bounding_box()
    _emit(
        {
            "format": serialize.FORMAT,
            "kind": "nbound",
            "m": betti1(complex),
            "d": float(max(hi - lo) / 2.0),
            "N": n_val,
            "cubes": family.size if family is not None else 0,
        }
    )
    return 0


def _cmd_homology(args):
    complex = serialize.load(args.complex, "complex")
    path = serialize.load(args.path, "path")
    word = trace_path(path, complex, tol=args.tol)
    basis = cycle_basis(complex, seed=args.seed)
    coeffs = homology_coefficients(word, basis, complex)
    reduced = reduce_word(word, basis, complex)
    _emit(
        {
            "format": serialize.FORMAT,
            "kind": "homology",
            "m": betti1(complex),
            "word": _word_doc(word),
            "coefficients": [int(c) for c in coeffs],
            "contractible": len(reduced) == 0,
            "reduced_length": len(reduced),
            "euler": euler_classify(complex).kind,
        }
    )
    return 0


def _cmd_euler(args):
    complex = serialize.load(args.complex, "complex")
    cls = euler_classify(complex)
    doc = {"format": serialize.FORMAT, "kind": "euler", "class": cls.kind}
    if cls.trail is not None:
        doc["trail"] = _word_doc(cls.trail)
    _emit(doc)
    return 0


def _cmd_moments(args):
    complex = serialize.load(args.complex, "complex")
    path = serialize.load(args.path, "path")
    faceset = None
    coeffs = None
    if args.pipeline in ("homology", "both"):
        if complex.dim != 2 or not path.closed:
            raise FormatError("the homology pipeline needs a closed planar path")
        faceset = extract_faces(complex)
        coeffs = face_coefficients(path, faceset)
    rows = _moment_rows(path, faceset, coeffs, args.max_degree, args.pipeline)
    _emit({"format": serialize.FORMAT, "kind": "moments", "reports": rows})
    return 0


def _cmd_scan(args):
    complex = serialize.load(args.complex, "complex")
    path = serialize.load(args.path, "path")
    if args.bound == "auto":
        if complex.dim == 2:
            bound = n_bound_2d(extract_faces(complex))
        else:
            cubes = serialize.load(args.cubes, "cubes") if args.cubes else None
            bound, _ = n_bound_nd(complex, cubes)
    else:
        bound = int(args.bound)
    faceset = extract_faces(complex) if complex.dim == 2 and path.closed else None
    result = vanishing_scan(path, bound, tol=args.tol, faceset=faceset)
    doc = {
        "format": serialize.FORMAT,
        "kind": "scan",
        "bound": result.bound,
        "checked": result.checked,
        "all_zero": result.all_zero,
    }
    if result.witness is not None:
        doc["witness"] = _spec_doc(result.witness)
        doc["value"] = result.value
    _emit(doc)
    return 0


def _cmd_project(args):
    path = serialize.load(args.path, "path")
    out = []
    for s in range(args.pairs):
        pair = sample_direction(args.seed + s, path.dim)
        projected = project(path, pair)
        first, second = restricted_moment(projected, args.degree)
        entry = {
            "seed": pair.seed,
            "restricted": [first, second],
        }
        if args.degree <= 12:
            entry["expansion_ok"] = expansion_check(
                path, pair, args.degree, tol=args.tol
            )
        out.append(entry)
    _emit({"format": serialize.FORMAT, "kind": "project", "pairs": out})
    return 0


_APPROX_FNS = {
    "abs": (lambda p: np.abs(p[:, 0]), 1.0),
    "linf": (lambda p: np.abs(p).max(axis=1), 1.0),
    "cospoly": (lambda p: np.cos(2.0 * p[:, 0] + 0.3), 2.0),
    "ramp": (lambda p: np.maximum(0.0, p[:, 0]), 1.0),
}


def _cmd_approx(args):
    if args.fn not in _APPROX_FNS:
        raise FormatError(
            "unknown builtin %r (have %s)" % (args.fn, sorted(_APPROX_FNS))
        )
    f, lipschitz = _APPROX_FNS[args.fn]
    poly = apx.approximate(f, args.dim, args.degree, lipschitz=lipschitz)
    measured = apx.sup_error(f, poly, args.grid)
    _emit(
        {
            "format": serialize.FORMAT,
            "kind": "approx",
            "fn": args.fn,
            "dim": args.dim,
            "degree": args.degree,
            "coefficients": poly.coefficients.tolist(),
            "measured_error": measured,
            "bound": apx.error_bound(args.dim, args.degree, lipschitz),
            "c_op": apx.C_OP,
        }
    )
    return 0


def _cmd_center(args):
    complex = serialize.load(args.complex, "complex")
    path = serialize.load(args.coeffs, "path")
    cubes = serialize.load(args.cubes, "cubes") if args.cubes else None
    opts = DecideOptions(
        assume_q_independent=args.assume_q_independent,
        cubes=cubes,
        tol=args.tol,
        check_return_map=not args.no_return_map,
    )
    verdict = decide(OdeSystem(path=path), complex, opts)
    doc = {
        "format": serialize.FORMAT,
        "kind": "center",
        "decision": verdict.decision,
        "route": verdict.route,
        "m": verdict.m,
        "covers": verdict.covers,
        "contractible": verdict.contractible,
        "homologically_trivial": verdict.homologically_trivial,
        "q_independent": verdict.q_independent,
        "bound": verdict.bound,
        "residuals": [
            [v0, r if math.isfinite(r) else None] for v0, r in verdict.residuals
        ],
        "notes": list(verdict.notes),
    }
    if verdict.witness is not None:
        doc["witness"] = _spec_doc(verdict.witness)
        doc["witness_value"] = verdict.witness_value
    _emit(doc)
    return 0


def _cmd_fixtures(args):
    params = {}
    for key in ("k", "n", "samples", "segments"):
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    if args.width is not None:
        params["width"] = args.width
    files = fixtures.named_fixture(args.name, **params)
    manifest = {"format": serialize.FORMAT, "kind": "fixtures", "files": []}
    import os

    os.makedirs(args.out, exist_ok=True)
    for fname, doc in sorted(files.items()):
        target = os.path.join(args.out, fname)
        serialize.dump(doc, target)
        entry = {"file": target}
        if doc.get("kind") == "complex":
            complex = serialize.complex_from_doc(doc)
            entry.update(
                V=complex.n_vertices, E=complex.n_edges, m=betti1(complex)
            )
        manifest["files"].append(entry)
    _emit(manifest)
    return 0


def _cmd_selftest(args):
    results = acceptance.run_all(echo=lambda line: print(line, file=sys.stderr))
    _emit(
        {
            "format": serialize.FORMAT,
            "kind": "selftest",
            "criteria": [
                {
                    "number": r.number,
                    "description": r.description,
                    "passed": r.passed,
                    "detail": r.detail,
                    "elapsed": r.elapsed,
                }
                for r in results
            ],
            "passed": all(r.passed for r in results),
        }
    )
    return 0 if all(r.passed for r in results) else 1


def build_parser():
    parser = _Parser(prog="moment-atlas", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full report for a complex and paths")
    p.add_argument("complex")
    p.add_argument("paths", nargs="*")
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--eps", type=float, default=1e-9)
    p.add_argument("--cubes")
    p.set_defaults(handler=_cmd_analyze)

    p = sub.add_parser("nbound", help="finiteness bound of a complex")
    p.add_argument("complex")
    p.add_argument("--cubes")
    p.add_argument("--eps", type=float, default=1e-9)
    p.set_defaults(handler=_cmd_nbound)

    p = sub.add_parser("homology", help="homology data of a path on a complex")
    p.add_argument("complex")
    p.add_argument("path")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=_cmd_homology)

    p = sub.add_parser("euler", help="Eulerian classification of a complex")
    p.add_argument("complex")
    p.set_defaults(handler=_cmd_euler)

    p = sub.add_parser("moments", help="moment reports for a path")
    p.add_argument("complex")
    p.add_argument("path")
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--pipeline", choices=("quad", "homology", "both"), default="both")
    p.set_defaults(handler=_cmd_moments)

    p = sub.add_parser("scan", help="vanishing scan up to a bound")
    p.add_argument("complex")
    p.add_argument("path")
    p.add_argument("--bound", default="auto")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--cubes")
    p.set_defaults(handler=_cmd_scan)

    p = sub.add_parser("project", help="planar reductions of a path")
    p.add_argument("path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--pairs", type=int, default=5)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(handler=_cmd_project)

    p = sub.add_parser("approx", help="tensor polynomial approximation")
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--degree", type=int, default=8)
    p.add_argument("--fn", default="abs")
    p.add_argument("--grid", type=int, default=2001)
    p.set_defaults(handler=_cmd_approx)

    p = sub.add_parser("center", help="universal-center decision")
    p.add_argument("complex")
    p.add_argument("coeffs")
    p.add_argument("--assume-q-independent", action="store_true")
    p.add_argument("--cubes")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--no-return-map", action="store_true")
    p.set_defaults(handler=_cmd_center)

    p = sub.add_parser("fixtures", help="emit fixture documents")
    p.add_argument(
        "name",
        choices=(
            "grid",
            "cube_grid",
            "figure_eight",
            "tree",
            "circle_pl",
            "commutator_path",
            "universal_center_abel",
        ),
    )
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--segments", type=int, default=None)
    p.add_argument("--width", type=float, default=None)
    p.add_argument("--out", default=".")
    p.set_defaults(handler=_cmd_fixtures)

    p = sub.add_parser("selftest", help="run the acceptance criteria")
    p.set_defaults(handler=_cmd_selftest)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else USAGE_EXIT
    try:
        return args.handler(args)
    except FormatError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return VALIDATION_EXIT
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return VALIDATION_EXIT
    except MomentAtlasError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return MATH_EXIT


if __name__ == "__main__":
    sys.exit(main())
