"""Command-line front end.

Subcommands:

* ``verify <file>``: full pipeline on a JSON input file.
* ``catalog list`` / ``catalog verify <id> [--params JSON]``.
* ``tangent <file|catalog-id> [--connection canonical|family:<JSON>]``:
  emits the tangent algebra as a new input file.
* ``taming <file|catalog-id> [--budget N] [--seed S]``: feasibility searches.
* ``report <file> --json|--text``: re-render a saved JSON report.

Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 invalid
input (malformed JSON, schema violation, inadmissible parameters).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import catalog as cat
from .config import __version__, tolerance
from .connections import (
    canonical_flat_connection,
    curvature_norm,
    flat_family_g1,
    flat_family_g3,
)
from .errors import (
    InternalInconsistencyError,
    InvalidInputError,
    NoSuchConnectionError,
    PreconditionError,
    SktError,
)
from .hermitian import (
    HermitianStructure,
    classify_metric,
    generalized_kahler_check,
    nijenhuis_norm,
)
from .io import AlgebraInput, algebra_to_dict, canonical_json, digest, load_algebra_file
from .liealg import LieAlgebra
from .multilinear import almost_complex_defect
from .taming import assemble_taming, hermitian_symplectic_search, kahler_search, solve_beta
from .tangent import build_tangent

EXIT_OK = 0
EXIT_MATH = 1
EXIT_INPUT = 2


# ---------------------------------------------------------------------------
# analysis pipeline
# ---------------------------------------------------------------------------


def analyze_input(inp: AlgebraInput, seed: int = 0, budget: int = 10_000,
                  searches: bool = False) -> tuple[dict, int]:
    """Run every applicable check; returns (report, exit_code)."""
    tol = inp.tolerance if inp.tolerance is not None else tolerance()
    report: dict = {
        "tool": "sktlie",
        "version": __version__,
        "seed": seed,
        "tolerance": tol,
        "input_digest": digest(inp.raw),
    }
    checks: dict = {}
    report["checks"] = checks
    failed = False

    L = LieAlgebra(inp.differentials, check=False)
    jd = L.jacobi_defect()
    checks["jacobi"] = {"passed": jd <= tol, "residual": jd}
    if jd > tol:
        report["fingerprint"] = None
        return report, EXIT_MATH

    report["fingerprint"] = L.fingerprint(tol).as_dict()

    H = None
    if inp.J is not None:
        acd = almost_complex_defect(inp.J)
        checks["almost_complex"] = {"passed": acd <= tol, "residual": acd}
        failed |= acd > tol
        nj = nijenhuis_norm(L, inp.J) if acd <= tol else None
        if nj is not None:
            checks["integrable"] = {"passed": nj <= tol, "residual": nj}
            failed |= nj > tol
        if inp.metric is not None and acd <= tol:
            G = inp.metric
            sym = float(np.max(np.abs(G - G.T)))
            eig = float(np.linalg.eigvalsh(0.5 * (G + G.T))[0])
            compat = float(np.max(np.abs(inp.J.T @ G @ inp.J - G)))
            checks["metric_symmetric"] = {"passed": sym <= tol, "residual": sym}
            checks["metric_positive"] = {"passed": eig > tol, "min_eigenvalue": eig}
            checks["compatible"] = {"passed": compat <= tol, "residual": compat}
            if sym <= tol and eig > tol and compat <= tol:
                H = HermitianStructure(L, inp.J, G, tol)
            else:
                failed = True

    if H is not None:
        mc = classify_metric(H, tol)
        report["metric_class"] = mc.as_dict()
        checks["classification_cross_check"] = {"passed": mc.cross_check_agrees}
        failed |= not mc.cross_check_agrees
        if inp.J_minus is not None:
            gk = generalized_kahler_check(L, inp.J, inp.J_minus, inp.metric, tol)
            report["generalized_kahler"] = gk.as_dict()
            checks["generalized_kahler"] = {"passed": gk.ok}
            # a negative GK result is a result, not a failed check
        if searches and H.is_integrable(tol):
            report["taming"] = _taming_report(L, inp.J, H, seed, budget, tol)
    return report, (EXIT_MATH if failed else EXIT_OK)


def _taming_report(L, J, H, seed, budget, tol) -> dict:
    out: dict = {}
    sol = solve_beta(H, tol) if H is not None else None
    if sol is None:
        out["beta"] = None
    else:
        tf = assemble_taming(H, sol, tol)
        out["beta"] = {
            "coefficients": [[c.real, c.imag] for c in sol.coefficients],
            "residual": sol.residual,
            "del_beta_norm": sol.del_beta_norm,
            "assembled": tf.as_dict(),
        }
    ks = kahler_search(L, J, budget=budget, seed=seed, tol=tol)
    hs = hermitian_symplectic_search(L, J, budget=budget, seed=seed, tol=tol)
    out["kahler_search"] = ks.as_dict()
    out["taming_search"] = hs.as_dict()
    return out


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def _render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(obj)}")
    return "\n".join(lines)


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return f"{v:.6g}"
    if v is None:
        return "-"
    return str(v)


def _emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(report, indent=2, sort_keys=False, default=_json_default))
    else:
        print(_render_text(report))


def _json_default(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    raise TypeError(f"not JSON-serializable: {type(v)}")


# ---------------------------------------------------------------------------
# input resolution helpers
# ---------------------------------------------------------------------------


def _resolve_source(source: str, params_json: str | None) -> AlgebraInput:
    """A catalog id or a path to a JSON input file."""
    if source in cat.ENTRY_IDS:
        params = _parse_params(params_json)
        bundle = cat.build(source, params)
        raw = algebra_to_dict(bundle.algebra, bundle.J, bundle.J_minus, bundle.metric)
        from .io import parse_algebra_input

        return parse_algebra_input(raw)
    return load_algebra_file(source)


def _parse_params(params_json: str | None) -> dict:
    if not params_json:
        return {}
    try:
        params = json.loads(params_json)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"--params: malformed JSON ({exc})") from exc
    if not isinstance(params, dict):
        raise InvalidInputError("--params must be a JSON object")
    return params


def _parse_connection(spec: str, inp: AlgebraInput):
    if spec == "canonical":
        if inp.J is None or inp.metric is None:
            raise InvalidInputError(
                "--connection canonical needs J and metric in the input"
            )
        return canonical_flat_connection(inp.algebra(), inp.J, inp.metric)
    if spec.startswith("family:"):
        payload = spec[len("family:"):]
        try:
            data = json.loads(payload)
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"--connection family: malformed JSON ({exc})") from exc
        if not isinstance(data, dict):
            raise InvalidInputError("--connection family payload must be an object")
        if inp.dim != 4:
            raise InvalidInputError("connection families are defined on dimension 4")
        if "rows" in data:
            rows = data["rows"]
            params = {}
            for i_str, vals in rows.items():
                i = int(i_str)
                if i not in (1, 2, 4) or not isinstance(vals, list) or len(vals) != 4:
                    raise InvalidInputError(
                        "family rows must map i in {1,2,4} to four numbers"
                    )
                for j, v in enumerate(vals, start=1):
                    params[(i, j)] = float(v)
            D, admissible = flat_family_g3(params)
            if not admissible:
                raise PreconditionError(
                    "family parameters violate the flatness constraints"
                )
            return D
        try:
            return flat_family_g1(
                float(data.get("a12", 0.0)), float(data.get("a13", 0.0)),
                float(data.get("a14", 0.0)), float(data.get("a34", 0.0)),
            )
        except (TypeError, ValueError) as exc:
            raise InvalidInputError(f"--connection family: bad values ({exc})") from exc
    raise InvalidInputError(f"unknown connection spec {spec!r}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_verify(args) -> int:
    inp = _resolve_source(args.source, None)
    report, code = analyze_input(inp, seed=args.seed, budget=args.budget,
                                 searches=args.searches)
    report["exit_code"] = code
    _emit(report, args.format)
    return code


def _cmd_catalog(args) -> int:
    if args.catalog_command == "list":
        _emit({"entries": cat.list_entries()}, args.format)
        return EXIT_OK
    params = _parse_params(args.params)
    rep = cat.verify(args.id, params, run_searches=not args.no_searches,
                     seed=args.seed, budget=args.budget)
    out = rep.as_dict()
    out["tool"] = "sktlie"
    out["version"] = __version__
    out["seed"] = args.seed
    out["tolerance"] = tolerance()
    code = EXIT_OK if rep.passed else EXIT_MATH
    out["exit_code"] = code
    _emit(out, args.format)
    return code


def _validated_algebra(inp: AlgebraInput) -> LieAlgebra:
    L = LieAlgebra(inp.differentials, check=False)
    jd = L.jacobi_defect()
    if jd > tolerance():
        raise PreconditionError(f"input violates the Jacobi identity (defect {jd:.3e})")
    return L


def _cmd_tangent(args) -> int:
    inp = _resolve_source(args.source, args.params)
    L = _validated_algebra(inp)
    D = _parse_connection(args.connection, inp)
    curv = curvature_norm(L, D)
    if curv > tolerance():
        raise PreconditionError(f"connection is not flat (curvature {curv:.3e})")
    T = build_tangent(L, D, inp.J, inp.metric)
    out = algebra_to_dict(T.total, T.J_lift, None, T.metric_lift)
    text = canonical_json(out)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def _cmd_taming(args) -> int:
    inp = _resolve_source(args.source, args.params)
    L = _validated_algebra(inp)
    if inp.J is None:
        raise InvalidInputError("taming analysis needs a complex structure J")
    acd = almost_complex_defect(inp.J)
    if acd > tolerance():
        raise PreconditionError(f"J^2 != -id (defect {acd:.3e})")
    H = None
    if inp.metric is not None:
        H = HermitianStructure(L, inp.J, inp.metric)
    report = {
        "tool": "sktlie",
        "version": __version__,
        "seed": args.seed,
        "budget": args.budget,
        "tolerance": tolerance(),
        "input_digest": digest(inp.raw),
    }
    report.update(_taming_report(L, inp.J, H, args.seed, args.budget, tolerance()))
    report["exit_code"] = EXIT_OK
    _emit(report, args.format)
    return EXIT_OK


def _cmd_report(args) -> int:
    try:
        with open(args.file, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read {args.file}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{args.file}: malformed JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise InvalidInputError("report file must contain a JSON object")
    _emit(data, "json" if args.json else "text")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sktlie",
        description="Hermitian-geometry verification on low-dimensional Lie algebras",
    )
    p.add_argument("--version", action="version", version=f"sktlie {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, searches_flag=False):
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--budget", type=int, default=10_000)
        if searches_flag:
            sp.add_argument("--searches", action="store_true",
                            help="also run taming/Kahler feasibility searches")

    sp = sub.add_parser("verify", help="run the full pipeline on an input file or id")
    sp.add_argument("source", help="path to a JSON input file, or a catalog id")
    common(sp, searches_flag=True)
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("catalog", help="catalog operations")
    csub = sp.add_subparsers(dest="catalog_command", required=True)
    lp = csub.add_parser("list", help="list catalog entries")
    lp.add_argument("--format", choices=("text", "json"), default="text")
    lp.set_defaults(func=_cmd_catalog)
    vp = csub.add_parser("verify", help="verify a catalog entry")
    vp.add_argument("id", help="catalog entry id")
    vp.add_argument("--params", help="JSON object of entry parameters")
    vp.add_argument("--no-searches", action="store_true")
    common(vp)
    vp.set_defaults(func=_cmd_catalog)

    sp = sub.add_parser("tangent", help="emit the tangent algebra of an input")
    sp.add_argument("source", help="path to a JSON input file, or a catalog id")
    sp.add_argument("--params", help="catalog parameters (JSON object)")
    sp.add_argument("--connection", default="canonical",
                    help="canonical | family:<JSON>")
    sp.add_argument("-o", "--output", help="write the tangent input file here")
    sp.set_defaults(func=_cmd_tangent)

    sp = sub.add_parser("taming", help="taming/Kahler feasibility analysis")
    sp.add_argument("source", help="path to a JSON input file, or a catalog id")
    sp.add_argument("--params", help="catalog parameters (JSON object)")
    common(sp)
    sp.set_defaults(func=_cmd_taming)

    sp = sub.add_parser("report", help="re-render a saved JSON report")
    sp.add_argument("file")
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--json", action="store_true")
    grp.add_argument("--text", action="store_true")
    sp.set_defaults(func=_cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidInputError, cat.CatalogValidationError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (PreconditionError, NoSuchConnectionError,
            InternalInconsistencyError) as exc:
        print(f"mathematical check failed: {exc}", file=sys.stderr)
        return EXIT_MATH
    except SktError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
