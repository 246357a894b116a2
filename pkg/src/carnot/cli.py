"""``carnot`` command line: validation, jet info, cohomology, plane exponents, certification.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import __version__
from .builtins import parse_pair
from .cohomology import Cochain, cohomology_by_weight
from .errors import (
    AlgebraFormatError,
    BudgetError,
    CarnotError,
    ClosureError,
    DependentVectorsError,
    HypothesisError,
    NotApplicableError,
    ParameterError,
)
from .filling_exponents import (
    USER_PREMISE,
    CITED,
    ExponentCertificate,
    HorizontalityLedger,
    LedgerEntry,
    Provenance,
    certify_algebra,
    certify_jet_group,
    plane_ledger_entry,
)
from .jet_group import lattice_generators, make_jet_algebra
from .lie_core import (
    GradedLieAlgebra,
    homogeneous_dimension,
    lower_central_series,
    nilpotency_class,
    plane_scaling_exponents,
    subalgebra_from_span,
    validate,
)
from .serialization import algebra_from_dict, format_rational, loads_json, parse_rational

SCHEMA = "carnot-report/1"

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(CarnotError):
    pass


# targets


class Target:
    """A resolved ``--jet`` or ``--file`` argument."""

    def __init__(self, algebra: GradedLieAlgebra, descriptor: Dict[str, Any], doc: Optional[dict] = None, jet=None):
        self.algebra = algebra
        self.descriptor = descriptor
        self.doc = doc
        self.jet = jet


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def load_file_target(path: str) -> Target:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    doc = loads_json(data.decode("utf-8"))
    alg = algebra_from_dict(doc)
    return Target(alg, {"file_sha256": _digest(data)}, doc=doc)


def resolve_target(args) -> Target:
    if getattr(args, "jet", None):
        m, k = parse_pair(args.jet)
        return Target(make_jet_algebra(m, k), {"builtin": f"jet:{m},{k}"}, jet=(m, k))
    if getattr(args, "file", None):
        return load_file_target(args.file)
    raise UsageError("one of --jet or --file is required")


def require_valid(alg: GradedLieAlgebra):
    report = validate(alg)
    if not report.passed:
        raise _InvalidAlgebra(report)


class _InvalidAlgebra(CarnotError):
    def __init__(self, report):
        super().__init__("algebra failed validation")
        self.report = report


# parsing user-supplied vectors, cochains and ledgers


def parse_vector(alg: GradedLieAlgebra, spec: Any, path: str):
    """A vector is a basis name or a mapping name -> rational string."""
    if isinstance(spec, str):
        if spec not in alg.names:
            raise AlgebraFormatError(f"unknown basis name {spec!r}", path=path)
        return alg.basis(spec)
    if not isinstance(spec, dict):
        raise AlgebraFormatError("a vector is a basis name or an object of coefficients", path=path)
    coeffs = {}
    for name, c in spec.items():
        if name not in alg.names:
            raise AlgebraFormatError(f"unknown basis name {name!r}", path=path)
        coeffs[name] = parse_rational(c, f"{path}.{name}")
    return alg.element(coeffs)


def parse_vectors(alg: GradedLieAlgebra, spec: Any, path: str) -> List:
    if not isinstance(spec, list):
        raise AlgebraFormatError("expected a list of vectors", path=path)
    return [parse_vector(alg, v, f"{path}[{i}]") for i, v in enumerate(spec)]


def parse_cochain(alg: GradedLieAlgebra, spec: Any, path: str) -> Cochain:
    """Either {"terms": [...]} or a bare list of {"factors": [...], "coeff": "p/q"}."""
    terms = spec.get("terms") if isinstance(spec, dict) else spec
    if not isinstance(terms, list) or not terms:
        raise AlgebraFormatError("a cochain is a non-empty list of terms", path=path)
    degree = None
    out: Dict[Tuple[int, ...], Fraction] = {}
    for i, term in enumerate(terms):
        p = f"{path}[{i}]"
        if not isinstance(term, dict) or not isinstance(term.get("factors"), list):
            raise AlgebraFormatError("each term needs a \"factors\" list", path=p)
        factors = term["factors"]
        for f in factors:
            if f not in alg.names:
                raise AlgebraFormatError(f"unknown basis name {f!r}", path=p + ".factors")
        if degree is None:
            degree = len(factors)
        elif degree != len(factors):
            raise AlgebraFormatError("all terms of a cochain must have the same degree", path=p)
        mono = tuple(alg.index(f) for f in factors)
        z = Cochain(alg, degree, {mono: parse_rational(term.get("coeff", "1"), p + ".coeff")})
        for mm, c in z.terms.items():
            out[mm] = out.get(mm, Fraction(0)) + c
    return Cochain(alg, degree, out)


def parse_ledger(alg: GradedLieAlgebra, spec: Any) -> HorizontalityLedger:
    if not isinstance(spec, list):
        raise AlgebraFormatError("\"ledger\" must be a list", path="$.ledger")
    entries = []
    for i, e in enumerate(spec):
        p = f"$.ledger[{i}]"
        if not isinstance(e, dict) or not isinstance(e.get("dim"), int):
            raise AlgebraFormatError("ledger entries need an integer \"dim\"", path=p)
        if "vectors" in e:
            entries.append(plane_ledger_entry(e["dim"], parse_vectors(alg, e["vectors"], p + ".vectors")))
            continue
        ref = e.get("reference", USER_PREMISE)
        try:
            entries.append(
                LedgerEntry(e["dim"], parse_rational(e.get("a"), p + ".a"), parse_rational(e.get("b"), p + ".b"), Provenance(CITED, str(ref)))
            )
        except ParameterError as exc:
            raise AlgebraFormatError(str(exc), path=p) from None
    return HorizontalityLedger(entries)


def parse_candidates(alg: GradedLieAlgebra, doc: dict):
    """Returns (pairs, rejected) where rejected maps a dimension to failure messages."""
    spec = doc.get("certificates", [])
    if not isinstance(spec, list):
        raise AlgebraFormatError("\"certificates\" must be a list", path="$.certificates")
    pairs, rejected = [], {}
    for i, c in enumerate(spec):
        p = f"$.certificates[{i}]"
        if not isinstance(c, dict):
            raise AlgebraFormatError("certificate entries must be objects", path=p)
        z = parse_cochain(alg, c.get("cocycle"), p + ".cocycle")
        span = parse_vectors(alg, c.get("subalgebra"), p + ".subalgebra")
        try:
            a = subalgebra_from_span(alg, span)
        except ClosureError as exc:
            rejected.setdefault(len(span), []).append(f"subalgebra closure: {exc} (witness {list(exc.witness)})")
            continue
        except DependentVectorsError as exc:
            rejected.setdefault(len(span), []).append(f"subalgebra span: {exc}")
            continue
        pairs.append((z, a))
    return pairs, rejected


# reports


def make_report(command: str, target_descriptor: Optional[Dict[str, Any]], result: Dict[str, Any]) -> Dict[str, Any]:
    report = {"schema": SCHEMA, "tool": {"name": "carnot", "version": __version__}, "command": command, "result": result}
    if target_descriptor is not None:
        report["input"] = target_descriptor
    return report


def emit_json(report: Dict[str, Any]) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _summary_cell(x: Optional[Dict[str, Any]]) -> str:
    return x["exponent"] if x else "-"


def render_markdown(report: Dict[str, Any]) -> str:
    res = report["result"]
    lines = [f"# Filling exponents: {res['target']}", ""]
    lines.append("| n | lower | upper | exponent | sharp | conditional | delta_(n-1) | notes |")
    lines.append("|---|---|---|---|---|---|---|---|")
    for c in res["certificates"]:
        delta = c["exponent"] if c.get("delta") and c["exponent"] else "-"
        notes = "; ".join(c["gaps"] + c.get("rejected", []))
        upper = _summary_cell(c["upper"])
        if c["upper"]:
            upper += f" ({c['upper']['rule']})"
        lines.append(
            f"| {c['n']} | {_summary_cell(c['lower'])} | {upper} | {c['exponent'] or '-'} | "
            f"{'yes' if c['sharp'] else 'no'} | {'yes' if c['conditional'] else 'no'} | {delta} | {notes} |"
        )
    lines.append("")
    lines.append("Exponents e mean FV_n(V) grows like V^e.")
    if any(c["conditional"] for c in res["certificates"]):
        lines.append("Conditional rows rely on cited horizontality premises that were not proved for this algebra.")
    return "\n".join(lines) + "\n"


def cmd_algebra_validate(args) -> Tuple[Dict[str, Any], int]:
    target = load_file_target(args.file)
    report = validate(target.algebra)
    result = report.to_dict()
    if report.passed:
        result["dim"] = target.algebra.dim
        result["class"] = nilpotency_class(target.algebra)
    return make_report("algebra validate", target.descriptor, result), EXIT_OK if report.passed else EXIT_INVALID


def cmd_jet_info(args) -> Tuple[Dict[str, Any], int]:
    alg = make_jet_algebra(args.m, args.k)
    result = {
        "m": args.m,
        "k": args.k,
        "dim": alg.dim,
        "class": nilpotency_class(alg),
        "grading": {str(w): d for w, d in sorted(alg.grading_dims().items())},
        "homogeneous_dimension": homogeneous_dimension(alg),
        "lattice_generators": len(lattice_generators(args.m, args.k)),
        "lower_central_series": lower_central_series(alg),
        "basis": [{"name": n, "weight": w} for n, w in zip(alg.names, alg.weights)],
    }
    return make_report("jet info", {"builtin": f"jet:{args.m},{args.k}"}, result), EXIT_OK


def _certificate_dicts(certs: Sequence[ExponentCertificate]) -> List[Dict[str, Any]]:
    return [c.to_dict() for c in certs]


def cmd_certify(args) -> Tuple[Dict[str, Any], int]:
    target = resolve_target(args)
    dims = [args.dim] if args.dim is not None else None
    status = EXIT_OK
    if target.jet is not None:
        m, k = target.jet
        certs = certify_jet_group(m, k, dims)
        label = f"J^{m}(R^{k})"
    else:
        require_valid(target.algebra)
        pairs, rejected = parse_candidates(target.algebra, target.doc)
        ledger = parse_ledger(target.algebra, target.doc["ledger"]) if "ledger" in target.doc else None
        if dims is None:
            dims = sorted({a.dim for _, a in pairs} | set(rejected))
        certs = certify_algebra(target.algebra, pairs, ledger, dims)
        for c in certs:
            c.rejected = rejected.get(c.n, []) + c.rejected
            if c.rejected:
                status = EXIT_INVALID
        label = target.algebra.label or "user algebra"
    if any(g.startswith("budget exceeded") for c in certs for g in c.gaps):
        status = EXIT_BUDGET
    result = {"target": label, "certificates": _certificate_dicts(certs)}
    return make_report("certify", target.descriptor, result), status


def cmd_cohomology(args) -> Tuple[Dict[str, Any], int]:
    target = resolve_target(args)
    if target.jet is None:
        require_valid(target.algebra)
    if args.degree < 0:
        raise UsageError("--degree must be non-negative")
    reps = cohomology_by_weight(target.algebra, args.degree)
    result = {
        "degree": args.degree,
        "betti": sum(len(v) for v in reps.values()),
        "by_weight": {str(w): len(v) for w, v in reps.items()},
        "representatives": [{"weight": w, "cochain": z.to_dict()} for w, v in reps.items() for z in v],
    }
    return make_report("cohomology", target.descriptor, result), EXIT_OK


def cmd_plane_exponents(args) -> Tuple[Dict[str, Any], int]:
    target = resolve_target(args)
    if target.jet is None:
        require_valid(target.algebra)
    try:
        spec = json.loads(args.vectors)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--vectors is not valid JSON: {exc.msg}") from None
    vectors = parse_vectors(target.algebra, spec, "--vectors")
    pair = plane_scaling_exponents(vectors)
    result = {
        "a": format_rational(pair.a),
        "b": format_rational(pair.b),
        "gram_determinant": pair.gram.format(["t"]),
        "gram_terms": [{"power": e[0] if e else 0, "coeff": format_rational(c)} for e, c in sorted(pair.gram.items())],
    }
    return make_report("plane-exponents", target.descriptor, result), EXIT_OK


# argument parsing


def _add_target(p: argparse.ArgumentParser):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--jet", metavar="M,K", help="built-in jet algebra of J^M(R^K)")
    g.add_argument("--file", metavar="F", help="algebra definition file (JSON)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="carnot", description="Exact computations on Carnot algebras and filling exponents.")
    parser.add_argument("--version", action="version", version=f"carnot {__version__}")
    parser.add_argument("--timing", action="store_true", help="add wall-clock timing to the report (breaks byte determinism)")
    sub = parser.add_subparsers(dest="command", required=True)

    alg = sub.add_parser("algebra", help="algebra definition files")
    alg_sub = alg.add_subparsers(dest="action", required=True)
    val = alg_sub.add_parser("validate", help="check antisymmetry, Jacobi, grading and nilpotency")
    val.add_argument("file")
    val.set_defaults(func=cmd_algebra_validate)

    jet = sub.add_parser("jet", help="jet groups J^m(R^k)")
    jet_sub = jet.add_subparsers(dest="action", required=True)
    info = jet_sub.add_parser("info", help="dimension, class and grading of a jet algebra")
    info.add_argument("--m", type=int, required=True)
    info.add_argument("--k", type=int, required=True)
    info.set_defaults(func=cmd_jet_info)

    cert = sub.add_parser("certify", help="certify filling exponents")
    _add_target(cert)
    cert.add_argument("--dim", type=int, default=None, help="only this dimension n")
    cert.add_argument("--format", choices=["json", "md"], default="json")
    cert.add_argument("--out", metavar="PATH", default=None)
    cert.set_defaults(func=cmd_certify)

    coh = sub.add_parser("cohomology", help="Lie algebra cohomology in one degree")
    _add_target(coh)
    coh.add_argument("--degree", type=int, required=True)
    coh.set_defaults(func=cmd_cohomology)

    plane = sub.add_parser("plane-exponents", help="scaling exponents (a, b) of a tangent plane")
    _add_target(plane)
    plane.add_argument("--vectors", required=True, help='JSON list, e.g. \'["e1", {"y(0)": "1"}]\'')
    plane.set_defaults(func=cmd_plane_exponents)
    return parser


def _error_report(command: str, kind: str, exc: Exception, extra: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    err: Dict[str, Any] = {"kind": kind, "message": str(exc)}
    for attr in ("line", "column", "path", "cells", "budget"):
        v = getattr(exc, attr, None)
        if v is not None:
            err[attr] = v
    if extra:
        err.update(extra)
    return make_report(command, None, {"error": err})


def run(argv: Optional[Sequence[str]] = None) -> Tuple[Dict[str, Any], int, Any]:
    """Parse and dispatch; returns (report, exit code, parsed args)."""
    args = build_parser().parse_args(argv)
    command = " ".join(x for x in (args.command, getattr(args, "action", None)) if x)
    start = time.perf_counter()
    try:
        report, code = args.func(args)
    except _InvalidAlgebra as exc:
        report, code = _error_report(command, "validation", exc, {"validation": exc.report.to_dict()}), EXIT_INVALID
    except AlgebraFormatError as exc:
        report, code = _error_report(command, "format", exc), EXIT_INVALID
    except HypothesisError as exc:
        report, code = _error_report(command, "hypothesis", exc, {"hypothesis": exc.hypothesis}), EXIT_INVALID
    except DependentVectorsError as exc:
        report, code = _error_report(command, "dependence", exc), EXIT_INVALID
    except BudgetError as exc:
        report, code = _error_report(command, "budget", exc), EXIT_BUDGET
    except (UsageError, ParameterError, NotApplicableError) as exc:
        report, code = _error_report(command, "usage", exc), EXIT_USAGE
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 3)
    return report, code, args


def main(argv: Optional[Sequence[str]] = None) -> int:
    report, code, args = run(argv)
    fmt = getattr(args, "format", "json")
    if fmt == "md" and "certificates" in report["result"]:
        text = render_markdown(report)
    else:
        text = emit_json(report)
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    if "error" in report["result"]:
        print(f"carnot: {report['result']['error']['kind']} error: {report['result']['error']['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
