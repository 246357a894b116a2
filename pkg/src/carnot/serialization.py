"""JSON formats: rational strings, algebra definition files, jet points."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Mapping, Tuple, Union

from .errors import AlgebraFormatError
from .lie_core import GradedLieAlgebra


def format_rational(x) -> str:
    """Lowest terms, positive denominator; integers print without ``/1``."""
    return str(Fraction(x))


def parse_rational(s: Any, path: str = "") -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise AlgebraFormatError(f"expected a rational string like \"p/q\", got {s!r}", path=path)
    try:
        return Fraction(s.strip() if isinstance(s, str) else s)
    except (ValueError, ZeroDivisionError):
        raise AlgebraFormatError(f"malformed rational {s!r}", path=path) from None


def loads_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraFormatError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from None


def _require(cond: bool, message: str, path: str):
    if not cond:
        raise AlgebraFormatError(message, path=path)


def algebra_from_dict(doc: Mapping) -> GradedLieAlgebra:
    _require(isinstance(doc, dict), "top level must be an object", "$")
    basis = doc.get("basis")
    _require(isinstance(basis, list), "\"basis\" must be a list", "$.basis")
    _require(len(basis) > 0, "\"basis\" must not be empty", "$.basis")
    names: List[str] = []
    weights: List[int] = []
    for i, entry in enumerate(basis):
        p = f"$.basis[{i}]"
        _require(isinstance(entry, dict), "basis entries must be objects", p)
        name, weight = entry.get("name"), entry.get("weight")
        _require(isinstance(name, str) and name != "", "basis name must be a non-empty string", p + ".name")
        _require(name not in names, f"duplicate basis name {name!r}", p + ".name")
        _require(
            isinstance(weight, int) and not isinstance(weight, bool) and weight > 0,
            f"weight of {name!r} must be a positive integer",
            p + ".weight",
        )
        names.append(name)
        weights.append(weight)
    order = {n: i for i, n in enumerate(names)}
    table: Dict[Tuple[str, str], Dict[str, Fraction]] = {}
    brackets = doc.get("brackets", [])
    _require(isinstance(brackets, list), "\"brackets\" must be a list", "$.brackets")
    for i, entry in enumerate(brackets):
        p = f"$.brackets[{i}]"
        _require(isinstance(entry, dict), "bracket entries must be objects", p)
        left, right, result = entry.get("left"), entry.get("right"), entry.get("result")
        for side, val in (("left", left), ("right", right)):
            _require(val in order, f"unknown basis name {val!r}", f"{p}.{side}")
        _require(order[left] < order[right], f"bracket [{left}, {right}] must list the earlier basis element first", p)
        _require((left, right) not in table, f"bracket [{left}, {right}] given twice", p)
        _require(isinstance(result, dict), "\"result\" must be an object", p + ".result")
        vec = {}
        for name, c in result.items():
            _require(name in order, f"unknown basis name {name!r}", f"{p}.result")
            vec[name] = parse_rational(c, f"{p}.result.{name}")
        table[(left, right)] = vec
    label = doc.get("label") if isinstance(doc.get("label"), str) else None
    return GradedLieAlgebra(names, weights, table, label=label)


def load_algebra(source: Union[str, Path, Mapping]) -> GradedLieAlgebra:
    """Load from a path, a JSON string, or an already-parsed mapping."""
    if isinstance(source, Mapping):
        return algebra_from_dict(source)
    return algebra_from_dict(loads_json(_read(source)))


def _read(source: Union[str, Path]) -> str:
    if isinstance(source, Path):
        return source.read_text()
    if source.lstrip().startswith(("{", "[")):
        return source
    return Path(source).read_text()


def algebra_to_dict(alg: GradedLieAlgebra) -> Dict[str, Any]:
    doc: Dict[str, Any] = {
        "basis": [{"name": n, "weight": w} for n, w in zip(alg.names, alg.weights)],
        "brackets": [
            {"left": l, "right": r, "result": {n: format_rational(c) for n, c in res.items()}}
            for (l, r), res in alg.structure_table().items()
        ],
    }
    if alg.label:
        doc["label"] = alg.label
    return doc


def dump_algebra(alg: GradedLieAlgebra) -> str:
    return json.dumps(algebra_to_dict(alg), indent=2)
