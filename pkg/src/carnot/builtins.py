"""Named built-in algebras: jet algebras, Heisenberg algebras, abelian algebras."""
from __future__ import annotations

from typing import Dict, List

from .errors import ParameterError
from .jet_group import make_jet_algebra
from .lie_core import GradedLieAlgebra, abelian_algebra


def heisenberg_algebra(k: int) -> GradedLieAlgebra:
    """The (2k+1)-dimensional Heisenberg algebra with [x_i, y_i] = z."""
    if k < 1:
        raise ParameterError("k must be positive")
    names = [f"x{i + 1}" for i in range(k)] + [f"y{i + 1}" for i in range(k)] + ["z"]
    table = {(f"x{i + 1}", f"y{i + 1}"): {"z": 1} for i in range(k)}
    return GradedLieAlgebra(names, [1] * (2 * k) + [2], table, label=f"heisenberg:{k}")


def parse_pair(text: str) -> tuple:
    try:
        m, k = (int(x) for x in text.split(","))
    except ValueError:
        raise ParameterError(f"expected M,K with positive integers, got {text!r}") from None
    if m < 1 or k < 1:
        raise ParameterError(f"expected M,K with positive integers, got {text!r}")
    return m, k


def builtin(spec: str) -> GradedLieAlgebra:
    """Resolve ``jet:M,K``, ``heisenberg:K`` or ``abelian:N``."""
    kind, _, arg = spec.partition(":")
    if kind == "jet":
        return make_jet_algebra(*parse_pair(arg))
    try:
        n = int(arg)
    except ValueError:
        raise ParameterError(f"unknown built-in algebra {spec!r}") from None
    if kind == "heisenberg":
        return heisenberg_algebra(n)
    if kind == "abelian":
        return abelian_algebra(n)
    raise ParameterError(f"unknown built-in algebra {spec!r}")


# name -> nilpotency class; every entry has dim <= 12
BUILTINS: Dict[str, int] = {
    **{f"jet:{m},{k}": m + 1 for m, k in [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (3, 1), (3, 2), (4, 1)]},
    "heisenberg:1": 2,
    "heisenberg:2": 2,
    "abelian:3": 1,
}


def builtin_names(max_class: int = 99) -> List[str]:
    return [name for name, c in BUILTINS.items() if c <= max_class]
