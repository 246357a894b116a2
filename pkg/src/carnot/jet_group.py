"""The jet groups J^m(R^k) and their Lie algebras.

Jet coordinates use Taylor coefficients: the fiber coordinate at multi-index
``a`` of ``j^m_p(f)`` is ``d^a f(p) / a!``, so the polynomial of a jet is
``sum_a jet[a] (x - base)^a``.  In these coordinates the group law is
``(p1, p2)(q1, q2) = (p1 + q1, D_{p1+q1}(P(p)) + q2)`` and only involves
binomial coefficients.

The jet-coordinate direction of ``y_a`` is ``(-1)^{|a|} a! y_a`` in the basis
where ``[e_i, y_a] = y_{a - e_i}``; :func:`jet_direction_scale` gives this
factor and :func:`algebra_from_group_law` uses it to compare structure
constants.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, factorial
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import DomainError, IncompatibleOperandsError, ParameterError
from .lie_core import AlgebraElement, GradedLieAlgebra, to_scalar
from .polynomial import Polynomial, monomial_power
from .serialization import format_rational, loads_json, parse_rational

MultiIndex = Tuple[int, ...]

# Relabeling of the class-3 eight-generator example onto the basis of j_{2,2}.
# Recorded as metadata only.
CLASS3_EXAMPLE_RELABELING = {
    "a": (1, "y(2,0)"),
    "b": (1, "e1"),
    "c": (1, "y(1,1)"),
    "d": (1, "e2"),
    "e": (1, "y(0,2)"),
    "f": (-1, "y(1,0)"),
    "g": (1, "y(0,1)"),
    "h": (-1, "y(0,0)"),
}


def _check_params(m: int, k: int):
    for name, v in (("m", m), ("k", k)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise ParameterError(f"{name} must be a positive integer, got {v!r}")


@lru_cache(maxsize=None)
def multi_indices(m: int, k: int) -> Tuple[MultiIndex, ...]:
    """Multi-indices with |a| <= m: by order m, m-1, ..., 0, lexicographically descending within an order."""
    out = []
    for n in range(m, -1, -1):
        level = [a for a in product(range(n + 1), repeat=k) if sum(a) == n]
        out += sorted(level, reverse=True)
    return tuple(out)


def y_name(a: MultiIndex) -> str:
    return "y(" + ",".join(map(str, a)) + ")"


def jet_weight(m: int, a: MultiIndex) -> int:
    return m - sum(a) + 1


def jet_direction_scale(a: MultiIndex) -> Fraction:
    """Factor c with (jet-coordinate direction of y_a) = c * y_a."""
    c = 1
    for x in a:
        c *= factorial(x)
    return Fraction((-1) ** sum(a) * c)


def jet_basis_names(m: int, k: int) -> List[str]:
    return [f"e{i + 1}" for i in range(k)] + [y_name(a) for a in multi_indices(m, k)]


@lru_cache(maxsize=None)
def make_jet_algebra(m: int, k: int) -> GradedLieAlgebra:
    """j_{m,k}: [e_i, y_a] = y_{a - e_i} when a_i > 0; the remaining brackets vanish."""
    _check_params(m, k)
    idx = multi_indices(m, k)
    names = jet_basis_names(m, k)
    weights = [1] * k + [jet_weight(m, a) for a in idx]
    table = {}
    for a in idx:
        for i in range(k):
            if a[i] > 0:
                lower = list(a)
                lower[i] -= 1
                table[(f"e{i + 1}", y_name(a))] = {y_name(tuple(lower)): 1}
    meta = {"m": m, "k": k}
    if (m, k) == (2, 2):
        meta["class3_example_relabeling"] = dict(CLASS3_EXAMPLE_RELABELING)
    return GradedLieAlgebra(names, weights, table, label=f"jet:{m},{k}", metadata=meta)


# jet points


@dataclass(frozen=True, eq=False)
class JetPoint:
    """A point (base, jet) of J^m(R^k).  Entries may be rationals or Polynomials."""

    m: int
    k: int
    base: Tuple
    jet: Mapping[MultiIndex, object]

    @classmethod
    def make(cls, m: int, k: int, base: Sequence = None, jet: Optional[Mapping] = None) -> "JetPoint":
        _check_params(m, k)
        base = tuple(_entry(x) for x in (base if base is not None else [0] * k))
        if len(base) != k:
            raise ParameterError(f"base must have {k} coordinates")
        full = {a: Fraction(0) for a in multi_indices(m, k)}
        for a, v in (jet or {}).items():
            a = tuple(a)
            if a not in full:
                raise ParameterError(f"multi-index {a} invalid for m={m}, k={k}")
            full[a] = _entry(v)
        return cls(m, k, base, full)

    def coordinates(self) -> List:
        """Flat coordinates in basis order: base then jet entries."""
        return list(self.base) + [self.jet[a] for a in multi_indices(self.m, self.k)]

    @classmethod
    def from_coordinates(cls, m: int, k: int, coords: Sequence) -> "JetPoint":
        idx = multi_indices(m, k)
        return cls(m, k, tuple(coords[:k]), dict(zip(idx, coords[k:])))

    def __eq__(self, other):
        if not isinstance(other, JetPoint):
            return NotImplemented
        return (self.m, self.k) == (other.m, other.k) and all(
            x == y for x, y in zip(self.coordinates(), other.coordinates())
        )

    def __hash__(self):
        return hash((self.m, self.k, tuple(self.coordinates())))

    def __repr__(self):
        jet = {a: v for a, v in self.jet.items() if v != 0}
        return f"JetPoint(m={self.m}, k={self.k}, base={list(self.base)}, jet={jet})"


def _entry(x):
    return x if isinstance(x, Polynomial) else to_scalar(x)


def jet_identity(m: int, k: int) -> JetPoint:
    return JetPoint.make(m, k)


def jet_of_polynomial(f: Polynomial, p: Sequence, m: int) -> JetPoint:
    """j^m_p(f): Taylor coefficients d^a f(p)/a! for |a| <= m.

    ``p`` may hold Polynomials, which yields the prolongation as a symbolic section.
    """
    k = len(p)
    _check_params(m, k)
    if f.nvars > k:
        raise ParameterError(f"polynomial has {f.nvars} variables but the point has {k}")
    values = dict(enumerate(p))
    jet = {}
    for a in multi_indices(m, k):
        part = f.taylor_part(a)
        jet[a] = part.substitute(values) if not part.is_zero() else Fraction(0)
        if isinstance(jet[a], Polynomial) and jet[a].is_constant():
            jet[a] = jet[a].constant_term()
    return JetPoint(m, k, tuple(_entry(x) for x in p), jet)


def poly_of_jet(p: JetPoint) -> Polynomial:
    """P(p)(x) = sum_a jet[a] (x - base)^a."""
    xs = [Polynomial.variable(i, p.k) - p.base[i] for i in range(p.k)]
    total = Polynomial({}, p.k)
    for a, c in p.jet.items():
        if c != 0:
            total = total + c * monomial_power(xs, a)
    return total


@lru_cache(maxsize=None)
def _shift_table(m: int, k: int):
    """For each b: [(a, binom(a, b), a - b)] over a >= b componentwise."""
    idx = multi_indices(m, k)
    table = {}
    for b in idx:
        rows = []
        for a in idx:
            if all(x >= y for x, y in zip(a, b)):
                coeff = 1
                for x, y in zip(a, b):
                    coeff *= comb(x, y)
                rows.append((a, coeff, tuple(x - y for x, y in zip(a, b))))
        table[b] = tuple(rows)
    return table


def _taylor_shift(m: int, k: int, jet: Mapping, h: Sequence) -> Dict[MultiIndex, object]:
    """Jet at base + h of the polynomial whose jet at base is ``jet``."""
    powers: Dict[MultiIndex, object] = {}

    def pw(d):
        if d not in powers:
            powers[d] = monomial_power(h, d)
        return powers[d]

    out = {}
    for b, rows in _shift_table(m, k).items():
        s = Fraction(0)
        for a, coeff, d in rows:
            c = jet[a]
            if c != 0:
                s = s + c * coeff * pw(d)
        out[b] = s
    return out


def _same_group(p: JetPoint, q: JetPoint):
    if (p.m, p.k) != (q.m, q.k):
        raise IncompatibleOperandsError(f"J^{p.m}(R^{p.k}) and J^{q.m}(R^{q.k}) points cannot be multiplied")


def jet_multiply(p: JetPoint, q: JetPoint) -> JetPoint:
    _same_group(p, q)
    shifted = _taylor_shift(p.m, p.k, p.jet, q.base)
    base = tuple(x + y for x, y in zip(p.base, q.base))
    return JetPoint(p.m, p.k, base, {a: shifted[a] + q.jet[a] for a in shifted})


def jet_inverse(p: JetPoint) -> JetPoint:
    neg = tuple(-x for x in p.base)
    shifted = _taylor_shift(p.m, p.k, p.jet, neg)
    return JetPoint(p.m, p.k, neg, {a: -v for a, v in shifted.items()})


def jet_scaling(t, p: JetPoint) -> JetPoint:
    """Dilation: base by t, y_a by t^(m - |a| + 1)."""
    if t == 0:
        raise DomainError("s_0 is not an automorphism")
    return JetPoint(
        p.m,
        p.k,
        tuple(t * x for x in p.base),
        {a: v * t ** jet_weight(p.m, a) for a, v in p.jet.items()},
    )


def symbolic_point(m: int, k: int, first_var: int) -> JetPoint:
    """A jet point whose coordinates are the variables x_{first_var}, x_{first_var+1}, ..."""
    n = k + len(multi_indices(m, k))
    return JetPoint.from_coordinates(m, k, Polynomial.variables(first_var, n))


def algebra_from_group_law(m: int, k: int) -> GradedLieAlgebra:
    """Lie algebra read off the group law: [u, v] = B(u, v) - B(v, u), B the bilinear term.

    Structure constants are converted from jet-coordinate directions to the
    y_a basis with :func:`jet_direction_scale`.
    """
    ref = make_jet_algebra(m, k)
    n = ref.dim
    u = symbolic_point(m, k, 0)
    v = symbolic_point(m, k, n)
    prod = jet_multiply(u, v).coordinates()
    scale = [Fraction(1)] * k + [jet_direction_scale(a) for a in multi_indices(m, k)]
    bilinear: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for l, comp in enumerate(prod):
        if not isinstance(comp, Polynomial):
            continue
        for mono, c in comp.items():
            if sum(mono) != 2:
                continue
            support = [i for i, e in enumerate(mono) if e]
            if len(support) != 2 or support[0] >= n or support[1] < n:
                continue
            i, j = support[0], support[1] - n
            bilinear.setdefault((i, j), {})[l] = c
    table = {}
    for i in range(n):
        for j in range(i + 1, n):
            out = {}
            for l in range(n):
                c = bilinear.get((i, j), {}).get(l, 0) - bilinear.get((j, i), {}).get(l, 0)
                if c:
                    out[ref.names[l]] = c * scale[l] / (scale[i] * scale[j])
            if out:
                table[(ref.names[i], ref.names[j])] = out
    return GradedLieAlgebra(ref.names, ref.weights, table, label=f"jet-law:{m},{k}")


# horizontality of sections


@dataclass
class HorizontalityResult:
    horizontal: bool
    tangent: List[List[Fraction]]
    witness: Optional[Tuple[int, MultiIndex, Fraction]] = None

    def __bool__(self):
        return self.horizontal


def section_horizontality_check(section: JetPoint, p: Optional[Sequence] = None) -> HorizontalityResult:
    """Derivative at x = p of x -> section(p)^-1 . section(x), checked for weight >= 2 components.

    ``section`` has Polynomial coordinates in the variables x0..x_{k-1}.  With
    ``p=None`` the base point is symbolic (variables x_k..x_{2k-1}), so a pass
    means the components vanish identically.  Witness is
    ``(direction i, multi-index a, value)`` of the first offending entry.
    """
    m, k = section.m, section.k
    if p is None:
        p = Polynomial.variables(k, k)
    else:
        p = [to_scalar(x) for x in p]
    at_p = dict(enumerate(p))

    def ev(x):
        if isinstance(x, Polynomial):
            x = x.substitute(at_p)
        return x if isinstance(x, Polynomial) else Fraction(x)

    start = JetPoint(m, k, tuple(ev(x) for x in section.base), {a: ev(v) for a, v in section.jet.items()})
    moved = jet_multiply(jet_inverse(start), section)
    tangent = []
    witness = None
    idx = multi_indices(m, k)
    for i in range(k):
        col = [ev(x.derivative(i)) if isinstance(x, Polynomial) else Fraction(0) for x in moved.coordinates()]
        tangent.append(col)
        if witness is None:
            for a, val in zip(idx, col[k:]):
                if sum(a) < m and val != 0:
                    witness = (i, a, val)
                    break
    return HorizontalityResult(witness is None, tangent, witness)


def prolongation_section(f: Polynomial, m: int, k: int) -> JetPoint:
    return jet_of_polynomial(f, Polynomial.variables(0, k), m)


def prolongation_horizontality_check(f: Polynomial, m: int, k: int, p: Optional[Sequence] = None) -> HorizontalityResult:
    return section_horizontality_check(prolongation_section(f, m, k), p)


def tangent_plane_elements(result: HorizontalityResult, m: int, k: int) -> List[AlgebraElement]:
    """Tangent vectors of a section check as elements of j_{m,k}."""
    alg = make_jet_algebra(m, k)
    scale = [Fraction(1)] * k + [jet_direction_scale(a) for a in multi_indices(m, k)]
    return [alg.element([c * s for c, s in zip(col, scale)]) for col in result.tangent]


def lattice_generators(m: int, k: int) -> List[JetPoint]:
    """exp of each basis element: (e_i, 0) and (0, unit jet at a)."""
    _check_params(m, k)
    gens = []
    for i in range(k):
        base = [0] * k
        base[i] = 1
        gens.append(JetPoint.make(m, k, base))
    for a in multi_indices(m, k):
        gens.append(JetPoint.make(m, k, None, {a: 1}))
    return gens


# serialization


def jet_to_dict(p: JetPoint) -> Dict:
    return {
        "m": p.m,
        "k": p.k,
        "base": [format_rational(x) for x in p.base],
        "jet": {",".join(map(str, a)): format_rational(v) for a, v in p.jet.items() if v != 0},
    }


def jet_from_dict(doc: Mapping) -> JetPoint:
    m, k = doc.get("m"), doc.get("k")
    base = [parse_rational(x, "$.base") for x in doc.get("base", [])]
    jet = {}
    for key, v in doc.get("jet", {}).items():
        try:
            a = tuple(int(s) for s in key.split(","))
        except ValueError:
            raise ParameterError(f"bad multi-index key {key!r}") from None
        jet[a] = parse_rational(v, f"$.jet.{key}")
    return JetPoint.make(m, k, base, jet)


def dumps_jet(p: JetPoint) -> str:
    return json.dumps(jet_to_dict(p), sort_keys=True)


def loads_jet(text: str) -> JetPoint:
    return jet_from_dict(loads_json(text))

