"""Chevalley-Eilenberg cochains with trivial rational coefficients.

Sign convention: on 1-cochains (d theta)(X, Y) = -theta([X, Y]), extended as
an antiderivation.  Monomials are strictly increasing index tuples, and
cochains evaluate on vectors by the determinant pairing.
"""
from __future__ import annotations

import os
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .errors import BudgetError, IncompatibleOperandsError, NotCocycleError, ParameterError
from .lie_core import AlgebraElement, GradedLieAlgebra, LieAlgebra, Subalgebra, scale_element, subalgebra_from_span
from .polynomial import Polynomial

Monomial = Tuple[int, ...]
DEFAULT_BUDGET = 10 ** 6


def budget_cells() -> int:
    raw = os.environ.get("CARNOT_BUDGET_CELLS")
    if raw is None or raw.strip() == "":
        return DEFAULT_BUDGET
    return int(raw)


def check_budget(alg: LieAlgebra, degree: int, budget: Optional[int] = None):
    budget = budget_cells() if budget is None else budget
    if 0 <= degree <= alg.dim:
        cells = comb(alg.dim, degree)
        if cells > budget:
            raise BudgetError(
                f"Lambda^{degree} of a {alg.dim}-dimensional algebra has {cells} basis cochains (budget {budget})",
                cells=cells,
                budget=budget,
            )


def sort_with_sign(indices: Iterable[int]) -> Tuple[int, Optional[Monomial]]:
    """Sign of the sorting permutation and the sorted tuple; (0, None) on a repeat."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, None
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


class Cochain:
    __slots__ = ("algebra", "degree", "terms")

    def __init__(self, algebra: LieAlgebra, degree: int, terms: Optional[Mapping[Iterable[int], object]] = None):
        self.algebra = algebra
        self.degree = degree
        clean: Dict[Monomial, Fraction] = defaultdict(Fraction)
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != degree:
                raise ParameterError(f"monomial {mono} does not have degree {degree}")
            sign, srt = sort_with_sign(mono)
            if sign and c:
                clean[srt] += sign * Fraction(c)
        self.terms: Dict[Monomial, Fraction] = {m: c for m, c in clean.items() if c}

    @classmethod
    def monomial(cls, algebra: LieAlgebra, refs: Sequence, coeff=1) -> "Cochain":
        return cls(algebra, len(refs), {tuple(algebra.index(r) for r in refs): coeff})

    @classmethod
    def dual(cls, algebra: LieAlgebra, ref) -> "Cochain":
        return cls.monomial(algebra, [ref])

    @classmethod
    def one(cls, algebra: LieAlgebra) -> "Cochain":
        return cls(algebra, 0, {(): 1})

    def _check(self, other: "Cochain"):
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise IncompatibleOperandsError("cochains over different algebras")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._check(other)
        if other.degree != self.degree:
            raise ParameterError("cannot add cochains of different degree")
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return Cochain(self.algebra, self.degree, t)

    def __neg__(self):
        return Cochain(self.algebra, self.degree, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, s):
        return Cochain(self.algebra, self.degree, {m: c * s for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.degree == other.degree and self.terms == other.terms and (
            self.algebra is other.algebra or self.algebra == other.algebra
        )

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def weights(self) -> Dict[Monomial, int]:
        ws = _weights(self.algebra)
        return {m: sum(ws[i] for i in m) for m in self.terms}

    def weight(self) -> Optional[int]:
        """Common weight of the monomials, or None if not homogeneous (or zero)."""
        w = set(self.weights().values())
        return w.pop() if len(w) == 1 else None

    def is_homogeneous(self) -> bool:
        return len(set(self.weights().values())) <= 1

    def __call__(self, *vectors: AlgebraElement):
        """Determinant pairing z(v_1, ..., v_n)."""
        if len(vectors) != self.degree:
            raise ParameterError(f"a degree-{self.degree} cochain takes {self.degree} arguments")
        total = 0
        for mono, c in self.terms.items():
            total = total + c * _det([[v.coeffs[i] for v in vectors] for i in mono])
        return total

    def to_dict(self) -> Dict[str, object]:
        names = self.algebra.names
        return {
            "degree": self.degree,
            "terms": [{"factors": [names[i] for i in m], "coeff": str(c)} for m, c in sorted(self.terms.items())],
        }

    def __repr__(self):
        names = self.algebra.names
        if not self.terms:
            return "<0>"
        body = " + ".join(f"{c}*" + "^".join(names[i] + "*" for i in m) for m, c in sorted(self.terms.items()))
        return f"<{body}>"


def _weights(alg: LieAlgebra) -> Tuple[int, ...]:
    if not isinstance(alg, GradedLieAlgebra):
        raise ParameterError("weights need a graded algebra")
    return alg.weights


def _det(matrix):
    """Generic Laplace determinant; entries may be Polynomials.  Used for small n only."""
    n = len(matrix)
    if n == 0:
        return 1
    if n == 1:
        return matrix[0][0]
    if n == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    total = 0
    for j in range(n):
        if matrix[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = matrix[0][j] * _det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def wedge(z1: Cochain, z2: Cochain) -> Cochain:
    z1._check(z2)
    out: Dict[Monomial, Fraction] = defaultdict(Fraction)
    for m1, c1 in z1.terms.items():
        for m2, c2 in z2.terms.items():
            sign, srt = sort_with_sign(m1 + m2)
            if sign:
                out[srt] += sign * c1 * c2
    return Cochain(z1.algebra, z1.degree + z2.degree, out)


def wedge_all(cochains: Sequence[Cochain]) -> Cochain:
    result = Cochain.one(cochains[0].algebra)
    for z in cochains:
        result = wedge(result, z)
    return result


def _d_dual(alg: LieAlgebra) -> Tuple[Dict[Tuple[int, int], Fraction], ...]:
    """d(b_l^*) = -sum_{i<j} c_ij^l b_i^* ^ b_j^*, for each l."""

    def compute():
        out: List[Dict[Tuple[int, int], Fraction]] = [dict() for _ in range(alg.dim)]
        for (i, j), res in alg._half_items:
            for l, c in res:
                out[l][(i, j)] = -c
        return tuple(out)

    return alg._memoized("d_dual", compute)


def _d_monomial(alg: LieAlgebra, mono: Monomial) -> Dict[Monomial, Fraction]:
    dd = _d_dual(alg)
    out: Dict[Monomial, Fraction] = defaultdict(Fraction)
    for r, l in enumerate(mono):
        if not dd[l]:
            continue
        sign_r = -1 if r % 2 else 1
        rest_before, rest_after = mono[:r], mono[r + 1:]
        for (i, j), c in dd[l].items():
            sign, srt = sort_with_sign(rest_before + (i, j) + rest_after)
            if sign:
                out[srt] += sign_r * sign * c
    return {m: c for m, c in out.items() if c}


def differential(z: Cochain, budget: Optional[int] = None) -> Cochain:
    check_budget(z.algebra, z.degree, budget)
    check_budget(z.algebra, z.degree + 1, budget)
    out: Dict[Monomial, Fraction] = defaultdict(Fraction)
    for mono, c in z.terms.items():
        for m, v in _d_monomial(z.algebra, mono).items():
            out[m] += c * v
    return Cochain(z.algebra, z.degree + 1, out)


def exterior_basis(alg: LieAlgebra, degree: int, budget: Optional[int] = None) -> List[Monomial]:
    check_budget(alg, degree, budget)
    return list(combinations(range(alg.dim), degree))


def weight_decompose(z: Cochain) -> Dict[int, Cochain]:
    parts: Dict[int, Dict[Monomial, Fraction]] = defaultdict(dict)
    for m, w in z.weights().items():
        parts[w][m] = z.terms[m]
    return {w: Cochain(z.algebra, z.degree, t) for w, t in sorted(parts.items())}


def pullback(z: Cochain, images: Sequence[AlgebraElement], target: LieAlgebra) -> Cochain:
    """Pull ``z`` back along the linear map sending basis vector j of ``target`` to ``images[j]``.

    Coefficients may come out as Polynomials when the images have Polynomial entries;
    such results are returned as a ``{monomial: value}`` dict instead of a Cochain.
    """
    n = z.degree
    out: Dict[Monomial, object] = {}
    symbolic = False
    for J in combinations(range(len(images)), n):
        vecs = [images[j] for j in J]
        val = z(*vecs) if n else z.terms.get((), 0)
        if val != 0:
            out[J] = val
            symbolic = symbolic or isinstance(val, Polynomial)
    if symbolic:
        return out
    return Cochain(target, n, out)


def scaling_pullback(z: Cochain, t) -> Dict[Monomial, object]:
    """Coefficients of s_t^* z, with ``t`` rational or a Polynomial indeterminate."""
    alg = z.algebra
    images = [scale_element(b, t) for b in alg.basis_elements()]
    res = pullback(z, images, alg)
    return res if isinstance(res, dict) else dict(res.terms)


def check_scaling_weights(z: Cochain) -> bool:
    """Every homogeneous part z_w satisfies s_t^* z_w = t^w z_w with t an indeterminate."""
    t = Polynomial.variable(0)
    for w, part in weight_decompose(z).items():
        pulled = scaling_pullback(part, t)
        expected = {m: c * t ** w for m, c in part.terms.items()}
        if set(pulled) != set(expected) or any(pulled[m] != expected[m] for m in expected):
            return False
    return True


def restrict(z: Cochain, a: Subalgebra) -> Cochain:
    """Pullback along the inclusion, in the span basis of ``a``."""
    if z.algebra is not a.parent and z.algebra != a.parent:
        raise IncompatibleOperandsError("cochain and subalgebra live in different algebras")
    if z.degree > a.dim:
        return Cochain(a.structure, z.degree, {})
    return pullback(z, list(a.span), a.structure)


# cohomology


def _blocks(alg: LieAlgebra, degree: int) -> Dict[Optional[int], List[Monomial]]:
    """Exterior basis grouped by weight (one block for ungraded algebras)."""
    groups: Dict[Optional[int], List[Monomial]] = defaultdict(list)
    ws = alg.weights if isinstance(alg, GradedLieAlgebra) else None
    for m in exterior_basis(alg, degree):
        groups[sum(ws[i] for i in m) if ws else None].append(m)
    return groups


def coboundary_images(alg: LieAlgebra, degree: int, monomials: Optional[Sequence[Monomial]] = None):
    monomials = exterior_basis(alg, degree) if monomials is None else monomials
    return [_d_monomial(alg, m) for m in monomials]


def _block_cohomology(alg: LieAlgebra, degree: int, cocycle_space: List[Monomial], lower: List[Monomial]):
    """Representatives of H^degree in one weight block."""
    images_in = [r for r in coboundary_images(alg, degree - 1, lower) if r] if degree >= 1 else []
    images_out = coboundary_images(alg, degree, cocycle_space)
    # cocycles: combinations of monomials whose image vanishes
    cols: Dict[Monomial, Dict[int, Fraction]] = defaultdict(dict)
    for i, img in enumerate(images_out):
        for m, c in img.items():
            cols[m][i] = c
    kernel = linalg.nullspace(list(cols.values()), list(range(len(cocycle_space))))
    rr = linalg.RowReducer(cocycle_space)
    for r in images_in:
        rr.add(r)
    reps = []
    for vec in kernel:
        as_mono = {cocycle_space[i]: c for i, c in vec.items()}
        if rr.add(as_mono):
            reps.append(Cochain(alg, degree, as_mono))
    return reps


def cohomology_by_weight(alg: LieAlgebra, degree: int, budget: Optional[int] = None) -> Dict[Optional[int], List[Cochain]]:
    """Homogeneous representatives of a basis of H^degree, keyed by weight."""
    check_budget(alg, degree, budget)
    if degree > 0:
        check_budget(alg, degree - 1, budget)
    if degree < alg.dim:
        check_budget(alg, degree + 1, budget)
    if degree < 0 or degree > alg.dim:
        return {}
    upper = _blocks(alg, degree)
    lower = _blocks(alg, degree - 1) if degree >= 1 else {}
    out = {}
    for w in sorted(upper, key=lambda x: (x is None, x)):
        reps = _block_cohomology(alg, degree, upper[w], lower.get(w, []))
        if reps:
            out[w] = reps
    return out


def betti_numbers(alg: LieAlgebra, max_degree: Optional[int] = None, budget: Optional[int] = None) -> List[int]:
    """dim H^n for n = 0..max_degree: dim Lambda^n - rank d_n - rank d_{n-1}, exact over Q."""
    top = alg.dim if max_degree is None else max_degree
    if top > alg.dim:
        raise ParameterError("max_degree exceeds the dimension")
    for n in range(0, min(top + 1, alg.dim) + 1):
        check_budget(alg, n, budget)
    ranks = []
    for n in range(top + 1):
        blocks = _blocks(alg, n)
        r = 0
        for monos in blocks.values():
            r += linalg.rank(img for img in coboundary_images(alg, n, monos) if img)
        ranks.append(r)
    return [comb(alg.dim, n) - ranks[n] - (ranks[n - 1] if n else 0) for n in range(top + 1)]


@dataclass
class NonvanishingEvidence:
    """Outcome of the restriction test, checkable with one matrix-vector pass.

    When ``nonzero`` is True, ``functional`` vanishes on every coboundary of
    the subalgebra but not on the restricted cocycle.  Otherwise ``preimage``
    is a cochain on the subalgebra whose differential is the restriction.
    """

    cocycle: Cochain
    subalgebra: Subalgebra
    nonzero: bool
    restricted: Cochain
    functional: Dict[Monomial, Fraction] = field(default_factory=dict)
    preimage: Optional[Cochain] = None

    def verify(self) -> bool:
        """Recheck from the parent algebra, the cocycle and the subalgebra span only."""
        z, a = self.cocycle, self.subalgebra
        if not differential(z).is_zero():
            return False
        sub = subalgebra_from_span(a.parent, a.span, a.structure.names)
        r = restrict(z, sub)
        if r.terms != self.restricted.terms:
            return False
        n = z.degree
        if self.nonzero:
            for img in coboundary_images(sub.structure, n - 1) if n >= 1 else []:
                if linalg.dot(self.functional, img) != 0:
                    return False
            return linalg.dot(self.functional, r.terms) != 0
        if self.preimage is None:
            return False
        pre = Cochain(sub.structure, self.preimage.degree, self.preimage.terms)
        return differential(pre).terms == r.terms

    def to_dict(self):
        a = self.subalgebra.structure
        out = {
            "nonzero": self.nonzero,
            "restricted": self.restricted.to_dict(),
        }
        if self.nonzero:
            out["functional"] = [
                {"factors": [a.names[i] for i in m], "coeff": str(c)} for m, c in sorted(self.functional.items())
            ]
        elif self.preimage is not None:
            out["preimage"] = self.preimage.to_dict()
        return out


def nonzero_in_cohomology(z: Cochain, a: Subalgebra, budget: Optional[int] = None) -> NonvanishingEvidence:
    """Is the class of the cocycle ``z`` nonzero after restricting to ``a``?"""
    dz = differential(z, budget)
    if not dz.is_zero():
        raise NotCocycleError(f"d(z) = {dz!r} is not zero", differential=dz)
    n = z.degree
    if n > a.dim:
        raise ParameterError(f"degree {n} exceeds the subalgebra dimension {a.dim}")
    sub = a.structure
    r = restrict(z, a)
    lower = exterior_basis(sub, n - 1, budget) if n >= 1 else []
    images = coboundary_images(sub, n - 1, lower) if n >= 1 else []
    coords = linalg.solve_combination(images, r.terms)
    if coords is not None and not r.is_zero():
        pre = Cochain(sub, n - 1, {m: c for m, c in zip(lower, coords) if c})
        return NonvanishingEvidence(z, a, False, r, preimage=pre)
    if r.is_zero():
        return NonvanishingEvidence(z, a, False, r, preimage=Cochain(sub, max(n - 1, 0), {}) if n >= 1 else None)
    cols = exterior_basis(sub, n, budget)
    candidates = linalg.nullspace([img for img in images if img], cols)
    functional = next(phi for phi in candidates if linalg.dot(phi, r.terms) != 0)
    return NonvanishingEvidence(z, a, True, r, functional=functional)


def full_wedge_cochain(alg: LieAlgebra, refs: Sequence) -> Cochain:
    return wedge_all([Cochain.dual(alg, r) for r in refs])


def top_weight_monomials(alg: GradedLieAlgebra, degree: int) -> Tuple[int, List[Monomial]]:
    ws = alg.weights
    best, monos = -1, []
    for m in exterior_basis(alg, degree):
        w = sum(ws[i] for i in m)
        if w > best:
            best, monos = w, [m]
        elif w == best:
            monos.append(m)
    return best, monos
