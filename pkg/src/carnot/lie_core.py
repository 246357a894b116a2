"""Graded nilpotent Lie algebras over the rationals.

Structure constants are exact ``Fraction`` values.  Element coefficients may
be any ring elements that mix with ``Fraction`` (in practice ``Fraction`` or
:class:`~carnot.polynomial.Polynomial`), which is how the symbolic checks run
the same code paths with indeterminate coordinates.
"""
from __future__ import annotations

import random
import threading
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from numbers import Rational
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from . import linalg
from .errors import (
    ClosureError,
    DependentVectorsError,
    DomainError,
    IncompatibleOperandsError,
    NotNilpotentError,
    ParameterError,
)
from .polynomial import Polynomial

Scalar = Fraction
BasisRef = Union[int, str]


def to_scalar(x) -> Fraction:
    """Exact rational from an int, Fraction or ``"p/q"`` string.  Floats are refused."""
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"not an exact rational: {x!r}")


class LieAlgebra:
    """A finite-dimensional Lie algebra given by a sparse bracket table.

    ``brackets`` maps a pair of basis references to ``{basis ref: coeff}``.
    Only one ordering of each pair is needed; the other is derived by
    antisymmetry.  Inconsistent duplicate entries are kept so that
    :func:`validate` can report them.
    """

    def __init__(self, names: Sequence[str], brackets: Optional[Mapping] = None, label: Optional[str] = None):
        names = list(names)
        if not names:
            raise ParameterError("a Lie algebra needs a non-empty basis")
        if len(set(names)) != len(names):
            raise ParameterError("basis names must be distinct")
        self.names: Tuple[str, ...] = tuple(names)
        self.dim = len(names)
        self.label = label
        self._index = {n: i for i, n in enumerate(names)}
        raw: List[Tuple[int, int, Dict[int, Fraction]]] = []
        for (left, right), result in (brackets or {}).items():
            i, j = self.index(left), self.index(right)
            vec = {}
            for ref, c in result.items():
                c = to_scalar(c)
                if c:
                    l = self.index(ref)
                    vec[l] = vec.get(l, 0) + c
            raw.append((i, j, {l: c for l, c in vec.items() if c}))
        self._raw = tuple(raw)
        half: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for i, j, vec in raw:
            if i == j or not vec:
                continue
            key, sign = ((i, j), 1) if i < j else ((j, i), -1)
            if key not in half:
                half[key] = {l: sign * c for l, c in vec.items()}
        self._half = half
        self._half_items = tuple((k, tuple(sorted(v.items()))) for k, v in sorted(half.items()))
        ad: List[Dict[int, Dict[int, Fraction]]] = [dict() for _ in range(self.dim)]
        for (i, j), vec in half.items():
            ad[i][j] = dict(vec)
            ad[j][i] = {l: -c for l, c in vec.items()}
        self._ad = ad
        self._lock = threading.Lock()
        self._memo: Dict[str, object] = {}

    # basis handling

    def index(self, ref: BasisRef) -> int:
        if isinstance(ref, bool):
            raise ParameterError(f"bad basis reference {ref!r}")
        if isinstance(ref, int):
            if not 0 <= ref < self.dim:
                raise ParameterError(f"basis index {ref} out of range")
            return ref
        try:
            return self._index[ref]
        except KeyError:
            raise ParameterError(f"unknown basis element {ref!r}") from None

    def basis(self, ref: BasisRef) -> "AlgebraElement":
        coeffs = [Fraction(0)] * self.dim
        coeffs[self.index(ref)] = Fraction(1)
        return AlgebraElement(self, tuple(coeffs))

    def basis_elements(self) -> List["AlgebraElement"]:
        return [self.basis(i) for i in range(self.dim)]

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, (Fraction(0),) * self.dim)

    def element(self, coeffs) -> "AlgebraElement":
        """Element from a dense sequence or a ``{basis ref: coeff}`` mapping."""
        if isinstance(coeffs, Mapping):
            dense = [Fraction(0)] * self.dim
            for ref, c in coeffs.items():
                dense[self.index(ref)] = c if isinstance(c, Polynomial) else to_scalar(c)
            return AlgebraElement(self, tuple(dense))
        coeffs = tuple(c if isinstance(c, Polynomial) else to_scalar(c) for c in coeffs)
        if len(coeffs) != self.dim:
            raise ParameterError(f"expected {self.dim} coefficients, got {len(coeffs)}")
        return AlgebraElement(self, coeffs)

    def structure_table(self) -> Dict[Tuple[str, str], Dict[str, Fraction]]:
        """The canonical half table ``{(left, right): {name: coeff}}`` with left before right."""
        return {
            (self.names[i], self.names[j]): {self.names[l]: c for l, c in out}
            for (i, j), out in self._half_items
        }

    def basis_bracket(self, i: int, j: int) -> Dict[int, Fraction]:
        return dict(self._ad[i].get(j, {}))

    def ad_vector(self, i: int, vec: Mapping[int, Fraction]) -> Dict[int, Fraction]:
        """``[b_i, v]`` for a sparse rational vector ``v``."""
        out: Dict[int, Fraction] = {}
        adi = self._ad[i]
        for j, c in vec.items():
            col = adi.get(j)
            if col:
                for l, s in col.items():
                    out[l] = out.get(l, 0) + c * s
        return {l: c for l, c in out.items() if c}

    def _memoized(self, key: str, compute):
        with self._lock:
            if key not in self._memo:
                self._memo[key] = compute()
            return self._memo[key]

    def _signature(self):
        raw = sorted((i, j, tuple(sorted(v.items()))) for i, j, v in self._raw)
        return (self.names, getattr(self, "weights", None), self._half_items, tuple(raw))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return self._signature() == other._signature()

    def __hash__(self):
        return hash((self.names, getattr(self, "weights", None), self._half_items))

    def __repr__(self):
        label = f" {self.label}" if self.label else ""
        return f"<{type(self).__name__}{label} dim={self.dim}>"


class GradedLieAlgebra(LieAlgebra):
    """Lie algebra with a positive integer weight on each basis element."""

    def __init__(
        self,
        names: Sequence[str],
        weights: Sequence[int],
        brackets: Optional[Mapping] = None,
        label: Optional[str] = None,
        metadata: Optional[Mapping] = None,
    ):
        weights = tuple(weights)
        if len(weights) != len(names):
            raise ParameterError("one weight per basis element is required")
        for w in weights:
            if isinstance(w, bool) or not isinstance(w, int) or w < 1:
                raise ParameterError(f"weights must be positive integers, got {w!r}")
        self.weights: Tuple[int, ...] = weights
        super().__init__(names, brackets, label=label)
        self.metadata = dict(metadata or {})

    def grading_dims(self) -> Dict[int, int]:
        dims: Dict[int, int] = defaultdict(int)
        for w in self.weights:
            dims[w] += 1
        return dict(sorted(dims.items()))

    def weight_indices(self, w: int) -> List[int]:
        return [i for i, x in enumerate(self.weights) if x == w]


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    algebra: LieAlgebra
    coeffs: Tuple

    def _check(self, other: "AlgebraElement"):
        if not isinstance(other, AlgebraElement):
            raise IncompatibleOperandsError(f"not an algebra element: {other!r}")
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise IncompatibleOperandsError("operands belong to different Lie algebras")

    def __add__(self, other):
        self._check(other)
        return AlgebraElement(self.algebra, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return AlgebraElement(self.algebra, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return AlgebraElement(self.algebra, tuple(-a for a in self.coeffs))

    def __mul__(self, s):
        if isinstance(s, AlgebraElement):
            return NotImplemented
        return AlgebraElement(self.algebra, tuple(a * s for a in self.coeffs))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return (other.algebra is self.algebra or other.algebra == self.algebra) and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash(self.coeffs)

    def __getitem__(self, ref: BasisRef):
        return self.coeffs[self.algebra.index(ref)]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def sparse(self) -> Dict[int, Fraction]:
        return {i: c for i, c in enumerate(self.coeffs) if c != 0}

    def project(self, w: int) -> "AlgebraElement":
        """Component in ``V_w``."""
        ws = self.algebra.weights
        return AlgebraElement(self.algebra, tuple(c if ws[i] == w else Fraction(0) for i, c in enumerate(self.coeffs)))

    def components(self) -> Dict[int, "AlgebraElement"]:
        out = {}
        for w in sorted(set(self.algebra.weights)):
            p = self.project(w)
            if not p.is_zero():
                out[w] = p
        return out

    def to_dict(self) -> Dict[str, Fraction]:
        return {self.algebra.names[i]: c for i, c in enumerate(self.coeffs) if c != 0}

    def __repr__(self):
        body = " + ".join(f"{c}*{n}" for n, c in self.to_dict().items()) or "0"
        return f"<{body}>"


def bracket(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Bilinear antisymmetric extension of the structure table."""
    x._check(y)
    alg = x.algebra
    res = [Fraction(0)] * alg.dim
    xc, yc = x.coeffs, y.coeffs
    for (i, j), out in alg._half_items:
        xi, xj, yi, yj = xc[i], xc[j], yc[i], yc[j]
        if (xi == 0 or yj == 0) and (xj == 0 or yi == 0):
            continue
        t = xi * yj - xj * yi
        if t != 0:
            for l, c in out:
                res[l] = res[l] + c * t
    return AlgebraElement(alg, tuple(res))


# validation


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: Optional[Tuple[str, ...]] = None
    detail: str = ""

    def to_dict(self):
        return {"check": self.name, "passed": self.passed, "witness": list(self.witness) if self.witness else None, "detail": self.detail}


@dataclass
class ValidationReport:
    checks: List[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self):
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def _check_antisymmetry(alg: LieAlgebra) -> CheckResult:
    seen: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for i, j, vec in alg._raw:
        if i == j and vec:
            return CheckResult("antisymmetry", False, (alg.names[i], alg.names[j]), "nonzero self-bracket")
        key, sign = ((i, j), 1) if i < j else ((j, i), -1)
        canon = {l: sign * c for l, c in vec.items()}
        if key in seen and seen[key] != canon:
            return CheckResult("antisymmetry", False, (alg.names[i], alg.names[j]), "both orderings given, not negatives")
        seen[key] = canon
    return CheckResult("antisymmetry", True)


def _check_jacobi(alg: LieAlgebra) -> CheckResult:
    n = alg.dim
    for i in range(n):
        for j in range(i + 1, n):
            for l in range(j + 1, n):
                total: Dict[int, Fraction] = defaultdict(Fraction)
                for a, b, c in ((i, j, l), (j, l, i), (l, i, j)):
                    for k, v in alg.ad_vector(a, alg._ad[b].get(c, {})).items():
                        total[k] += v
                if any(total.values()):
                    return CheckResult(
                        "jacobi", False, (alg.names[i], alg.names[j], alg.names[l]), "cyclic sum of double brackets is nonzero"
                    )
    return CheckResult("jacobi", True)


def _check_grading(alg: GradedLieAlgebra) -> CheckResult:
    ws = alg.weights
    for (i, j), out in alg._half_items:
        for l, _ in out:
            if ws[l] != ws[i] + ws[j]:
                return CheckResult(
                    "grading",
                    False,
                    (alg.names[i], alg.names[j], alg.names[l]),
                    f"weights {ws[i]}+{ws[j]} bracket has support in weight {ws[l]}",
                )
    return CheckResult("grading", True)


def _lcs(alg: LieAlgebra) -> Tuple[List[int], bool]:
    def compute():
        current = [{i: Fraction(1)} for i in range(alg.dim)]
        dims = [alg.dim]
        for _ in range(alg.dim + 1):
            rows = [alg.ad_vector(j, v) for j in range(alg.dim) for v in current]
            nxt = linalg.span_basis(r for r in rows if r)
            if not nxt:
                return dims, True
            if len(nxt) >= dims[-1]:
                return dims, False
            dims.append(len(nxt))
            current = nxt
        return dims, False

    return alg._memoized("lcs", compute)


def _check_nilpotency(alg: LieAlgebra) -> CheckResult:
    dims, ok = _lcs(alg)
    if ok:
        return CheckResult("nilpotency", True, detail=f"class {len(dims)}")
    return CheckResult("nilpotency", False, detail=f"lower central series stabilizes at dimension {dims[-1]}")


def validate(alg: LieAlgebra) -> ValidationReport:
    """Antisymmetry, Jacobi on all basis triples, grading compatibility, nilpotency.

    The grading check is run only for :class:`GradedLieAlgebra`.
    """
    checks = [_check_antisymmetry(alg), _check_jacobi(alg)]
    if isinstance(alg, GradedLieAlgebra):
        checks.append(_check_grading(alg))
    checks.append(_check_nilpotency(alg))
    return ValidationReport(checks)


def lower_central_series(alg: LieAlgebra) -> List[int]:
    """Dimensions of the nonzero terms g = g_1 > g_2 > ... ."""
    return list(_lcs(alg)[0])


def nilpotency_class(alg: LieAlgebra) -> int:
    dims, ok = _lcs(alg)
    if not ok:
        raise NotNilpotentError(f"lower central series of {alg!r} does not reach 0")
    return len(dims)


# scaling


def scale_element(x: AlgebraElement, t) -> AlgebraElement:
    """The dilation s_t: multiply the ``V_i`` component by ``t**i``."""
    if t == 0:
        raise DomainError("s_0 is not an automorphism")
    ws = x.algebra.weights
    return AlgebraElement(x.algebra, tuple(c * t ** w if c != 0 else c for c, w in zip(x.coeffs, ws)))


def scale_is_automorphism_check(alg: GradedLieAlgebra, t, trials: int = 0, seed: int = 0) -> bool:
    """True iff s_t[x, y] == [s_t x, s_t y] on all basis pairs (and ``trials`` random pairs)."""
    basis = alg.basis_elements()
    pairs = [(basis[i], basis[j]) for i in range(alg.dim) for j in range(i + 1, alg.dim)]
    rng = random.Random(seed)
    for _ in range(trials):
        pairs.append((random_element(alg, rng), random_element(alg, rng)))
    for x, y in pairs:
        if scale_element(bracket(x, y), t) != bracket(scale_element(x, t), scale_element(y, t)):
            return False
    return True


def random_element(alg: LieAlgebra, rng: random.Random, size: int = 5) -> AlgebraElement:
    return AlgebraElement(alg, tuple(Fraction(rng.randint(-size, size), rng.randint(1, size)) for _ in range(alg.dim)))


# Baker-Campbell-Hausdorff


@lru_cache(maxsize=None)
def bch_series(order: int) -> Tuple[Tuple[Tuple[int, ...], Fraction], ...]:
    """Dynkin's series for log(e^X e^Y) through bracket length ``order``.

    Entries are ``(word, coeff)`` with letters 0 = X, 1 = Y; a word stands for
    the right-nested bracket [w1, [w2, [..., wn]]].  Words whose innermost pair
    repeats a letter vanish and are dropped; an innermost ``YX`` is rewritten
    as ``-XY``.
    """
    if order < 1:
        raise ParameterError("order must be at least 1")
    acc: Dict[Tuple[int, ...], Fraction] = defaultdict(Fraction)

    def rec(pairs: List[Tuple[int, int]], total: int):
        if pairs:
            n = len(pairs)
            denom = total
            word: List[int] = []
            for r, s in pairs:
                denom *= factorial(r) * factorial(s)
                word += [0] * r + [1] * s
            coeff = Fraction((-1) ** (n - 1), n * denom)
            w = tuple(word)
            if len(w) >= 2:
                if w[-1] == w[-2]:
                    w = None
                elif w[-2:] == (1, 0):
                    w = w[:-2] + (0, 1)
                    coeff = -coeff
            if w is not None:
                acc[w] += coeff
        for r in range(order - total + 1):
            for s in range(order - total - r + 1):
                if r + s:
                    rec(pairs + [(r, s)], total + r + s)

    rec([], 0)
    return tuple(sorted(((w, c) for w, c in acc.items() if c), key=lambda wc: (len(wc[0]), wc[0])))


def bch(u: AlgebraElement, v: AlgebraElement) -> AlgebraElement:
    """log(exp u exp v), exact through the nilpotency class."""
    u._check(v)
    order = nilpotency_class(u.algebra)
    memo: Dict[Tuple[int, ...], AlgebraElement] = {}

    def nested(w):
        r = memo.get(w)
        if r is None:
            if len(w) == 1:
                r = u if w[0] == 0 else v
            else:
                r = bracket(nested(w[:1]), nested(w[1:]))
            memo[w] = r
        return r

    total = u.algebra.zero()
    for w, c in bch_series(order):
        total = total + c * nested(w)
    return total


# plane exponents


@dataclass(frozen=True)
class ScalingExponentPair:
    """Tight exponents (a, b): volume scales like t^a as t -> 0 and t^b as t -> oo."""

    a: Fraction
    b: Fraction
    gram: Optional[Polynomial] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.a > self.b:
            raise ValueError(f"a={self.a} exceeds b={self.b}")


def _rows(vectors: Sequence[AlgebraElement]) -> List[Dict[int, Fraction]]:
    if not vectors:
        raise DependentVectorsError("no vectors given")
    alg = vectors[0].algebra
    for v in vectors[1:]:
        v._check(vectors[0])
    if not isinstance(alg, GradedLieAlgebra):
        raise ParameterError("plane exponents need a graded algebra")
    return [{i: to_scalar(c) for i, c in enumerate(v.coeffs) if c != 0} for v in vectors]


def gram_determinant(vectors: Sequence[AlgebraElement]) -> Polynomial:
    """det <s_t v_i, s_t v_j> as a polynomial in t (variable 0), graded basis orthonormal.

    The determinant is a polynomial in s = t^2 of degree at most the sum of
    the n largest weights, so it is recovered exactly by interpolation.
    """
    rows = _rows(vectors)
    ws = vectors[0].algebra.weights
    n = len(rows)
    bound = sum(sorted(ws, reverse=True)[:n])
    xs = [Fraction(s) for s in range(bound + 1)]
    ys = []
    for s in xs:
        scale = [s ** w for w in ws]
        gram = [[sum((c * rows[j].get(l, 0) * scale[l] for l, c in rows[i].items()), Fraction(0)) for j in range(n)] for i in range(n)]
        ys.append(linalg.determinant(gram))
    coeffs = linalg.interpolate(xs, ys)
    return Polynomial({(2 * d,): c for d, c in enumerate(coeffs) if c})


def plane_scaling_exponents(vectors: Sequence[AlgebraElement]) -> ScalingExponentPair:
    """Tight (a, b) for the plane spanned by ``vectors`` from the Gram determinant degrees."""
    rows = _rows(vectors)
    if not linalg.is_independent(rows):
        raise DependentVectorsError("vectors are linearly dependent")
    g = gram_determinant(vectors)
    return ScalingExponentPair(Fraction(g.min_degree(), 2), Fraction(g.degree(), 2), gram=g)


def filtration_exponents(vectors: Sequence[AlgebraElement]) -> ScalingExponentPair:
    """Same exponents by echelonization: weight sums of pivot columns.

    Pivoting on highest weight first (ties: lowest index) selects a
    maximum-weight column basis, so its weight sum is the top exponent;
    lowest weight first gives the bottom exponent.
    """
    rows = _rows(vectors)
    if not linalg.is_independent(rows):
        raise DependentVectorsError("vectors are linearly dependent")
    ws = vectors[0].algebra.weights
    cols = range(len(ws))
    top = linalg.pivot_columns(rows, sorted(cols, key=lambda i: (-ws[i], i)))
    bottom = linalg.pivot_columns(rows, sorted(cols, key=lambda i: (ws[i], i)))
    return ScalingExponentPair(Fraction(sum(ws[i] for i in bottom)), Fraction(sum(ws[i] for i in top)))


def homogeneous_dimension(alg: GradedLieAlgebra) -> int:
    return sum(alg.weights)


# subalgebras


@dataclass(frozen=True, eq=False)
class Subalgebra:
    parent: LieAlgebra
    span: Tuple[AlgebraElement, ...]
    structure: LieAlgebra

    @property
    def dim(self) -> int:
        return len(self.span)

    def coordinates(self, x: AlgebraElement) -> Optional[List[Fraction]]:
        """Coordinates of ``x`` in the span basis, or None if ``x`` is outside."""
        return linalg.solve_combination([v.sparse() for v in self.span], x.sparse())

    def include(self, coords: Sequence) -> AlgebraElement:
        total = self.parent.zero()
        for c, v in zip(coords, self.span):
            total = total + c * v
        return total


def _span_names(parent: LieAlgebra, vectors: Sequence[AlgebraElement]) -> List[str]:
    names = []
    for i, v in enumerate(vectors):
        nz = v.sparse()
        if len(nz) == 1 and list(nz.values())[0] == 1:
            names.append(parent.names[next(iter(nz))])
        else:
            names.append(f"v{i + 1}")
    if len(set(names)) != len(names):
        names = [f"v{i + 1}" for i in range(len(vectors))]
    return names


def subalgebra_from_span(alg: LieAlgebra, vectors: Sequence[AlgebraElement], names: Optional[Sequence[str]] = None) -> Subalgebra:
    vectors = tuple(vectors)
    for v in vectors:
        if v.algebra is not alg and v.algebra != alg:
            raise IncompatibleOperandsError("span vectors belong to another algebra")
    if not vectors or not linalg.is_independent([v.sparse() for v in vectors]):
        raise DependentVectorsError("span vectors must be nonempty and linearly independent")
    names = list(names) if names is not None else _span_names(alg, vectors)
    rows = [v.sparse() for v in vectors]
    table = {}
    for i in range(len(vectors)):
        for j in range(i + 1, len(vectors)):
            b = bracket(vectors[i], vectors[j])
            if b.is_zero():
                continue
            coords = linalg.solve_combination(rows, b.sparse())
            if coords is None:
                raise ClosureError(
                    f"[{names[i]}, {names[j]}] = {b!r} is not in the span",
                    witness=(names[i], names[j]),
                    value=b,
                )
            table[(i, j)] = {l: c for l, c in enumerate(coords) if c}
    structure = LieAlgebra(names, table, label=f"subalgebra of {alg.label or 'algebra'}")
    return Subalgebra(alg, vectors, structure)


def abelian_algebra(n: int, weights: Optional[Sequence[int]] = None) -> GradedLieAlgebra:
    if n < 1:
        raise ParameterError("dimension must be positive")
    return GradedLieAlgebra([f"x{i + 1}" for i in range(n)], weights or [1] * n, {}, label=f"abelian:{n}")
