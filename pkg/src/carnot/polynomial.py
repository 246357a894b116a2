"""Sparse multivariate polynomials with exact rational coefficients.

A monomial is an exponent tuple with trailing zeros stripped, so polynomials
in different numbers of variables combine without padding.  Variables are
identified by position; ``Polynomial.variable(3)`` is ``x3``.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial
from numbers import Rational
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

Monomial = Tuple[int, ...]


def _strip(mono: Iterable[int]) -> Monomial:
    mono = tuple(mono)
    n = len(mono)
    while n and mono[n - 1] == 0:
        n -= 1
    return mono[:n]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if len(a) < len(b):
        a, b = b, a
    return tuple(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a))


class Polynomial:
    __slots__ = ("_terms", "_nvars", "_hash")

    def __init__(self, terms: Optional[Mapping[Iterable[int], object]] = None, nvars: int = 0):
        clean: Dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                m = _strip(mono)
                s = clean.get(m, 0) + c
                if s:
                    clean[m] = s
                else:
                    clean.pop(m, None)
        self._terms = clean
        self._nvars = max([nvars] + [len(m) for m in clean])
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction], nvars: int) -> "Polynomial":
        p = object.__new__(cls)
        p._terms = terms
        p._nvars = max([nvars] + [len(m) for m in terms])
        p._hash = None
        return p

    @classmethod
    def constant(cls, c, nvars: int = 0) -> "Polynomial":
        return cls({(): c}, nvars)

    @classmethod
    def variable(cls, i: int, nvars: int = 0) -> "Polynomial":
        mono = [0] * (i + 1)
        mono[i] = 1
        return cls({tuple(mono): 1}, max(nvars, i + 1))

    @classmethod
    def variables(cls, start: int, count: int) -> list:
        return [cls.variable(start + i) for i in range(count)]

    @property
    def nvars(self) -> int:
        return self._nvars

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, mono: Iterable[int]) -> Fraction:
        return self._terms.get(_strip(mono), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == () for m in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def min_degree(self) -> int:
        return min((sum(m) for m in self._terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((m[i] if i < len(m) else 0 for m in self._terms), default=-1)

    # arithmetic

    @staticmethod
    def _coerce(other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Rational)):
            return Polynomial.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(out, max(self._nvars, other._nvars))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self._terms.items()}, self._nvars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            if other == 0:
                return Polynomial._raw({}, self._nvars)
            c0 = Fraction(other)
            return Polynomial._raw({m: c * c0 for m, c in self._terms.items()}, self._nvars)
        if not isinstance(other, Polynomial):
            return NotImplemented
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial._raw(out, max(self._nvars, other._nvars))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Polynomial.constant(1, self._nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._terms == other._terms
        if isinstance(other, (int, Rational)):
            if other == 0:
                return not self._terms
            return self._terms == {(): Fraction(other)}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_term())
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # calculus and evaluation

    def derivative(self, i: int, order: int = 1) -> "Polynomial":
        out: Dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            e = m[i] if i < len(m) else 0
            if e < order:
                continue
            f = c
            for j in range(order):
                f *= e - j
            nm = list(m)
            nm[i] -= order
            out[_strip(nm)] = out.get(_strip(nm), 0) + f
        return Polynomial(out, self._nvars)

    def partial(self, alpha: Sequence[int]) -> "Polynomial":
        """Mixed partial derivative d^alpha."""
        p = self
        for i, a in enumerate(alpha):
            if a:
                p = p.derivative(i, a)
        return p

    def taylor_part(self, alpha: Sequence[int]) -> "Polynomial":
        """``d^alpha f / alpha!`` as a polynomial."""
        denom = 1
        for a in alpha:
            denom *= factorial(a)
        return self.partial(alpha) / denom

    def substitute(self, values: Mapping[int, object]):
        """Replace variable ``i`` by ``values[i]`` (rational or Polynomial).

        Variables absent from ``values`` are kept.  Returns a Polynomial, or a
        plain rational if every variable was replaced by a rational.
        """
        powers: Dict[Tuple[int, int], object] = {}

        def pw(i, e):
            key = (i, e)
            if key not in powers:
                powers[key] = values[i] ** e
            return powers[key]

        total = Fraction(0)
        for m, c in self._terms.items():
            term = c
            keep = []
            for i, e in enumerate(m):
                if e == 0:
                    keep.append(0)
                elif i in values:
                    term = term * pw(i, e)
                    keep.append(0)
                else:
                    keep.append(e)
            if any(keep):
                term = term * Polynomial({tuple(keep): 1})
            total = total + term
        if isinstance(total, Polynomial) and total.is_constant():
            return total.constant_term()
        return total

    def __call__(self, *args):
        return self.substitute(dict(enumerate(args)))

    def __repr__(self):
        return f"Polynomial({self.format()})"

    def format(self, names: Optional[Sequence[str]] = None) -> str:
        if not self._terms:
            return "0"

        def var(i):
            return names[i] if names is not None else f"x{i}"

        parts = []
        for m in sorted(self._terms, key=lambda m: (sum(m), m)):
            c = self._terms[m]
            factors = [var(i) if e == 1 else f"{var(i)}^{e}" for i, e in enumerate(m) if e]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")


def as_polynomial(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    return Polynomial.constant(x)


def monomial_power(base: Sequence, alpha: Sequence[int]):
    """``prod base[i]**alpha[i]`` for rational or Polynomial entries."""
    out = 1
    for b, a in zip(base, alpha):
        if a:
            out = out * b ** a
    return out
