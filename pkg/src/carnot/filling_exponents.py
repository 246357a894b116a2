"""Certified exponents for higher-order filling functions.

Two kinds of evidence go into a certificate.  Algebraic hypotheses (cocycle,
weight, subalgebra closure, nonvanishing in cohomology) are checked by the
code and marked ``verified``; geometric premises about horizontal maps on
skeleta are ``cited`` with the result they come from.  A certificate for a
user-supplied algebra rests on cited premises nobody proved for that algebra,
so it is flagged ``conditional``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .cohomology import Cochain, NonvanishingEvidence, differential, full_wedge_cochain, nonzero_in_cohomology
from .errors import BudgetError, CarnotError, HypothesisError, LedgerGapError, NotApplicableError, ParameterError
from .jet_group import make_jet_algebra, y_name
from .lie_core import (
    AlgebraElement,
    GradedLieAlgebra,
    Subalgebra,
    nilpotency_class,
    plane_scaling_exponents,
    subalgebra_from_span,
)
from .serialization import format_rational

VERIFIED = "verified"
CITED = "cited"

JETPHORIZ = "Lemma jetphoriz"
SIMPLEEXTEND = "Lemma simpleextend"
ONE_SKELETON = "horizontal 1-skeleton of any nilpotent group with a lattice"
USER_PREMISE = "user-supplied premise"


@dataclass(frozen=True)
class Provenance:
    kind: str
    reference: str
    evidence: object = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in (VERIFIED, CITED):
            raise ParameterError(f"provenance must be verified or cited, got {self.kind!r}")

    def label(self) -> str:
        return f"{self.kind}: {self.reference}"


@dataclass(frozen=True)
class LedgerEntry:
    """(a_i, b_i)-horizontality on the i-skeleton."""

    dim: int
    a: Fraction
    b: Fraction
    provenance: Provenance
    source: Optional["LedgerEntry"] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.a > self.b:
            raise ParameterError(f"ledger entry at {self.dim}: a={self.a} exceeds b={self.b}")

    def to_dict(self):
        out = {
            "dim": self.dim,
            "a": format_rational(self.a),
            "b": format_rational(self.b),
            "provenance": self.provenance.label(),
        }
        if self.source is not None:
            out["extends"] = self.source.dim
        return out


class HorizontalityLedger:
    def __init__(self, entries: Iterable[LedgerEntry] = ()):
        self.entries: Dict[int, LedgerEntry] = {}
        for e in entries:
            self.entries[e.dim] = e

    def entry(self, i: int) -> LedgerEntry:
        try:
            return self.entries[i]
        except KeyError:
            raise LedgerGapError(f"ledger has no entry for the {i}-skeleton", missing=i) from None

    def with_entry(self, e: LedgerEntry) -> "HorizontalityLedger":
        return HorizontalityLedger(list(self.entries.values()) + [e])

    def __contains__(self, i):
        return i in self.entries

    def to_dict(self):
        return [self.entries[i].to_dict() for i in sorted(self.entries)]


def extend_ledger(entry: LedgerEntry, nil_class: int) -> LedgerEntry:
    """Cone off the next skeleton: (a, b) -> (a + 1, b + c)."""
    if nil_class < 1:
        raise ParameterError("nilpotency class must be at least 1")
    return LedgerEntry(entry.dim + 1, entry.a + 1, entry.b + nil_class, Provenance(CITED, SIMPLEEXTEND), source=entry)


def plane_ledger_entry(dim: int, vectors: Sequence[AlgebraElement]) -> LedgerEntry:
    """Entry whose exponents are computed from a tangent plane, attached as evidence."""
    if len(vectors) != dim:
        raise ParameterError(f"a {dim}-skeleton entry needs {dim} tangent vectors")
    pair = plane_scaling_exponents(vectors)
    return LedgerEntry(dim, pair.a, pair.b, Provenance(VERIFIED, "plane exponents", evidence=(tuple(vectors), pair)))


def jet_ledger(m: int, k: int) -> HorizontalityLedger:
    entries = [LedgerEntry(i, i, i, Provenance(CITED, JETPHORIZ)) for i in range(1, k + 1)]
    entries.append(extend_ledger(entries[-1], m + 1))
    return HorizontalityLedger(entries)


def generic_ledger(nil_class: int, top: int) -> HorizontalityLedger:
    entries = [LedgerEntry(1, 1, 1, Provenance(CITED, ONE_SKELETON))]
    while entries[-1].dim < top:
        entries.append(extend_ledger(entries[-1], nil_class))
    return HorizontalityLedger(entries)


# upper bounds


def euclidean_upper(n: int, horizontal_dim: int) -> Fraction:
    if n < 2 or n > horizontal_dim:
        raise NotApplicableError(f"euclidean bound needs 2 <= n <= {horizontal_dim}, got n={n}")
    return Fraction(n, n - 1)


def upper_from_ledger(ledger: HorizontalityLedger, j: int, group_dim: Optional[int] = None) -> Fraction:
    """b_j / a_{j-1}."""
    if group_dim is not None and j >= group_dim:
        raise NotApplicableError(f"ledger bound needs j < dim G = {group_dim}")
    return ledger.entry(j).b / ledger.entry(j - 1).a


def generic_upper(nil_class: int, n: int) -> Fraction:
    if nil_class < 1 or n < 2:
        raise ParameterError("need class >= 1 and n >= 2")
    return Fraction(nil_class * (n - 1) + 1, n - 1)


@dataclass
class UpperBound:
    exponent: Fraction
    rule: str  # euclidean | ledger | generic
    trail: Tuple[LedgerEntry, ...]

    def to_dict(self):
        return {
            "exponent": format_rational(self.exponent),
            "rule": self.rule,
            "trail": [e.to_dict() for e in self.trail],
        }


@dataclass
class LowerBound:
    exponent: Fraction
    cocycle: Cochain
    weight: int
    subalgebra: Subalgebra
    evidence: NonvanishingEvidence
    ledger_entry: LedgerEntry

    def to_dict(self):
        return {
            "exponent": format_rational(self.exponent),
            "weight": self.weight,
            "cocycle": self.cocycle.to_dict(),
            "subalgebra": [{n: format_rational(c) for n, c in v.to_dict().items()} for v in self.subalgebra.span],
            "hypotheses": {
                "subalgebra closure": VERIFIED,
                "homogeneous weight": VERIFIED,
                "cocycle": VERIFIED,
                "nonzero restriction in cohomology": VERIFIED,
                "boundary horizontality": self.ledger_entry.provenance.label(),
            },
            "evidence": {k: _stringify(v) for k, v in self.evidence.to_dict().items()},
            "ledger_entry": self.ledger_entry.to_dict(),
        }


def _stringify(v):
    if isinstance(v, dict):
        return {str(k): _stringify(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_stringify(x) for x in v]
    if isinstance(v, Fraction):
        return format_rational(v)
    return v


def lower_bound_certificate(
    z: Cochain, a: Subalgebra, ledger: HorizontalityLedger, budget: Optional[int] = None
) -> LowerBound:
    """Lower bound exponent i/b_{n-1} from a weight-i cocycle that survives restriction to an n-dim subalgebra."""
    n = a.dim
    if z.degree != n:
        raise HypothesisError("degree", f"cocycle degree {z.degree} differs from subalgebra dimension {n}")
    w = z.weight()
    if w is None:
        raise HypothesisError("homogeneous weight", "cocycle is zero or mixes weights", witness=sorted(set(z.weights().values())))
    dz = differential(z, budget)
    if not dz.is_zero():
        raise HypothesisError("cocycle", f"d(z) = {dz!r}", witness=dz)
    evidence = nonzero_in_cohomology(z, a, budget)
    if not evidence.nonzero:
        raise HypothesisError("nonvanishing", "restriction is a coboundary", witness=evidence.preimage)
    try:
        entry = ledger.entry(n - 1)
    except LedgerGapError as exc:
        raise HypothesisError("ledger", str(exc), witness=n - 1) from None
    return LowerBound(Fraction(w) / entry.b, z, w, a, evidence, entry)


# certificates


@dataclass
class ExponentCertificate:
    n: int
    lower: Optional[LowerBound] = None
    upper: Optional[UpperBound] = None
    conditional: bool = False
    report_delta: bool = False
    gaps: List[str] = field(default_factory=list)
    rejected: List[str] = field(default_factory=list)

    @property
    def sharp(self) -> bool:
        return self.lower is not None and self.upper is not None and self.lower.exponent == self.upper.exponent

    @property
    def exponent(self) -> Optional[Fraction]:
        return self.lower.exponent if self.sharp else None

    def verify(self) -> bool:
        """Recheck every verified hypothesis and the exponent arithmetic from scratch."""
        if self.lower is not None:
            lb = self.lower
            try:
                sub = subalgebra_from_span(lb.subalgebra.parent, lb.subalgebra.span, lb.subalgebra.structure.names)
            except CarnotError:
                return False
            if not lb.cocycle.degree == sub.dim == self.n:
                return False
            if lb.cocycle.weight() != lb.weight:
                return False
            if not differential(lb.cocycle).is_zero():
                return False
            if not lb.evidence.verify():
                return False
            if lb.ledger_entry.dim != self.n - 1 or lb.exponent != Fraction(lb.weight) / lb.ledger_entry.b:
                return False
        if self.upper is not None:
            ub = self.upper
            if ub.rule == "euclidean":
                if ub.exponent != Fraction(self.n, self.n - 1):
                    return False
            else:
                by_dim = {e.dim: e for e in ub.trail}
                if self.n not in by_dim or self.n - 1 not in by_dim:
                    return False
                if ub.exponent != by_dim[self.n].b / by_dim[self.n - 1].a:
                    return False
        return True

    def to_dict(self):
        out = {
            "n": self.n,
            "lower": self.lower.to_dict() if self.lower else None,
            "upper": self.upper.to_dict() if self.upper else None,
            "sharp": self.sharp,
            "conditional": self.conditional,
            "exponent": format_rational(self.exponent) if self.exponent is not None else None,
            "gaps": list(self.gaps),
        }
        if self.rejected:
            out["rejected"] = list(self.rejected)
        if self.report_delta:
            out["delta"] = {"dimension": self.n - 1, "equals": f"FV_{self.n}"}
        return out


def jet_candidates(m: int, k: int) -> Dict[int, List[Tuple[Cochain, Subalgebra]]]:
    """z_n = e_1^* ^ ... ^ e_n^* on <e_1..e_n> for n <= k, and z_{k+1} = z_k ^ w^* on R^k + W_0."""
    alg = make_jet_algebra(m, k)
    out: Dict[int, List[Tuple[Cochain, Subalgebra]]] = {}
    es = [f"e{i + 1}" for i in range(k)]
    for n in range(1, k + 1):
        z = full_wedge_cochain(alg, es[:n])
        a = subalgebra_from_span(alg, [alg.basis(e) for e in es[:n]])
        out[n] = [(z, a)]
    w = y_name((0,) * k)
    z = full_wedge_cochain(alg, es + [w])
    a = subalgebra_from_span(alg, [alg.basis(e) for e in es + [w]])
    out[k + 1] = [(z, a)]
    return out


def _not_applicable(n: int, why: str) -> ExponentCertificate:
    return ExponentCertificate(n, gaps=[f"not applicable: {why}"])


def certify_jet_group(m: int, k: int, dims: Optional[Iterable[int]] = None, budget: Optional[int] = None) -> List[ExponentCertificate]:
    alg = make_jet_algebra(m, k)
    ledger = jet_ledger(m, k)
    candidates = jet_candidates(m, k)
    dims = list(range(2, k + 2)) if dims is None else list(dims)
    certs = []
    for n in dims:
        if not 2 <= n <= k + 1:
            certs.append(_not_applicable(n, f"certified dimensions for J^{m}(R^{k}) are 2..{k + 1}"))
            continue
        cert = ExponentCertificate(n, report_delta=True)
        if n <= k:
            exp = euclidean_upper(n, k)
            if exp != upper_from_ledger(ledger, n, alg.dim):
                raise AssertionError("euclidean and ledger upper bounds disagree")
            cert.upper = UpperBound(exp, "euclidean", (ledger.entry(n - 1), ledger.entry(n)))
        else:
            cert.upper = UpperBound(
                upper_from_ledger(ledger, n, alg.dim), "ledger", (ledger.entry(n - 1), ledger.entry(n))
            )
        best = None
        for z, a in candidates[n]:
            try:
                lb = lower_bound_certificate(z, a, ledger, budget)
            except BudgetError as exc:
                cert.gaps.append(f"budget exceeded: {exc}")
                continue
            if best is None or lb.exponent > best.exponent:
                best = lb
        cert.lower = best
        certs.append(cert)
    return certs


def certify_algebra(
    alg: GradedLieAlgebra,
    candidates: Sequence[Tuple[Cochain, Subalgebra]],
    ledger: Optional[HorizontalityLedger] = None,
    dims: Optional[Iterable[int]] = None,
    budget: Optional[int] = None,
) -> List[ExponentCertificate]:
    """Conditional certificates for an arbitrary Carnot algebra from supplied (cocycle, subalgebra) pairs.

    Without a ledger, the generic one (1,1) -> (n, 1 + c(n-1)) is used.
    """
    c = nilpotency_class(alg)
    by_dim: Dict[int, List[Tuple[Cochain, Subalgebra]]] = {}
    for z, a in candidates:
        by_dim.setdefault(a.dim, []).append((z, a))
    dims = sorted(by_dim) if dims is None else list(dims)
    rule = "ledger"
    if ledger is None:
        ledger = generic_ledger(c, max([2] + dims))
        rule = "generic"
    certs = []
    for n in dims:
        if n < 2 or n > alg.dim:
            certs.append(_not_applicable(n, f"dimension must lie in 2..{alg.dim}"))
            continue
        cert = ExponentCertificate(n, conditional=True)
        try:
            exp = upper_from_ledger(ledger, n, alg.dim) if n < alg.dim else None
        except LedgerGapError as exc:
            cert.gaps.append(f"upper bound: {exc}")
            exp = None
        if exp is not None:
            if rule == "generic" and exp != generic_upper(c, n):
                raise AssertionError("generic ledger disagrees with the closed form")
            cert.upper = UpperBound(exp, rule, (ledger.entry(n - 1), ledger.entry(n)))
        elif n >= alg.dim:
            cert.gaps.append("upper bound: ledger bounds need n < dim G")
        best = None
        for z, a in by_dim.get(n, []):
            try:
                lb = lower_bound_certificate(z, a, ledger, budget)
            except HypothesisError as exc:
                cert.rejected.append(str(exc))
                continue
            except BudgetError as exc:
                cert.gaps.append(f"budget exceeded: {exc}")
                continue
            if best is None or lb.exponent > best.exponent:
                best = lb
        cert.lower = best
        if best is None and not by_dim.get(n):
            cert.gaps.append("lower bound: no candidate pair of this dimension")
        certs.append(cert)
    return certs
