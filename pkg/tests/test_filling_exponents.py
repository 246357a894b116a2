from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from carnot.builtins import heisenberg_algebra
from carnot.cohomology import Cochain
from carnot.errors import HypothesisError, LedgerGapError, NotApplicableError, ParameterError
from carnot.filling_exponents import (
    CITED,
    JETPHORIZ,
    SIMPLEEXTEND,
    VERIFIED,
    HorizontalityLedger,
    LedgerEntry,
    Provenance,
    certify_algebra,
    certify_jet_group,
    euclidean_upper,
    extend_ledger,
    generic_ledger,
    generic_upper,
    jet_candidates,
    jet_ledger,
    lower_bound_certificate,
    plane_ledger_entry,
    upper_from_ledger,
)
from carnot.jet_group import make_jet_algebra
from carnot.lie_core import subalgebra_from_span

H3 = heisenberg_algebra(1)


def test_euclidean_upper():
    assert euclidean_upper(2, 3) == 2
    assert euclidean_upper(3, 3) == Fraction(3, 2)
    with pytest.raises(NotApplicableError):
        euclidean_upper(4, 3)
    with pytest.raises(NotApplicableError):
        euclidean_upper(1, 3)


def test_extend_ledger_chains_provenance():
    base = LedgerEntry(2, 2, 2, Provenance(CITED, JETPHORIZ))
    e = extend_ledger(base, 3)
    assert (e.dim, e.a, e.b) == (3, 3, 5)
    assert e.provenance.label() == f"cited: {SIMPLEEXTEND}"
    assert e.source is base
    assert (extend_ledger(base, 1).a, extend_ledger(base, 1).b) == (3, 3)
    with pytest.raises(ParameterError):
        extend_ledger(base, 0)


def test_ledger_entries_respect_order():
    with pytest.raises(ParameterError):
        LedgerEntry(1, 2, 1, Provenance(CITED, "x"))
    with pytest.raises(ParameterError):
        Provenance("guessed", "x")


@given(st.integers(1, 6), st.integers(2, 8))
def test_generic_ledger_matches_closed_form(c, n):
    ledger = generic_ledger(c, n)
    assert (ledger.entry(n).a, ledger.entry(n).b) == (n, 1 + c * (n - 1))
    assert upper_from_ledger(ledger, n) == generic_upper(c, n)


@given(st.integers(1, 6), st.integers(2, 8))
def test_generic_bound_never_beats_euclidean(c, n):
    assert generic_upper(c, n) >= euclidean_upper(n, n)
    assert generic_upper(1, n) == Fraction(n, n - 1)


def test_generic_upper_examples():
    assert [generic_upper(c, 2) for c in range(1, 7)] == [2, 3, 4, 5, 6, 7]
    assert generic_upper(2, 3) == Fraction(5, 2)


@pytest.mark.parametrize("m,k", [(1, 1), (2, 2), (3, 2)])
def test_jet_ledger(m, k):
    ledger = jet_ledger(m, k)
    for i in range(1, k + 1):
        assert ledger.entry(i).provenance.reference == JETPHORIZ
    top = ledger.entry(k + 1)
    assert (top.a, top.b) == (k + 1, k + m + 1)
    assert top.provenance.reference == SIMPLEEXTEND
    assert upper_from_ledger(ledger, k + 1) == Fraction(k + m + 1, k)


def test_missing_ledger_entry_names_gap():
    with pytest.raises(LedgerGapError) as err:
        upper_from_ledger(HorizontalityLedger([LedgerEntry(2, 2, 2, Provenance(CITED, "x"))]), 2)
    assert err.value.missing == 1


def test_plane_ledger_entry_is_verified():
    e = plane_ledger_entry(2, [H3.basis("x1"), H3.basis("z")])
    assert (e.a, e.b) == (3, 3)
    assert e.provenance.kind == VERIFIED


@pytest.mark.parametrize("m,k", [(m, k) for m in (1, 2, 3) for k in (1, 2, 3)])
def test_jet_certificates_are_sharp(m, k):
    certs = certify_jet_group(m, k)
    assert [c.n for c in certs] == list(range(2, k + 2))
    for c in certs:
        expected = Fraction(c.n, c.n - 1) if c.n <= k else Fraction(k + m + 1, k)
        assert c.sharp and c.lower.exponent == c.upper.exponent == expected
        assert c.lower.exponent > 1
        assert c.verify()
        assert not c.conditional and not c.gaps


def test_jet_certificate_rules_and_delta():
    certs = certify_jet_group(2, 2)
    assert [c.upper.rule for c in certs] == ["euclidean", "ledger"]
    d = certs[-1].to_dict()
    assert d["delta"] == {"dimension": 2, "equals": "FV_3"}
    assert d["exponent"] == "5/2"
    assert d["lower"]["hypotheses"]["boundary horizontality"] == f"cited: {JETPHORIZ}"
    assert d["lower"]["hypotheses"]["cocycle"] == VERIFIED


def test_out_of_range_dimension_is_not_applicable():
    (cert,) = certify_jet_group(1, 1, dims=[99])
    assert cert.lower is None and cert.upper is None
    assert cert.gaps[0].startswith("not applicable")


def test_budget_gap_is_reported():
    certs = certify_jet_group(1, 2, budget=3)
    assert all(c.lower is None for c in certs)
    assert all(any(g.startswith("budget exceeded") for g in c.gaps) for c in certs)


def test_tampered_certificate_fails_verification():
    cert = certify_jet_group(1, 2)[0]
    cert.lower.exponent = Fraction(7)
    assert not cert.verify()


def test_lower_bound_hypotheses():
    alg = make_jet_algebra(1, 1)
    ledger = jet_ledger(1, 1)
    a = subalgebra_from_span(alg, [alg.basis("e1"), alg.basis("y(0)")])
    mixed = Cochain(alg, 2, {(0, 2): 1, (0, 1): 1})
    with pytest.raises(HypothesisError) as err:
        lower_bound_certificate(mixed, a, ledger)
    assert err.value.hypothesis == "homogeneous weight"
    with pytest.raises(HypothesisError) as err:
        lower_bound_certificate(Cochain.dual(alg, "e1"), a, ledger)
    assert err.value.hypothesis == "degree"
    vanishing = Cochain.monomial(alg, ["e1", "y(1)"])
    with pytest.raises(HypothesisError) as err:
        lower_bound_certificate(vanishing, a, ledger)
    assert err.value.hypothesis == "nonvanishing"
    with pytest.raises(HypothesisError) as err:
        alg2 = make_jet_algebra(2, 1)
        a2 = subalgebra_from_span(alg2, [alg2.basis("e1"), alg2.basis("y(0)")])
        lower_bound_certificate(Cochain.monomial(alg2, ["y(2)", "y(0)"]), a2, jet_ledger(2, 1))
    assert err.value.hypothesis == "cocycle"


def test_lower_bound_needs_ledger_entry():
    z, a = jet_candidates(1, 1)[2][0]
    with pytest.raises(HypothesisError) as err:
        lower_bound_certificate(z, a, HorizontalityLedger())
    assert err.value.hypothesis == "ledger"


def test_user_algebra_certificate_is_conditional():
    z = Cochain.monomial(H3, ["x1", "z"])
    a = subalgebra_from_span(H3, [H3.basis("x1"), H3.basis("z")])
    (cert,) = certify_algebra(H3, [(z, a)])
    assert cert.conditional and cert.sharp
    assert cert.upper.rule == "generic"
    assert cert.lower.exponent == 3
    assert "delta" not in cert.to_dict()
    assert cert.verify()


def test_user_algebra_takes_best_candidate_and_records_rejections():
    good = (Cochain.monomial(H3, ["x1", "z"]), subalgebra_from_span(H3, [H3.basis("x1"), H3.basis("z")]))
    weak = (Cochain.monomial(H3, ["x1", "y1"]), subalgebra_from_span(H3, [H3.basis("x1"), H3.basis("z")]))
    (cert,) = certify_algebra(H3, [weak, good])
    assert cert.lower.exponent == 3
    assert len(cert.rejected) == 1
