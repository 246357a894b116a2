from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from carnot.builtins import builtin, builtin_names, heisenberg_algebra
from carnot.cohomology import (
    Cochain,
    betti_numbers,
    check_budget,
    check_scaling_weights,
    cohomology_by_weight,
    differential,
    exterior_basis,
    full_wedge_cochain,
    nonzero_in_cohomology,
    restrict,
    sort_with_sign,
    wedge,
    weight_decompose,
)
from carnot.errors import BudgetError, IncompatibleOperandsError, NotCocycleError
from carnot.jet_group import make_jet_algebra, y_name
from carnot.lie_core import abelian_algebra, subalgebra_from_span
from tests.oracles import ce_differential_value
from tests.strategies import elements

H3 = heisenberg_algebra(1)


def cochains(alg, degree):
    monos = list(combinations(range(alg.dim), degree))
    return st.dictionaries(st.sampled_from(monos), st.fractions(-3, 3, max_denominator=2), min_size=1, max_size=4).map(
        lambda t: Cochain(alg, degree, t)
    )


def test_sort_with_sign():
    assert sort_with_sign((2, 0, 1)) == (1, (0, 1, 2))
    assert sort_with_sign((1, 0)) == (-1, (0, 1))
    assert sort_with_sign((1, 1))[0] == 0


def test_heisenberg_differential():
    z = Cochain.dual(H3, "z")
    assert differential(z) == -Cochain.monomial(H3, ["x1", "y1"])


def test_heisenberg_betti_numbers():
    assert betti_numbers(H3) == [1, 2, 2, 1]


def test_jet_betti_numbers_have_zero_euler_characteristic():
    b = betti_numbers(make_jet_algebra(2, 2))
    assert b == [1, 5, 8, 11, 14, 11, 8, 5, 1]
    assert sum((-1) ** i * x for i, x in enumerate(b)) == 0


def test_abelian_betti_numbers_are_binomial():
    assert betti_numbers(abelian_algebra(4)) == [1, 4, 6, 4, 1]


@pytest.mark.parametrize("name", builtin_names())
def test_d_squared_vanishes_on_every_monomial(name):
    alg = builtin(name)
    for n in range(alg.dim - 1):
        for mono in exterior_basis(alg, n):
            assert differential(differential(Cochain(alg, n, {mono: 1}))).is_zero()


@given(st.data())
def test_differential_matches_evaluation_formula(data):
    alg = builtin(data.draw(st.sampled_from(builtin_names())))
    n = data.draw(st.integers(1, min(3, alg.dim - 1)))
    z = data.draw(cochains(alg, n))
    vecs = [data.draw(elements(alg)) for _ in range(n + 1)]
    assert differential(z)(*vecs) == ce_differential_value(alg, z, vecs)


@given(st.data())
def test_differential_preserves_weight(data):
    alg = builtin(data.draw(st.sampled_from(builtin_names())))
    n = data.draw(st.integers(1, alg.dim - 1))
    z = data.draw(cochains(alg, n))
    for w, part in weight_decompose(z).items():
        dz = differential(part)
        assert dz.is_zero() or dz.weight() == w


@given(st.data())
def test_differential_is_an_antiderivation(data):
    alg = builtin(data.draw(st.sampled_from(builtin_names())))
    a, b = data.draw(cochains(alg, 1)), data.draw(cochains(alg, 2))
    lhs = differential(wedge(a, b))
    rhs = wedge(differential(a), b) - wedge(a, differential(b))
    assert lhs == rhs


@given(st.data())
def test_dilation_scales_weight_parts(data):
    alg = builtin(data.draw(st.sampled_from(builtin_names())))
    assert check_scaling_weights(data.draw(cochains(alg, 2)))


def test_cohomology_representatives_by_weight():
    reps = cohomology_by_weight(H3, 2)
    assert sorted(reps) == [3]
    assert len(reps[3]) == 2
    assert all(differential(z).is_zero() for z in reps[3])
    assert sum(len(v) for v in cohomology_by_weight(make_jet_algebra(2, 2), 1).values()) == 5
    assert cohomology_by_weight(make_jet_algebra(3, 2), 0) == {0: [Cochain.one(make_jet_algebra(3, 2))]}


@pytest.mark.parametrize("m,k", [(m, k) for m in (1, 2, 3) for k in (1, 2, 3)])
def test_jet_cocycles_restrict_nontrivially(m, k):
    alg = make_jet_algebra(m, k)
    es = [f"e{i + 1}" for i in range(k)]
    pairs = [(es[:n], es[:n]) for n in range(1, k + 1)]
    pairs.append((es + [y_name((0,) * k)], es + [y_name((0,) * k)]))
    for factors, span in pairs:
        z = full_wedge_cochain(alg, factors)
        assert differential(z).is_zero()
        a = subalgebra_from_span(alg, [alg.basis(s) for s in span])
        ev = nonzero_in_cohomology(z, a)
        assert ev.nonzero and ev.verify()
    assert full_wedge_cochain(alg, pairs[-1][0]).weight() == k + m + 1


def test_coboundary_restriction_is_detected():
    z = Cochain.monomial(H3, ["x1", "y1"])
    a = subalgebra_from_span(H3, H3.basis_elements())
    ev = nonzero_in_cohomology(z, a)
    assert not ev.nonzero
    assert ev.verify()
    assert differential(ev.preimage) == ev.restricted


def test_non_cocycle_is_refused():
    z = Cochain.dual(H3, "z")
    with pytest.raises(NotCocycleError):
        nonzero_in_cohomology(z, subalgebra_from_span(H3, [H3.basis("z")]))


def test_tampered_evidence_fails_verification():
    z = Cochain.monomial(H3, ["x1", "z"])
    ev = nonzero_in_cohomology(z, subalgebra_from_span(H3, [H3.basis("x1"), H3.basis("z")]))
    ev.functional = {m: 0 for m in ev.functional}
    assert not ev.verify()


def test_restriction_to_subalgebra():
    a = subalgebra_from_span(H3, [H3.element({"x1": 2}), H3.basis("z")])
    r = restrict(Cochain.monomial(H3, ["x1", "z"]), a)
    assert r.terms == {(0, 1): 2}
    with pytest.raises(IncompatibleOperandsError):
        restrict(Cochain.dual(abelian_algebra(3), "x1"), a)


def test_budget_guard(monkeypatch):
    alg = make_jet_algebra(3, 3)
    with pytest.raises(BudgetError) as err:
        check_budget(alg, 11, budget=1000)
    assert err.value.cells > 1000
    monkeypatch.setenv("CARNOT_BUDGET_CELLS", "10")
    with pytest.raises(BudgetError):
        differential(Cochain.dual(alg, "e1"))


def test_cochain_pairing_is_alternating():
    z = Cochain.monomial(H3, ["x1", "y1"])
    x, y = H3.basis("x1"), H3.basis("y1")
    assert z(x, y) == 1 and z(y, x) == -1 and z(x, x) == 0
    assert z(x + y * Fraction(1, 2), y) == 1
