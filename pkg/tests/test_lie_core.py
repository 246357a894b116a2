from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from carnot.builtins import builtin, builtin_names, heisenberg_algebra
from carnot.errors import ClosureError, DependentVectorsError, DomainError, IncompatibleOperandsError, NotNilpotentError
from carnot.lie_core import (
    GradedLieAlgebra,
    LieAlgebra,
    abelian_algebra,
    bracket,
    filtration_exponents,
    gram_determinant,
    homogeneous_dimension,
    lower_central_series,
    nilpotency_class,
    plane_scaling_exponents,
    scale_element,
    scale_is_automorphism_check,
    subalgebra_from_span,
    to_scalar,
    validate,
)
from carnot import linalg
from tests.strategies import elements

H3 = heisenberg_algebra(1)


@pytest.mark.parametrize("name", builtin_names())
def test_builtins_validate(name):
    report = validate(builtin(name))
    assert report.passed, report.failures


@given(st.data())
def test_bracket_is_bilinear_and_antisymmetric(data):
    alg = builtin(data.draw(st.sampled_from(builtin_names())))
    x, y, z = (data.draw(elements(alg)) for _ in range(3))
    c = data.draw(st.fractions(-3, 3, max_denominator=3))
    assert bracket(x, y) == -bracket(y, x)
    assert bracket(x * c + z, y) == bracket(x, y) * c + bracket(z, y)


@given(st.data())
def test_jacobi_on_random_elements(data):
    alg = builtin(data.draw(st.sampled_from(builtin_names())))
    x, y, z = (data.draw(elements(alg)) for _ in range(3))
    total = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
    assert total.is_zero()


def test_jacobi_violation_reports_triple():
    alg = GradedLieAlgebra(["a", "b", "c", "u", "w"], [1, 1, 1, 2, 3], {("a", "b"): {"u": 1}, ("c", "u"): {"w": 1}})
    report = validate(alg)
    assert not report.passed
    assert report["jacobi"].witness == ("a", "b", "c")


def test_grading_violation_is_reported():
    alg = GradedLieAlgebra(["x", "y", "z"], [1, 1, 1], {("x", "y"): {"z": 1}})
    assert report_witness(alg, "grading") == ("x", "y", "z")


def report_witness(alg, check):
    r = validate(alg)[check]
    assert not r.passed
    return r.witness


def test_inconsistent_orderings_fail_antisymmetry():
    alg = LieAlgebra(["x", "y", "z"], {("x", "y"): {"z": 1}, ("y", "x"): {"z": 1}})
    assert report_witness(alg, "antisymmetry") == ("y", "x")


def test_non_nilpotent_algebra():
    alg = LieAlgebra(["h", "e"], {("h", "e"): {"e": 2}})
    assert not validate(alg)["nilpotency"].passed
    with pytest.raises(NotNilpotentError):
        nilpotency_class(alg)


def test_lower_central_series_and_class():
    assert lower_central_series(H3) == [3, 1]
    assert nilpotency_class(H3) == 2
    assert nilpotency_class(abelian_algebra(4)) == 1
    assert homogeneous_dimension(H3) == 4


def test_elements_of_different_algebras_do_not_mix():
    with pytest.raises(IncompatibleOperandsError):
        bracket(H3.basis("x1"), abelian_algebra(3).basis("x1"))


def test_floats_are_refused():
    with pytest.raises(TypeError):
        to_scalar(0.5)
    assert to_scalar("3/6") == Fraction(1, 2)


@given(st.data())
def test_dilation_distributes_over_bracket(data):
    alg = builtin(data.draw(st.sampled_from(builtin_names())))
    t = data.draw(st.fractions(-3, 3, max_denominator=3))
    assume(t != 0)
    x, y = data.draw(elements(alg)), data.draw(elements(alg))
    assert scale_element(bracket(x, y), t) == bracket(scale_element(x, t), scale_element(y, t))


def test_dilation_zero_is_rejected():
    with pytest.raises(DomainError):
        scale_element(H3.basis("z"), 0)
    assert scale_is_automorphism_check(H3, Fraction(3, 2), trials=5)


def test_plane_anchor_horizontal_plane():
    pair = plane_scaling_exponents([H3.basis("x1"), H3.basis("y1")])
    assert (pair.a, pair.b) == (2, 2)


def test_plane_anchor_mixed_plane():
    pair = plane_scaling_exponents([H3.basis("x1"), H3.basis("z")])
    assert (pair.a, pair.b) == (3, 3)


def test_gram_determinant_of_tilted_plane():
    v = H3.element({"x1": 1, "z": 1})
    g = gram_determinant([v, H3.basis("y1")])
    # det = (t^2 + t^4) * t^2
    assert g.coefficient((4,)) == 1 and g.coefficient((6,)) == 1
    assert plane_scaling_exponents([v, H3.basis("y1")]).a == 2
    assert plane_scaling_exponents([v, H3.basis("y1")]).b == 3


@given(st.data())
def test_gram_and_filtration_agree(data):
    alg = builtin(data.draw(st.sampled_from(builtin_names())))
    n = data.draw(st.integers(1, min(3, alg.dim)))
    vecs = [data.draw(elements(alg)) for _ in range(n)]
    assume(linalg.is_independent([v.sparse() for v in vecs]))
    p, q = plane_scaling_exponents(vecs), filtration_exponents(vecs)
    assert (p.a, p.b) == (q.a, q.b)


def test_dependent_plane_is_rejected():
    with pytest.raises(DependentVectorsError):
        plane_scaling_exponents([H3.zero()])
    with pytest.raises(DependentVectorsError):
        filtration_exponents([H3.basis("x1"), H3.basis("x1") * 2])


def test_subalgebra_closure():
    sub = subalgebra_from_span(H3, [H3.basis("x1"), H3.basis("z")])
    assert sub.dim == 2
    assert sub.coordinates(H3.basis("z") * 3) == [0, 3]
    assert sub.include([1, 2]) == H3.element({"x1": 1, "z": 2})
    with pytest.raises(ClosureError) as err:
        subalgebra_from_span(H3, [H3.basis("x1"), H3.basis("y1")])
    assert err.value.witness == ("x1", "y1")


def test_structural_equality():
    assert heisenberg_algebra(2) == heisenberg_algebra(2)
    assert hash(heisenberg_algebra(2)) == hash(heisenberg_algebra(2))
    assert heisenberg_algebra(1) != abelian_algebra(3)
