"""Exact computations on Carnot (graded nilpotent) Lie algebras and certified filling exponents."""

__version__ = "0.1.0"

from .cohomology import Cochain, betti_numbers, differential, nonzero_in_cohomology, wedge
from .filling_exponents import (
    ExponentCertificate,
    HorizontalityLedger,
    certify_algebra,
    certify_jet_group,
    euclidean_upper,
    extend_ledger,
    generic_upper,
    jet_ledger,
    lower_bound_certificate,
    upper_from_ledger,
)
from .jet_group import JetPoint, jet_inverse, jet_multiply, jet_scaling, make_jet_algebra
from .lie_core import (
    AlgebraElement,
    GradedLieAlgebra,
    LieAlgebra,
    bch,
    bracket,
    nilpotency_class,
    plane_scaling_exponents,
    subalgebra_from_span,
    validate,
)
from .serialization import load_algebra

__all__ = [
    "AlgebraElement",
    "Cochain",
    "ExponentCertificate",
    "GradedLieAlgebra",
    "HorizontalityLedger",
    "JetPoint",
    "LieAlgebra",
    "bch",
    "betti_numbers",
    "bracket",
    "certify_algebra",
    "certify_jet_group",
    "differential",
    "euclidean_upper",
    "extend_ledger",
    "generic_upper",
    "jet_inverse",
    "jet_ledger",
    "jet_multiply",
    "jet_scaling",
    "load_algebra",
    "lower_bound_certificate",
    "make_jet_algebra",
    "nilpotency_class",
    "nonzero_in_cohomology",
    "plane_scaling_exponents",
    "subalgebra_from_span",
    "upper_from_ledger",
    "validate",
    "wedge",
]
