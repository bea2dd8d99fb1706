"""Rees algebras of linearly presented modules: Gröbner engine, ideal operations, analysis."""

__version__ = "0.1.0"

from .polyring import QQ, PrimeField, Polynomial, RingSpec, field_from_descriptor, parse_polynomial
from .groebner import GroebnerBasis, ResourceLimitError, buchberger, membership, normal_form, trim
from .idealops import (
    Ideal,
    PolyMatrix,
    colon,
    dimension,
    eliminate,
    fitting_ideal,
    height,
    ideal_equal,
    intersect,
    minors,
    saturate,
)
from .rees import (
    Presentation,
    analyze,
    classify_shape,
    column_instance,
    gs_profile,
    row_instance,
    validate_presentation,
)

__all__ = [
    "__version__",
    "QQ",
    "PrimeField",
    "Polynomial",
    "RingSpec",
    "field_from_descriptor",
    "parse_polynomial",
    "GroebnerBasis",
    "ResourceLimitError",
    "buchberger",
    "membership",
    "normal_form",
    "trim",
    "Ideal",
    "PolyMatrix",
    "colon",
    "dimension",
    "eliminate",
    "fitting_ideal",
    "height",
    "ideal_equal",
    "intersect",
    "minors",
    "saturate",
    "Presentation",
    "analyze",
    "classify_shape",
    "column_instance",
    "gs_profile",
    "row_instance",
    "validate_presentation",
]
