"""Hypothesis strategies shared by the property suites."""

from fractions import Fraction

from hypothesis import strategies as st

from reesalg.polyring import QQ, PrimeField, Polynomial, RingSpec

RING3 = RingSpec(3, field=QQ)
RING3_P = RingSpec(3, field=PrimeField(32003))


def monomials(nvars, max_exp=3):
    return st.tuples(*[st.integers(0, max_exp)] * nvars)


def coefficients(field):
    if field is QQ:
        return st.fractions(min_value=-9, max_value=9, max_denominator=5).filter(bool)
    return st.integers(1, field.modulus - 1)


@st.composite
def polynomials(draw, ring=RING3, max_terms=4, max_exp=3):
    terms = draw(st.dictionaries(monomials(ring.nvars, max_exp), coefficients(ring.field), max_size=max_terms))
    return Polynomial(ring, {m: ring.field(c.numerator, c.denominator) if isinstance(c, Fraction) else ring.field(c)
                             for m, c in terms.items()})


@st.composite
def homogeneous_polynomials(draw, ring=RING3, degree=None, max_terms=3):
    deg = draw(st.integers(1, 3)) if degree is None else degree
    n = ring.nvars
    monos = []
    for _ in range(draw(st.integers(1, max_terms))):
        cuts = sorted(draw(st.lists(st.integers(0, deg), min_size=n - 1, max_size=n - 1)))
        parts = [b - a for a, b in zip([0] + cuts, cuts + [deg])]
        monos.append(tuple(parts))
    coeffs = draw(st.lists(st.integers(-3, 3).filter(bool), min_size=len(monos), max_size=len(monos)))
    acc = {}
    for m, c in zip(monos, coeffs):
        acc[m] = acc.get(m, 0) + c
    return Polynomial(ring, {m: ring.field(c) for m, c in acc.items() if c})


def monomial_poly(ring, exps):
    return Polynomial(ring, {tuple(exps): ring.field.one})
