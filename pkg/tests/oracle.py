"""Independent reference computations via sympy (test-only dependency)."""

import sympy

from reesalg.polyring import PrimeField


def sympy_gens(ring):
    return sympy.symbols(" ".join(ring.names))


def to_sympy(f, gens):
    return sympy.sympify(f.to_string().replace("^", "**"), locals={str(g): g for g in gens})


def sympy_reduced_basis(polys, ring):
    """Reduced monic grevlex basis as a set of strings in our printer's format."""
    gens = sympy_gens(ring)
    kw = {"modulus": ring.field.modulus} if isinstance(ring.field, PrimeField) else {"domain": "QQ"}
    G = sympy.groebner([to_sympy(f, gens) for f in polys], *gens, order="grevlex", **kw)
    out = set()
    for g in G.exprs:
        P = sympy.Poly(g, *gens, **kw)
        lc = P.terms(order="grevlex")[0][1]
        terms = {m: c / lc if "modulus" not in kw else c * pow(int(lc), -1, ring.field.modulus)
                 for m, c in P.terms()}
        out.add(_from_terms(terms, ring))
    return out


def _from_terms(terms, ring):
    from reesalg.polyring import Polynomial

    F = ring.field
    acc = {}
    for m, c in terms.items():
        if isinstance(F, PrimeField):
            acc[tuple(m)] = F(int(c))
        else:
            c = sympy.Rational(c)
            acc[tuple(m)] = F(int(c.p), int(c.q))
    return Polynomial(ring, acc)
