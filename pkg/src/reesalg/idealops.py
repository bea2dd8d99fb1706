"""Ideal-level algebra: minors, colon, saturation, intersection, elimination, dimension."""

from __future__ import annotations

import math
from functools import reduce
from itertools import combinations

from .groebner import (
    GroebnerBasis,
    ResourceLimitError,
    buchberger,
    reduce_basis,
    trim,
)
from .polyring import (
    NOT_BIHOMOGENEOUS,
    MonomialOrder,
    Polynomial,
    RingMismatch,
    RingSpec,
    bidegree,
    default_order,
    elimination_order,
    grevlex,
    parse_polynomial,
)

__all__ = [
    "Ideal",
    "PolyMatrix",
    "UNIT_IDEAL",
    "minors",
    "determinant",
    "fitting_ideal",
    "colon",
    "saturate",
    "intersect",
    "eliminate",
    "radical_membership",
    "dimension",
    "height",
    "ideal_equal",
    "is_contained",
    "census",
]


class _UnitIdeal:
    """Result of :func:`dimension` for the unit ideal (Krull dimension -inf)."""

    def __repr__(self):
        return "UNIT_IDEAL"


UNIT_IDEAL = _UnitIdeal()


class Ideal:
    """Generators plus a per-order cache of reduced Gröbner bases."""

    def __init__(self, generators=(), ring: RingSpec | None = None):
        gens = tuple(g for g in generators if g)
        if ring is None:
            if not gens:
                raise ValueError("ring required for an ideal without generators")
            ring = gens[0].ring
        for g in gens:
            if g.ring != ring:
                raise RingMismatch(f"{g.ring} vs {ring}")
        self.ring = ring
        self.generators = gens
        self.gb_cache: dict = {}

    @classmethod
    def parse(cls, texts, ring):
        return cls([parse_polynomial(t, ring) for t in texts], ring)

    @classmethod
    def unit(cls, ring):
        return cls([ring.one()], ring)

    @classmethod
    def variables(cls, ring, indices):
        return cls([ring.var(i) for i in indices], ring)

    def groebner_basis(self, order: MonomialOrder | None = None, **caps) -> GroebnerBasis:
        order = order or default_order(self.ring)
        gb = self.gb_cache.get(order)
        if gb is None:
            if self.generators:
                gb = buchberger(self.generators, order, **caps)
            else:
                gb = GroebnerBasis([], order, self.ring)
            self.gb_cache[order] = gb
        return gb

    def contains(self, f: Polynomial) -> bool:
        return self.groebner_basis().contains(f)

    __contains__ = contains

    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        if any(g.is_constant() for g in self.generators):
            return True
        if self.is_homogeneous():
            return False
        return self.groebner_basis().is_unit()

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.generators)

    def is_bihomogeneous(self) -> bool:
        return all(bidegree(g) is not NOT_BIHOMOGENEOUS for g in self.generators)

    def __add__(self, other: "Ideal") -> "Ideal":
        if other.ring != self.ring:
            raise RingMismatch("ideals live in different rings")
        return Ideal(self.generators + other.generators, self.ring)

    def __mul__(self, other: "Ideal") -> "Ideal":
        if other.ring != self.ring:
            raise RingMismatch("ideals live in different rings")
        return Ideal([f * g for f in self.generators for g in other.generators], self.ring)

    def __pow__(self, k: int) -> "Ideal":
        result = Ideal.unit(self.ring)
        for _ in range(k):
            result = result * self
        return result

    def trimmed(self) -> "Ideal":
        """Minimal generators (bihomogeneous ideals) or the reduced basis otherwise."""
        if self.is_bihomogeneous():
            out = Ideal(trim(self.generators), self.ring)
        else:
            out = Ideal(self.groebner_basis().elements, self.ring)
        out.gb_cache.update(self.gb_cache)
        return out

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def to_strings(self) -> list:
        return sorted(str(g) for g in self.generators)

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.generators]})"


# ---------------------------------------------------------------------------
# matrices


class PolyMatrix:
    """Row-major matrix of polynomials over one ring."""

    def __init__(self, entries, ring: RingSpec | None = None):
        rows = [list(r) for r in entries]
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and one column")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("matrix rows have different lengths")
        if ring is None:
            ring = next((e.ring for r in rows for e in r if isinstance(e, Polynomial)), None)
            if ring is None:
                raise ValueError("ring required for a matrix of scalars")
        self.ring = ring
        self.entries = tuple(
            tuple(e if isinstance(e, Polynomial) else ring.constant(e) for e in r) for r in rows
        )
        for r in self.entries:
            for e in r:
                if e.ring != ring:
                    raise RingMismatch("matrix entries live in different rings")

    @classmethod
    def from_strings(cls, rows, ring):
        return cls([[parse_polynomial(s, ring) for s in r] for r in rows], ring)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def shape(self):
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i) -> tuple:
        return self.entries[i]

    def column(self, j) -> tuple:
        return tuple(r[j] for r in self.entries)

    def submatrix(self, rows, cols) -> "PolyMatrix":
        return PolyMatrix([[self.entries[i][j] for j in cols] for i in rows], self.ring)

    def drop_last_columns(self, k: int) -> "PolyMatrix":
        return self.submatrix(range(self.rows), range(self.cols - k))

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([list(c) for c in zip(*self.entries)], self.ring)

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix([[fn(e) for e in r] for r in self.entries], self.ring)

    def left_multiply(self, vector) -> list:
        """Row vector times matrix."""
        if len(vector) != self.rows:
            raise ValueError("vector length does not match the row count")
        out = []
        for j in range(self.cols):
            acc = self.ring.zero()
            for v, r in zip(vector, self.entries):
                if v and r[j]:
                    acc = acc + v * r[j]
            out.append(acc)
        return out

    def entry_ideal(self) -> Ideal:
        return Ideal([e for r in self.entries for e in r], self.ring)

    def is_zero(self) -> bool:
        return not any(e for r in self.entries for e in r)

    def to_strings(self) -> list:
        return [[str(e) for e in r] for r in self.entries]

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"PolyMatrix({self.to_strings()})"


def _bareiss(rows: list, ring) -> Polynomial:
    """Fraction-free determinant of a square list-of-lists."""
    a = [list(r) for r in rows]
    n = len(a)
    sign = 1
    prev = ring.one()
    for k in range(n - 1):
        if not a[k][k]:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return ring.zero()
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


class _MinorTable:
    """Memoized cofactor expansion along the first selected row."""

    def __init__(self, M: PolyMatrix):
        self.M = M
        self.memo = {}

    def det(self, rows: tuple, cols: tuple) -> Polynomial:
        if len(rows) == 1:
            return self.M.entries[rows[0]][cols[0]]
        key = (rows, cols)
        got = self.memo.get(key)
        if got is not None:
            return got
        ring = self.M.ring
        top = self.M.entries[rows[0]]
        acc = ring.zero()
        rest = rows[1:]
        for j, c in enumerate(cols):
            if not top[c]:
                continue
            sub = self.det(rest, cols[:j] + cols[j + 1:])
            if sub:
                term = top[c] * sub
                acc = acc - term if j % 2 else acc + term
        self.memo[key] = acc
        return acc


def determinant(M: PolyMatrix) -> Polynomial:
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    if M.rows > 6:
        return _bareiss(M.entries, M.ring)
    return _MinorTable(M).det(tuple(range(M.rows)), tuple(range(M.cols)))


def minor_list(M: PolyMatrix, t: int) -> list:
    """All t×t minors, in lexicographic order of (rows, cols)."""
    if not 1 <= t <= min(M.rows, M.cols):
        raise ValueError(f"minor size {t} out of range for a {M.rows}x{M.cols} matrix")
    out = []
    if t > 6:
        for r in combinations(range(M.rows), t):
            for c in combinations(range(M.cols), t):
                out.append(_bareiss([[M.entries[i][j] for j in c] for i in r], M.ring))
        return out
    table = _MinorTable(M)
    for r in combinations(range(M.rows), t):
        for c in combinations(range(M.cols), t):
            out.append(table.det(r, c))
    return out


def minors(M: PolyMatrix, t: int) -> Ideal:
    """I_t(M); I_0 is the unit ideal and I_t = 0 beyond the matrix size."""
    if t == 0:
        return Ideal.unit(M.ring)
    if t > min(M.rows, M.cols):
        return Ideal([], M.ring)
    return Ideal(minor_list(M, t), M.ring)


def fitting_ideal(M: PolyMatrix, i: int) -> Ideal:
    """Fitt_i of the module presented by M (n = M.rows generators)."""
    n = M.rows
    if i < 0 or i > n:
        raise ValueError(f"Fitting index {i} out of range 0..{n}")
    t = n - i
    if t > M.cols:
        return Ideal([], M.ring)
    return minors(M, t)


# ---------------------------------------------------------------------------
# containment, equality


def is_contained(A: Ideal, B: Ideal) -> bool:
    """A ⊆ B."""
    if not A.generators:
        return True
    gb = B.groebner_basis()
    return all(gb.contains(g) for g in A.generators)


def ideal_equal(I: Ideal, J: Ideal) -> bool:
    if I.ring != J.ring:
        raise RingMismatch("ideals live in different rings")
    return I.groebner_basis().elements == J.groebner_basis().elements


def census(I: Ideal) -> dict:
    """Bidegree multiset of a minimal generating set, as {(a, b): count}."""
    out: dict = {}
    for g in trim(I.generators):
        out[bidegree(g)] = out.get(bidegree(g), 0) + 1
    return dict(sorted(out.items()))


def _tidy(I: Ideal) -> Ideal:
    if I.is_zero():
        return I
    return I.trimmed()


# ---------------------------------------------------------------------------
# auxiliary-variable constructions


def _extend(ring: RingSpec, k: int = 1):
    big = ring.with_counts(u_count=ring.u_count + k)
    return big, list(range(ring.nvars, big.nvars))


def _lift(f: Polynomial, big: RingSpec) -> Polynomial:
    n = big.nvars - f.ring.nvars
    return Polynomial(big, {m + (0,) * n: c for m, c in f.terms.items()}, _trusted=True)


def _drop(f: Polynomial, ring: RingSpec) -> Polynomial:
    n = ring.nvars
    return Polynomial(ring, {m[:n]: c for m, c in f.terms.items()}, _trusted=True)


def eliminate(I: Ideal, keep) -> Ideal:
    """I ∩ k[keep] using a block order with the other variables in front."""
    keep = set(keep)
    drop = [v for v in range(I.ring.nvars) if v not in keep]
    if not drop or I.is_zero():
        return Ideal(I.generators, I.ring)
    gb = I.groebner_basis(elimination_order(I.ring, drop))
    gens = [g for g in gb.elements if not (g.support() - keep)]
    return Ideal(gens, I.ring)


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """I ∩ J by eliminating u from u·I + (1 − u)·J."""
    if I.ring != J.ring:
        raise RingMismatch("ideals live in different rings")
    if I.is_zero() or J.is_zero():
        return Ideal([], I.ring)
    if is_contained(I, J):
        return I
    if is_contained(J, I):
        return J
    ring = I.ring
    big, (u,) = _extend(ring)
    uu = big.var(u)
    gens = [uu * _lift(f, big) for f in I.generators]
    gens += [(1 - uu) * _lift(g, big) for g in J.generators]
    kept = eliminate(Ideal(gens, big), set(range(ring.nvars)))
    return _tidy(Ideal([_drop(g, ring) for g in kept.generators], ring))


def _intersect_all(ideals: list) -> Ideal:
    return reduce(intersect, ideals)


def radical_membership(f: Polynomial, I: Ideal) -> bool:
    """f ∈ √I via 1 ∈ I + (1 − u·f) in an extended ring."""
    if not f:
        return True
    if I.is_zero():
        return False
    if I.contains(f):
        return True
    big, (u,) = _extend(I.ring)
    gens = [_lift(g, big) for g in I.generators]
    gens.append(1 - big.var(u) * _lift(f, big))
    return Ideal(gens, big).groebner_basis().is_unit()


# ---------------------------------------------------------------------------
# colon and saturation


def _valuation(f: Polynomial, v: int) -> int:
    return min(m[v] for m in f.terms)


def _divide_var(I: Ideal, v: int, power) -> Ideal:
    """I : x_v^power (power None = saturation) for homogeneous I.

    With x_v last in grevlex, dividing each basis element by the largest
    allowed power of x_v gives a Gröbner basis of the quotient.
    """
    order = grevlex(I.ring, last=v)
    gb = I.groebner_basis(order)
    out = []
    changed = False
    for g in gb.elements:
        k = _valuation(g, v)
        if power is not None:
            k = min(k, power)
        if k:
            changed = True
            e = [0] * I.ring.nvars
            e[v] = k
            g = g.divide_monomial(e)
        out.append(g)
    if not changed:
        return I
    res = Ideal(out, I.ring)
    res.gb_cache[order] = reduce_basis(out, order)
    return res


def _colon_monomial(I: Ideal, mono, saturate_it=False) -> Ideal:
    res = I
    for v, a in enumerate(mono):
        if a:
            res = _divide_var(res, v, None if saturate_it else a)
    return res


def _colon_principal(I: Ideal, g: Polynomial) -> Ideal:
    if I.is_zero():
        return I
    if g.is_constant():
        return I
    if g.is_monomial() and I.is_homogeneous():
        (mono,) = g.terms
        return _colon_monomial(I, mono)
    meet = intersect(I, Ideal([g], I.ring))
    return Ideal([h.exact_div(g) for h in meet.generators], I.ring)


def colon(I: Ideal, J: Ideal, tidy: bool = True) -> Ideal:
    """I : J, as the intersection of I : (g) over the generators g of J."""
    if I.ring != J.ring:
        raise RingMismatch("ideals live in different rings")
    if J.is_zero():
        raise ValueError("colon by the zero ideal")
    if any(g.is_constant() for g in J.generators):
        return I
    parts = [_colon_principal(I, g) for g in J.generators]
    res = _intersect_all(parts)
    return _tidy(res) if tidy else res


def _saturate_principal(I: Ideal, g: Polynomial) -> Ideal:
    if I.is_zero() or g.is_constant():
        return I
    if g.is_monomial() and I.is_homogeneous():
        (mono,) = g.terms
        return _colon_monomial(I, mono, saturate_it=True)
    big, (u,) = _extend(I.ring)
    gens = [_lift(f, big) for f in I.generators]
    gens.append(1 - big.var(u) * _lift(g, big))
    kept = eliminate(Ideal(gens, big), set(range(I.ring.nvars)))
    return Ideal([_drop(h, I.ring) for h in kept.generators], I.ring)


def _stabilization_exponent(S: Ideal, I: Ideal, J: Ideal, limit: int) -> int:
    """Least k with J^k · S ⊆ I, using normal forms modulo I."""
    gb = I.groebner_basis()
    rems = {gb.reduce(f) for f in S.generators}
    rems.discard(S.ring.zero())
    k = 0
    while rems:
        k += 1
        if k > limit:
            raise ResourceLimitError(
                f"saturation exponent exceeds {limit}", {"exponent_bound": limit}
            )
        nxt = set()
        for r in rems:
            for g in J.generators:
                h = gb.reduce(r * g)
                if h:
                    nxt.add(h.monic())
        rems = nxt
    return k


def saturate(I: Ideal, J: Ideal, method: str = "direct", limit: int = 50):
    """(I : J^∞, least k with I : J^k = I : J^∞).

    ``method="direct"`` intersects I : g^∞ over generators g of J and then
    finds k by testing J^k·S ⊆ I; ``method="iterated"`` walks the colon
    chain I : J ⊆ I : J² ⊆ … until it stabilises.  Both give the same pair.
    """
    if I.ring != J.ring:
        raise RingMismatch("ideals live in different rings")
    if J.is_zero():
        raise ValueError("saturation by the zero ideal")
    if any(g.is_constant() for g in J.generators):
        return I, 0
    if method == "iterated":
        prev, k = I, 0
        while True:
            nxt = colon(prev, J)
            if ideal_equal(nxt, prev):
                return _tidy(prev), k
            prev, k = nxt, k + 1
            if k > limit:
                raise ResourceLimitError(f"colon chain longer than {limit}", {"exponent_bound": limit})
    if method != "direct":
        raise ValueError(f"unknown saturation method {method!r}")
    parts = [_saturate_principal(I, g) for g in J.generators]
    S = _intersect_all(parts)
    k = _stabilization_exponent(S, I, J, limit)
    return _tidy(S), k


# ---------------------------------------------------------------------------
# dimension


def _min_hitting_set(masks: list) -> int:
    masks = sorted(set(masks), key=lambda m: bin(m).count("1"))
    minimal = []
    for m in masks:
        if not any(o & m == o for o in minimal):
            minimal.append(m)
    memo = {}

    def solve(sets: tuple) -> int:
        if not sets:
            return 0
        got = memo.get(sets)
        if got is not None:
            return got
        pivot = min(sets, key=lambda m: bin(m).count("1"))
        best = math.inf
        v = pivot
        while v:
            bit = v & -v
            v ^= bit
            rest = tuple(s for s in sets if not s & bit)
            best = min(best, 1 + solve(rest))
        memo[sets] = best
        return best

    return solve(tuple(minimal))


def dimension(I: Ideal):
    """Krull dimension of R/I, or UNIT_IDEAL."""
    n = I.ring.nvars
    if I.is_zero():
        return n
    gb = I.groebner_basis()
    if gb.is_unit():
        return UNIT_IDEAL
    masks = [sum(1 << v for v, e in enumerate(m) if e) for m in gb.leading_monomials()]
    return n - _min_hitting_set(masks)


def height(I: Ideal):
    """Variable count minus dimension; ``math.inf`` for the unit ideal."""
    dim = dimension(I)
    if dim is UNIT_IDEAL:
        return math.inf
    return I.ring.nvars - dim
