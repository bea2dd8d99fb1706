"""Sparse multivariate polynomials over QQ and prime fields.

Variables are positional: ``x1..xd`` first, then ``T1..Tn``, then any
auxiliary variables ``u1..uk`` that the ideal machinery adds internally
(elimination tags, Rabinowitsch variables).  A polynomial is an immutable map
from exponent tuples to nonzero field coefficients.
"""

from __future__ import annotations

import enum
import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

try:  # gmpy2 rationals are several times faster than Fraction
    from gmpy2 import mpq as _rational
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _rational = Fraction

__all__ = [
    "QQ",
    "PrimeField",
    "RationalField",
    "field_from_descriptor",
    "RingSpec",
    "Polynomial",
    "MonomialOrder",
    "Ordering",
    "compare",
    "grevlex",
    "lex",
    "elimination_order",
    "default_order",
    "bidegree",
    "ANY_BIDEGREE",
    "NotBihomogeneous",
    "multiply",
    "parse_polynomial",
    "ParseError",
    "RingMismatch",
]

FIELD_BITS = 16  # bits per packed order field; caps total degree at 2**15 - 1


class RingMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# coefficient fields


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class RationalField:
    """Exact rationals."""

    modulus = 0
    characteristic = 0
    descriptor = "q"

    def __call__(self, num, den=1):
        if isinstance(num, (Fraction,)) or type(num).__name__ == "mpq":
            value = _rational(num.numerator, num.denominator)
        else:
            value = _rational(int(num))
        if den != 1:
            if den == 0:
                raise ZeroDivisionError("zero denominator")
            value = value / _rational(int(den))
        return value

    zero = property(lambda self: _rational(0))
    one = property(lambda self: _rational(1))

    def normalize(self, a):
        return a

    def inv(self, a):
        return 1 / a

    def neg(self, a):
        return -a

    def to_str(self, a) -> str:
        return str(a)

    def signed(self, a):
        return a

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """Integers modulo an odd prime, stored as ints in ``[0, p)``."""

    characteristic = property(lambda self: self.modulus)

    def __init__(self, modulus: int = 32003):
        modulus = int(modulus)
        if modulus <= 2 or not _is_prime(modulus):
            raise ValueError(f"modulus must be an odd prime, got {modulus}")
        self.modulus = modulus

    @property
    def descriptor(self) -> str:
        return f"zp:{self.modulus}"

    def __call__(self, num, den=1):
        p = self.modulus
        if isinstance(num, Fraction) or type(num).__name__ == "mpq":
            num, den = int(num.numerator), int(num.denominator) * int(den)
        num, den = int(num), int(den)
        if den % p == 0:
            raise ZeroDivisionError(f"denominator {den} is divisible by {p}")
        if den == 1:
            return num % p
        return num * pow(den, -1, p) % p

    zero = property(lambda self: 0)
    one = property(lambda self: 1)

    def normalize(self, a):
        return a % self.modulus

    def inv(self, a):
        return pow(a, -1, self.modulus)

    def neg(self, a):
        return -a % self.modulus

    def signed(self, a):
        return a - self.modulus if a > self.modulus // 2 else a

    def to_str(self, a) -> str:
        return str(self.signed(a))

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.modulus == self.modulus

    def __hash__(self):
        return hash(("GF", self.modulus))

    def __repr__(self):
        return f"GF({self.modulus})"


QQ = RationalField()


def field_from_descriptor(text: str):
    """``"q"`` for the rationals, ``"zp:<prime>"`` for a prime field."""
    text = text.strip().lower()
    if text in ("q", "qq"):
        return QQ
    if text.startswith("zp:"):
        return PrimeField(int(text[3:]))
    if text == "zp":
        return PrimeField()
    raise ValueError(f"unknown field descriptor {text!r}")


# ---------------------------------------------------------------------------
# rings


@dataclass(frozen=True)
class RingSpec:
    """``k[x1..xd, T1..Tn]`` plus ``u_count`` internal auxiliary variables."""

    x_count: int
    t_count: int = 0
    field: object = QQ
    u_count: int = 0

    def __post_init__(self):
        if self.x_count < 1:
            raise ValueError("x_count must be at least 1")
        if self.t_count < 0 or self.u_count < 0:
            raise ValueError("variable counts must be nonnegative")

    @property
    def nvars(self) -> int:
        return self.x_count + self.t_count + self.u_count

    @cached_property
    def names(self) -> tuple:
        return (
            tuple(f"x{i + 1}" for i in range(self.x_count))
            + tuple(f"T{i + 1}" for i in range(self.t_count))
            + tuple(f"u{i + 1}" for i in range(self.u_count))
        )

    @cached_property
    def _index(self) -> dict:
        return {name: i for i, name in enumerate(self.names)}

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    @property
    def x_indices(self) -> range:
        return range(self.x_count)

    @property
    def t_indices(self) -> range:
        return range(self.x_count, self.x_count + self.t_count)

    @property
    def u_indices(self) -> range:
        return range(self.x_count + self.t_count, self.nvars)

    def var(self, index: int) -> "Polynomial":
        e = [0] * self.nvars
        e[index] = 1
        return Polynomial(self, {tuple(e): self.field.one}, _trusted=True)

    def x(self, i: int) -> "Polynomial":
        """The variable ``x_i`` (1-based)."""
        return self.var(i - 1)

    def T(self, i: int) -> "Polynomial":
        return self.var(self.x_count + i - 1)

    def u(self, i: int) -> "Polynomial":
        return self.var(self.x_count + self.t_count + i - 1)

    def gens(self) -> list:
        return [self.var(i) for i in range(self.nvars)]

    def zero(self) -> "Polynomial":
        return Polynomial(self, {}, _trusted=True)

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        c = self.field(c)
        if c == 0:
            return self.zero()
        return Polynomial(self, {(0,) * self.nvars: c}, _trusted=True)

    def with_counts(self, t_count=None, u_count=None, field=None) -> "RingSpec":
        return RingSpec(
            self.x_count,
            self.t_count if t_count is None else t_count,
            self.field if field is None else field,
            self.u_count if u_count is None else u_count,
        )

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(text, self)

    def __str__(self):
        names = self.names
        return f"{self.field!r}[{', '.join(names)}]"


# ---------------------------------------------------------------------------
# monomial orders


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _int_inverse(rows: list) -> list:
    """Inverse of a unimodular integer matrix, as integer rows."""
    n = len(rows)
    a = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(rows)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [v / pv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    inv = [[v for v in row[n:]] for row in a]
    if any(v.denominator != 1 for row in inv for v in row):
        raise ValueError("order matrix is not unimodular")
    return [[int(v) for v in row] for row in inv]


@dataclass(frozen=True)
class MonomialOrder:
    """A matrix order with nonnegative integer rows.

    ``precedence`` lists variable indices from most to least significant.
    For ``"elim"`` the first ``block`` variables of ``precedence`` form the
    eliminated block; both blocks are ordered by grevlex.
    """

    kind: str
    precedence: tuple
    block: int = 0

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "elim"):
            raise ValueError(f"unknown order kind {self.kind!r}")
        if sorted(self.precedence) != list(range(len(self.precedence))):
            raise ValueError("precedence must be a permutation of the variables")

    @property
    def nvars(self) -> int:
        return len(self.precedence)

    @staticmethod
    def _grevlex_rows(block: Sequence[int], n: int) -> list:
        rows = [[0] * n]
        for v in block:
            rows[0][v] = 1
        for k in range(len(block) - 1, 0, -1):
            row = [0] * n
            for v in block[:k]:
                row[v] = 1
            rows.append(row)
        return rows

    @cached_property
    def rows(self) -> tuple:
        n, prec = self.nvars, list(self.precedence)
        if self.kind == "lex":
            rows = []
            for v in prec:
                row = [0] * n
                row[v] = 1
                rows.append(row)
        elif self.kind == "grevlex":
            rows = self._grevlex_rows(prec, n)
        else:
            rows = self._grevlex_rows(prec[: self.block], n) if self.block else []
            rows += self._grevlex_rows(prec[self.block:], n) if self.block < n else []
        return tuple(tuple(r) for r in rows)

    @cached_property
    def units(self) -> tuple:
        """Packed contribution of each variable; a key is ``sum(e_v * units[v])``."""
        rows, n = self.rows, self.nvars
        nrows = len(rows)
        return tuple(
            sum(rows[i][v] << (FIELD_BITS * (nrows - 1 - i)) for i in range(nrows))
            for v in range(n)
        )

    @cached_property
    def inverse(self) -> tuple:
        return tuple(tuple(r) for r in _int_inverse([list(r) for r in self.rows]))

    def key(self, exps: Sequence[int]) -> int:
        """Integer whose natural order is this monomial order."""
        if sum(exps) >= 1 << (FIELD_BITS - 1):
            raise OverflowError("monomial degree exceeds packing width")
        return sum(e * u for e, u in zip(exps, self.units) if e)

    def unpack(self, key: int) -> tuple:
        nrows = len(self.rows)
        mask = (1 << FIELD_BITS) - 1
        fields = [(key >> (FIELD_BITS * (nrows - 1 - i))) & mask for i in range(nrows)]
        return tuple(sum(c * f for c, f in zip(row, fields) if c) for row in self.inverse)

    def sort_key(self, exps):
        return self.key(exps)


def compare(m1: Sequence[int], m2: Sequence[int], order: MonomialOrder) -> Ordering:
    if len(m1) != len(m2) or len(m1) != order.nvars:
        raise RingMismatch("monomials and order disagree on the number of variables")
    k1, k2 = order.key(m1), order.key(m2)
    return Ordering((k1 > k2) - (k1 < k2))


def _default_precedence(ring: RingSpec) -> list:
    return list(ring.u_indices) + list(ring.t_indices) + list(ring.x_indices)


def default_order(ring: RingSpec) -> MonomialOrder:
    """grevlex with u-variables above T-variables above x-variables."""
    return _default_cache(ring.x_count, ring.t_count, ring.u_count)


_ORDER_CACHE: dict = {}


def _default_cache(x, t, u):
    key = ("default", x, t, u)
    order = _ORDER_CACHE.get(key)
    if order is None:
        prec = list(range(x + t, x + t + u)) + list(range(x, x + t)) + list(range(x))
        order = _ORDER_CACHE[key] = MonomialOrder("grevlex", tuple(prec))
    return order


def grevlex(ring: RingSpec, last: int | None = None, precedence=None) -> MonomialOrder:
    """grevlex; ``last`` moves one variable index to the least significant slot."""
    prec = list(precedence) if precedence is not None else _default_precedence(ring)
    if last is not None:
        prec.remove(last)
        prec.append(last)
    return MonomialOrder("grevlex", tuple(prec))


def lex(ring: RingSpec, precedence=None) -> MonomialOrder:
    prec = list(precedence) if precedence is not None else list(range(ring.nvars))
    return MonomialOrder("lex", tuple(prec))


def elimination_order(ring: RingSpec, eliminate: Iterable[int]) -> MonomialOrder:
    """Block order: ``eliminate`` variables first, each block grevlex."""
    front = sorted(set(eliminate))
    rest = [v for v in _default_precedence(ring) if v not in front]
    return MonomialOrder("elim", tuple(front + rest), len(front))


# ---------------------------------------------------------------------------
# polynomials


class NotBihomogeneous:
    """Returned by :func:`bidegree` when the terms disagree."""

    def __repr__(self):
        return "NotBihomogeneous"


NOT_BIHOMOGENEOUS = NotBihomogeneous()


class _AnyBidegree:
    def __repr__(self):
        return "ANY_BIDEGREE"


ANY_BIDEGREE = _AnyBidegree()


def _add_exps(a, b):
    return tuple(map(operator.add, a, b))


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to coefficients."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: RingSpec, terms: Mapping | None = None, *, _trusted=False):
        self.ring = ring
        if _trusted:
            self._terms = terms
        else:
            field, n = ring.field, ring.nvars
            clean = {}
            for mono, c in (terms or {}).items():
                mono = tuple(int(e) for e in mono)
                if len(mono) != n or min(mono, default=0) < 0:
                    raise ValueError(f"bad exponent vector {mono}")
                c = field(c) if not isinstance(c, int) or field.modulus == 0 else c % field.modulus
                if field.modulus == 0:
                    c = field(c)
                if c != 0:
                    clean[mono] = c
            self._terms = clean
        self._hash = None

    # construction helpers -------------------------------------------------
    @classmethod
    def _from_accumulator(cls, ring, acc: dict) -> "Polynomial":
        p = ring.field.modulus
        if p:
            terms = {}
            for m, c in acc.items():
                c %= p
                if c:
                    terms[m] = c
        else:
            terms = {m: c for m, c in acc.items() if c != 0}
        return cls(ring, terms, _trusted=True)

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatch(f"{other.ring} vs {self.ring}")
            return other
        if isinstance(other, (int, Fraction)) or type(other).__name__ == "mpq":
            return self.ring.constant(other)
        return NotImplemented

    # basic queries --------------------------------------------------------
    @property
    def terms(self) -> Mapping:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def monomials(self):
        return list(self._terms)

    def coefficient(self, mono) -> object:
        return self._terms.get(tuple(mono), self.ring.field.zero)

    def total_degree(self) -> int:
        """Maximum total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self._terms}) <= 1

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def support(self) -> set:
        """Indices of the variables that occur."""
        out = set()
        for m in self._terms:
            out.update(i for i, e in enumerate(m) if e)
        return out

    def sorted_terms(self, order: MonomialOrder | None = None) -> list:
        order = order or default_order(self.ring)
        key = order.key
        return sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_term(self, order: MonomialOrder | None = None):
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        order = order or default_order(self.ring)
        key = order.key
        m = max(self._terms, key=key)
        return m, self._terms[m]

    def leading_monomial(self, order=None) -> tuple:
        return self.leading_term(order)[0]

    def leading_coefficient(self, order=None):
        return self.leading_term(order)[1]

    def monic(self, order=None) -> "Polynomial":
        if not self._terms:
            return self
        lc = self.leading_coefficient(order)
        return self.scale(self.ring.field.inv(lc))

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self._terms)
        for m, c in other._terms.items():
            acc[m] = acc.get(m, 0) + c
        return Polynomial._from_accumulator(self.ring, acc)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.field.neg
        return Polynomial(self.ring, {m: neg(c) for m, c in self._terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, c) -> "Polynomial":
        c = self.ring.field(c) if not _is_field_elt(c, self.ring.field) else c
        acc = {m: v * c for m, v in self._terms.items()}
        return Polynomial._from_accumulator(self.ring, acc)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return multiply(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result, base = self.ring.one(), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_monomial(self, mono, coeff=None) -> "Polynomial":
        mono = tuple(mono)
        terms = {_add_exps(m, mono): c for m, c in self._terms.items()}
        p = Polynomial(self.ring, terms, _trusted=True)
        return p if coeff is None else p.scale(coeff)

    def divide_monomial(self, mono) -> "Polynomial":
        """Exact division by a monomial; raises if some term is not divisible."""
        mono = tuple(mono)
        terms = {}
        for m, c in self._terms.items():
            q = tuple(a - b for a, b in zip(m, mono))
            if min(q) < 0:
                raise ArithmeticError("monomial does not divide polynomial")
            terms[q] = c
        return Polynomial(self.ring, terms, _trusted=True)

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        """Quotient ``self / other``; raises ArithmeticError if not exact."""
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        order = default_order(self.ring)
        key = order.key
        lm, lc = other.leading_term(order)
        inv = self.ring.field.inv(lc)
        rem = dict(self._terms)
        quot = {}
        p = self.ring.field.modulus
        while rem:
            m = max(rem, key=key)
            q = tuple(a - b for a, b in zip(m, lm))
            if min(q) < 0:
                raise ArithmeticError("division is not exact")
            c = rem[m] * inv
            if p:
                c %= p
            quot[q] = c
            for om, oc in other._terms.items():
                mm = _add_exps(om, q)
                v = rem.get(mm, 0) - c * oc
                if p:
                    v %= p
                if v != 0:
                    rem[mm] = v
                else:
                    rem.pop(mm, None)
        return Polynomial(self.ring, quot, _trusted=True)

    def substitute(self, values: Mapping) -> "Polynomial":
        """Substitute variables (index -> Polynomial or scalar)."""
        ring = self.ring
        result = ring.zero()
        cache = {}
        for m, c in self._terms.items():
            keep = list(m)
            factor = ring.constant(c)
            for i, e in enumerate(m):
                if e and i in values:
                    keep[i] = 0
                    val = values[i]
                    if not isinstance(val, Polynomial):
                        val = ring.constant(val)
                    key = (i, e)
                    if key not in cache:
                        cache[key] = val ** e
                    factor = factor * cache[key]
                    if not factor:
                        break
            if factor:
                result = result + factor.mul_monomial(keep)
        return result

    def set_zero(self, indices: Iterable[int]) -> "Polynomial":
        """Specialise the given variables to 0."""
        idx = tuple(indices)
        terms = {m: c for m, c in self._terms.items() if not any(m[i] for i in idx)}
        return Polynomial(self.ring, terms, _trusted=True)

    def evaluate(self, point: Sequence) -> object:
        """Value at ``point`` (one field element per variable)."""
        field = self.ring.field
        total = 0
        for m, c in self._terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = v * x ** e
            total += v
        return field.normalize(total)

    def embed(self, ring: RingSpec, index_map: Mapping | None = None) -> "Polynomial":
        """Move into ``ring``; ``index_map`` sends old variable indices to new ones."""
        if index_map is None:
            index_map = _natural_map(self.ring, ring)
        n = ring.nvars
        terms = {}
        for m, c in self._terms.items():
            e = [0] * n
            for i, v in enumerate(m):
                if v:
                    if i not in index_map:
                        raise RingMismatch(f"variable {self.ring.names[i]} has no image")
                    e[index_map[i]] += v
            terms[tuple(e)] = c
        if ring.field != self.ring.field:
            return Polynomial(ring, terms)
        return Polynomial(ring, terms, _trusted=True)

    # comparison / hashing -------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, int) or isinstance(other, Fraction):
            return self == self.ring.constant(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    # printing -------------------------------------------------------------
    def to_string(self, order: MonomialOrder | None = None) -> str:
        if not self._terms:
            return "0"
        names = self.ring.names
        field = self.ring.field
        parts = []
        for m, c in self.sorted_terms(order):
            c = field.signed(c)
            neg = c < 0
            a = -c if neg else c
            mono = "*".join(
                names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(m) if e
            )
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    __str__ = to_string

    def __repr__(self):
        return f"Polynomial({self.to_string()!r})"


def _is_field_elt(c, field) -> bool:
    if field.modulus:
        return isinstance(c, int) and 0 <= c < field.modulus
    return type(c) is type(_rational(0))


def _natural_map(src: RingSpec, dst: RingSpec) -> dict:
    """Match x_i, T_i and u_i by name between two rings."""
    out = {}
    for i, name in enumerate(src.names):
        if name in dst._index:
            out[i] = dst._index[name]
    return out


def multiply(p: Polynomial, q: Polynomial) -> Polynomial:
    if p.ring != q.ring:
        raise RingMismatch(f"{p.ring} vs {q.ring}")
    a, b = p._terms, q._terms
    if len(a) < len(b):
        a, b = b, a
    acc = {}
    get = acc.get
    add = operator.add
    for m2, c2 in b.items():
        for m1, c1 in a.items():
            m = tuple(map(add, m1, m2))
            acc[m] = get(m, 0) + c1 * c2
    return Polynomial._from_accumulator(p.ring, acc)


def bidegree(p: Polynomial):
    """``(x_degree, t_degree)``; ``ANY_BIDEGREE`` for 0, else ``NOT_BIHOMOGENEOUS``."""
    if not p._terms:
        return ANY_BIDEGREE
    d, n = p.ring.x_count, p.ring.t_count
    degs = {(sum(m[:d]), sum(m[d:d + n])) for m in p._terms}
    if len(degs) != 1:
        return NOT_BIHOMOGENEOUS
    return degs.pop()


# ---------------------------------------------------------------------------
# parser


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position
        self.text = text


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            num = int(text[i:j])
            den = 1
            k = j
            while k < n and text[k].isspace():
                k += 1
            if k < n and text[k] == "/":
                k += 1
                while k < n and text[k].isspace():
                    k += 1
                m = k
                while m < n and text[m].isdigit():
                    m += 1
                if m == k:
                    raise ParseError("division is only allowed between integer literals", k - 1, text)
                den = int(text[k:m])
                if den == 0:
                    raise ParseError("zero denominator", k, text)
                j = m
            tokens.append(("num", (num, den), i))
            i = j
        elif ch.isalpha():
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("var", text[i:j], i))
            i = j
        elif ch in "+-*^()":
            tokens.append((ch, ch, i))
            i += 1
        elif ch == "/":
            raise ParseError("division is only allowed between integer literals", i, text)
        else:
            raise ParseError(f"unsupported character {ch!r}", i, text)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: RingSpec):
        self.text = text
        self.ring = ring
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, tok[2], self.text)

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            self.error("empty expression")
        result = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return result

    def expr(self):
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.factor()
        while True:
            kind = self.peek()[0]
            if kind == "*":
                self.take()
                acc = acc * self.factor()
            elif kind in ("num", "var", "("):
                acc = acc * self.factor()
            else:
                return acc

    def factor(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "num" or tok[1][1] != 1:
                self.error("exponent must be a nonnegative integer", tok)
            base = base ** tok[1][0]
        return base

    def atom(self):
        tok = self.take()
        kind, value, pos = tok
        if kind == "num":
            num, den = value
            try:
                return self.ring.constant(self.ring.field(num, den))
            except ZeroDivisionError as exc:
                raise ParseError(str(exc), pos, self.text) from None
        if kind == "var":
            if value not in self.ring._index:
                raise ParseError(f"unknown variable {value!r}", pos, self.text)
            return self.ring.var(self.ring._index[value])
        if kind == "(":
            inner = self.expr()
            if self.take()[0] != ")":
                self.error("expected ')'", self.tokens[self.pos - 1])
            return inner
        if kind == "-":
            return -self.factor()
        if kind == "end":
            self.error("unexpected end of input", tok)
        self.error(f"unexpected token {value!r}", tok)


def parse_polynomial(text: str, ring: RingSpec) -> Polynomial:
    """Parse ``text`` in the polynomial grammar into a canonical Polynomial."""
    return _Parser(text, ring).parse()
