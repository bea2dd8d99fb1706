"""Gröbner bases: normal forms, Buchberger, membership and minimal generators.

Internally a polynomial is a dict from *packed* monomial keys to coefficients.
A key is ``sum(e_v * order.units[v])``: comparing keys as integers is the
monomial order, and adding keys multiplies monomials.  Divisibility uses a
second packing ``E`` (one guarded field per variable), see ``_Ctx``.
"""

from __future__ import annotations

import heapq
from itertools import count

from .polyring import (
    FIELD_BITS,
    NOT_BIHOMOGENEOUS,
    MonomialOrder,
    Polynomial,
    RingMismatch,
    RingSpec,
    bidegree,
    default_order,
)

__all__ = [
    "GroebnerBasis",
    "ResourceLimitError",
    "NonHomogeneousInput",
    "normal_form",
    "buchberger",
    "membership",
    "trim",
    "s_polynomial",
    "reduce_basis",
]


class ResourceLimitError(RuntimeError):
    """A degree or pair cap was hit; ``diagnostics`` describes the partial state."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class NonHomogeneousInput(ValueError):
    pass


# ---------------------------------------------------------------------------
# packed-monomial context


class _Ctx:
    """Packing data for one (ring, order) pair."""

    _cache: dict = {}

    def __init__(self, ring: RingSpec, order: MonomialOrder):
        if order.nvars != ring.nvars:
            raise RingMismatch("order and ring disagree on the number of variables")
        self.ring = ring
        self.order = order
        self.p = ring.field.modulus
        self.n = ring.nvars
        self.units = order.units
        w = FIELD_BITS
        self.eunits = tuple(1 << (w * v) for v in range(self.n))
        self.guard = sum(1 << (w * v + w - 1) for v in range(self.n))
        self.emask = (1 << (w - 1)) - 1
        self.info = {}  # key -> (E, degree)
        self.one = ring.field.one

    @classmethod
    def get(cls, ring, order):
        k = (ring, order)
        ctx = cls._cache.get(k)
        if ctx is None:
            if len(cls._cache) > 64:
                cls._cache.clear()
            ctx = cls._cache[k] = cls(ring, order)
        return ctx

    def pack(self, exps) -> int:
        key = sum(e * u for e, u in zip(exps, self.units) if e)
        if key not in self.info:
            self.info[key] = (sum(e * u for e, u in zip(exps, self.eunits) if e), sum(exps))
        return key

    def einfo(self, key):
        got = self.info.get(key)
        if got is None:
            exps = self.order.unpack(key)
            got = (sum(e * u for e, u in zip(exps, self.eunits) if e), sum(exps))
            self.info[key] = got
        return got

    def exps_of_e(self, E) -> tuple:
        w, mask = FIELD_BITS, self.emask
        return tuple((E >> (w * v)) & mask for v in range(self.n))

    def from_poly(self, f: Polynomial) -> dict:
        if f.ring != self.ring:
            raise RingMismatch(f"{f.ring} vs {self.ring}")
        pack = self.pack
        return {pack(m): c for m, c in f.terms.items()}

    def to_poly(self, d: dict) -> Polynomial:
        unpack = self.order.unpack
        return Polynomial(self.ring, {unpack(k): c for k, c in d.items()}, _trusted=True)


class _Elt:
    """A monic basis element."""

    __slots__ = ("lm", "lmE", "deg", "sugar", "tail", "mask", "exps", "alive", "idx")

    def __init__(self, ctx: _Ctx, poly: dict, sugar: int, idx: int):
        lm = max(poly)
        lc = poly[lm]
        if lc != 1:
            p = ctx.p
            if p:
                inv = pow(lc, -1, p)
                poly = {k: c * inv % p for k, c in poly.items()}
            else:
                inv = ctx.one / lc
                poly = {k: c * inv for k, c in poly.items()}
        self.lm = lm
        self.lmE, self.deg = ctx.einfo(lm)
        self.exps = ctx.exps_of_e(self.lmE)
        self.mask = sum(1 << v for v, e in enumerate(self.exps) if e)
        self.tail = [(k, c) for k, c in poly.items() if k != lm]
        self.sugar = sugar
        self.alive = True
        self.idx = idx

    def as_dict(self, one=1) -> dict:
        d = dict(self.tail)
        d[self.lm] = one
        return d


def _nf(f: dict, elts, ctx: _Ctx, full=True) -> dict:
    """Remainder of ``f`` modulo ``elts`` (list of _Elt), reducing the highest term first."""
    if not f or not elts:
        return dict(f)
    p = ctx.p
    guard = ctx.guard
    info = ctx.info
    einfo = ctx.einfo
    divs = [(g.lmE, g) for g in elts]
    h = dict(f)
    heap = [-k for k in h]
    heapq.heapify(heap)
    pop, push = heapq.heappop, heapq.heappush
    r = {}
    while heap:
        m = -pop(heap)
        c = h.pop(m, None)
        if c is None:
            continue
        got = info.get(m)
        mE = (got[0] if got is not None else einfo(m)[0]) | guard
        for gE, g in divs:
            if (mE - gE) & guard == guard:
                break
        else:
            r[m] = c
            if not full:
                # top-reduction only: the rest is copied through
                for k, v in h.items():
                    r[k] = v
                return r
            continue
        q = m - g.lm
        if p:
            for tk, tc in g.tail:
                mm = tk + q
                v = h.get(mm)
                if v is None:
                    h[mm] = -c * tc % p
                    push(heap, -mm)
                else:
                    v = (v - c * tc) % p
                    if v:
                        h[mm] = v
                    else:
                        del h[mm]
        else:
            for tk, tc in g.tail:
                mm = tk + q
                v = h.get(mm)
                if v is None:
                    h[mm] = -c * tc
                    push(heap, -mm)
                else:
                    v = v - c * tc
                    if v:
                        h[mm] = v
                    else:
                        del h[mm]
    return r


class _Pair:
    __slots__ = ("sugar", "lcm", "i", "j", "alive", "gen")

    def __init__(self, sugar, lcm, i, j, gen=None):
        self.sugar = sugar
        self.lcm = lcm
        self.i = i
        self.j = j
        self.alive = True
        self.gen = gen


class _Engine:
    """Incremental Buchberger with Gebauer–Möller pair management."""

    def __init__(self, ctx: _Ctx, max_degree=None, max_pairs=None):
        self.ctx = ctx
        self.elts: list = []
        self.pairs: list = []  # all live pairs (for the B-criterion)
        self.heap: list = []
        self.tick = count()
        self.max_degree = max_degree
        self.max_pairs = max_pairs
        self.processed = 0
        self.zero_reductions = 0

    # queue ---------------------------------------------------------------
    def _push(self, pair: _Pair):
        heapq.heappush(self.heap, (pair.sugar, pair.lcm[0], next(self.tick), pair))

    def add(self, f: dict, sugar: int | None = None):
        """Queue an input generator (processed at its degree)."""
        if not f:
            return
        ctx = self.ctx
        if sugar is None:
            sugar = max(ctx.einfo(k)[1] for k in f)
        lm = max(f)
        pair = _Pair(sugar, (lm,), -1, -1, gen=f)
        self._push(pair)

    def active(self) -> list:
        return [g for g in self.elts if g.alive]

    def pending(self) -> int:
        return sum(1 for *_, pr in self.heap if pr.alive)

    def min_pending_degree(self):
        while self.heap and not self.heap[0][3].alive:
            heapq.heappop(self.heap)
        return self.heap[0][0] if self.heap else None

    # core ----------------------------------------------------------------
    def _insert(self, poly: dict, sugar: int):
        ctx = self.ctx
        h = _Elt(ctx, poly, sugar, len(self.elts))
        guard = ctx.guard
        units, eunits = ctx.units, ctx.eunits

        def lcm_of(g):
            ex = tuple(map(max, g.exps, h.exps))
            key = sum(e * u for e, u in zip(ex, units) if e)
            E = sum(e * u for e, u in zip(ex, eunits) if e)
            deg = sum(ex)
            return key, E, deg

        def divides(aE, bE):
            return ((bE | guard) - aE) & guard == guard

        # Gebauer–Möller: prune old pairs (B-criterion)
        hE = h.lmE
        for pr in self.pairs:
            if not pr.alive:
                continue
            lk, lE, _ = pr.lcm
            if divides(hE, lE):
                gi, gj = self.elts[pr.i], self.elts[pr.j]
                li = tuple(map(max, gi.exps, h.exps))
                lj = tuple(map(max, gj.exps, h.exps))
                ex = ctx.exps_of_e(lE)
                if li != ex and lj != ex:
                    pr.alive = False
        self.pairs = [pr for pr in self.pairs if pr.alive]

        # new pairs: chain criterion over the candidates, then product criterion
        C = []
        for g in self.elts:
            if g.alive:
                lc = lcm_of(g)
                sug = max(g.sugar + lc[2] - g.deg, h.sugar + lc[2] - h.deg)
                C.append((g, lc, (g.mask & h.mask) == 0, sug))
        D = []
        while C:
            g, lc, coprime, sug = C.pop(0)
            lE = lc[1]
            if coprime or not (
                any(divides(c[1][1], lE) for c in C) or any(divides(c[1][1], lE) for c in D)
            ):
                D.append((g, lc, coprime, sug))
        for g, lc, coprime, sug in D:
            if not coprime:
                pr = _Pair(sug, lc, g.idx, h.idx)
                self.pairs.append(pr)
                self._push(pr)

        for g in self.elts:
            if g.alive and divides(hE, g.lmE):
                g.alive = False
        self.elts.append(h)
        return h

    def _spoly(self, pr: _Pair) -> dict:
        return _spoly_dict(self.elts[pr.i], self.elts[pr.j], pr.lcm[0], self.ctx.p)

    def run(self, max_degree=None, truncate=False):
        """Process queued items; with ``truncate`` stop (without error) above ``max_degree``."""
        ctx = self.ctx
        cap = self.max_degree if max_degree is None else max_degree
        heap = self.heap
        while heap:
            sugar, _, _, pr = heap[0]
            if not pr.alive:
                heapq.heappop(heap)
                continue
            if cap is not None and sugar > cap:
                if truncate:
                    return
                raise ResourceLimitError(
                    f"degree cap {cap} exceeded",
                    self._diagnostics(sugar),
                )
            heapq.heappop(heap)
            pr.alive = False
            self.processed += 1
            if self.max_pairs is not None and self.processed > self.max_pairs:
                raise ResourceLimitError(
                    f"pair cap {self.max_pairs} exceeded", self._diagnostics(sugar)
                )
            if pr.gen is not None:
                f = pr.gen
            else:
                f = self._spoly(pr)
            r = _nf(f, self.active(), ctx)
            if r:
                self._insert(r, sugar)
            else:
                self.zero_reductions += 1

    def _diagnostics(self, degree) -> dict:
        return {
            "basis_size": sum(1 for g in self.elts if g.alive),
            "pending_pairs": self.pending(),
            "processed_pairs": self.processed,
            "zero_reductions": self.zero_reductions,
            "current_degree": degree,
        }

    def reduced(self) -> list:
        """Reduced basis (list of monic dicts) sorted by increasing leading term."""
        return _interreduce(self.active(), self.ctx)


def _spoly_dict(gi: _Elt, gj: _Elt, lcm: int, p: int) -> dict:
    qi, qj = lcm - gi.lm, lcm - gj.lm
    h = {k + qi: c for k, c in gi.tail}
    for k, c in gj.tail:
        mm = k + qj
        v = h.get(mm)
        if v is None:
            h[mm] = (-c % p) if p else -c
        else:
            v = (v - c) % p if p else v - c
            if v:
                h[mm] = v
            else:
                del h[mm]
    return h


def _interreduce(elts: list, ctx: _Ctx) -> list:
    """Minimal + tail-reduced basis from a Gröbner basis given as _Elt list."""
    guard = ctx.guard
    mins = []
    for g in sorted(elts, key=lambda e: e.lm):
        if any(((g.lmE | guard) - h.lmE) & guard == guard for h in mins):
            continue
        mins.append(g)
    out = []
    for g in mins:
        others = [h for h in mins if h is not g]
        tail = _nf(dict(g.tail), others, ctx)
        tail[g.lm] = ctx.one
        out.append(tail)
    out.sort(key=max)
    return out


def _to_elts(ctx: _Ctx, polys: list) -> list:
    return [_Elt(ctx, d, 0, i) for i, d in enumerate(polys) if d]


# ---------------------------------------------------------------------------
# public API


class GroebnerBasis:
    """Reduced Gröbner basis: monic elements sorted by increasing leading term."""

    def __init__(self, elements, order: MonomialOrder, ring: RingSpec, _dicts=None):
        self.elements = tuple(elements)
        self.order = order
        self.ring = ring
        self._ctx = _Ctx.get(ring, order)
        if _dicts is None:
            _dicts = [self._ctx.from_poly(f) for f in self.elements]
        self._elts = _to_elts(self._ctx, _dicts)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].is_constant()

    def is_zero(self) -> bool:
        return not self.elements

    def reduce(self, f: Polynomial) -> Polynomial:
        ctx = self._ctx
        return ctx.to_poly(_nf(ctx.from_poly(f), self._elts, ctx))

    def contains(self, f: Polynomial) -> bool:
        if not f:
            return True
        ctx = self._ctx
        return not _nf(ctx.from_poly(f), self._elts, ctx)

    __contains__ = contains

    def leading_monomials(self) -> list:
        return [self._ctx.exps_of_e(g.lmE) for g in self._elts]

    def __eq__(self, other):
        if not isinstance(other, GroebnerBasis):
            return NotImplemented
        return (self.order, self.ring, self.elements) == (other.order, other.ring, other.elements)

    def __hash__(self):
        return hash((self.order, self.elements))

    def __repr__(self):
        return f"GroebnerBasis({[str(g) for g in self.elements]})"


def _check_ring(polys, ring=None):
    for f in polys:
        if ring is None:
            ring = f.ring
        elif f.ring != ring:
            raise RingMismatch(f"{f.ring} vs {ring}")
    return ring


def normal_form(f: Polynomial, basis, order: MonomialOrder | None = None) -> Polynomial:
    """Fully reduced remainder of ``f`` by ``basis`` (first divisor in list order)."""
    ring = _check_ring([f, *basis])
    order = order or default_order(ring)
    if any(not b for b in basis):
        raise ValueError("basis elements must be nonzero")
    ctx = _Ctx.get(ring, order)
    elts = _to_elts(ctx, [ctx.from_poly(b) for b in basis])
    return ctx.to_poly(_nf(ctx.from_poly(f), elts, ctx))


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder | None = None) -> Polynomial:
    order = order or default_order(f.ring)
    ctx = _Ctx.get(f.ring, order)
    a = _Elt(ctx, ctx.from_poly(f), 0, 0)
    b = _Elt(ctx, ctx.from_poly(g), 0, 1)
    lcm = tuple(map(max, a.exps, b.exps))
    return ctx.to_poly(_spoly_dict(a, b, ctx.pack(lcm), ctx.p))


def _gb_dicts(ring, order, dicts, max_degree=None, max_pairs=None):
    ctx = _Ctx.get(ring, order)
    eng = _Engine(ctx, max_degree=max_degree, max_pairs=max_pairs)
    for d in dicts:
        eng.add(d)
    eng.run()
    return eng.reduced()


def buchberger(gens, order: MonomialOrder | None = None, max_degree=None, max_pairs=None) -> GroebnerBasis:
    """Reduced Gröbner basis of the ideal generated by ``gens``."""
    gens = list(gens)
    if not gens:
        raise ValueError("buchberger needs at least one generator")
    ring = _check_ring(gens)
    order = order or default_order(ring)
    ctx = _Ctx.get(ring, order)
    dicts = _gb_dicts(ring, order, [ctx.from_poly(g) for g in gens], max_degree, max_pairs)
    elements = [ctx.to_poly(d) for d in dicts]
    return GroebnerBasis(elements, order, ring, _dicts=dicts)


def reduce_basis(basis, order: MonomialOrder) -> GroebnerBasis:
    """Reduced basis from polynomials already known to form a Gröbner basis."""
    basis = [b for b in basis if b]
    if not basis:
        raise ValueError("empty basis")
    ring = _check_ring(basis)
    ctx = _Ctx.get(ring, order)
    elts = _to_elts(ctx, [ctx.from_poly(b) for b in basis])
    dicts = _interreduce(elts, ctx)
    return GroebnerBasis([ctx.to_poly(d) for d in dicts], order, ring, _dicts=dicts)


def membership(f: Polynomial, ideal) -> bool:
    """``f`` in the ideal (an Ideal, a GroebnerBasis or a list of generators)."""
    if not f:
        return True
    if isinstance(ideal, GroebnerBasis):
        return ideal.contains(f)
    if hasattr(ideal, "groebner_basis"):
        return ideal.groebner_basis().contains(f)
    gens = [g for g in ideal if g]
    if not gens:
        return False
    return buchberger(gens).contains(f)


def _echelon(rows: list, p: int, one=1) -> list:
    """Reduced row echelon form of sparse rows (dicts keyed by packed monomial)."""
    pivots = []  # (pivot key, row)
    for row in rows:
        row = dict(row)
        for pk, prow in pivots:
            c = row.get(pk)
            if c:
                for k, v in prow.items():
                    nv = row.get(k, 0) - c * v
                    if p:
                        nv %= p
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        if not row:
            continue
        pk = max(row)
        lc = row[pk]
        if p:
            inv = pow(lc, -1, p)
            row = {k: v * inv % p for k, v in row.items()}
        else:
            inv = one / lc
            row = {k: v * inv for k, v in row.items()}
        # back-substitute into earlier pivots
        for i, (qk, qrow) in enumerate(pivots):
            c = qrow.get(pk)
            if c:
                for k, v in row.items():
                    nv = qrow.get(k, 0) - c * v
                    if p:
                        nv %= p
                    if nv:
                        qrow[k] = nv
                    else:
                        qrow.pop(k, None)
        pivots.append((pk, row))
    pivots.sort(key=lambda t: t[0], reverse=True)
    return [r for _, r in pivots]


def trim(gens) -> list:
    """Minimal homogeneous generating set of a bihomogeneous ideal.

    Works degree by degree: candidates of degree D are reduced modulo a
    Gröbner basis of the already kept generators truncated at degree D, and
    the survivors are put in reduced echelon form.  The result depends only
    on the ideal, so its bidegree multiset is an invariant.
    """
    gens = [g for g in gens if g]
    if not gens:
        return []
    ring = _check_ring(gens)
    for g in gens:
        if bidegree(g) is NOT_BIHOMOGENEOUS:
            raise NonHomogeneousInput(f"generator is not bihomogeneous: {g}")
    order = default_order(ring)
    ctx = _Ctx.get(ring, order)
    by_degree: dict = {}
    for g in gens:
        by_degree.setdefault(g.total_degree(), []).append(ctx.from_poly(g))
    eng = _Engine(ctx)
    out = []
    for D in sorted(by_degree):
        eng.run(max_degree=D, truncate=True)
        basis = eng.active()
        rems = [_nf(f, basis, ctx) for f in by_degree[D]]
        rows = _echelon([r for r in rems if r], ctx.p, ctx.one)
        for r in rows:
            out.append(r)
            eng.add(r, sugar=D)
    return [ctx.to_poly(r) for r in out]
