"""Rees algebras of linearly presented modules of projective dimension one.

Given an ``n x (n-e)`` presentation ``phi`` over ``R = k[x1..xd]`` this module
builds the symmetric-algebra ideal ``L``, the Jacobian dual ``B(phi)``, the
column/row submatrices ``B'``, ``C``, ``B''``, the candidate defining ideals,
and the saturation ``L : p^inf`` that every candidate is compared against.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from itertools import combinations

from .groebner import trim
from .idealops import (
    Ideal,
    PolyMatrix,
    census,
    colon,
    fitting_ideal,
    height,
    ideal_equal,
    is_contained,
    minor_list,
    minors,
    radical_membership,
    saturate,
)
from .polyring import (
    NOT_BIHOMOGENEOUS,
    PrimeField,
    Polynomial,
    RingSpec,
    bidegree,
)

__all__ = [
    "NonLinearEntry",
    "DegenerateColumnRank",
    "I1NotMaximal",
    "TransitionIdentityFailure",
    "ShapeNotNormalForm",
    "Presentation",
    "GsProfile",
    "ShapeClassification",
    "Submatrices",
    "ChainStep",
    "ApproximationChain",
    "FiberAnalysis",
    "validate_presentation",
    "gs_profile",
    "residual_rank",
    "classify_shape",
    "jacobian_dual",
    "symmetric_ideal",
    "extract_submatrices",
    "candidate_defining_ideal",
    "saturation_oracle",
    "unique_minimal_prime_check",
    "minimal_primes_certificate",
    "fiber_analysis",
    "approximation_chain",
    "residual_intersection_check",
    "fiber_type_check",
    "column_instance",
    "row_instance",
    "AnalysisReport",
    "analyze",
    "matrix_rank",
    "linear_forms",
]


class NonLinearEntry(ValueError):
    def __init__(self, position, entry=None):
        super().__init__(f"entry {position} is not a linear form in x: {entry}")
        self.position = position


class DegenerateColumnRank(ValueError):
    pass


class I1NotMaximal(ValueError):
    pass


class TransitionIdentityFailure(ValueError):
    def __init__(self, what, position):
        super().__init__(f"{what} fails at {position}")
        self.position = position


class ShapeNotNormalForm(ValueError):
    pass


# ---------------------------------------------------------------------------
# presentations


@dataclass
class Presentation:
    phi: PolyMatrix
    rank_e: int
    ring: RingSpec
    linear: bool = True
    warnings: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.phi.rows

    @property
    def d(self) -> int:
        return self.ring.x_count

    @property
    def m(self) -> int:
        """Number of columns, n - e."""
        return self.phi.cols

    def T(self):
        return [self.ring.T(i + 1) for i in range(self.n)]

    def x(self):
        return [self.ring.x(i + 1) for i in range(self.d)]

    def prime(self, s: int) -> Ideal:
        """p = (x1..xs)."""
        return Ideal.variables(self.ring, range(s))

    def maximal_ideal(self) -> Ideal:
        return Ideal.variables(self.ring, range(self.d))


def _x_only(f: Polynomial) -> bool:
    d = f.ring.x_count
    return all(not any(m[d:]) for m in f.terms)


def _rank_mod(rows, prime: int) -> int:
    """Rank of an integer matrix modulo ``prime``."""
    a = [[v % prime for v in r] for r in rows]
    rank, ncols = 0, len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][c], -1, prime)
        for i in range(len(a)):
            if i != rank and a[i][c]:
                f = a[i][c] * inv % prime
                a[i] = [(x - f * y) % prime for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


_EVAL_PRIME = 2_147_483_647


def _eval_mod(f: Polynomial, point, prime=_EVAL_PRIME) -> int:
    total = 0
    for m, c in f.terms.items():
        if f.ring.field.modulus:
            v = int(c)
        else:
            v = int(c.numerator) * pow(int(c.denominator), -1, prime)
        for x, e in zip(point, m):
            if e:
                v = v * pow(x, e, prime)
        total += v
    return total % prime


def _generic_rank(M: PolyMatrix, rng: random.Random) -> int:
    """Lower bound for the rank of M (exact with high probability)."""
    if M.ring.field.modulus:
        prime = M.ring.field.modulus
    else:
        prime = _EVAL_PRIME
    best = 0
    for _ in range(2):
        point = [rng.randrange(1, prime) for _ in range(M.ring.nvars)]
        rows = [[_eval_mod(e, point, prime) for e in r] for r in M.entries]
        best = max(best, _rank_mod(rows, prime))
    return best


def matrix_rank(M: PolyMatrix, seed: int = 0) -> int:
    """Exact rank: largest r with I_r(M) != 0."""
    if M.is_zero():
        return 0
    rng = random.Random(seed)
    r = _generic_rank(M, rng)
    while r < min(M.rows, M.cols) and any(minor_list(M, r + 1)):
        r += 1
    return r


def validate_presentation(phi: PolyMatrix, rank_e: int, allow_nonlinear: bool = False) -> Presentation:
    """Check the standing hypotheses on ``phi`` and wrap it."""
    n, m = phi.rows, phi.cols
    if not 1 <= rank_e < n:
        raise ValueError(f"rank_e must satisfy 1 <= e < n, got e={rank_e}, n={n}")
    if m != n - rank_e:
        raise ValueError(f"phi has {m} columns but n - e = {n - rank_e}")
    base = phi.ring
    ring = RingSpec(base.x_count, n, base.field)
    if base != ring:
        phi = phi.map(lambda f: f.embed(ring))
    linear = True
    for i, row in enumerate(phi.entries):
        for j, f in enumerate(row):
            if not f:
                continue
            bd = bidegree(f)
            if bd == (1, 0):
                continue
            if allow_nonlinear and bd is not NOT_BIHOMOGENEOUS and bd[1] == 0 and bd[0] >= 1:
                linear = False
                continue
            raise NonLinearEntry((i, j), f)
    pres = Presentation(phi, rank_e, ring, linear)
    if not ideal_equal(phi.entry_ideal(), pres.maximal_ideal()):
        raise I1NotMaximal("the entries of phi do not generate (x1..xd)")
    if matrix_rank(phi) < m:
        raise DegenerateColumnRank("phi does not have full column rank")
    if n < pres.d + rank_e:
        pres.warnings.append(f"n = {n} < d + e = {pres.d + rank_e}")
    return pres


def symmetric_ideal(p: Presentation) -> Ideal:
    """L = ([T1..Tn] * phi)."""
    return Ideal(p.phi.left_multiply(p.T()), p.ring)


def linear_forms(p: Presentation) -> list:
    return p.phi.left_multiply(p.T())


# ---------------------------------------------------------------------------
# G_s profile and shapes


@dataclass
class GsProfile:
    s_max: object  # int or math.inf
    fitting_heights: list

    @property
    def infinite(self) -> bool:
        return self.s_max == math.inf


def gs_profile(p: Presentation) -> GsProfile:
    """Largest s such that ht Fitt_i >= i - e + 2 for e <= i <= s + e - 2."""
    e, n, d = p.rank_e, p.n, p.d
    table = []
    for i in range(e, min(n - 1, d + e - 2) + 1):
        h = height(fitting_ideal(p.phi, i))
        table.append((i, h))
        if h < i - e + 2:
            return GsProfile(i - e + 1, table)
    return GsProfile(math.inf, table)


def residual_rank(p: Presentation, s: int) -> int:
    """Rank of phi modulo (x1..xs)."""
    return matrix_rank(_reduce_mod_p(p, s))


def _reduce_mod_p(p: Presentation, s: int) -> PolyMatrix:
    idx = tuple(range(s))
    return p.phi.map(lambda f: f.set_zero(idx))


@dataclass
class ShapeClassification:
    kind: str  # Column, Row, NotRankOne or RankOneUnstructured
    s: int
    residual_rank: int
    witness: object = None  # column index (column) or row index (row)
    ambiguous: bool = False

    @property
    def is_normal(self) -> bool:
        return self.kind in ("Column", "Row")


def classify_shape(p: Presentation, s: int, prefer: str | None = None) -> ShapeClassification:
    """Column/row detection of phi mod (x1..xs).

    When a single nonzero entry survives (s = d - 1) both shapes apply;
    ``prefer`` picks one, defaulting to column.
    """
    if not 1 <= s < p.d:
        raise ValueError(f"s must satisfy 1 <= s < d, got {s}")
    if prefer is not None:
        prefer = prefer.capitalize()
        if prefer not in ("Column", "Row"):
            raise ValueError(f"shape hint must be column or row, got {prefer!r}")
    bar = _reduce_mod_p(p, s)
    r = matrix_rank(bar)
    if r != 1:
        return ShapeClassification("NotRankOne", s, r)
    cells = [(i, j) for i in range(bar.rows) for j in range(bar.cols) if bar[i, j]]
    rows = {i for i, _ in cells}
    cols = {j for _, j in cells}
    if len(rows) == 1 and len(cols) == 1:
        kind = prefer or "Column"
        witness = cols.pop() if kind == "Column" else rows.pop()
        return ShapeClassification(kind, s, r, witness, ambiguous=True)
    if len(cols) == 1:
        return ShapeClassification("Column", s, r, cols.pop())
    if len(rows) == 1:
        return ShapeClassification("Row", s, r, rows.pop())
    return ShapeClassification("RankOneUnstructured", s, r)


# ---------------------------------------------------------------------------
# Jacobian dual and submatrices


def _coefficient_of_var(f: Polynomial, v: int) -> Polynomial:
    """Coefficient of x_v in a polynomial that is linear in the x variables."""
    terms = {}
    for m, c in f.terms.items():
        if m[v]:
            mm = list(m)
            mm[v] -= 1
            terms[tuple(mm)] = c
    return Polynomial(f.ring, terms, _trusted=True)


def jacobian_dual(p: Presentation) -> PolyMatrix:
    """The d x (n-e) matrix B over k[T] with [x1..xd] * B = [T1..Tn] * phi."""
    if not p.linear:
        raise NonLinearEntry(None, "Jacobian dual needs a linear presentation")
    ring, T = p.ring, p.T()
    B = []
    for v in range(p.d):
        row = []
        for k in range(p.m):
            acc = ring.zero()
            for i in range(p.n):
                c = _coefficient_of_var(p.phi[i, k], v)
                if c:
                    acc = acc + T[i] * c
            row.append(acc)
        B.append(row)
    B = PolyMatrix(B, ring)
    _check_row_identity("[x]*B = [T]*phi", p.x(), B, linear_forms(p))
    for j, r in enumerate(B.entries):
        for k, f in enumerate(r):
            if f and not all(not any(m[: p.d]) for m in f.terms):
                raise TransitionIdentityFailure("B(phi) has an entry outside k[T]", (j, k))
    return B


def _check_row_identity(what, vector, M: PolyMatrix, expected):
    got = M.left_multiply(vector)
    for k, (a, b) in enumerate(zip(got, expected)):
        if a != b:
            raise TransitionIdentityFailure(what, k)


@dataclass
class Submatrices:
    kind: str
    s: int
    jacobian_dual: PolyMatrix
    b_prime: PolyMatrix
    b_doubleprime: PolyMatrix
    c_matrix: PolyMatrix | None = None
    psi: PolyMatrix | None = None
    gamma: Polynomial | None = None
    residual_generators: list = field(default_factory=list)
    witness: int = 0


def extract_submatrices(p: Presentation, shape: ShapeClassification) -> Submatrices:
    """B', B'' and either (gamma) or (psi, C); every transition identity is checked."""
    if not shape.is_normal:
        raise ShapeNotNormalForm(f"shape {shape.kind} has no column/row normal form")
    s, ring = shape.s, p.ring
    B = jacobian_dual(p)
    ell = linear_forms(p)
    xs = p.x()[:s]
    top = range(s)
    if shape.kind == "Column":
        c = shape.witness
        others = [k for k in range(p.m) if k != c]
        b_prime = B.submatrix(top, others)
        gamma = ring.zero()
        for j in range(s, p.d):
            gamma = gamma + p.x()[j] * B[j, c]
        bpp_rows = [list(B.row(j)) for j in top]
        bpp_rows.append([ring.one() if k == c else ring.zero() for k in range(p.m)])
        bpp = PolyMatrix(bpp_rows, ring)
        _check_row_identity("[l'] = [x1..xs]*B'", xs, b_prime, [ell[k] for k in others])
        _check_row_identity("[l] = [x1..xs gamma]*B''", xs + [gamma], bpp, ell)
        return Submatrices(
            "Column", s, B, b_prime, bpp, gamma=gamma,
            residual_generators=xs + [gamma], witness=c,
        )
    r = shape.witness
    bar_row = [p.phi[r, k].set_zero(tuple(range(s))) for k in range(p.m)]
    zero_cols = [k for k in range(p.m) if not bar_row[k]]
    live_cols = [k for k in range(p.m) if bar_row[k]]
    Tn = ring.T(r + 1)
    b_prime = B.submatrix(top, zero_cols)
    psi = B.submatrix(top, live_cols)
    C = PolyMatrix([list(B.row(j)) for j in top] + [bar_row], ring)
    bpp_rows = [list(B.row(j)) for j in top]
    for j in range(s, p.d):
        bpp_rows.append([_coefficient_of_var(bar_row[k], j) for k in range(p.m)])
    bpp = PolyMatrix(bpp_rows, ring)
    _check_row_identity("[l'] = [x1..xs]*B'", xs, b_prime, [ell[k] for k in zero_cols])
    _check_row_identity("[l] = [x1..xs Tn]*C", xs + [Tn], C, ell)
    resid = xs + [p.x()[j] * Tn for j in range(s, p.d)]
    _check_row_identity("[l] = [x1..xs x_jTn]*B''", resid, bpp, ell)
    return Submatrices(
        "Row", s, B, b_prime, bpp, c_matrix=C, psi=psi,
        residual_generators=resid, witness=r,
    )


def _minors_or_zero(M: PolyMatrix, t: int) -> Ideal:
    if t > min(M.rows, M.cols):
        return Ideal([], M.ring)
    return minors(M, t)


def candidate_defining_ideal(p: Presentation, sub: Submatrices, shape: ShapeClassification) -> Ideal:
    """Column: L + I_s(B'); row: L + I_s(B') + I_{s+1}(C); trimmed."""
    s = shape.s
    gens = list(symmetric_ideal(p).generators)
    gens += _minors_or_zero(sub.b_prime, s).generators
    if shape.kind == "Row":
        gens += _minors_or_zero(sub.c_matrix, s + 1).generators
    return Ideal(trim(gens), p.ring)


def saturation_oracle(p: Presentation, s: int, by: Ideal | None = None):
    """(L : p^inf, exponent); ``by`` replaces p = (x1..xs) when given."""
    L = symmetric_ideal(p)
    return saturate(L, by if by is not None else p.prime(s))


# ---------------------------------------------------------------------------
# minimal-prime certificates


def _in_monomial_prime(f: Polynomial, idx) -> bool:
    return all(any(m[i] for i in idx) for m in f.terms)


def unique_minimal_prime_check(F: Ideal, s: int) -> bool:
    """sqrt(F) = (x1..xs): F inside p, ht F = s, each x_j in sqrt(F)."""
    idx = range(s)
    if not all(_in_monomial_prime(f, idx) for f in F.generators):
        return False
    if height(F) != s:
        return False
    return all(radical_membership(F.ring.var(j), F) for j in idx)


def minimal_primes_certificate(F: Ideal, primes: list) -> dict:
    """Certify that ``primes`` are exactly the minimal primes of F.

    Checks F inside each P, the product of the P in sqrt(F), pairwise
    incomparability, and records heights.  Primality of each P is assumed
    (the callers pass ideals generated by variables).
    """
    contained = [is_contained(F, P) for P in primes]
    product = primes[0]
    for P in primes[1:]:
        product = product * P
    in_radical = all(radical_membership(g, F) for g in product.generators)
    incomparable = all(
        not is_contained(P, Q) for P, Q in combinations(primes, 2)
    ) and all(not is_contained(Q, P) for P, Q in combinations(primes, 2))
    heights = [height(P) for P in primes]
    ht_F = height(F)
    ok = all(contained) and in_radical and incomparable and ht_F == min(heights)
    return {
        "passed": ok,
        "contained": contained,
        "product_in_radical": in_radical,
        "incomparable": incomparable,
        "heights": heights,
        "height": ht_F,
    }


# ---------------------------------------------------------------------------
# fiber ring, chains, residual intersections


@dataclass
class FiberAnalysis:
    fiber_ideal: Ideal
    analytic_spread: int
    census: dict


def fiber_analysis(J: Ideal, p: Presentation) -> FiberAnalysis:
    """Fiber ideal (J + m) ∩ k[T], analytic spread and bidegree census of J.

    J is bihomogeneous, so modulo m each minimal generator either survives
    unchanged (x-degree 0) or vanishes; the fiber ideal is generated by the
    survivors.
    """
    if not J.is_bihomogeneous():
        raise ValueError("fiber analysis needs a bihomogeneous ideal")
    gens = trim(J.generators)
    fiber = Ideal([g for g in gens if bidegree(g)[0] == 0], p.ring)
    h = height(fiber)
    return FiberAnalysis(fiber, p.n - h, census(Ideal(gens, p.ring)))


@dataclass
class ChainStep:
    i: int
    phi_i: PolyMatrix | None
    L_i: Ideal
    J_i: Ideal
    height_J_i: int
    exponent: int


@dataclass
class ApproximationChain:
    steps: list
    heights_ok: bool
    L_chain_ok: bool
    J_chain_ok: bool

    @property
    def passed(self) -> bool:
        return self.heights_ok and self.L_chain_ok and self.J_chain_ok


def approximation_chain(p: Presentation, depth: int | None = None, s: int = 1) -> ApproximationChain:
    """J_i = L_i : (x1..xs)^inf for phi with its last i columns deleted."""
    if depth is None:
        depth = min(3, p.m)
    if not 0 <= depth <= p.m:
        raise ValueError(f"depth must lie in 0..{p.m}")
    ell = linear_forms(p)
    P = p.prime(s)
    steps = []
    for i in range(depth + 1):
        k = p.m - i
        L_i = Ideal(ell[:k], p.ring)
        phi_i = p.phi.drop_last_columns(i) if k else None
        if L_i.is_zero():
            J_i, exp = L_i, 0
        else:
            J_i, exp = saturate(L_i, P)
        steps.append(ChainStep(i, phi_i, L_i, J_i, height(J_i), exp))
    heights_ok = all(st.height_J_i == p.m - st.i for st in steps)
    L_ok = all(is_contained(b.L_i, a.L_i) for a, b in zip(steps, steps[1:]))
    J_ok = all(is_contained(b.J_i, a.J_i) for a, b in zip(steps, steps[1:]))
    return ApproximationChain(steps, heights_ok, L_ok, J_ok)


def residual_intersection_check(p, sub: Submatrices, shape, J: Ideal, details: bool = False):
    """J = L : (residual ideal), L inside it, and ht J = n - e."""
    L = symmetric_ideal(p)
    K = Ideal(sub.residual_generators, p.ring)
    parts = {
        "colon_equals_J": ideal_equal(colon(L, K), J),
        "L_in_residual": is_contained(L, K),
        "height_J": height(J) == p.m,
    }
    ok = all(parts.values())
    return (ok, parts) if details else ok


def fiber_type_check(sub: Submatrices, shape: ShapeClassification, L: Ideal) -> bool:
    """Row case: I_{s+1}(C) inside L + I_s(B').  Column case: always fiber type."""
    if shape.kind == "Column":
        return True
    s = shape.s
    base = L + _minors_or_zero(sub.b_prime, s)
    gb = base.groebner_basis()
    return all(gb.contains(g) for g in _minors_or_zero(sub.c_matrix, s + 1).generators)


# ---------------------------------------------------------------------------
# constructed instances


def _random_form(ring: RingSpec, variables, rng: random.Random, coeffs=(-2, -1, 1, 2)) -> Polynomial:
    f = ring.zero()
    for v in variables:
        c = rng.choice((0,) + tuple(coeffs))
        if c:
            f = f + ring.var(v) * c
    return f


def _build(kind, d, s, n, e, rng, field):
    ring = RingSpec(d, n, field)
    m = n - e
    A = range(s)
    rows = [[_random_form(ring, A, rng) for _ in range(m)] for _ in range(n)]
    tail = [ring.x(j + 1) for j in range(s, d)]
    if kind == "Column":
        for t, x in enumerate(tail):
            rows[n - (d - s) + t][m - 1] = x
    else:
        for t, x in enumerate(tail):
            rows[n - 1][m - (d - s) + t] = x
    return PolyMatrix(rows, ring)


def _instance(kind, d, s, n, e, seed, field, max_tries):
    if not (2 <= s <= d - 1 and n >= d + e and e >= 1):
        raise ValueError(f"parameters (d={d}, s={s}, n={n}, e={e}) are outside the setting")
    rng = random.Random(seed)
    for attempt in range(max_tries):
        phi = _build(kind, d, s, n, e, rng, field)
        try:
            p = validate_presentation(phi, e)
        except (I1NotMaximal, DegenerateColumnRank):
            continue
        if gs_profile(p).s_max != s:
            continue
        shape = classify_shape(p, s, prefer=kind)
        if shape.kind != kind:
            continue
        return p, attempt
    raise RuntimeError(f"no {kind} instance found in {max_tries} tries")


def column_instance(d, s, n, e, seed=0, field=None, max_tries=200):
    """Random column-shape presentation satisfying the standing hypotheses.

    Returns (Presentation, attempts) where ``attempts`` counts rejected draws.
    """
    return _instance("Column", d, s, n, e, seed, field or PrimeField(32003), max_tries)


def row_instance(d, s, n, e, seed=0, field=None, max_tries=200):
    return _instance("Row", d, s, n, e, seed, field or PrimeField(32003), max_tries)


# ---------------------------------------------------------------------------
# full pipeline


@dataclass
class AnalysisReport:
    """Stage results keyed by name; ``data`` is JSON-ready."""

    data: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    def stage(self, name):
        return _Stage(self, name)


class _Stage:
    def __init__(self, report, name):
        self.report, self.name = report, name

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.report.timings[self.name] = round(time.perf_counter() - self.t0, 4)
        return False


def _census_json(c: dict) -> list:
    return [[a, b, k] for (a, b), k in sorted(c.items())]


def _height_json(h):
    return "inf" if h == math.inf else h


def analyze(
    p: Presentation,
    s: int | None = None,
    shape_hint: str | None = None,
    minimal_primes: list | None = None,
    depth: int | None = None,
    report: AnalysisReport | None = None,
) -> AnalysisReport:
    """Run every applicable construction and verifier on ``p``."""
    rep = report or AnalysisReport()
    out = rep.data
    out["presentation"] = {
        "n": p.n, "d": p.d, "e": p.rank_e, "linear": p.linear, "warnings": list(p.warnings),
    }
    with rep.stage("gs_profile"):
        gs = gs_profile(p)
    out["gs_profile"] = {
        "s_max": _height_json(gs.s_max),
        "fitting_heights": [[i, _height_json(h)] for i, h in gs.fitting_heights],
    }
    if s is None:
        if gs.s_max == math.inf or gs.s_max >= p.d:
            s = p.d - 1
        else:
            s = max(1, gs.s_max)
    out["s"] = s

    with rep.stage("shape"):
        shape = classify_shape(p, s, prefer=shape_hint)
    out["shape"] = {
        "kind": shape.kind, "residual_rank": shape.residual_rank,
        "witness": shape.witness, "ambiguous": shape.ambiguous,
    }

    with rep.stage("fitting"):
        F = fitting_ideal(p.phi, s + p.rank_e - 1)
        fit = {
            "index": s + p.rank_e - 1,
            "height": _height_json(height(F)),
            "unique_minimal_prime": unique_minimal_prime_check(F, s),
        }
        if minimal_primes:
            fit["certificate"] = minimal_primes_certificate(F, minimal_primes)
    out["fitting"] = fit

    L = symmetric_ideal(p)
    with rep.stage("oracle"):
        if minimal_primes:
            K = minimal_primes[0]
            for P in minimal_primes[1:]:
                K = K * P
            J, k = saturate(L, K)
            out["oracle_saturated_by"] = "product of minimal primes"
        else:
            J, k = saturate(L, p.prime(s))
            out["oracle_saturated_by"] = f"(x1..x{s})"
    hyps = {
        "n_ge_d_plus_e": p.n >= p.d + p.rank_e,
        "linear": p.linear,
        "rank_one_mod_p": shape.residual_rank == 1,
        "gs_exact": gs.s_max == s,
    }
    out["hypotheses"] = dict(hyps, setting_holds=all(hyps.values()) and 2 <= s <= p.d - 1)
    out["oracle"] = {
        "generators": J.to_strings(),
        "exponent": k,
        "height": _height_json(height(J)),
    }
    with rep.stage("fiber"):
        fa = fiber_analysis(J, p)
    out["fiber"] = {
        "census": _census_json(fa.census),
        "analytic_spread": fa.analytic_spread,
        "fiber_generators": fa.fiber_ideal.to_strings(),
    }

    verdicts = {}
    if shape.is_normal and p.linear:
        with rep.stage("candidate"):
            sub = extract_submatrices(p, shape)
            cand = candidate_defining_ideal(p, sub, shape)
            verdicts["candidate_equals_oracle"] = ideal_equal(cand, J)
        out["candidate"] = {
            "formula": "L + I_s(B')" if shape.kind == "Column" else "L + I_s(B') + I_{s+1}(C)",
            "generators": cand.to_strings(),
            "b_prime": sub.b_prime.to_strings(),
        }
        if shape.kind == "Column":
            out["candidate"]["gamma"] = str(sub.gamma)
        else:
            out["candidate"]["c_matrix"] = sub.c_matrix.to_strings()
        with rep.stage("verify"):
            verdicts["height_is_n_minus_e"] = height(J) == p.m
            predicted = s + p.rank_e if shape.kind == "Column" else p.d + p.rank_e - 1
            out["predicted_analytic_spread"] = predicted
            verdicts["analytic_spread_as_predicted"] = fa.analytic_spread == predicted
            ok, parts = residual_intersection_check(p, sub, shape, J, details=True)
            verdicts["residual_intersection"] = ok
            out["residual_intersection"] = parts
            ft = fiber_type_check(sub, shape, L)
            out["fiber_type"] = ft
            verdicts["fiber_type_as_predicted"] = ft == (shape.kind == "Column" or s == p.d - 1)
            verdicts["exponent_is_one"] = k == 1
            b_ht = height(_minors_or_zero(sub.b_prime, s))
            want = p.n - s - p.rank_e if shape.kind == "Column" else p.n - p.rank_e - p.d + 1
            out["b_prime_minors_height"] = _height_json(b_ht)
            verdicts["b_prime_minors_height"] = b_ht == want
    if depth:
        with rep.stage("chain"):
            chain = approximation_chain(p, depth, s)
            j1 = None
            if shape.kind == "Column" and p.linear and depth >= 1:
                sub = extract_submatrices(p, shape)
                L1 = chain.steps[1].L_i
                j1 = ideal_equal(chain.steps[1].J_i, L1 + _minors_or_zero(sub.b_prime, s))
        out["chain"] = {
            "heights": [[st.i, _height_json(st.height_J_i)] for st in chain.steps],
            "exponents": [[st.i, st.exponent] for st in chain.steps],
        }
        verdicts["chain_heights"] = chain.heights_ok
        verdicts["chain_inclusions"] = chain.L_chain_ok and chain.J_chain_ok
        if j1 is not None:
            verdicts["chain_J1_formula"] = j1
    out["verdicts"] = verdicts
    return rep
