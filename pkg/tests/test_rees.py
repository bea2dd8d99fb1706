import math

import pytest

from reesalg.idealops import Ideal, PolyMatrix, eliminate, height, ideal_equal, minors
from reesalg.polyring import QQ, PrimeField, RingSpec
from reesalg.rees import (
    DegenerateColumnRank,
    I1NotMaximal,
    NonLinearEntry,
    ShapeNotNormalForm,
    analyze,
    approximation_chain,
    candidate_defining_ideal,
    classify_shape,
    column_instance,
    extract_submatrices,
    fiber_analysis,
    fiber_type_check,
    gs_profile,
    jacobian_dual,
    linear_forms,
    matrix_rank,
    minimal_primes_certificate,
    residual_intersection_check,
    residual_rank,
    row_instance,
    saturation_oracle,
    symmetric_ideal,
    unique_minimal_prime_check,
    validate_presentation,
)

from corpus_helpers import corpus_presentation

GF = PrimeField(32003)


def pres(rows, d, e=1, field=QQ, **kw):
    R = RingSpec(d, len(rows), field)
    return validate_presentation(PolyMatrix.from_strings(rows, R), e, **kw)


# --- validation -------------------------------------------------------------


def test_validation_errors():
    with pytest.raises(NonLinearEntry) as err:
        pres([["x1^2", "x2"], ["x2", "x1"], ["x1", "0"]], 2)
    assert err.value.position == (0, 0)
    with pytest.raises(NonLinearEntry):
        pres([["x1 + 1", "x2"], ["x2", "x1"], ["x1", "0"]], 2, allow_nonlinear=True)
    with pytest.raises(I1NotMaximal):
        pres([["x1", "0"], ["0", "x1"], ["x1", "x1"]], 2)
    with pytest.raises(DegenerateColumnRank):
        pres([["x1", "x1"], ["x2", "x2"], ["0", "0"]], 2)
    with pytest.raises(ValueError):
        pres([["x1", "x2"], ["x2", "x1"], ["x1", "0"]], 2, e=2)


def test_nonlinear_flag_and_warning():
    p = pres([["x1^2", "x2"], ["x2", "x1"], ["x1", "0"]], 2, allow_nonlinear=True)
    assert not p.linear
    assert p.warnings == []
    small = pres([["x1"], ["x2"]], 3 - 1)
    assert small.warnings  # n = 2 < d + e = 3


def test_matrix_rank_is_exact():
    R = RingSpec(2)
    M = PolyMatrix.from_strings([["x1", "x2"], ["x1^2", "x1 x2"]], R)
    assert matrix_rank(M) == 1
    assert matrix_rank(PolyMatrix.from_strings([["x1", "x2"], ["x2", "x1"]], R)) == 2


# --- G_s profile and shape ------------------------------------------------


def test_gs_profile_infinite_for_generic_small_case():
    p = pres([["x1", "0"], ["x2", "x1"], ["0", "x2"]], 2)
    gs = gs_profile(p)
    assert gs.s_max == math.inf and gs.infinite
    assert gs.fitting_heights == [(1, 2)]


@pytest.mark.parametrize("name", ["example_6_1", "example_6_2", "example_6_3", "example_6_4"])
def test_corpus_examples_satisfy_g2_not_g3(name):
    p, _ = corpus_presentation(name)
    gs = gs_profile(p)
    assert gs.s_max == 2
    assert dict(gs.fitting_heights)[2] == 2


def test_shape_classification_of_corpus():
    kinds = {n: classify_shape(corpus_presentation(n)[0], 2).kind
             for n in ["example_6_1", "example_6_2", "example_6_3", "example_6_4"]}
    assert kinds == {"example_6_1": "NotRankOne", "example_6_2": "NotRankOne",
                     "example_6_3": "NotRankOne", "example_6_4": "Row"}
    assert residual_rank(corpus_presentation("example_6_1")[0], 2) == 3


def test_ambiguous_shape_follows_hint():
    p, _ = row_instance(4, 3, 5, 1, seed=1, field=GF)
    col = classify_shape(p, 3)
    row = classify_shape(p, 3, prefer="row")
    assert col.ambiguous and row.ambiguous
    assert (col.kind, row.kind) == ("Column", "Row")
    with pytest.raises(ValueError):
        classify_shape(p, 3, prefer="diagonal")


def test_rank_one_unstructured():
    # mod (x1, x2) the surviving entries form a rank-one block spread over two rows and two columns
    rows = [["x1", "x2", "0", "0"], ["x2", "x1", "x1", "0"], ["0", "x1", "x2", "x1"],
            ["x1", "0", "x3", "x4"], ["x2", "x1", "x3", "x4"]]
    p = pres(rows, 4, field=GF)
    shape = classify_shape(p, 2)
    assert shape.kind == "RankOneUnstructured" and shape.residual_rank == 1
    with pytest.raises(ShapeNotNormalForm):
        extract_submatrices(p, shape)


# --- Jacobian dual and submatrices ----------------------------------------


@pytest.mark.parametrize("kind", ["Column", "Row"])
def test_jacobian_dual_and_transition_identities(kind):
    build = column_instance if kind == "Column" else row_instance
    p, _ = build(4, 2, 5, 1, seed=3, field=GF)
    B = jacobian_dual(p)
    assert (B.rows, B.cols) == (p.d, p.m)
    assert B.left_multiply(p.x()) == linear_forms(p)
    assert all(not any(m[i] for m in f.terms for i in p.ring.x_indices) for row in B.entries for f in row)
    shape = classify_shape(p, 2, prefer=kind)
    sub = extract_submatrices(p, shape)
    ell = linear_forms(p)
    s = 2
    if kind == "Column":
        assert sub.b_prime.rows == s and sub.b_prime.cols == p.m - 1
        assert sub.gamma is not None
    else:
        assert (sub.b_prime.rows, sub.b_prime.cols) == (s, p.m - p.d + s)
        assert (sub.c_matrix.rows, sub.c_matrix.cols) == (s + 1, p.m)
        assert sub.c_matrix.left_multiply(p.x()[:s] + [p.T()[shape.witness]]) == ell
    k = sub.b_prime.cols
    kept = [ell[j] for j in range(p.m) if sub.b_prime.cols and j in _bprime_columns(sub, shape, p)]
    assert sub.b_prime.left_multiply(p.x()[:s]) == kept[:k]


def _bprime_columns(sub, shape, p):
    if shape.kind == "Column":
        return [j for j in range(p.m) if j != shape.witness]
    bar = p.phi.map(lambda f: f.set_zero(range(shape.s)))
    return [j for j in range(p.m) if not bar[shape.witness, j]]


# --- defining ideal, fiber, certificates ----------------------------------


def test_candidate_equals_oracle_on_column_instance():
    p, _ = column_instance(4, 2, 5, 1, seed=2, field=GF)
    shape = classify_shape(p, 2)
    sub = extract_submatrices(p, shape)
    J, k = saturation_oracle(p, 2)
    assert k == 1
    assert ideal_equal(candidate_defining_ideal(p, sub, shape), J)
    assert height(J) == p.m
    ok, parts = residual_intersection_check(p, sub, shape, J, details=True)
    assert ok and all(parts.values())
    assert fiber_type_check(sub, shape, symmetric_ideal(p))


@pytest.mark.parametrize("name", ["example_6_3", "column_4_2_5_1"])
def test_fiber_shortcut_matches_elimination(name):
    p, _ = corpus_presentation(name)
    J, _ = saturation_oracle(p, 2)
    fa = fiber_analysis(J, p)
    eliminated = eliminate(J + p.maximal_ideal(), set(p.ring.t_indices))
    assert ideal_equal(fa.fiber_ideal, eliminated)


def test_fiber_analysis_rejects_mixed_ideals():
    p, _ = corpus_presentation("example_6_3")
    with pytest.raises(ValueError):
        fiber_analysis(Ideal([p.ring.parse("x1 + T1")], p.ring), p)


def test_minimal_prime_certificates():
    p, primes = corpus_presentation("example_6_1")
    F = minors(p.phi, p.n - 2)
    assert not unique_minimal_prime_check(F, 2)
    cert = minimal_primes_certificate(F, primes)
    assert cert["passed"] and cert["heights"] == [2, 2]
    bad = minimal_primes_certificate(F, primes[:1])
    assert not bad["passed"]
    p3, _ = corpus_presentation("example_6_3")
    assert unique_minimal_prime_check(minors(p3.phi, p3.n - 2), 2)


def test_certificate_rejects_comparable_primes():
    p, _ = corpus_presentation("example_6_2")
    F = minors(p.phi, p.n - 2)
    R = p.ring
    cert = minimal_primes_certificate(F, [Ideal.parse(["x1", "x2"], R), Ideal.parse(["x1", "x2", "x3"], R)])
    assert not cert["passed"]


# --- chains and instances ---------------------------------------------------


def test_approximation_chain_on_column_instance():
    p, _ = column_instance(4, 2, 5, 1, seed=1, field=GF)
    chain = approximation_chain(p, 3, s=2)
    assert chain.passed
    assert [st.height_J_i for st in chain.steps] == [4, 3, 2, 1]
    assert chain.steps[1].phi_i.cols == p.m - 1
    with pytest.raises(ValueError):
        approximation_chain(p, p.m + 1)
    full = approximation_chain(p, p.m, s=2)
    assert full.steps[-1].J_i.is_zero() and full.steps[-1].phi_i is None


def test_instances_are_reproducible():
    a, _ = row_instance(4, 2, 6, 1, seed=7, field=GF)
    b, _ = row_instance(4, 2, 6, 1, seed=7, field=GF)
    assert a.phi == b.phi
    with pytest.raises(ValueError):
        column_instance(3, 3, 4, 1)


def test_analyze_report_on_example_6_4():
    p, _ = corpus_presentation("example_6_4")
    rep = analyze(p, s=2)
    data = rep.data
    assert data["oracle"]["exponent"] == 2
    assert data["shape"]["kind"] == "Row"
    assert "candidate" not in data  # nonlinear: no matrix formula applies
    assert set(rep.timings) >= {"gs_profile", "shape", "oracle", "fiber"}


@pytest.mark.parametrize("name", ["example_6_2", "example_6_3", "example_6_4"])
def test_results_agree_over_q_and_prime_field(name):
    out = []
    for field in ("q", "zp:32003"):
        p, primes = corpus_presentation(name, field)
        data = analyze(p, s=2, minimal_primes=primes).data
        out.append((data["fiber"]["census"], data["oracle"]["exponent"], data["oracle"]["height"]))
    assert out[0] == out[1]


@pytest.mark.parametrize("name", ["example_6_3", "example_6_4"])
def test_direct_and_iterated_saturation_agree(name):
    from reesalg.idealops import saturate

    p, _ = corpus_presentation(name)
    L, P = symmetric_ideal(p), p.prime(2)
    S1, k1 = saturate(L, P, "direct")
    S2, k2 = saturate(L, P, "iterated")
    assert k1 == k2 and ideal_equal(S1, S2)


# --- structural invariants ---------------------------------------------------------


@pytest.mark.parametrize("kind", ["Column", "Row"])
def test_cramer_containment(kind):
    build = column_instance if kind == "Column" else row_instance
    p, _ = build(4, 2, 6, 1, seed=4, field=GF)
    shape = classify_shape(p, 2, prefer=kind)
    sub = extract_submatrices(p, shape)
    gb = symmetric_ideal(p).groebner_basis()
    for m in minors(sub.b_prime, 2).generators:
        for j in range(1, 3):
            assert gb.contains(p.ring.x(j) * m)


def test_census_does_not_depend_on_generators():
    from reesalg.idealops import census

    p, _ = corpus_presentation("example_6_3")
    J, _ = saturation_oracle(p, 2)
    from reesalg.polyring import bidegree

    gens = list(J.generators)
    a, b = [g for g in gens if bidegree(g) == (1, 1)][:2]
    padded = Ideal(gens[::-1] + [p.ring.T(1) * gens[0], a + 3 * b, p.ring.x(2) * a], p.ring)
    assert census(padded) == census(J)


def _module_after_deleting(p, i):
    from reesalg.rees import Presentation

    return Presentation(p.phi.drop_last_columns(i), p.rank_e + i, p.ring)


@pytest.mark.parametrize("kind, params", [("Column", (4, 2, 5, 1)), ("Row", (4, 2, 6, 1))])
def test_gs_does_not_drop_along_the_chain(kind, params):
    build = column_instance if kind == "Column" else row_instance
    p, _ = build(*params, seed=1, field=GF)
    profile = [gs_profile(_module_after_deleting(p, i)).s_max for i in range(p.m)]
    assert all(a <= b for a, b in zip(profile, profile[1:]))
    if kind == "Row":
        d, s = params[0], params[1]
        assert profile[: d - s + 1] == [s] * (d - s + 1)
