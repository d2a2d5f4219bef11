import random

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from oracles import hilbert_oracle
from qdivided import suites
from qdivided.dalg import DElement, d_derive, d_mul, x
from qdivided.dmod import (
    FPModule,
    NotAConnection,
    TruncationTooSmall,
    as_graded,
    bound_homology_epsilon,
    bound_spectral_convergence,
    bound_spectral_epsilon,
    bound_unipotent,
    bound_vimod,
    check_connection_law,
    connection_kernel_decompose,
    Connection,
    direct_sum,
    epsilon_lambda,
    free_connection,
    free_module,
    g_r,
    generator_counts,
    generator_vectors,
    graded_quotient,
    graded_submodule,
    hilbert,
    iterated_connection_check,
    power_connection,
    predict_period,
)
from qdivided.qarith import QContext, b_value, q_binomial

C32 = QContext(3, 2)
GRID = [(2, 3), (3, 2), (3, 4), (5, 2), (5, 4), (7, 2)]
contexts = st.sampled_from(GRID).map(lambda p: QContext(*p))


def D(ctx=C32):
    return free_module(ctx, [0])


def D_mod_y0(ctx=C32):
    return FPModule(ctx, [0], [{0: x(1, ctx)}])


@st.composite
def modules(draw):
    ctx = draw(contexts)
    degs = sorted(draw(st.lists(st.integers(0, 4), min_size=1, max_size=3)))
    rels = []
    for _ in range(draw(st.integers(0, 3))):
        rd = max(degs) + draw(st.integers(0, 5))
        row = {}
        for j, d in enumerate(degs):
            c = draw(st.integers(0, ctx.ell - 1))
            if c:
                row[j] = x(rd - d, ctx, c)
        if row:
            rels.append(row)
    return FPModule(ctx, degs, rels)


# ---------------------------------------------------------------------------
# presentations and Hilbert functions


def test_hilbert_examples():
    assert hilbert(D(), 5) == [1] * 6
    assert hilbert(D_mod_y0(), 5) == [1, 0, 1, 0, 1, 0]
    assert hilbert(free_module(C32, [2]), 3) == [0, 0, 1, 1]


@given(modules())
@settings(max_examples=60)
def test_hilbert_matches_oracle(M):
    rels = [{j: a.terms for j, a in row} for row in M.relations]
    assert hilbert(M, 25) == hilbert_oracle(M.gen_degrees, rels, M.ctx.q_int, M.ctx.ell, 25)
    assert as_graded(M, 25).dims == hilbert(M, 25)


@given(modules())
@settings(max_examples=40)
def test_json_round_trip(M):
    assert FPModule.from_json(M.to_json()) == M


def test_relation_validation():
    with pytest.raises(ValueError):
        FPModule(C32, [0], [{0: x(1, C32) + x(2, C32)}])
    with pytest.raises(ValueError):
        FPModule(C32, [0], [{1: x(1, C32)}])


@given(modules())
@settings(max_examples=40)
def test_action_is_associative(M):
    data = as_graded(M, 14)
    ctx, ell = M.ctx, M.ctx.ell
    for n in range(0, 8):
        for k in range(0, 4):
            for j in range(0, 3):
                lhs = data.act(n + k, j) @ data.act(n, k) % ell
                rhs = q_binomial(k + j, k, ctx) * data.act(n, k + j) % ell
                assert np.array_equal(lhs, rhs)


# ---------------------------------------------------------------------------
# epsilon, lambda, periodicity


def test_generator_tops():
    assert g_r(D(), 1, 10) == 1
    assert g_r(D(), 0, 10) == 0
    assert g_r(D_mod_y0(), 1, 10) == 0
    assert generator_counts(D(), 1, 6) == [1, 1, 0, 0, 0, 0, 0]


def test_epsilon_lambda_examples():
    assert tuple(epsilon_lambda(D(), 20))[:2] == (0, 0)
    assert tuple(epsilon_lambda(D_mod_y0(), 20))[:2] == (1, -1)
    assert tuple(epsilon_lambda(free_module(C32, [0, 3]), 20))[:2] == (0, 3)
    zero = FPModule(C32, [0], [{0: x(0, C32)}])
    assert epsilon_lambda(zero, 10).lam is None


def test_truncation_too_small():
    # a certificate needs one full period above the top generator
    with pytest.raises(TruncationTooSmall):
        epsilon_lambda(D(), 0)
    # below degree 6 the quotient D/(x^[6]) is indistinguishable from D
    M = FPModule(C32, [0], [{0: x(6, C32)}])
    assert tuple(epsilon_lambda(M, 4))[:2] == (0, 0)
    assert tuple(epsilon_lambda(M, 30))[:2] != (0, 0)


def test_period_examples():
    c = predict_period(D(), 12)
    assert (c.period, c.onset, c.ok) == (1, 0, True)
    c = predict_period(D_mod_y0(), 12)
    assert c.period == b_value(1, C32) == 2 and c.ok
    c = predict_period(free_module(C32, [0, 3]), 12)
    assert (c.period, c.onset, c.dims[:5]) == (1, 3, (1, 1, 1, 2, 2))


@given(modules())
@settings(max_examples=40, suppress_health_check=[HealthCheck.too_slow])
def test_periodicity_when_certified(M):
    try:
        inv = epsilon_lambda(M, 40)
    except TruncationTooSmall:
        return
    cert = predict_period(M, 40)
    assert cert.ok
    assert cert.period == b_value(inv.epsilon, M.ctx)


@given(st.integers(0, 10_000))
@settings(max_examples=5, deadline=None)
def test_invariants_on_extensions(seed):
    rep = suites.invariants_suite(count=4, N=30, rng=random.Random(seed))
    assert rep["pass"], rep["witnesses"]


def test_submodule_and_quotient_dims():
    L = free_module(C32, [0, 2])
    data = as_graded(L, 12)
    gens = generator_vectors(L, 12)
    K, bases = graded_submodule(data, gens[:1])
    Q = graded_quotient(data, bases)
    assert [k + q for k, q in zip(K.dims, Q.dims)] == data.dims
    assert Q.dims == [0, 0] + [1] * 11
    S = direct_sum(K, Q)
    assert S.dims == data.dims


# ---------------------------------------------------------------------------
# connections


def test_kernel_of_d():
    data = as_graded(D(), 30)
    dec = connection_kernel_decompose(data, free_connection(data, D()))
    assert dec.kernel_dims == [1] + [0] * 30


def test_kernel_of_shifted_sum():
    M = free_module(C32, [0, 2])
    data = as_graded(M, 20)
    dec = connection_kernel_decompose(data, free_connection(data, M))
    assert dec.kernel_dims == [1, 0, 1] + [0] * 18
    assert dec.kernel_support == [0, 2]


def test_bad_connection_rejected():
    data = as_graded(D(), 10)
    nabla = free_connection(data, D())
    doubled = Connection(data, lambda n: 2 * nabla.at(n), 1)
    assert check_connection_law(doubled)
    with pytest.raises(NotAConnection):
        connection_kernel_decompose(data, doubled)


def test_step_b1_connection():
    for ctx in (C32, QContext(2, 3), QContext(5, 4)):
        data = as_graded(D(ctx), 30)
        nabla = power_connection(free_connection(data, D(ctx)), b_value(1, ctx))
        assert check_connection_law(nabla) == []
        dec = connection_kernel_decompose(data, nabla)
        assert dec.kernel_support == list(range(b_value(1, ctx)))


def test_iterated_example():
    a = x(2, C32)
    lhs = d_derive(d_mul(a, a), 2)
    assert lhs == x(2, C32, q_binomial(4, 2, C32))
    rhs = DElement(C32, {})
    for i in range(3):
        coef = C32.qpow((2 - i) * (2 - i)) * q_binomial(2, i, C32)
        rhs = rhs + d_mul(d_derive(a, 2 - i), d_derive(a, i)).scale(coef)
    assert lhs == rhs


@given(contexts, st.lists(st.integers(0, 5), min_size=1, max_size=3), st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_iterated_identity_sampled(ctx, degs, seed):
    rng = random.Random(seed)
    data, nabla = suites.free_connection_module(ctx, degs, 16, rng)
    for n in range(1, 5):
        rep = iterated_connection_check(data, nabla, n, 20, rng)
        assert rep["failures"] == []


@given(contexts, st.lists(st.integers(0, 5), min_size=1, max_size=3), st.integers(0, 2**32 - 1))
@settings(max_examples=20, deadline=None)
def test_conjugated_connection_is_free(ctx, degs, seed):
    data, nabla = suites.free_connection_module(ctx, degs, 20, random.Random(seed))
    dec = connection_kernel_decompose(data, nabla)
    assert dec.kernel_dims[:6] == [sorted(degs).count(n) for n in range(6)]
    assert suites._phi_linear(data.truncate(12), Connection(data.truncate(12), nabla.maps, 1)) == []


# ---------------------------------------------------------------------------
# bound calculators


def test_homology_bound():
    assert bound_homology_epsilon(0, 0, 0, 0, 0, C32) == 1
    assert bound_homology_epsilon(0, 0, 0, 5, 1, C32) == 3
    assert bound_homology_epsilon(2, 0, 1, 0, 0, C32) == 3


def test_spectral_bounds():
    eps = {0: 1, 1: 4, 2: 2}
    assert bound_spectral_epsilon(1, eps, {}, 0) == 4
    const = {t: 0 for t in range(-5, 10)}
    fls = {t: 2 for t in range(-5, 10)}
    assert bound_spectral_convergence(1, 3, const, fls) == 2 + 3
    assert bound_spectral_epsilon(1, {0: 0, 1: 2, 2: 0}, {0: 1, 1: 1}, 1) == 3


def test_vimod_bounds():
    b = bound_vimod(0, 0, 0, 0, QContext(2, 3))
    assert (b.lambda_bound, b.epsilon_bound) == (0, 1)
    assert tuple(bound_vimod(1, 0, 0, 1, C32))[:2] == (3, 6)
    assert tuple(bound_vimod(2, 0, 0, 1, QContext(2, 3)))[:2] == (3, 6)


def test_unipotent_bounds():
    assert tuple(bound_unipotent(0, 1, C32)) == (2, 486, 7)
    assert tuple(bound_unipotent(0, 1, QContext(2, 3))) == (2, 32, 7)
    s, _, onset = bound_unipotent(5, 0, C32)
    assert C32.w * 3**s >= 10 and (s == 0 or C32.w * 3 ** (s - 1) < 10)
    assert onset == 10


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 2**32 - 1), st.sampled_from([(3, 2), (2, 3), (5, 4), (3, 4)]))
def test_map_entries_use_only_middle_y(seed, pair):
    # generators over D_{>=r} (r = epsilon) sit below b_r + lambda, so a
    # degree-preserving map between the free modules has entries in y_r .. y_{s-1}
    from qdivided.dalg import to_y_basis
    from qdivided.qarith import QContext, b_value, fl

    rng = random.Random(seed)
    ctx = QContext(*pair)
    inv = epsilon_lambda(suites._random_module(ctx, rng), 40)
    if inv.lam is None:
        return
    r = inv.epsilon
    top = b_value(r, ctx) + inv.lam
    degrees = [n for n, c in enumerate(inv.generators) for _ in range(c)]
    assert all(n < top for n in degrees)
    s = fl(top, ctx)
    for a in degrees:
        for b in degrees:
            k = a - b
            if k < 0 or k % b_value(r, ctx):
                continue
            entry = DElement(ctx, {k: rng.randrange(1, ctx.ell)})
            for _, mono in to_y_basis(entry):
                assert mono.indices() <= set(range(r, s))
