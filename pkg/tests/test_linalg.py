import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import rank_mod_p
from qdivided import linalg

primes = st.sampled_from([2, 3, 5, 7])


@st.composite
def matrices(draw, max_side=7):
    p = draw(primes)
    m = draw(st.integers(0, max_side))
    n = draw(st.integers(0, max_side))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=m * n, max_size=m * n))
    return p, np.array(vals, dtype=np.int64).reshape(m, n)


@given(matrices())
def test_rank_matches_oracle(pa):
    p, a = pa
    want = rank_mod_p(a.tolist(), p) if a.size else 0
    assert linalg.rank(a, p) == want


@given(matrices())
def test_nullspace(pa):
    p, a = pa
    N = linalg.nullspace(a, p)
    assert N.shape == (a.shape[1], a.shape[1] - linalg.rank(a, p))
    assert not np.any(a @ N % p)
    assert linalg.rank(N, p) == N.shape[1]


@given(matrices(), st.data())
def test_solver_round_trip(pa, data):
    p, a = pa
    m, n = a.shape
    x = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=n, max_size=n)), dtype=np.int64)
    b = a @ x % p
    y = linalg.Solver(a, p).solve(b)
    assert np.array_equal(a @ y % p, b)


def test_solver_rejects_outside_span():
    with pytest.raises(ValueError):
        linalg.solve(np.array([[1], [0]]), np.array([0, 1]), 3)


@given(primes, st.integers(1, 6), st.data())
@settings(max_examples=40)
def test_inverse(p, n, data):
    a = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=n * n, max_size=n * n))).reshape(n, n)
    if rank_mod_p(a.tolist(), p) < n:
        with pytest.raises(ValueError):
            linalg.inverse(a, p)
    else:
        assert np.array_equal(linalg.inverse(a, p) @ a % p, np.eye(n, dtype=np.int64))


@given(matrices())
def test_complement_basis(pa):
    p, a = pa
    m = a.shape[0]
    comp = linalg.complement_basis(a, m, p)
    both = np.hstack([a, comp]) if m else np.zeros((0, 0))
    assert comp.shape[1] == m - linalg.rank(a, p)
    if m:
        assert linalg.rank(both, p) == m


@given(matrices())
def test_sparse_rank(pa):
    p, a = pa
    rows = [(np.flatnonzero(r), r[np.flatnonzero(r)]) for r in a]
    assert linalg.sparse_rank(rows, a.shape[1], p) == linalg.rank(a, p)
