from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import count_subspaces, flags_of_type, gaussian_product, specht_dim_oracle
from qdivided.spechtlab import (
    IndexOutOfRange,
    NoStablePolynomial,
    NotAPartition,
    K_set,
    composition,
    fit_dimension_polynomial,
    flag_count,
    flag_permutation,
    flags,
    psi_map,
    psi_target,
    specht_basis,
    specht_cohomology_series,
    specht_dim,
)

PARTITIONS = [(1,), (2,), (1, 1), (3,), (2, 1), (1, 1, 1)]
CONTEXTS = [(2, 3), (2, 5), (3, 2), (3, 5)]  # (q, ell)


@pytest.mark.parametrize("mu", PARTITIONS)
@pytest.mark.parametrize("q,ell", CONTEXTS)
def test_specht_dim_brute_force(mu, q, ell):
    assert specht_dim(mu, q, ell) == specht_dim_oracle(mu, q, ell)


@pytest.mark.parametrize("mu", PARTITIONS + [(1, 2), (2, 0, 1)])
@pytest.mark.parametrize("q", [2, 3])
def test_flag_counts(mu, q):
    assert flag_count(mu, q) == len(flags(composition(mu), q)) == len(flags_of_type(composition(mu), q))


def test_flag_count_values():
    assert flag_count((1, 1, 1), 2) == 21
    assert flag_count((1, 1), 3) == 4
    assert flag_count((2, 1), 2) == count_subspaces(2, 3, 1)


@pytest.mark.parametrize("q,ell", CONTEXTS)
def test_trivial_and_steinberg(q, ell):
    for d in (1, 2, 3):
        assert specht_dim((d,), q, ell) == 1
        assert specht_dim((1,) * d, q, ell) == q ** (d * (d - 1) // 2)


def test_psi_example():
    # P_(1,1) -> P_(2): every line maps to the single flag of type (2)
    assert psi_map((1, 1), 1, 2, 2, 3).tolist() == [[1, 1, 1]]
    assert psi_target((1, 1), 1, 0) == (2, 0)
    assert psi_target((1, 1), 1, 2) == (0, 2)


@pytest.mark.parametrize("mu", [(1, 1), (2, 1), (1, 1, 1), (1, 2)])
@pytest.mark.parametrize("q", [2, 3])
def test_psi_column_sums(mu, q):
    mu_ext = tuple(mu) + (0,)
    for r in range(1, len(mu) + 1):
        for i in range(mu_ext[r - 1] + mu_ext[r] + 1):
            if flag_count(psi_target(mu, r, i), q) > 2000:
                continue
            M = psi_map(mu, r, i, q, 101)
            assert set(M.sum(axis=0).tolist()) == {gaussian_product(mu_ext[r - 1] + mu_ext[r], i, q)}


def test_psi_index_errors():
    with pytest.raises(IndexOutOfRange):
        psi_map((1, 1), 0, 0, 2, 3)
    with pytest.raises(IndexOutOfRange):
        psi_map((1, 1), 3, 0, 2, 3)
    with pytest.raises(IndexOutOfRange):
        psi_map((1, 1), 1, 3, 2, 3)


def test_not_a_partition():
    with pytest.raises(NotAPartition):
        specht_dim((1, 2), 2, 3)
    with pytest.raises(NotAPartition):
        specht_basis((1, 2), 2, 3)


def test_composition_trailing_zeros():
    assert composition([2, 1, 0, 0]) == (2, 1)
    assert specht_dim((2, 1, 0), 2, 3) == specht_dim((2, 1), 2, 3)
    with pytest.raises(ValueError):
        composition([1, -1])


def test_k_set():
    assert K_set((2, 1)) == [(2, 0)]
    assert K_set((1, 1, 1)) == [(2, 0), (3, 0)]
    assert K_set((3,)) == []


def _random_gl(rng, q, d):
    while True:
        m = rng.integers(0, q, size=(d, d))
        if q in (2, 3) and round(np.linalg.det(m)) % q:
            return m


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([(1, 1, 1), (2, 1), (1, 2)]), st.sampled_from([2, 3]))
def test_psi_equivariance(seed, mu, q):
    d = sum(mu)
    if q == 3 and d == 3 and len(mu) == 3:
        return
    rng = np.random.default_rng(seed)
    g = _random_gl(rng, q, d)

    def perm_matrix(nu):
        perm = flag_permutation(nu, q, g)
        P = np.zeros((len(perm), len(perm)), dtype=np.int64)
        P[perm, np.arange(len(perm))] = 1
        return P

    Pmu = perm_matrix(mu)
    for r in range(1, len(mu) + 1):
        tgt = psi_target(mu, r, 0)
        M = psi_map(mu, r, 0, q, 5)
        assert np.array_equal(M @ Pmu % 5, perm_matrix(tgt) @ M % 5)


def test_specht_basis_is_kernel():
    B = specht_basis((2, 1), 2, 3)
    assert B.shape[1] == specht_dim((2, 1), 2, 3)
    for r, i in K_set((2, 1)):
        assert not (psi_map((2, 1), r - 1, i, 2, 3) @ B % 3).any()


def test_fit_flag_counts_is_linear():
    series = [(n, flag_count((n - 1, 1), 2)) for n in range(2, 8)]
    fit = fit_dimension_polynomial(series, 2)
    assert fit.degree == 1
    assert fit.coefficients == (Fraction(-1), Fraction(1))
    assert all(fit(n) == v for n, v in series)


def test_fit_constant_and_onset():
    fit = fit_dimension_polynomial([(1, 5), (2, 0), (3, 1), (4, 1), (5, 1)], 3)
    assert fit.degree == 0 and fit.onset == 3
    assert fit(10) == 1
    assert fit.to_json()["coefficients"] == ["1"]


def test_fit_failures():
    with pytest.raises(NoStablePolynomial):
        fit_dimension_polynomial([(1, 1)], 2)
    with pytest.raises(ValueError):
        fit_dimension_polynomial([(1, 1), (1, 2)], 2)


@pytest.mark.parametrize("q", [2, 3])
def test_fit_trivial_specht_series(q):
    series = [(n, specht_dim((n - 1, 1), q, 5)) for n in range(2, 6)]
    fit = fit_dimension_polynomial(series, q)
    assert fit.degree == 1


def test_cohomology_series_example():
    rep = specht_cohomology_series((1,), 0, range(0, 5), 2, 3)
    assert [v["n"] for v in rep["values"]] == [2, 3]
    assert [s["n"] for s in rep["skipped"]] == [0, 1, 4]
    assert rep["prediction"]["period"] > 0
    # H^0 is the space of GL_n-fixed vectors in M_mu, computed directly
    from qdivided import linalg
    for entry in rep["values"]:
        n = entry["n"]
        mu = (n - 1, 1)
        B = specht_basis(mu, 2, 3)
        gens = [np.eye(n, dtype=np.int64)[::-1], np.eye(n, dtype=np.int64) + np.eye(n, k=1, dtype=np.int64)]
        if n == 3:
            gens.append(np.roll(np.eye(3, dtype=np.int64), 1, axis=0))
        rows = []
        for g in gens:
            perm = flag_permutation(mu, 2, g)
            img = np.zeros_like(B)
            img[perm] = B
            rows.append((img - B) % 3)
        fixed = B.shape[1] - linalg.rank(np.vstack(rows), 3)
        assert entry["dim"] == fixed
