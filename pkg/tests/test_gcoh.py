import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import cyclic_cohomology_dims
from qdivided.gcoh.bar import BarCohomology, BarGroup, CohomologyClass
from qdivided.gcoh.cohomology import Engine, GModule, cohomology, induced_map
from qdivided.gcoh.groups import (
    BudgetExceeded,
    PermGroup,
    double_cosets,
    family,
    find_sylow,
    group_from_spec,
    quotient_action,
)
from qdivided.spechtlab import specht_module

GL2 = family("GL", 2)
SYM = family("Sym")


def cyclic(n):
    return PermGroup([np.roll(np.arange(n), 1)], n, name=f"Z{n}")


def dihedral8():
    return PermGroup([[1, 2, 3, 0], [2, 1, 0, 3]], 4, name="D8")


def gl_order(n, q):
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


def engine_dims(G, ell, tmax, module=None):
    eng = Engine(ell, module)
    return [eng.dim(G, t) for t in range(tmax + 1)]


def bar_dims(G, ell, tmax, module=None):
    B = BarGroup.from_permgroup(G)
    rho = module.rho(B.perms) if module is not None else None
    H = BarCohomology(B, ell, rho)
    return [H.dim(t) for t in range(tmax + 1)]


# ---------------------------------------------------------------------------
# groups


@pytest.mark.parametrize("n,q", [(1, 2), (2, 2), (3, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 3)])
def test_gl_orders(n, q):
    assert family("GL", q).group(n).order == gl_order(n, q)


def test_parabolic_orders():
    fam = family("GL", 3)
    assert fam.parabolic([1, 1]).order == 2 * 2 * 3
    assert fam.parabolic([1, 1], [False, True]).order == 2 * 3
    assert fam.parabolic([2, 1], [False, True]).order == gl_order(2, 3) * 9
    fam2 = family("GL", 2)
    G1 = fam2.parabolic([1, 1, 1], [False, False, True], [(2, 3)])
    assert G1.order == 2**2


@pytest.mark.parametrize("G,ell,order", [(lambda: GL2.group(3), 7, 7), (lambda: GL2.group(3), 2, 8),
                                         (lambda: SYM.group(4), 3, 3), (lambda: family("GL", 3).group(2), 2, 16)])
def test_sylow_orders(G, ell, order):
    assert find_sylow(G(), ell).order == order


def test_double_cosets():
    G = GL2.group(2)
    dc = double_cosets(G, GL2.d_subgroup(2), GL2.transfer_subgroup(1, 1))
    assert sorted(s for _, s in dc) == [2, 4]
    assert len(double_cosets(G, G, G)) == 1
    G3 = GL2.group(3)
    assert len(double_cosets(G3, GL2.d_subgroup(3), GL2.transfer_subgroup(1, 2))) == 2


def test_group_spec():
    assert group_from_spec({"family": "GL", "n": 2, "q": 3}).order == 48
    assert group_from_spec({"family": "Sym", "n": 4}).order == 24
    P = group_from_spec({"family": "Parabolic", "q": 2, "blocks": [1, 1], "barred": [False, True]})
    assert P.order == 2
    z3 = [[(i + j) % 3 for j in range(3)] for i in range(3)]
    assert group_from_spec({"family": "Table", "mul": z3}).order == 3
    with pytest.raises(ValueError):
        group_from_spec({"family": "Table", "mul": [[0, 1], [0, 1]]})


def test_budget():
    with pytest.raises(BudgetExceeded):
        PermGroup(SYM.group(5).gens, 5, max_order=50).order


def test_budget_env(monkeypatch):
    monkeypatch.setenv("QDIVIDED_BUDGET", "10")
    with pytest.raises(BudgetExceeded):
        PermGroup(SYM.group(4).gens, 4).order


def test_quotient():
    G = dihedral8()
    Z = G.subgroup([[2, 3, 0, 1]])
    Q, proj = quotient_action(G, Z)
    assert Q.order == 4


# ---------------------------------------------------------------------------
# cohomology against the bar complex


def test_z3_in_gl1_f4():
    G = family("GL", 4).group(1)
    assert G.order == 3
    assert engine_dims(G, 3, 4) == [1] * 5


def test_gl2_f2():
    assert engine_dims(GL2.group(2), 3, 4) == [1, 0, 0, 1, 1]
    assert bar_dims(GL2.group(2), 3, 4) == [1, 0, 0, 1, 1]


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("ell", [2, 3, 5])
def test_cyclic_groups(n, ell):
    want = cyclic_cohomology_dims(n, ell, 4)
    assert engine_dims(cyclic(n), ell, 4) == want
    if n <= 4:
        assert bar_dims(cyclic(n), ell, 3) == want[:4]


@pytest.mark.parametrize("G,ell,t", [(dihedral8, 2, 4), (lambda: SYM.group(3), 2, 4),
                                     (lambda: SYM.group(3), 3, 4), (lambda: cyclic(6), 3, 4)])
def test_engine_matches_bar(G, ell, t):
    G = G()
    assert engine_dims(G, ell, t) == bar_dims(G, ell, t)


def test_coprime_order_vanishes():
    G = GL2.group(3)  # order 168 = 8 * 3 * 7
    assert engine_dims(G, 5, 4) == [1, 0, 0, 0, 0]


def test_known_sym4():
    assert engine_dims(SYM.group(4), 2, 4) == [1, 1, 2, 3, 3]
    assert engine_dims(SYM.group(4), 3, 4) == [1, 0, 0, 1, 1]


def test_specht_coefficients_against_bar():
    mod = specht_module((1, 1), 2, 3)
    G = mod.group
    assert engine_dims(G, 3, 4, mod) == bar_dims(G, 3, 4, mod)
    mod = specht_module((2, 1), 2, 5)
    assert engine_dims(mod.group, 5, 2, mod) == [0, 0, 0]


def test_gmodule_consistency():
    S3 = SYM.group(3)
    sign = [np.array([[-1]]) for _ in S3.gens]
    # the generators are a transposition and a 3-cycle, so this is not a character
    with pytest.raises(ValueError):
        GModule.from_generators(S3, sign, 3)
    mats = [np.array([[2]]), np.array([[1]])]
    M = GModule.from_generators(S3, mats, 3)
    assert engine_dims(S3, 3, 4, M) == bar_dims(S3, 3, 4, M)


# ---------------------------------------------------------------------------
# induced maps


def test_cor_res_is_index():
    eng = Engine(3)
    G = SYM.group(3)
    H = G.subgroup([[1, 2, 0]])
    for t in (0, 3, 4):
        res = eng.induced("res", t, G, H)
        cor = eng.induced("cor", t, H, G)
        assert np.array_equal(cor @ res % 3, 2 * np.eye(res.shape[1], dtype=np.int64) % 3)
    eng2 = Engine(5)
    G4 = SYM.group(4)
    K = SYM.young([3, 1])
    r0 = eng2.induced("res", 0, G4, K)
    c0 = eng2.induced("cor", 0, K, G4)
    assert (c0 @ r0 % 5).tolist() == [[4]]


def test_res_to_z3_nonzero_in_degree_three():
    G = SYM.group(3)
    H = G.subgroup([[1, 2, 0]])
    M = induced_map("res", 3, G, H, 3)
    assert M.shape == (1, 1) and M[0, 0] % 3


def test_inflation_from_mirabolic():
    # P_{2,1bar} -> GL_2(F_2) forgets the radical of order 4, prime to 3
    P = GL2.d_subgroup(3)
    G = GL2.group(2)
    s3, s2 = GL2.space(3), GL2.space(2)

    def proj(perms):
        mats = s3.perms_to_mats(perms)[:, :2, :2]
        return s2.mats_to_perms(mats)

    eng = Engine(3)
    for t in range(5):
        M = eng.induced("infl", t, G, P, proj)
        assert M.shape[0] == M.shape[1] == eng.dim(G, t)
        assert eng.dim(P, t) == eng.dim(G, t)
        if M.size:
            from qdivided import linalg
            assert linalg.rank(M, 3) == M.shape[0]


def test_bar_transfer_and_classes():
    B = BarGroup.from_permgroup(SYM.group(3))
    sub = BarGroup.from_permgroup(SYM.group(3).subgroup([[1, 2, 0]]))
    H, Hs = BarCohomology(B, 3), BarCohomology(sub, 3)
    emb = SYM.group(3).index(sub.perms)
    for t in (0, 3, 4):
        cor = H.transfer(Hs, emb, t)
        res = H.pullback(Hs, emb, t)
        assert np.array_equal(cor @ res % 3, 2 * np.eye(H.dim(t), dtype=np.int64) % 3)
    rep = H.basis(3)[:, 0]
    shifted = rep.copy()
    d2 = H.delta_matrix(2)
    shifted[H.normalized_index(3)] += d2 @ np.arange(d2.shape[1])
    assert CohomologyClass(H, 3, rep) == CohomologyClass(H, 3, shifted)
    with pytest.raises(ValueError):
        bump = np.zeros(H.shape(2), dtype=np.int64)
        bump[1, 1, 0] = 1
        CohomologyClass(H, 2, bump)


def test_cross_products():
    Z2 = BarGroup.from_permgroup(cyclic(2))
    P = Z2.product(Z2)
    H, HP = BarCohomology(Z2, 2), BarCohomology(P, 2)
    assert HP.dim(2) == 3
    one = H.cross(H, HP, 0, 0)
    assert one.tolist() == [[1]]
    x11 = H.cross(H, HP, 1, 1)
    x20 = H.cross(H, HP, 2, 0)
    x02 = H.cross(H, HP, 0, 2)
    from qdivided import linalg
    assert linalg.rank(np.hstack([x11, x20, x02]), 2) == 3


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.sampled_from([2, 3]), st.integers(0, 3))
def test_kunneth_for_abelian_tables(a, b, ell, t):
    # Z_a x Z_b from its multiplication table; dims follow from Kunneth over F_ell
    n = a * b
    mul = [[((i // b + j // b) % a) * b + (i % b + j % b) % b for j in range(n)] for i in range(n)]
    G = group_from_spec({"family": "Table", "mul": mul})
    ca, cb = cyclic_cohomology_dims(a, ell, t), cyclic_cohomology_dims(b, ell, t)
    want = sum(ca[i] * cb[t - i] for i in range(t + 1))
    assert cohomology(G, t, ell).dim == want
