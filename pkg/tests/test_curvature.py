import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sympconn.curvature import (Budget, bianchi_kernel, bianchi_residual, bilagrangian_splitting,
                                contract_omega, curvature_report, cyclic_residual, decompose,
                                embed_Rh, identity_endomorphism, lagrangian_vanishing, layout,
                                NotBiLagrangian, prolongation, psi_u, ricci, schur_space,
                                sigma_correspondence, sigma_rank, sigma_symmetric,
                                sp_curvature_count)
from sympconn.liecore.linalg import BudgetExceeded

from conftest import ssd

DIMS = {
    "sl_real:3": (1, 1, 0),
    "sl_real:4": (9, 4, 5),
    "sp_real:2": (3, 3, 0),
    "sp_real:3": (45, 10, 35),
    "su:1,2": (1, 1, 0),
    "su:2,2": (9, 4, 5),
    "so:2,3": (3, 3, 0),
    "so:3,4": (6, 6, 0),
    "g2_split": (3, 3, 0),
}
PROLONG = {"sl_real:3": 2, "sl_real:4": 4, "sp_real:2": 6, "sp_real:3": 4, "su:2,2": 4,
           "so:2,3": 6, "so:3,4": 6, "g2_split": 4}


@pytest.mark.parametrize("spec", sorted(DIMS))
def test_decomposition_dims(spec):
    dec = decompose(ssd(spec))
    assert dec.dims == DIMS[spec]
    assert all(ok for _, ok in dec.checks)


@pytest.mark.parametrize("n", [2, 4])
def test_sp_count(n):
    spec = {2: "sp_real:2", 4: "sp_real:3"}[n]
    assert bianchi_kernel(ssd(spec)).dim == sp_curvature_count(n)


def test_pivot_strategies_give_same_K():
    s = ssd("sl_real:4")
    assert bianchi_kernel(s, strategy="ordered").basis == bianchi_kernel(s, strategy="sparse").basis


@pytest.mark.parametrize("spec", sorted(PROLONG))
def test_prolongation_dims(spec):
    s = ssd(spec)
    P = prolongation(s)
    assert P.dim == PROLONG[spec]
    assert P.psi_u_in_space


@pytest.mark.parametrize("spec", ["sl_real:4", "sp_real:3", "su:2,2", "g2_split"])
def test_schur_scalar(spec):
    S = schur_space(ssd(spec))
    assert S.dim == 1
    assert S.contains(identity_endomorphism(ssd(spec).V_dim))


CASES = sorted(DIMS)


def _rand_h(draw, m):
    return [draw(st.fractions(min_value=-3, max_value=3, max_denominator=3)) for _ in range(m)]


@given(st.sampled_from(CASES), st.data())
def test_Rh_satisfies_bianchi(spec, data):
    s = ssd(spec)
    h = _rand_h(data.draw, s.h_dim)
    assert bianchi_residual(s, embed_Rh(s, h)) is None


@given(st.sampled_from(["sl_real:3", "sl_real:4", "sp_real:2", "g2_split", "su:2,2"]),
       st.integers(0, 10 ** 6))
def test_ricci_formulas_agree_on_K(spec, seed):
    s = ssd(spec)
    K = bianchi_kernel(s)
    rnd = random.Random(seed)
    R = K.combine([Fraction(rnd.randint(-4, 4), rnd.randint(1, 3)) for _ in range(K.dim)])
    r = ricci(s, R)
    assert r["agree"] and r["symmetric"]


def test_ricci_formulas_need_bianchi():
    """Off K the trace and contraction forms of Ricci differ in general."""
    s = ssd("g2_split")
    rnd = random.Random(1)
    R = [Fraction(rnd.randint(-3, 3)) for _ in range(layout(s).size)]
    assert bianchi_residual(s, R) is not None
    assert not ricci(s, R)["agree"]


@pytest.mark.parametrize("spec", ["sp_real:2", "sp_real:3"])
def test_ricci_of_Rh_for_full_sp(spec):
    s = ssd(spec)
    h = [Fraction(a + 1, 2) for a in range(s.h_dim)]
    assert contract_omega(s, embed_Rh(s, h)) == [(s.V_dim + 2) * x for x in h]


@given(st.sampled_from(CASES), st.data())
def test_psi_u_is_cyclic(spec, data):
    s = ssd(spec)
    u = [data.draw(st.integers(-3, 3)) for _ in range(s.V_dim)]
    assert cyclic_residual(s, psi_u(s, [Fraction(x) for x in u])) is None


def test_exceptional_prolongation_is_V_tensor_h():
    s = ssd("sp_real:2")
    assert prolongation(s).dim == s.V_dim * s.h_dim == 6


@pytest.mark.parametrize("spec", ["sl_real:4", "su:2,2"])
def test_bilagrangian(spec):
    s = ssd(spec)
    K = bianchi_kernel(s)
    if spec == "su:2,2":
        with pytest.raises(NotBiLagrangian):
            bilagrangian_splitting(s)
        return
    split = bilagrangian_splitting(s)
    assert split[0].dim == split[1].dim == 2
    assert sigma_rank(s, K, split) == K.dim == 9
    for b in K.basis:
        assert lagrangian_vanishing(s, list(b), split)
        assert sigma_symmetric(sigma_correspondence(s, list(b), split))


def test_budget():
    with pytest.raises(BudgetExceeded):
        bianchi_kernel(ssd("sp_real:3"), Budget(max_V=2))
    with pytest.raises(BudgetExceeded):
        prolongation(ssd("sp_real:3"), budget=Budget(max_columns=10))


@pytest.mark.parametrize("spec", ["sp_real:2", "g2_split", "sl_real:4"])
def test_report(spec):
    rep = curvature_report(ssd(spec))
    assert rep["pass"]
    assert (rep["dimK"], rep["dimR"], rep["dimW"]) == DIMS[spec]
