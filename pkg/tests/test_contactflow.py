from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sympconn import contactflow as cf
from sympconn.contactflow import expm

from conftest import flow_context


def setup(spec, mom, seed=0):
    ctx = flow_context(spec)
    m = cf.parse_momentum(ctx, mom)
    a = cf.momentum_matrix(ctx, m)
    rng = np.random.default_rng(seed)
    return ctx, m, a, rng, cf.generic_point(ctx, a, rng)


@pytest.fixture(scope="module")
def sp_generic():
    return setup("sp_real:2", "normal:1,1/3,2,-1/2")


@pytest.fixture(scope="module")
def su_bochner():
    return setup("su:2,2", "bochner:1,1")


def identity(ctx):
    return np.eye(ctx.size, dtype=complex if ctx.complex else float)


# retraction --------------------------------------------------------------------------

def test_point_in_Q_at_identity():
    ctx = flow_context("sp_real:2")
    m = cf.normal_momentum(ctx, 1, [Fraction(1, 2), 0, 1])
    a = cf.momentum_matrix(ctx, m)
    assert cf.q_residual(ctx, identity(ctx), a) < 1e-14
    fp = cf.retract(ctx, identity(ctx), a)
    assert np.allclose(fp.rho, [0.5, 0, 1]) and np.allclose(fp.u, 0) and fp.f == pytest.approx(1)


def test_T_a_flow_stays_on_gamma(sp_generic):
    ctx, m, a, rng, fp = sp_generic
    for t in (0.3, -1.1, 2.5):
        assert cf.q_residual(ctx, expm(t * a) @ fp.g, a) < 1e-12


@given(st.integers(0, 10 ** 6))
@settings(max_examples=10)
def test_retract_recovers_small_perturbations(seed):
    ctx, m, a, _, fp = setup("sp_real:2", "normal:1,1/3,2,-1/2")
    rng = np.random.default_rng(seed)
    g = fp.g @ expm(1e-3 * cf.random_algebra_element(ctx, rng))
    pn = cf.retract(ctx, g, a)
    pl = cf.retract(ctx, g, a, method="lift")
    assert pn.residual < 1e-12 and pl.residual < 1e-12
    assert np.linalg.norm(pn.g - pl.g) < 1e-10


def test_retract_fails_off_the_cone():
    ctx = flow_context("sl_real:3")
    m = cf.normal_momentum(ctx, 1)
    a = cf.momentum_matrix(ctx, m)
    # Ad_{g^-1} a with the e-^2 component of the wrong sign
    with pytest.raises(cf.RetractionError):
        cf.retract(ctx, identity(ctx), -a, method="lift")


# coframe split ---------------------------------------------------------------------

def test_xi_a_direction(su_bochner):
    ctx, m, a, rng, fp = su_bochner
    S = cf.mc_decompose(ctx, fp, fp.A)
    assert S.kappa == pytest.approx(-0.5)
    assert np.allclose(S.theta, 0, atol=1e-12) and np.allclose(S.eta, 0, atol=1e-12)


def test_h_direction(sp_generic):
    ctx, m, a, rng, fp = sp_generic
    h = rng.standard_normal(ctx.m)
    S = cf.mc_decompose(ctx, fp, ctx.vec(h=h))
    assert S.kappa == 0 and np.allclose(S.theta, 0) and np.allclose(S.eta, h)


def test_theta_direction(sp_generic):
    ctx, m, a, rng, fp = sp_generic
    x = rng.standard_normal(ctx.n)
    S = cf.mc_decompose(ctx, fp, ctx.tangent(fp, x=x))
    assert S.kappa == 0 and np.allclose(S.theta, x) and np.allclose(S.eta, 0)


def test_dependent_components(sp_generic):
    ctx, m, a, rng, fp = sp_generic
    S = cf.mc_decompose(ctx, fp, cf.random_tangent(ctx, fp, rng))
    assert S.reassembly < 1e-10
    assert max(S.relations.values()) < 1e-10


def test_left_mc_form_of_curve_is_tangent(sp_generic):
    """mu of an actual curve on Gamma_a obeys the g^1 / g^2 relations."""
    ctx, m, a, rng, fp = sp_generic
    v = cf.random_tangent(ctx, fp, rng)
    eps = 1e-4
    P = [cf.retract(ctx, fp.g @ expm(s * eps * ctx.matrix(v)), a) for s in (-1, 0, 1)]
    mu = cf._mu_central(ctx, P[0].g, P[1].g, P[2].g, eps)
    S = cf.mc_decompose(ctx, fp, mu, tol=1e-6)
    assert S.relations["kappa_plus"] < 1e-6


def test_not_tangent_rejected(sp_generic):
    ctx, m, a, rng, fp = sp_generic
    with pytest.raises(cf.NotTangent):
        cf.mc_decompose(ctx, fp, ctx.vec(epem=1.0))


# structure equations ----------------------------------------------------------------

def test_halving_eps_quarters_residuals(sp_generic):
    ctx, m, a, rng, fp = sp_generic
    v1, v2 = cf.random_tangent(ctx, fp, rng), cf.random_tangent(ctx, fp, rng)
    r1 = cf.structure_residuals(ctx, fp, a, v1, v2, 1e-2)
    r2 = cf.structure_residuals(ctx, fp, a, v1, v2, 5e-3)
    for name in cf.EQUATIONS:
        assert 0.15 <= r2[name] / r1[name] <= 0.4, name
    assert r1["invariant_spread"] < 1e-10


def test_degenerate_momentum_marks_exact_equations(su_bochner):
    """Bochner momenta have u = 0 on Gamma_a, so the du equation holds identically."""
    ctx, m, a, rng, fp = su_bochner
    assert np.allclose(fp.u, 0, atol=1e-12)
    v1, v2 = cf.random_tangent(ctx, fp, rng), cf.random_tangent(ctx, fp, rng)
    orders, table, _ = cf.convergence_orders(ctx, fp, a, v1, v2)
    assert orders["du"] is None
    for name in ("dkappa", "dtheta", "deta", "drho"):
        assert 1.9 <= orders[name] <= 2.1


def test_R_rho_matches_exact_embedding():
    from sympconn.curvature import embed_Rh, layout
    ctx = flow_context("g2_split") if False else flow_context("sp_real:2")
    s = ctx.ssd
    h = [Fraction(1), Fraction(-2), Fraction(1, 3)]
    R = embed_Rh(s, h)
    lay = layout(s)
    for i in range(s.V_dim):
        for j in range(s.V_dim):
            want = [float(v) for v in lay.value(R, i, j)]
            got = ctx.R_rho(np.array([float(x) for x in h]), np.eye(s.V_dim)[i], np.eye(s.V_dim)[j])
            assert np.allclose(got, want)


# conservation -------------------------------------------------------------------------

def test_constant_path_zero_drift(sp_generic):
    ctx, m, a, rng, fp = sp_generic
    d = cf.conserved_invariants(ctx, [fp] * 5)
    assert d["f_plus_rho2_drift"] == 0 and d["ad_trace_drift"] == 0


def test_invariant_equals_casimir(sp_generic):
    ctx, m, a, rng, fp = sp_generic
    a_fr = ctx.coords(a)
    assert fp.invariant(ctx) == pytest.approx(ctx.pair(a_fr, a_fr))


def test_short_path_drift(sp_generic):
    ctx, m, a, rng, fp = sp_generic
    d = cf.conserved_invariants(ctx, cf.retracted_path(ctx, fp, a, rng, steps=100))
    assert d["f_plus_rho2_drift"] < 1e-9 and d["ad_trace_drift"] < 1e-9


# transversality and symmetry ------------------------------------------------------------

def test_transversality_bochner_small(su_bochner):
    ctx, m, a, rng, fp = su_bochner
    assert cf.transversality_scan(ctx, ctx.coords(a), 500, np.random.default_rng(1)) == 1.0


def test_transversality_split_counterexample():
    ctx = flow_context("sl_real:3")
    a = cf.momentum_matrix(ctx, cf.normal_momentum(ctx, 1))
    frac = cf.transversality_scan(ctx, ctx.coords(a), 500, np.random.default_rng(1))
    assert 0 < frac < 1


def test_symmetry_dimension_bochner(su_bochner):
    ctx, m, a, rng, fp = su_bochner
    sym = cf.symmetry_dimension(ctx, m.a)
    assert sym["stab_dim"] == 7 and sym["symmetry_dim"] == 6
    assert sym["normal_form"]["consistent"]


def test_zero_momentum_rejected():
    ctx = flow_context("sl_real:3")
    with pytest.raises(ValueError):
        cf.symmetry_dimension(ctx, [0] * ctx.N)
    with pytest.raises(cf.MomentumError):
        cf.normal_momentum(ctx, 0)


@pytest.mark.parametrize("spec", ["sl_real:3", "sp_real:2", "su:2,2", "so:2,3"])
def test_generic_cartan_symmetry(spec):
    ctx = flow_context(spec)
    a = cf.random_cartan_momentum(ctx.L, np.random.default_rng(5))
    assert cf.symmetry_dimension(ctx, a)["symmetry_dim"] == ctx.L.meta["rank"] - 1


@given(st.integers(0, 10 ** 6))
@settings(max_examples=10)
def test_symmetry_dim_conjugation_and_scaling_invariant(seed):
    ctx = flow_context("su:2,2")
    rng = np.random.default_rng(seed)
    m = cf.bochner_momentum(ctx.L, 1, 1)
    a = cf.momentum_matrix(ctx, m)
    g = cf.random_group_element(ctx, rng, factors=2, scale=0.4)
    t = rng.uniform(-1, 1)
    conj = np.exp(t) * (g @ a @ np.linalg.inv(g))
    assert cf.stabilizer_dim_float(ctx, ctx.coords(conj)) == 7


# vector fields -------------------------------------------------------------------------------

def test_vector_field_audit(sp_generic):
    ctx, m, a, rng, fp = sp_generic
    va = cf.vector_field_audit(ctx, fp, a, np.random.default_rng(2))
    assert max(va["residuals"]["xi_h_f"]) < 1e-9
    for k in ("xi_x_rho", "xi_x_u", "xi_x_f", "xi_h_rho", "xi_h_u", "bracket"):
        assert 1.9 <= va["orders"][k] <= 2.1, k
    assert 0.8 <= va["orders"]["bracket_one_sided"] <= 1.2


# momenta ---------------------------------------------------------------------------------

def test_ricci_momentum_is_normal_form():
    ctx = flow_context("sp_real:2")
    m = cf.ricci_momentum(ctx, 1)
    c, rho0 = cf.normal_form(ctx, m.a)
    assert c == 1
    R = ctx.ssd.h_matrix(rho0)
    assert [[sum(R[i][k] * R[k][j] for k in range(2)) for j in range(2)] for i in range(2)] \
        == [[-1, 0], [0, -1]]


def test_momentum_errors(tmp_path):
    ctx = flow_context("sp_real:2")
    for spec in ("bochner:1,1", "ricci:-1", "normal:", "foo:1", "normal:1,2", "bochner:1"):
        with pytest.raises(cf.MomentumError):
            cf.parse_momentum(ctx, spec)
    p = tmp_path / "a.json"
    p.write_text('{"matrix": [[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]}')
    with pytest.raises(cf.MomentumError):
        cf.parse_momentum(ctx, f"explicit:{p}")


def test_explicit_momentum_matches_ricci(tmp_path):
    ctx = flow_context("sp_real:2")
    J = cf.ricci_momentum(ctx, 1)
    M = np.real(cf.momentum_matrix(ctx, J)).round().astype(int).tolist()
    p = tmp_path / "j.json"
    import json
    p.write_text(json.dumps({"matrix": M}))
    assert cf.parse_momentum(ctx, f"explicit:{p}").a == J.a
    p.write_text(json.dumps({"coords": [str(x) for x in J.a]}))
    assert cf.parse_momentum(ctx, f"explicit:{p}").a == J.a


def test_explicit_complex_matrix(tmp_path):
    import json
    ctx = flow_context("su:2,2")
    p = tmp_path / "b.json"
    p.write_text(json.dumps({"matrix": [[[0, 2], 0, 0, 0], [0, [0, 2], 0, 0],
                                        [0, 0, [0, -2], 0], [0, 0, 0, [0, -2]]]}))
    assert cf.parse_momentum(ctx, f"explicit:{p}").a == cf.bochner_momentum(ctx.L, 1, 1).a
