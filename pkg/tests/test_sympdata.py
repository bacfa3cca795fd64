import copy
import random
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sympconn.grading import cartan_of_h
from sympconn.sympdata import (StructuralFault, circle_action_residual, check_sp_circle,
                               circle_equivariance_audit, extract, identity_checks,
                               identity_report, is_full_sp, reconstruct, roundtrip,
                               weight_audit)

from conftest import IDENTITY_CASES, grading, ssd

DIMS = {"sl_real:3": (2, 1), "sl_real:4": (4, 4), "su:1,2": (2, 1), "su:2,2": (4, 4),
        "sp_real:2": (2, 3), "sp_real:3": (4, 10), "so:2,3": (2, 3), "g2_split": (4, 3)}


@pytest.mark.parametrize("spec", IDENTITY_CASES)
def test_identity_suite(spec):
    rep = identity_report(ssd(spec))
    failed = [c for c in rep["checks"] if not c["pass"]]
    assert failed == []
    assert (rep["dims"]["dimV"], rep["dims"]["dimH"]) == DIMS[spec]


@pytest.mark.parametrize("spec", IDENTITY_CASES)
def test_normalizations(spec):
    s = ssd(spec)
    tg = grading(spec)
    L = tg.parent
    H = list(tg.H)
    assert L.killing(H, H) == 2 * (s.V_dim + 4)
    assert s.inner[1][1] == -1
    assert s.inner[0][2] == 2


@pytest.mark.parametrize("spec", IDENTITY_CASES)
def test_roundtrip_exact(spec):
    assert roundtrip(ssd(spec)) is None


@pytest.mark.parametrize("spec", ["sp_real:2", "sp_real:3", "so:2,3"])
def test_sp_circle_formula(spec):
    s = ssd(spec)
    assert is_full_sp(s)
    assert check_sp_circle(s)["pass"]


def _vec(draw, n):
    return [draw(st.fractions(min_value=-3, max_value=3, max_denominator=4)) for _ in range(n)]


@given(st.sampled_from(IDENTITY_CASES), st.data())
def test_circle_action_on_random_vectors(spec, data):
    s = ssd(spec)
    x, y, z = (_vec(data.draw, s.V_dim) for _ in range(3))
    assert not any(circle_action_residual(s, x, y, z))


@given(st.sampled_from(IDENTITY_CASES), st.data())
def test_circle_symmetric_and_equivariant(spec, data):
    s = ssd(spec)
    x, y = _vec(data.draw, s.V_dim), _vec(data.draw, s.V_dim)
    h = _vec(data.draw, s.h_dim)
    assert s.circ(x, y) == s.circ(y, x)
    lhs = s.hbr(h, s.circ(x, y))
    rhs = [p + q for p, q in zip(s.circ(s.act(h, x), y), s.circ(x, s.act(h, y)))]
    assert lhs == rhs


@given(st.sampled_from(IDENTITY_CASES), st.data())
def test_circle_duality_on_random_vectors(spec, data):
    s = ssd(spec)
    x, y = _vec(data.draw, s.V_dim), _vec(data.draw, s.V_dim)
    h = _vec(data.draw, s.h_dim)
    a = s.h_inner(h, s.circ(x, y))
    assert a == s.om(s.act(h, x), y) == s.om(s.act(h, y), x)


@given(st.sampled_from(IDENTITY_CASES), st.data())
def test_omega_invariant(spec, data):
    s = ssd(spec)
    x, y = _vec(data.draw, s.V_dim), _vec(data.draw, s.V_dim)
    h = _vec(data.draw, s.h_dim)
    assert s.om(x, y) == -s.om(y, x)
    assert s.om(s.act(h, x), y) + s.om(x, s.act(h, y)) == 0


# fault injection -----------------------------------------------------------------

def _with_circle(s, fn):
    circle = copy.deepcopy(s.circle)
    fn(circle)
    return replace(s, circle=circle)


def test_perturbed_circle_breaks_reconstruction():
    s = ssd("g2_split")

    def bump(c):
        c[0][1][0] += Fraction(1, 3)
        c[1][0][0] += Fraction(1, 3)

    bad = _with_circle(s, bump)
    with pytest.raises(StructuralFault) as err:
        reconstruct(bad)
    assert err.value.checks and not err.value.checks[0]["pass"]
    assert not all(c["pass"] for c in identity_checks(bad))


def test_zeroed_circle_pair_breaks_equivariance():
    s = ssd("sp_real:2")
    i, j = next((i, j) for i in range(s.V_dim) for j in range(s.V_dim) if any(s.circle[i][j]))

    def zero(c):
        c[i][j] = [Fraction(0)] * s.h_dim
        c[j][i] = [Fraction(0)] * s.h_dim

    assert circle_equivariance_audit(s)
    assert not circle_equivariance_audit(_with_circle(s, zero))


def test_extract_raises_on_broken_grading():
    from sympconn.grading import TwoGrading
    tg = grading("sl_real:3")
    broken = replace(tg, e_minus_sq=tuple(2 * x for x in tg.e_minus_sq),
                     V_minus=tuple(tuple(2 * x for x in v) for v in tg.V_minus))
    assert isinstance(broken, TwoGrading)
    with pytest.raises(StructuralFault):
        extract(broken)


@pytest.mark.parametrize("spec", ["sl_real:4", "su:2,2", "so:3,4", "g2_split"])
def test_weight_audit(spec):
    rep = weight_audit(ssd(spec), cartan_of_h(grading(spec)))
    assert rep["pass"], rep


def test_weight_audit_skips_full_sp():
    assert weight_audit(ssd("sp_real:3"), cartan_of_h(grading("sp_real:3")))["skipped"]
