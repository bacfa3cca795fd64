from fractions import Fraction

import pytest

from sympconn.grading import GradingError, cartan_of_h, frame_checks, grade, normalize_frame
from sympconn.liecore.chevalley import root_vector

from conftest import IDENTITY_CASES, algebra, grading

BLOCKS = {
    "sl_real:3": (1, 2, 2, 2, 1),
    "sl_real:4": (1, 4, 5, 4, 1),
    "sp_real:2": (1, 2, 4, 2, 1),
    "sp_real:3": (1, 4, 11, 4, 1),
    "su:1,2": (1, 2, 2, 2, 1),
    "su:2,2": (1, 4, 5, 4, 1),
    "so:2,3": (1, 2, 4, 2, 1),
    "so:3,4": (1, 6, 7, 6, 1),
    "g2_split": (1, 4, 4, 4, 1),
    "chevalley:F4": (1, 14, 22, 14, 1),
}


@pytest.mark.parametrize("spec", sorted(BLOCKS))
def test_block_dims(spec):
    tg = grading(spec)
    assert tg.block_dims == BLOCKS[spec]
    assert tg.dim_h == BLOCKS[spec][2] - 1


@pytest.mark.parametrize("spec", IDENTITY_CASES)
def test_frame_checks(spec):
    failed = [n for n, ok in frame_checks(grading(spec)) if not ok]
    assert failed == []


@pytest.mark.parametrize("spec", IDENTITY_CASES)
def test_sl2_relations(spec):
    tg = grading(spec)
    L = tg.parent
    ep2, em2, epem = (list(v) for v in (tg.e_plus_sq, tg.e_minus_sq, tg.e_plus_e_minus))
    assert L.bracket(epem, ep2) == [-2 * x for x in ep2]
    assert L.bracket(epem, em2) == [2 * x for x in em2]
    assert L.bracket(ep2, em2) == [4 * x for x in epem]


def test_short_root_seed_rejected():
    L = algebra("g2_split")
    with pytest.raises(GradingError):
        grade(L, (1, 0))


def test_not_a_root():
    with pytest.raises(GradingError):
        grade(algebra("g2_split"), (5, 5))


def test_sl2_has_no_odd_part():
    from sympconn.liecore.matrix_forms import sl_real
    with pytest.raises(GradingError):
        grade(sl_real(2))


def test_non_nilpotent_seed_rejected():
    L = algebra("sl_real:3")
    h = L.cartan[0]
    with pytest.raises(GradingError):
        grade(L, h)


def test_long_root_seeds_agree_in_dims():
    L = algebra("g2_split")
    rs = L.meta["root_system"]
    for beta in rs.roots:
        if rs.is_long(beta):
            assert grade(L, beta).block_dims == (1, 4, 4, 4, 1)


def test_jacobson_morozov_completion():
    L = algebra("sp_real:2")
    x, _ = L.seed
    tg = grade(L, x)
    assert tg.block_dims == BLOCKS["sp_real:2"]
    assert all(ok for _, ok in frame_checks(tg))


def test_normalize_frame_rescales():
    from dataclasses import replace
    tg = grading("sl_real:3")
    bad = replace(tg, e_minus_sq=tuple(3 * x for x in tg.e_minus_sq))
    fixed = normalize_frame(bad)
    assert fixed.e_minus_sq == tg.e_minus_sq
    assert normalize_frame(tg) is tg


def test_chevalley_root_seed_matches_default():
    L = algebra("chevalley:F4")
    rs = L.meta["root_system"]
    tg = grade(L, rs.highest_root)
    assert tg.alpha0 == rs.highest_root
    assert list(tg.e_plus_sq) == [Fraction(2) * v for v in root_vector(L, rs.highest_root)]


@pytest.mark.parametrize("spec,rank_h", [("sl_real:4", 2), ("g2_split", 1), ("sp_real:3", 2),
                                         ("su:2,2", 2)])
def test_cartan_of_h(spec, rank_h):
    assert len(cartan_of_h(grading(spec))) == rank_h
