import random
from math import comb

import pytest

from lrckit.bounds import distance_bound
from lrckit.construct import (ConstructionAttempt, construct_with_retry,
                              construction_groups, random_lrc,
                              rlnc_success_lower_bound, systematize,
                              trial_success_rate)
from lrckit.gf import Matrix, PivotBasis
from lrckit.lrc import brute_distance


def test_group_layout_puts_locals_at_the_tail():
    assert construction_groups(9, 2) == ((0, 1, 6), (2, 3, 7), (4, 5, 8))
    assert construction_groups(12, 5) == ((0, 1, 2, 3, 4, 10),
                                          (5, 6, 7, 8, 9, 11))


def test_each_group_carries_one_dependency(f65536):
    rng = random.Random(50)
    g = random_lrc(4, 9, 2, f65536, rng)
    assert g.rows == 4 and g.cols == 9
    for group in construction_groups(9, 2):
        basis = PivotBasis(f65536, 4)
        for pos in group:
            basis.add(g.col(pos))
        assert basis.rank <= 2
        # the local column really is spanned by its random mates
        mates = PivotBasis(f65536, 4)
        for pos in group[:-1]:
            mates.add(g.col(pos))
        assert mates.contains(g.col(group[-1]))


def test_systematize_row_reduces_in_place_shape(f65536):
    rng = random.Random(51)
    g = random_lrc(4, 9, 2, f65536, rng)
    gs = systematize(g)
    assert gs is not None
    ident = Matrix.identity(f65536, 4)
    assert gs.submatrix_cols(list(range(4))) == ident
    # row operations preserve the code, hence the distance
    assert brute_distance(gs, 4) == brute_distance(g, 4)


def test_systematize_refuses_deficient_leading_block(f16):
    g = Matrix(f16, [[1, 2, 3], [2, 4, 5]])  # col1 = 2*col0
    assert systematize(g) is None


def test_reaches_the_bound_quickly_at_large_q(f65536):
    a = construct_with_retry(4, 9, 2, f65536, max_trials=500, seed=0)
    assert isinstance(a, ConstructionAttempt)
    assert a.success and a.trials == 1
    assert a.achieved_d == distance_bound(9, 4, 2) == 5
    assert a.q == 65536
    # returned generator is already systematic
    assert a.G.submatrix_cols(list(range(4))) == Matrix.identity(f65536, 4)


def test_trivial_and_medium_instances(f65536, f256):
    a = construct_with_retry(2, 4, 1, f65536, max_trials=500, seed=0)
    assert a.success and a.achieved_d == 2
    b = construct_with_retry(10, 12, 5, f256, max_trials=500, seed=3)
    assert b.success and b.achieved_d == distance_bound(12, 10, 5) == 2


def test_achieved_distance_never_exceeds_the_bound(f65536):
    rng = random.Random(52)
    for k, n, r in ((4, 9, 2), (2, 4, 1), (6, 9, 2), (4, 8, 1)):
        a = construct_with_retry(k, n, r, f65536, max_trials=50,
                                 seed=rng.randrange(1000))
        if a.success:
            assert a.achieved_d <= distance_bound(n, k, r)


def test_same_seed_reproduces_the_attempt(f65536):
    a = construct_with_retry(4, 9, 2, f65536, max_trials=500, seed=9)
    b = construct_with_retry(4, 9, 2, f65536, max_trials=500, seed=9)
    assert a.G == b.G and a.trials == b.trials


def test_success_rate_dominates_the_analytic_floor(f65536):
    rate = trial_success_rate(4, 9, 2, f65536, trials=200, seed=7)
    floor = rlnc_success_lower_bound(65536, 9, 4, 2)
    assert floor == pytest.approx((1 - comb(9, 5) / 65536) ** 6)
    assert rate >= floor > 0.98


def test_success_rate_grows_with_field_size(f16, f256, f65536):
    r16 = trial_success_rate(4, 9, 2, f16, trials=300, seed=11)
    r256 = trial_success_rate(4, 9, 2, f256, trials=300, seed=11)
    r65536 = trial_success_rate(4, 9, 2, f65536, trials=300, seed=11)
    assert r16 < r256 <= r65536
    assert r65536 == 1.0


def test_lower_bound_degenerates_to_zero_for_tiny_fields():
    # collector count swamps q, so the union bound gives nothing
    assert rlnc_success_lower_bound(16, 9, 4, 2) == 0.0


def test_construction_validation(f16, f65536):
    with pytest.raises(ValueError):
        random_lrc(4, 9, 3, f65536, random.Random(0))   # (r+1) nmid n
    with pytest.raises(ValueError):
        random_lrc(4, 20, 3, f16, random.Random(0))     # q < n
    with pytest.raises(ValueError):
        random_lrc(2, 9, 3, f65536, random.Random(0))   # r > k
