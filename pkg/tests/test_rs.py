import itertools
import random

import pytest

from lrckit.gf import GF, Matrix
from lrckit.lrc import brute_distance, column_sum, verify_locality
from lrckit.rs import (CodeSpec, UnrecoverableError, build_rs, rs_decode,
                       rs_encode, vandermonde_check_matrix)


def test_check_matrix_entries_are_alpha_powers(f256, rs10):
    h = rs10.H
    assert h.rows == 4 and h.cols == 14
    for i in range(4):
        for j in range(14):
            assert h.data[i][j] == f256.pow(f256.generator, i * j)
    # first row all ones: every codeword's symbols sum to zero
    assert all(v == 1 for v in h.data[0])


def test_generator_is_systematic_and_orthogonal_to_h(rs10):
    g = rs10.G
    assert g.rows == 10 and g.cols == 14
    for i in range(10):
        for j in range(10):
            assert g.data[i][j] == (1 if i == j else 0)
    assert g.mul(rs10.H.transpose()).is_zero()


def test_generator_columns_sum_to_zero(rs10):
    # the all-ones check row forces it; this is what the layered local
    # parities later rely on
    assert all(v == 0 for v in column_sum(rs10.G))


def test_round_trip_with_any_four_erasures(rs10):
    rng = random.Random(20)
    data = [rng.randrange(256) for _ in range(10)]
    cw = rs_encode(rs10, data)
    assert cw[:10] == data
    patterns = list(itertools.combinations(range(14), 4))
    for erased in rng.sample(patterns, 150):
        available = {i: cw[i] for i in range(14) if i not in erased}
        assert rs_decode(rs10, available) == data


def test_five_erasures_always_refused(rs10):
    rng = random.Random(21)
    cw = rs_encode(rs10, [rng.randrange(256) for _ in range(10)])
    for _ in range(80):
        erased = set(rng.sample(range(14), 5))
        available = {i: cw[i] for i in range(14) if i not in erased}
        with pytest.raises(UnrecoverableError) as exc:
            rs_decode(rs10, available)
        assert set(exc.value.erased) == erased


def test_decode_rejects_overlapping_erased_and_available(rs10):
    cw = rs_encode(rs10, list(range(10)))
    available = {i: cw[i] for i in range(10)}
    with pytest.raises(ValueError):
        rs_decode(rs10, available, erased={3})
    with pytest.raises(ValueError):
        rs_decode(rs10, {20: 0})


def test_encode_validates_data_shape(rs10):
    with pytest.raises(ValueError):
        rs_encode(rs10, [0] * 9)
    with pytest.raises(ValueError):
        rs_encode(rs10, [0] * 9 + [256])


def test_small_codes_are_mds(f256):
    """Brute-forced distance equals n-k+1 for a spread of small instances."""
    for k, n in ((2, 5), (3, 6), (4, 7), (5, 9)):
        code = build_rs(CodeSpec(k=k, n=n, field=f256))
        assert brute_distance(code.G, k) == n - k + 1


def test_mds_locality_is_k(f256):
    code = build_rs(CodeSpec(k=4, n=6, field=f256))
    # n small enough that every single-erasure repair set is enumerated
    assert verify_locality(code) == 4


def test_single_data_symbol_code():
    f = GF(4)
    code = build_rs(CodeSpec(k=1, n=2, field=f))
    assert code.G.data == [[1, 1]]
    assert rs_decode(code, {1: 7}) == [7]


def test_length_beyond_field_is_rejected(f256, f16):
    with pytest.raises(ValueError):
        build_rs(CodeSpec(k=10, n=256, field=f256))
    with pytest.raises(ValueError):
        build_rs(CodeSpec(k=3, n=16, field=f16))
    # n = q-1 is the largest legal length
    build_rs(CodeSpec(k=3, n=15, field=f16))


def test_spec_validation():
    f = GF()
    with pytest.raises(ValueError):
        CodeSpec(k=0, n=5, field=f)
    with pytest.raises(ValueError):
        CodeSpec(k=5, n=5, field=f)
    with pytest.raises(ValueError):
        CodeSpec(k=5, n=8, field=f, r=6)


def test_vandermonde_helper_shape(f16):
    h = vandermonde_check_matrix(f16, 3, 7)
    assert h.rows == 4 and h.cols == 7
    assert h.data[1] == [f16.pow(f16.generator, j) for j in range(7)]


def test_decode_uses_any_k_survivors(rs10):
    """Drop the whole systematic prefix; parities plus leftovers decode."""
    rng = random.Random(22)
    data = [rng.randrange(256) for _ in range(10)]
    cw = rs_encode(rs10, data)
    available = {i: cw[i] for i in range(4, 14)}
    assert rs_decode(rs10, available) == data
