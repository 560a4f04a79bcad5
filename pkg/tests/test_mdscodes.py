import itertools

import pytest
from hypothesis import given, settings, strategies as st

from oracles import leibniz_det, power
from ncstorage.errors import BadPivotSet, KTooLarge, MdsRetryExhausted, NotMds, TooLong
from ncstorage.galois import field_for_q, validate_field
from ncstorage.linalg import GfMatrix, vec_mat
from ncstorage.mdscodes import (
    Family,
    GeneratorMatrix,
    MdsStatus,
    build_generator,
    is_mds,
    jump_vandermonde_matrix,
    jump_vandermonde_nonsingular,
    mds_witness,
    min_field_size,
    framed_rs_generator,
    rlnc_generator,
    rs_generator,
    sparsify,
    sparsest_generator,
    maximal_generator,
    maximal_length,
    weight_profile,
)

GF8 = validate_field(3, 0b1011)


def test_worked_example_gf8():
    m = rs_generator(5, 3, GF8, [1, 2, 3, 4, 5])
    expected_m = tuple(tuple(power(t, e, GF8.poly, 3) for e in range(3)) for t in range(1, 6))
    assert m.rows == expected_m
    g = sparsify(m, [0, 1, 2])
    assert g.rows[:3] == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert g.rows[3:] == ((7, 2, 4), (7, 3, 5))
    # descending-power column order gives the same rows reversed
    assert [r[::-1] for r in g.rows[3:]] == [(4, 2, 7), (5, 3, 7)]
    # each sparse row is the coefficient vector of M's row over the pivot rows
    n_mat = m.mat.select_rows([0, 1, 2])
    for j in range(5):
        assert vec_mat(GF8, g.rows[j], n_mat) == m.rows[j]
    assert is_mds(g)
    wp = weight_profile(g)
    assert wp.zero_count == 6 and wp.column_weights == (3, 3, 3) and wp.stddev == 0


def test_sparsest_default_equals_worked_example():
    assert sparsest_generator(5, 3, GF8).rows == sparsify(rs_generator(5, 3, GF8, [1, 2, 3, 4, 5])).rows


@pytest.mark.parametrize("n,k", [(n, k) for n in range(4, 11) for k in range(3, n)])
def test_sparsest_profile(n, k):
    g = sparsest_generator(n, k, field_for_q(min_field_size(n, k)))
    wp = weight_profile(g)
    assert wp.zero_count == k * (k - 1)
    assert wp.column_weights == (n - k + 1,) * k
    assert wp.total_weight == k * (n - k + 1)
    assert is_mds(g)


def test_bad_pivots():
    m = rs_generator(5, 3, GF8)
    with pytest.raises(BadPivotSet):
        sparsify(m, [0, 0, 1])
    with pytest.raises(BadPivotSet):
        sparsify(m, [0, 1])


def test_sparsify_rejects_non_mds():
    m = GeneratorMatrix(GfMatrix(GF8, ((1, 0), (0, 1), (1, 0))), Family.RS_VANDERMONDE)
    with pytest.raises(NotMds):
        sparsify(m)


def test_witness_for_duplicate_rows():
    m = GfMatrix(GF8, ((1, 2, 3), (0, 1, 0), (1, 2, 3), (0, 0, 1)))
    w = mds_witness(m)
    assert w is not None and 0 in w and 2 in w
    assert mds_witness(GfMatrix.identity(GF8, 3)) is None


def test_mds_bound_enforced():
    spec = field_for_q(32)
    g = rs_generator(20, 3, spec)
    with pytest.raises(Exception):
        is_mds(g)
    assert is_mds(g, force=True)


@pytest.mark.parametrize("q", [2, 4, 8])
def test_maximal_lengths_and_mds(q):
    spec = field_for_q(q)
    for k in range(1, q + 1):
        g = maximal_generator(spec, k)
        assert g.n == maximal_length(q, k)
        assert g.mds_verified is MdsStatus.VERIFIED


def test_maximal_gf8_k3_has_ten_rows():
    assert maximal_generator(GF8, 3).n == 10


def test_k_too_large():
    with pytest.raises(KTooLarge):
        maximal_generator(GF8, 9)


def test_min_field_size_examples():
    assert min_field_size(5, 3) == 4
    assert min_field_size(9, 4) == 8
    assert min_field_size(3, 2) == 2
    assert min_field_size(10, 3) == 8
    assert min_field_size(11, 3) == 16


def test_too_long():
    with pytest.raises(TooLong):
        sparsest_generator(7, 3, field_for_q(4))


@pytest.mark.parametrize("q", [8, 16])
def test_jump_vandermonde_small_k_exhaustive(q):
    spec = field_for_q(q)
    for k in (3, 4):
        for pts in itertools.combinations(range(1, q), k - 1):
            det = leibniz_det(jump_vandermonde_matrix(spec, pts).data, spec.poly, spec.m)
            assert (det != 0) == jump_vandermonde_nonsingular(pts)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(1, 15), min_size=2, max_size=7, unique=True))
def test_jump_vandermonde_property_gf16(pts):
    from ncstorage.linalg import determinant

    spec = field_for_q(16)
    assert (determinant(jump_vandermonde_matrix(spec, pts)) != 0) == jump_vandermonde_nonsingular(pts)


def test_rlnc_seeded_and_mds():
    spec = field_for_q(256)
    a = rlnc_generator(8, 4, spec, seed=7)
    b = rlnc_generator(8, 4, spec, seed=7)
    assert a.rows == b.rows and is_mds(a)
    assert a.rows != rlnc_generator(8, 4, spec, seed=8).rows


def test_rlnc_retry_exhausted():
    with pytest.raises(MdsRetryExhausted):
        rlnc_generator(6, 3, field_for_q(2), seed=0, max_retries=5)


def test_g1_g2_shapes():
    g2 = framed_rs_generator(5, 3, field_for_q(4))
    assert g2.rows[0] == (1, 0, 0) and g2.rows[-2:] == ((0, 1, 0), (0, 0, 1))
    g1 = framed_rs_generator(6, 4, field_for_q(8))
    assert g1.rows[0] == (1, 0, 0, 0) and g1.rows[-1] == (0, 0, 0, 1)
    assert weight_profile(g1).zero_count == 2 * (4 - 1)
    assert weight_profile(g1).stddev > 0


def test_build_generator_dispatch():
    assert build_generator("sparsest", 5, 3).family is Family.SPARSEST
    assert build_generator("rs", 5, 3).family is Family.RS_VANDERMONDE
    with pytest.raises(ValueError):
        build_generator("rlnc", 5, 3)


@pytest.mark.parametrize("q", [2, 4, 8, 16])
def test_maximal_k_equals_q(q):
    g = maximal_generator(field_for_q(q), q)
    assert g.n == q + 1 and g.mds_verified is MdsStatus.VERIFIED
