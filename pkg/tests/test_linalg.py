import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import leibniz_det, power
from ncstorage.errors import DimensionMismatch, DuplicatePoint, SingularMatrix
from ncstorage.galois import field_for_q, validate_field
from ncstorage.linalg import (
    GfMatrix,
    determinant,
    mat_inv,
    mat_mul,
    rank,
    solve,
    vandermonde,
    vec_mat,
)

GF8 = validate_field(3, 0b1011)
FIELDS = [field_for_q(q) for q in (2, 4, 8, 16, 256)]


def random_matrix(spec, rows, cols, rng):
    return GfMatrix(spec, tuple(tuple(rng.randrange(spec.q) for _ in range(cols)) for _ in range(rows)))


def test_vandermonde_rows_by_hand():
    v = vandermonde(GF8, [1, 2, 4, 5], 3)
    # 4^2 = x^4 = x^2 + x; 5^2 = x^4 + 1
    assert v.data == ((1, 1, 1), (1, 2, 4), (1, 4, 6), (1, 5, 7))
    for t, row in zip([1, 2, 4, 5], v.data):
        assert row == tuple(power(t, e, GF8.poly, 3) for e in range(3))


def test_vandermonde_duplicate_point():
    with pytest.raises(DuplicatePoint):
        vandermonde(GF8, [1, 2, 1], 3)


@pytest.mark.parametrize("spec", FIELDS[1:4], ids=str)
def test_determinant_matches_leibniz(spec):
    rng = random.Random(spec.q)
    for size in (1, 2, 3, 4):
        for _ in range(25):
            a = random_matrix(spec, size, size, rng)
            assert determinant(a) == leibniz_det(a.data, spec.poly, spec.m)


@pytest.mark.parametrize("spec", FIELDS, ids=str)
def test_inverse_roundtrip_100(spec):
    rng = random.Random(1000 + spec.q)
    done = 0
    while done < 100:
        a = random_matrix(spec, 4, 4, rng)
        if determinant(a) == 0:
            with pytest.raises(SingularMatrix):
                mat_inv(a)
            continue
        ident = GfMatrix.identity(spec, 4)
        inv = mat_inv(a)
        assert mat_mul(a, inv) == ident and mat_mul(inv, a) == ident
        done += 1


def test_rank_examples():
    assert rank(GfMatrix.identity(GF8, 3)) == 3
    dup = GfMatrix(GF8, ((1, 2, 3), (1, 2, 3), (0, 1, 1)))
    assert rank(dup) == 2 and determinant(dup) == 0
    assert rank(GfMatrix.zeros(GF8, 2, 3)) == 0


def test_dimension_errors():
    with pytest.raises(DimensionMismatch):
        mat_mul(GfMatrix.identity(GF8, 2), GfMatrix.identity(GF8, 3))
    with pytest.raises(DimensionMismatch):
        determinant(GfMatrix.zeros(GF8, 2, 3))
    with pytest.raises(DimensionMismatch):
        solve(GfMatrix.identity(GF8, 3), (1, 2))


def test_solve_singular():
    with pytest.raises(SingularMatrix):
        solve(GfMatrix(GF8, ((1, 1), (1, 1))), (1, 0))


@settings(max_examples=200, deadline=None)
@given(
    st.sampled_from(FIELDS[1:]),
    st.integers(1, 6),
    st.randoms(use_true_random=False),
)
def test_solve_substitution(spec, k, rnd):
    a = random_matrix(spec, k, k, rnd)
    b = tuple(rnd.randrange(spec.q) for _ in range(k))
    if determinant(a) == 0:
        return
    x = solve(a, b)
    assert vec_mat(spec, x, a) == b


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(FIELDS[1:]), st.randoms(use_true_random=False))
def test_det_multiplicative(spec, rnd):
    a = random_matrix(spec, 3, 3, rnd)
    b = random_matrix(spec, 3, 3, rnd)
    from ncstorage.galois import get_field

    assert determinant(mat_mul(a, b)) == get_field(spec).mul(determinant(a), determinant(b))


def test_matrix_entries_validated():
    with pytest.raises(ValueError):
        GfMatrix(GF8, ((1, 8),))
