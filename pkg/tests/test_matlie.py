#!/usr/bin/env python3
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy.utilities.iterables import partitions

from unipotent.services.matlie import (
    FpMatrix,
    QMatrix,
    bch,
    bch_denominator_primes,
    block_diagonal,
    conjugate,
    dual_partition,
    inverse_fp,
    is_strictly_upper,
    jacobson_defect,
    jordan_block,
    jordan_type,
    multiplicative_order_p,
    nilpotence_degree,
    nilpotent_exp,
    nullspace_fp,
    p_nilpotence_degree,
    random_invertible,
    random_strict_upper,
    rank_fp,
    rank_profile,
    simultaneous_strict_triangularize,
    unipotent_log,
)
from unipotent.services.commvar import (
    conjugate_tuple,
    is_member,
    parse_ambient,
    random_member_tuple,
    tuple_rank,
)
from unipotent.utils import rng_for


def test_entries_are_reduced():
    X = FpMatrix([[7, -1], [0, 5]], 5)
    assert X.tolist() == [[2, 4], [0, 0]]
    with pytest.raises(ValueError):
        FpMatrix([[1]], 6)
    with pytest.raises(ValueError):
        FpMatrix.identity(2, 3) @ FpMatrix.identity(2, 5)


def test_nilpotence_degree():
    assert nilpotence_degree(jordan_block(4, 3)) == 4
    assert nilpotence_degree(FpMatrix.zeros(3, 2)) == 1
    with pytest.raises(ValueError):
        nilpotence_degree(FpMatrix.identity(2, 3))


@pytest.mark.parametrize("size,p,m", [(6, 5, 2), (5, 5, 1), (1, 7, 0), (3, 2, 2), (9, 3, 2), (10, 3, 3)])
def test_p_nilpotence_degree(size, p, m):
    assert p_nilpotence_degree(jordan_block(size, p)) == m


def _all_jordan_types(max_size):
    for size in range(1, max_size + 1):
        for parts in partitions(size):
            yield tuple(sorted((k for k, mult in parts.items() for _ in range(mult)), reverse=True))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_p_nilpotence_degree_follows_largest_block(p):
    for shape in _all_jordan_types(10):
        X = block_diagonal([jordan_block(b, p) for b in shape])
        expected = 0
        while p ** expected < shape[0]:
            expected += 1
        assert p_nilpotence_degree(X) == expected
        assert jordan_type(X) == shape


def test_jordan_type_is_a_conjugation_invariant():
    rng = rng_for(9, "jordan-conjugation")
    for _ in range(100):
        X = random_strict_upper(5, 3, rng)
        g = random_invertible(5, 3, rng)
        assert jordan_type(conjugate(g, X)) == jordan_type(X)
    for shape in _all_jordan_types(6):
        X = block_diagonal([jordan_block(b, 5) for b in shape])
        assert jordan_type(conjugate(random_invertible(X.n, 5, rng), X)) == shape


def test_rank_profile_and_jordan_type():
    X = block_diagonal([jordan_block(3, 5), jordan_block(1, 5), jordan_block(2, 5)])
    assert rank_profile(X) == (3, 1, 0)
    assert jordan_type(X) == (3, 2, 1)
    assert jordan_type(FpMatrix.zeros(3, 2)) == (1, 1, 1)


def test_dual_partition():
    assert dual_partition((3, 1)) == (2, 1, 1)
    assert dual_partition((2, 2)) == (2, 2)
    assert dual_partition(()) == ()


def test_rational_matrices_agree_with_fp():
    X = block_diagonal([jordan_block(3), jordan_block(2)])
    assert jordan_type(X) == (3, 2)
    assert X.to_fp(7) == block_diagonal([jordan_block(3, 7), jordan_block(2, 7)])
    with pytest.raises(ValueError):
        X.scale(Fraction(1, 7)).to_fp(7)


def test_gaussian_elimination():
    A = FpMatrix([[1, 2, 3], [2, 4, 6], [0, 1, 1]], 7)
    assert rank_fp(A) == 2
    for v in nullspace_fp(A):
        assert not (A.data @ v % 7).any()
    with pytest.raises(ValueError):
        inverse_fp(A)


@given(st.integers(min_value=0, max_value=2 ** 32))
def test_inverse_of_random_invertible(seed):
    g = random_invertible(4, 5, np.random.default_rng(seed))
    assert g @ inverse_fp(g) == FpMatrix.identity(4, 5)


def test_unipotent_order():
    assert multiplicative_order_p(nilpotent_exp(jordan_block(3, 5))) == 5
    u = FpMatrix.identity(4, 2) + jordan_block(4, 2)
    assert multiplicative_order_p(u) == 4
    with pytest.raises(ValueError):
        multiplicative_order_p(FpMatrix([[2, 0], [0, 1]], 5))


def test_exp_log_inverse_over_rationals():
    X = jordan_block(4).scale(Fraction(3, 2))
    assert unipotent_log(nilpotent_exp(X)) == X


def test_jacobson_defect_for_adjacent_units():
    e12 = FpMatrix.unit(3, 0, 1, 2)
    e23 = FpMatrix.unit(3, 1, 2, 2)
    defect, member = jacobson_defect([e12, e23])
    assert defect == FpMatrix.unit(3, 0, 2, 2)
    assert member


def test_jacobson_defect_rejects_non_triangular():
    with pytest.raises(ValueError):
        jacobson_defect([FpMatrix.unit(3, 2, 0, 3)])
    with pytest.raises(ValueError):
        jacobson_defect([])


@pytest.mark.parametrize("p", [2, 3, 5])
def test_jacobson_defect_lies_high_up(p):
    rng = rng_for(7, f"jacobson:{p}")
    for _ in range(30):
        X = random_strict_upper(6, p, rng)
        Y = random_strict_upper(6, p, rng)
        _, member = jacobson_defect([X, Y])
        assert member


def test_bch_of_adjacent_units():
    e12, e23, e13 = QMatrix.unit(3, 0, 1), QMatrix.unit(3, 1, 2), QMatrix.unit(3, 0, 2)
    Z = bch(e12, e23)
    assert Z == e12 + e23 + e13.scale(Fraction(1, 2))
    assert bch_denominator_primes(Z) == [2]


def test_bch_with_zero():
    X = jordan_block(4).scale(5)
    assert bch(X, QMatrix.zeros(4)) == X


def test_bch_of_commuting_matrices_adds():
    X = jordan_block(4)
    Y = X.power(2).scale(3)
    assert bch(X, Y) == X + Y


@pytest.mark.parametrize("descriptor,d", [("strict-upper:4", 2), ("blocks:2,2", 3), ("blocks:1,1,2", 2)])
def test_simultaneous_triangularization(descriptor, d):
    rng = rng_for(3, f"triangularize:{descriptor}")
    ambient = parse_ambient(descriptor, 5)
    for _ in range(40):
        members = random_member_tuple(ambient, d, rng)
        g = random_invertible(4, 5, rng)
        scrambled = conjugate_tuple(g, members)
        assert is_member(members) and is_member(scrambled)
        h = simultaneous_strict_triangularize(scrambled)
        flagged = [conjugate(h, X) for X in scrambled]
        assert all(is_strictly_upper(X) for X in flagged)
        assert is_member(flagged)


def test_triangularization_of_independent_triple():
    e13, e14, e24 = (FpMatrix.unit(4, i, j, 5) for i, j in ((0, 2), (0, 3), (1, 3)))
    triple = [e13 + e24.scale(2), e14, e24 + e13.scale(4)]
    assert is_member(triple) and tuple_rank(triple) == 3
    g = random_invertible(4, 5, rng_for(8, "triangularize:triple"))
    scrambled = conjugate_tuple(g, triple)
    h = simultaneous_strict_triangularize(scrambled)
    assert all(is_strictly_upper(conjugate(h, X)) for X in scrambled)


def test_triangularization_needs_commuting_nilpotents():
    with pytest.raises(ValueError):
        simultaneous_strict_triangularize([FpMatrix.unit(2, 0, 1, 3), FpMatrix.unit(2, 1, 0, 3)])
    with pytest.raises(ValueError):
        simultaneous_strict_triangularize([FpMatrix.identity(2, 3)])
