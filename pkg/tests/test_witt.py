#!/usr/bin/env python3
import pytest
from hypothesis import given
from hypothesis import strategies as st

from unipotent.errors import IntegralityError
from unipotent.services import witt
from unipotent.services.exact import polynomial_ring, to_fraction
from unipotent.services.witt import (
    WittVector,
    all_witt_vectors,
    derivation_p_power,
    displayed_derivation,
    from_ghost,
    ghost,
    ghost_lift_add,
    invariant_derivations,
    partial_derivation,
    predicted_witt_order,
    v2_add,
    v2_invariant_derivations,
    v2_order,
    witt_add,
    witt_multiple,
    witt_neg,
    witt_order,
    witt_polynomial,
    witt_sum_polynomials,
)


def _xy(n):
    names = tuple(f"X{i}" for i in range(n)) + tuple(f"Y{i}" for i in range(n))
    return polynomial_ring(names)


def test_witt_polynomials():
    _, (X0, X1) = polynomial_ring(("X0", "X1"))
    _, (Z0, Z1, Z2) = polynomial_ring(("X0", "X1", "X2"))
    assert witt_polynomial(5, 0) == polynomial_ring(("X0",))[1][0]
    assert witt_polynomial(3, 1) == X0 ** 3 + 3 * X1
    assert witt_polynomial(2, 2) == Z0 ** 4 + 2 * Z1 ** 2 + 4 * Z2


def test_first_sum_polynomial_is_addition():
    R, gens = _xy(3)
    assert witt_sum_polynomials(3, 3)[0] == gens[0] + gens[3]


def test_second_sum_polynomial_for_p_two():
    R, (X0, X1, Y0, Y1) = _xy(2)
    assert witt_sum_polynomials(2, 2)[1] == X1 + Y1 - X0 * Y0


def test_second_sum_polynomial_carries_f():
    R, (X0, X1, Y0, Y1) = _xy(2)
    F = (X0 ** 5 + Y0 ** 5 - (X0 + Y0) ** 5) * R.domain(1, 5)
    assert witt_sum_polynomials(5, 2)[1] == X1 + Y1 + F


@pytest.mark.parametrize("p,n", [(2, 1), (2, 4), (3, 3), (5, 2)])
def test_sum_polynomials_are_integral(p, n):
    sums = witt_sum_polynomials(p, n)
    assert len(sums) == n
    for S in sums:
        assert all(to_fraction(c).denominator == 1 for c in S.coeffs())


def test_length_is_bounded():
    with pytest.raises(ValueError):
        witt_sum_polynomials(2, 0)
    with pytest.raises(ValueError):
        witt_sum_polynomials(2, 9)


def test_witt_vector_validation():
    assert WittVector(3, (4, -1)).coords == (1, 2)
    with pytest.raises(ValueError):
        WittVector(4, (1,))
    with pytest.raises(ValueError):
        WittVector(3, ())
    with pytest.raises(ValueError):
        witt_add(WittVector(3, (1, 0)), WittVector(3, (1, 0, 0)))


def test_zero_is_identity():
    for a in all_witt_vectors(3, 2):
        assert witt_add(a, WittVector.zero(3, 2)) == a


def test_carry_in_w2_over_f3():
    one = WittVector(3, (1, 0))
    three = witt_multiple(one, 3)
    assert three.coords[0] == 0
    assert three.coords[1] != 0
    assert witt_order(three) == 3
    assert witt_multiple(one, 9).is_zero()


def test_addition_matches_ghost_lift_everywhere():
    for p, n in ((2, 2), (3, 2), (2, 3)):
        vectors = list(all_witt_vectors(p, n))
        for a in vectors:
            for b in vectors:
                assert witt_add(a, b) == ghost_lift_add(a, b)


def test_associativity_over_f2():
    vectors = list(all_witt_vectors(2, 2))
    for a in vectors:
        for b in vectors:
            ab = witt_add(a, b)
            for c in vectors:
                assert witt_add(ab, c) == witt_add(a, witt_add(b, c))


def test_negation():
    for a in all_witt_vectors(3, 2):
        assert witt_add(a, witt_neg(a)).is_zero()
    assert witt_multiple(WittVector(2, (1, 1)), -1) == witt_neg(WittVector(2, (1, 1)))


def test_ghost_components():
    assert ghost(WittVector(3, (0, 0), "QQ")) == (0, 0)
    assert ghost(WittVector(3, (2, 5), "ZZ")) == (2, 2 ** 3 + 3 * 5)
    with pytest.raises(ValueError):
        ghost(WittVector(3, (1, 1)))


@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6), min_size=6, max_size=6))
def test_ghost_map_is_additive(values):
    a = WittVector(2, values[:3], "QQ")
    b = WittVector(2, values[3:], "QQ")
    total = witt_add(a, b)
    assert ghost(total) == tuple(x + y for x, y in zip(ghost(a), ghost(b)))
    assert from_ghost(2, ghost(a)) == a


@pytest.mark.parametrize("coords,order", [((1, 0), 9), ((0, 2), 3), ((0, 0), 1), ((2, 1), 9)])
def test_orders_in_w2_over_f3(coords, order):
    a = WittVector(3, coords)
    assert witt_order(a) == order
    assert predicted_witt_order(a) == order


def test_full_order_iff_leading_coordinate_nonzero():
    for p in (2, 3, 5):
        for a in all_witt_vectors(p, 2):
            assert (witt_order(a) == p ** 2) == (a.coords[0] != 0)


def test_order_matches_repeated_addition():
    for a in all_witt_vectors(2, 3):
        count, current = 1, a
        while not current.is_zero():
            current = witt_add(current, a)
            count += 1
        assert witt_order(a) == count


def test_orders_need_finite_field():
    with pytest.raises(ValueError):
        witt_order(WittVector(3, (1, 0), "ZZ"))


def test_twisted_law_agrees_with_witt_law_on_fp_points():
    for p in (2, 3):
        vectors = list(all_witt_vectors(p, 2))
        for a in vectors:
            for b in vectors:
                assert v2_add(a, b) == witt_add(a, b)
        assert max(v2_order(a) for a in vectors) == p ** 2
    with pytest.raises(ValueError):
        v2_add(WittVector(2, (1, 0, 0)), WittVector(2, (1, 0, 0)))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_invariant_derivation_p_power_is_second_generator(p):
    X0, X1 = invariant_derivations(p)
    assert X1 == partial_derivation(p, 2, 1, X0.bound)
    assert derivation_p_power(X0, p) == X1
    R, (T0, T1) = X0.ring, X0.gens
    assert X0.images == (R.one, -T0 ** (p - 1))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_partial_derivations_have_zero_p_power(p):
    for i in range(2):
        D = partial_derivation(p, 2, i, 4 * p)
        assert not any(derivation_p_power(D, p).images)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_twisted_law_derivations_are_partials(p):
    basis = v2_invariant_derivations(p)
    assert basis == [partial_derivation(p, 2, i, 4 * p) for i in range(2)]
    assert all(not any(derivation_p_power(D, p).images) for D in basis)


def test_displayed_variant_differs_by_sign_for_odd_p():
    for p in (3, 5):
        power = derivation_p_power(displayed_derivation(p), p)
        R, (T0, T1) = power.ring, power.gens
        assert power.images == (R.zero, -R.one)
    assert derivation_p_power(displayed_derivation(2), 2) == partial_derivation(2, 2, 1, 8)


def test_p_power_matches_iteration_on_monomials():
    D = invariant_derivations(3)[0]
    assert witt.agrees_with_iteration(D, derivation_p_power(D, 3), 4)


def test_p_power_needs_room():
    D = displayed_derivation(5, bound=6)
    with pytest.raises(ValueError):
        derivation_p_power(D, 5)


def test_integrality_failure_is_loud(monkeypatch):
    witt.witt_sum_polynomials.cache_clear()
    monkeypatch.setattr(witt, "poly_min_valuation", lambda poly, p: -1)
    try:
        with pytest.raises(IntegralityError):
            witt.witt_sum_polynomials(2, 2)
    finally:
        witt.witt_sum_polynomials.cache_clear()
