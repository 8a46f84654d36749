#!/usr/bin/env python3
import pytest
import sympy

from unipotent.services.chevalley import (
    OrderCase,
    blocks_nilradical,
    build_realization,
    compositions,
    coordinate_denominators,
    exp_coordinates,
    matches_up_to_signs,
    nilradical,
    richardson_sample,
    sp4_exp_coordinates,
    sp4_expected,
    sp4_roots,
    structure_constant,
    unipotent_of,
    verify_order_formula,
)
from unipotent.services.matlie import (
    dual_partition,
    jordan_block,
    jordan_type,
    multiplicative_order_p,
    nilpotent_exp,
)
from unipotent.utils import rng_for


@pytest.mark.parametrize("kind,n,label,roots", [
    ("CG1", 4, "A3", 6), ("CG2", 4, "C2", 4), ("CG2", 6, "C3", 9), ("CG3", 7, "B3", 9), ("CG3", 8, "D4", 12),
])
def test_realizations_have_one_vector_per_positive_root(kind, n, label, roots):
    realization = build_realization(kind, n)
    assert realization.rs.label == label
    assert len(realization.root_vectors) == roots
    for X in realization.root_vectors.values():
        assert realization.in_algebra(X)


@pytest.mark.parametrize("kind,n", [("CG2", 4), ("CG3", 5)])
def test_root_exponentials_preserve_the_form(kind, n):
    realization = build_realization(kind, n)
    for root in realization.rs.positive_roots:
        assert realization.preserves_form(nilpotent_exp(realization.vector_q(root)))
        assert realization.preserves_form(nilpotent_exp(realization.vector_fp(root, 7)))


def test_bad_realizations_are_rejected():
    for kind, n, p in (("CG2", 5, None), ("CG3", 6, None), ("CG1", 1, None), ("CG3", 7, 2), ("XX", 4, None)):
        with pytest.raises(ValueError):
            build_realization(kind, n, p)


def test_structure_constants_of_sl3():
    realization = build_realization("CG1", 3)
    assert structure_constant(realization, (1, 0), (0, 1)) == 1
    assert structure_constant(realization, (0, 1), (1, 0)) == -1
    assert structure_constant(realization, (1, 0), (1, 1)) is None


def test_block_nilradical():
    nm = blocks_nilradical(4, (2, 2))
    assert nm.dimension == 4
    assert nm.nP == 2
    assert nm.label == "gl4:blocks(2,2)"
    X = nm.element([1, 1, 1, 1], 3)
    assert X.power(2).is_zero()


def test_borel_nilradical_of_sp4():
    nm = nilradical(build_realization("CG2", 4), ())
    assert nm.dimension == 4
    assert nm.nP == 4
    assert nm.label == "sp4:I{}"
    assert nm.realization.in_algebra(nm.element_q([1, 2, 3, 4]).data)
    with pytest.raises(ValueError):
        nilradical(nm.realization, (3,))


def test_compositions():
    assert compositions(3) == [(1, 1, 1), (1, 2), (2, 1), (3,)]
    assert len(compositions(5)) == 16


def test_richardson_sample_on_gl3_borel():
    nm = nilradical(build_realization("CG1", 3), ())
    sample = richardson_sample(nm, 101, 20, rng_for(5, "gl3"))
    assert sample.profile == (2, 1, 0)
    assert sample.stable


@pytest.mark.parametrize("n", range(2, 9))
def test_block_richardson_jordan_type_is_dual_partition(n):
    rng = rng_for(6, f"gl{n}:dual-partition")
    for blocks in compositions(n):
        if len(blocks) == 1:
            continue
        nm = blocks_nilradical(n, blocks)
        shape = jordan_type(richardson_sample(nm, 101, 4, rng).X)
        assert shape == dual_partition(blocks)
        assert shape[0] == nm.nP


def test_unipotent_falls_back_to_artin_hasse():
    assert multiplicative_order_p(unipotent_of(jordan_block(6, 5))) == 25
    assert multiplicative_order_p(unipotent_of(jordan_block(5, 5))) == 5


def test_sp4_coordinates_match_up_to_signs():
    a, b, c, d = sympy.symbols("a b c d")
    got = sp4_exp_coordinates(a, b, c, d)
    assert got[0] == a and got[1] == b
    assert matches_up_to_signs(got, sp4_expected(a, b, c, d), (a, b, c, d))
    assert all(6 % q == 0 for q in coordinate_denominators(got, (a, b, c, d)))


def test_sp4_coordinates_at_a_point():
    got = sp4_exp_coordinates(1, 1, 0, 0)
    assert abs(got[2]) == sympy.Rational(1, 2)
    assert abs(got[3]) == sympy.Rational(2, 3)


def test_peeling_order_must_respect_height():
    realization = build_realization("CG2", 4)
    long_simple, short_simple, both, highest = sp4_roots()
    with pytest.raises(ValueError):
        exp_coordinates(realization, {highest: 1}, [highest, long_simple, short_simple, both])


def test_case_ids():
    assert OrderCase("CG1", 4, 2, blocks=(2, 2)).case_id == "gl04:blocks(2,2):p002"
    assert OrderCase("CG2", 6, 5, (0,)).case_id == "sp06:I{1}:p005"


def test_order_formula_on_block_nilradical():
    report = verify_order_formula(OrderCase("CG1", 4, 2, blocks=(2, 2)), trials=32, seed=1)
    assert report.status == "pass"
    assert (report.nP, report.m, report.predicted_order) == (2, 1, 2)
    assert report.measured_order == 2
    assert report.row()["suite"] == "orders"


def test_order_formula_on_gl3_borel():
    report = verify_order_formula(OrderCase("CG1", 3, 2, blocks=(1, 1, 1)), trials=32, seed=1)
    assert report.status == "pass"
    assert (report.nP, report.m) == (3, 2)
    assert report.measured_order == 4


def test_order_formula_rejects_trivial_and_bad_cases():
    with pytest.raises(ValueError):
        verify_order_formula(OrderCase("CG1", 3, 5, blocks=(3,)), trials=8, seed=1)
    with pytest.raises(ValueError):
        verify_order_formula(OrderCase("CG2", 4, 2), trials=8, seed=1)
