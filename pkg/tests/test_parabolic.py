#!/usr/bin/env python3
import pytest

from unipotent.errors import InternalConsistencyError
from unipotent.services import parabolic
from unipotent.services.parabolic import (
    blocks_to_levi,
    enumerate_distinguished,
    exponential_type_threshold,
    grade,
    is_distinguished,
    lcs_class,
    levi_descriptor,
    n_of_P,
    order_exponent,
    p0_from_first_principles,
)
from unipotent.services.rootsys import build_root_system, parse_type_label


def _rs(label):
    return build_root_system(*parse_type_label(label))


def _g2_index(kind):
    rs = _rs("G2")
    return next(i for i in range(2) if rs.length_class[tuple(int(k == i) for k in range(2))] == kind)


def test_grading_of_a2_borel():
    gp = grade(_rs("A2"), ())
    assert gp.graded_dims == {-4: 1, -2: 2, 0: 2, 2: 2, 4: 1}


def test_grading_of_g2_short_parabolic():
    gp = grade(_rs("G2"), (_g2_index("short"),))
    assert gp.graded_dims[0] == 4
    assert gp.graded_dims[2] == 4
    assert gp.graded_dims[4] == 1


def test_whole_group_has_everything_in_degree_zero():
    rs = _rs("B3")
    gp = grade(rs, range(3))
    assert gp.graded_dims == {0: 3 + 2 * len(rs.positive_roots)}
    assert n_of_P(gp) == 1


def test_levi_set_must_be_simple_roots():
    with pytest.raises(ValueError):
        grade(_rs("A2"), (5,))


@pytest.mark.parametrize("label,levi,nP", [("G2", (), 6), ("A3", (), 4), ("E8", (), 30)])
def test_n_of_P(label, levi, nP):
    assert n_of_P(grade(_rs(label), levi)) == nP


def test_g2_short_parabolic_has_n_three():
    assert n_of_P(grade(_rs("G2"), (_g2_index("short"),))) == 3


def test_distinguished_examples():
    rs = _rs("G2")
    assert is_distinguished(grade(rs, (_g2_index("short"),)))
    assert not is_distinguished(grade(rs, (_g2_index("long"),)))
    for label in ("A4", "C3", "F4"):
        assert is_distinguished(grade(_rs(label), ()))


def test_enumerate_distinguished():
    assert enumerate_distinguished(_rs("G2")) == [(), (_g2_index("short"),)]
    assert enumerate_distinguished(_rs("A2")) == [()]
    assert enumerate_distinguished(_rs("A1")) == [()]


def test_enumeration_is_sorted_by_size_then_lex():
    found = enumerate_distinguished(_rs("B3"))
    assert found == sorted(found, key=lambda levi: (len(levi), levi))


@pytest.mark.parametrize("p,nP,m", [(5, 6, 2), (7, 6, 1), (2, 1, 1), (2, 8, 3), (2, 9, 4), (3, 9, 2)])
def test_order_exponent(p, nP, m):
    assert order_exponent(p, nP) == m


def test_order_exponent_is_minimal():
    for p in (2, 3, 5, 7):
        for nP in range(1, 60):
            m = order_exponent(p, nP)
            assert p ** m >= nP
            assert m == 1 or p ** (m - 1) < nP


def test_order_exponent_rejects_bad_input():
    with pytest.raises(ValueError):
        order_exponent(4, 3)
    with pytest.raises(ValueError):
        order_exponent(3, 0)


def test_lcs_class():
    assert lcs_class(grade(_rs("G2"), ())) == 5
    assert lcs_class(grade(_rs("A3"), ())) == 3
    assert lcs_class(grade(_rs("G2"), (_g2_index("short"),))) == 2


def test_lcs_is_one_less_than_n():
    for label in ("A3", "B3", "C3", "D4", "G2"):
        rs = _rs(label)
        for levi in enumerate_distinguished(rs):
            gp = grade(rs, levi)
            assert lcs_class(gp) == gp.nP - 1


def test_blocks_to_levi():
    assert blocks_to_levi(4, (2, 2)) == (0, 2)
    assert blocks_to_levi(3, (1, 1, 1)) == ()
    assert blocks_to_levi(3, (3,)) == (0, 1)
    with pytest.raises(ValueError):
        blocks_to_levi(4, (2, 1))


def test_levi_descriptor():
    assert levi_descriptor(()) == "{}"
    assert levi_descriptor((2, 0)) == "{1,3}"


@pytest.mark.parametrize("label,p0", [("G2", 7), ("F4", 17), ("E6", 17), ("E7", 29), ("E8", 59)])
def test_exceptional_thresholds(label, p0):
    threshold = exponential_type_threshold(_rs(label))
    assert threshold.p0 == p0
    assert p0_from_first_principles(_rs(label)) == p0


def test_classical_threshold_conditions():
    a4 = exponential_type_threshold(_rs("A4"))
    assert "r != -1 (mod p)" in a4.condition
    assert a4.admits(2) and a4.admits(3) and not a4.admits(5)
    c3 = exponential_type_threshold(_rs("C3"))
    assert not c3.admits(2) and c3.admits(3)


def test_exceptional_admits_from_p0_or_generic_bound():
    g2 = exponential_type_threshold(_rs("G2"))
    assert g2.generic_bound == 10
    assert not g2.admits(5)
    assert g2.admits(7) and g2.admits(11)


def test_admitted_primes_do_not_divide_the_fundamental_group():
    from unipotent.services.rootsys import fundamental_group_order

    for label in ("A1", "A2", "A4", "A5", "E6", "E7"):
        rs = _rs(label)
        threshold = exponential_type_threshold(rs)
        for p in (2, 3, 5, 7):
            if threshold.admits(p) and p <= threshold.generic_bound and threshold.family == "A":
                assert fundamental_group_order(rs) % p != 0


def test_threshold_mismatch_is_loud(monkeypatch):
    monkeypatch.setitem(parabolic.P0_TABLE, "G2", 11)
    with pytest.raises(InternalConsistencyError):
        exponential_type_threshold(_rs("G2"))


def test_threshold_needs_quasisimple():
    from unipotent.services.rootsys import product_root_system

    with pytest.raises(ValueError):
        exponential_type_threshold(product_root_system([_rs("A1"), _rs("A1")]))


def _diagram_automorphism(label):
    family, rank = parse_type_label(label)
    if family == "A":
        return [rank - 1 - i for i in range(rank)]
    if family == "D":
        return list(range(rank - 2)) + [rank - 1, rank - 2]
    return [5, 1, 4, 3, 2, 0]


@pytest.mark.parametrize("label", ["A3", "A4", "A5", "D4", "D5", "D6", "E6"])
def test_distinguished_sets_are_stable_under_diagram_automorphisms(label):
    rs = _rs(label)
    sigma = _diagram_automorphism(label)
    assert all(rs.cartan[sigma[i], sigma[j]] == rs.cartan[i, j] for i in range(rs.rank) for j in range(rs.rank))
    found = enumerate_distinguished(rs)
    assert {tuple(sorted(sigma[i] for i in levi)) for levi in found} == set(found)


def test_distinguished_sets_of_d5_and_e6():
    assert enumerate_distinguished(_rs("A5")) == [()]
    assert enumerate_distinguished(_rs("D5")) == [(), (2,)]
    assert enumerate_distinguished(_rs("E6")) == [(), (3,), (1, 2, 4)]
