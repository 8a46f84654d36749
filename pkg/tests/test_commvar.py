#!/usr/bin/env python3
import pytest

from unipotent.errors import CensusTooLargeError
from unipotent.services.artinhasse import trunc_exp
from unipotent.services.commvar import (
    PolyMatrixMap,
    census,
    injectivity_check,
    injectivity_exhaustive,
    is_member,
    member_tuples,
    one_psg,
    parse_ambient,
    random_member_tuple,
    recover_tuple,
    triangular_conjugates_count,
    tuple_rank,
)
from unipotent.services.matlie import FpMatrix, jordan_block
from unipotent.utils import rng_for


def _unit(i, j, n=3, p=5):
    return FpMatrix.unit(n, i, j, p)


def test_membership():
    assert is_member((_unit(0, 1), _unit(0, 2)))
    assert not is_member((_unit(0, 1), _unit(1, 2)))
    assert not is_member((jordan_block(3, 2),))
    assert is_member(())
    with pytest.raises(ValueError):
        is_member((_unit(0, 1), _unit(0, 1, p=3)))


def test_parse_ambient():
    assert parse_ambient("strict-upper:3", 5).dimension == 3
    assert parse_ambient("gl:2", 3).dimension == 4
    blocks = parse_ambient("blocks:2,1", 5)
    assert (blocks.n, blocks.dimension, blocks.nP) == (3, 2, 2)
    for bad in ("strict-upper:x", "sym:3", "gl:7", "gl:0"):
        with pytest.raises(ValueError):
            parse_ambient(bad, 5)


@pytest.mark.parametrize("descriptor,d,count", [
    ("strict-upper:2", 1, 2), ("strict-upper:2", 2, 4), ("gl:2", 1, 4), ("gl:2", 2, 10), ("strict-upper:3", 1, 6),
])
def test_census_counts_over_f2(descriptor, d, count):
    result = census(d, parse_ambient(descriptor, 2))
    assert result.count == count
    assert result.to_dict()["count"] == count


def test_census_of_abelian_ambient_counts_everything():
    ambient = parse_ambient("blocks:1,2", 3)
    assert census(3, ambient).count == ambient.size ** 3


def test_census_limits():
    with pytest.raises(CensusTooLargeError):
        census(2, parse_ambient("gl:3", 3), bound=1000)
    with pytest.raises(ValueError):
        census(4, parse_ambient("gl:2", 2))


@pytest.mark.parametrize("d", [1, 2])
def test_census_matches_conjugates_of_triangular_tuples(d):
    assert census(d, parse_ambient("gl:2", 2)).count == triangular_conjugates_count(d, 2, 2)


def test_one_parameter_subgroup_of_single_matrix_is_truncated_exp():
    X = _unit(0, 1) + _unit(1, 2).scale(2)
    psg = one_psg((X,))
    for t in range(5):
        assert psg.evaluate(t) == trunc_exp(X.scale(t))


def test_one_parameter_subgroups_are_homomorphisms():
    for tuple_ in member_tuples(parse_ambient("strict-upper:3", 3), 2)[:40]:
        psg = one_psg(tuple_)
        assert psg.is_homomorphism()
        for t in range(3):
            for s in range(3):
                assert psg.evaluate(t + s) == psg.evaluate(t) @ psg.evaluate(s)


def test_one_psg_needs_members():
    with pytest.raises(ValueError):
        one_psg((_unit(0, 1), _unit(1, 2)))
    with pytest.raises(ValueError):
        one_psg((_unit(0, 1),), d=2)


def test_constant_map_is_not_a_homomorphism_unless_identity():
    assert PolyMatrixMap([FpMatrix.identity(2, 3)]).is_homomorphism()
    assert not PolyMatrixMap([FpMatrix.identity(2, 3).scale(2)]).is_homomorphism()


def test_recover_tuple():
    tuple_ = (_unit(0, 2), _unit(0, 1).scale(3), _unit(0, 2).scale(4))
    assert recover_tuple(one_psg(tuple_), 3) == tuple_


def test_injectivity_check():
    a = (_unit(0, 1), _unit(0, 2))
    b = (_unit(0, 2), _unit(0, 1))
    assert injectivity_check(a, b, nP=3)
    assert injectivity_check(a, a)
    with pytest.raises(ValueError):
        injectivity_check(a, b, nP=5)


def test_injectivity_check_on_random_members():
    rng = rng_for(4, "injectivity")
    ambient = parse_ambient("blocks:1,1,2", 5)
    assert ambient.nP == 3
    for _ in range(30):
        a = random_member_tuple(ambient, 2, rng)
        b = random_member_tuple(ambient, 2, rng)
        assert injectivity_check(a, b, ambient.nP)
        assert injectivity_check(a, a, ambient.nP)


def test_random_member_tuples():
    rng = rng_for(5, "members")
    ambient = parse_ambient("strict-upper:4", 3)
    for _ in range(20):
        members = random_member_tuple(ambient, 2, rng)
        assert is_member(members)
    assert tuple_rank((_unit(0, 1), _unit(0, 2), _unit(0, 1).scale(2))) == 2
    with pytest.raises(ValueError):
        random_member_tuple(parse_ambient("gl:2", 2), 2, rng, attempts=0)


def test_injectivity_exhaustive():
    report = injectivity_exhaustive(parse_ambient("strict-upper:2", 3), 2)
    assert report.members == 9
    assert report.injective
    with pytest.raises(ValueError):
        injectivity_exhaustive(parse_ambient("strict-upper:3", 2), 1)
