#!/usr/bin/env python3
import logging
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from sympy import nextprime

from unipotent.errors import InternalConsistencyError
from unipotent.services.exact import check_prime
from unipotent.services import rootsys
from unipotent.services.rootsys import Root, RootSystem

logger = logging.getLogger(__name__)

#p_0 for exceptional types (exponential-type representations)
P0_TABLE = {"G2": 7, "F4": 17, "E6": 17, "E7": 29, "E8": 59}


@dataclass(frozen=True)
class GradedParabolic:
    rs: RootSystem
    levi_set: FrozenSet[int]
    f_values: Dict[Root, int] = field(compare=False)
    graded_dims: Dict[int, int] = field(compare=False)
    nP: int

    def degree(self, root: Sequence[int]) -> int:
        return self.f_values[tuple(root)]

    def descriptor(self) -> str:
        return levi_descriptor(self.levi_set)


def levi_descriptor(levi_set: Iterable[int]) -> str:
    """Canonical 1-based label such as '{1,3}' or '{}'."""
    return "{" + ",".join(str(i + 1) for i in sorted(levi_set)) + "}"


def _f(root: Sequence[int], levi_set: FrozenSet[int]) -> int:
    return 2 * sum(c for i, c in enumerate(root) if i not in levi_set)


def _component_dims(rs: RootSystem, levi_set: FrozenSet[int], offset: int, rank: int) -> Counter:
    dims = Counter()
    dims[0] += rank
    for a in rs.component_roots(offset):
        d = _f(a, levi_set)
        dims[d] += 1
        dims[-d] += 1
    return dims


def grade(rs: RootSystem, levi_set: Iterable[int]) -> GradedParabolic:
    levi_set = frozenset(levi_set)
    if not levi_set <= set(rs.simple_roots):
        raise ValueError(f"Levi set {sorted(levi_set)} is not a subset of the simple roots of {rs.label}")
    f_values = {}
    for a in rs.positive_roots:
        f_values[a] = _f(a, levi_set)
        f_values[tuple(-x for x in a)] = -f_values[a]
    dims = Counter()
    dims[0] += rs.rank
    for a in rs.positive_roots:
        dims[f_values[a]] += 1
        dims[-f_values[a]] += 1
    nP = 1
    for family, rank, offset in rs.components:
        theta = rootsys.highest_long_root(rs, offset)
        nP = max(nP, _f(theta, levi_set) // 2 + 1)
    return GradedParabolic(rs, levi_set, f_values, dict(sorted(dims.items())), nP)


def n_of_P(gp: GradedParabolic) -> int:
    """Half the grading of the highest root plus one, maximized over factors; 1 when I = S."""
    return gp.nP


def is_distinguished(gp: GradedParabolic) -> bool:
    for family, rank, offset in gp.rs.components:
        dims = _component_dims(gp.rs, gp.levi_set, offset, rank)
        if dims[0] != dims[2]:
            return False
    return True


def enumerate_distinguished(rs: RootSystem) -> List[Tuple[int, ...]]:
    if rs.rank > 8:
        raise ValueError(f"Subset scan limited to rank 8, got {rs.label}")
    found = []
    for size in range(rs.rank + 1):
        for levi in combinations(range(rs.rank), size):
            if is_distinguished(grade(rs, levi)):
                found.append(levi)
    logger.info(f"{rs.label}: {len(found)} distinguished parabolics")
    return found


def order_exponent(p: int, nP: int) -> int:
    check_prime(p)
    if nP < 1:
        raise ValueError(f"n(P) must be positive, got {nP}")
    m, power = 1, p
    while power < nP:
        m += 1
        power *= p
    return m


def lcs_class(gp: GradedParabolic) -> int:
    """Least e such that no root has f >= 2(e+1)."""
    top = max((v for v in gp.f_values.values()), default=0)
    return top // 2


def blocks_to_levi(n: int, blocks: Sequence[int]) -> Tuple[int, ...]:
    """Levi set of A_{n-1} for a gl_n block composition."""
    if any(b < 1 for b in blocks) or sum(blocks) != n:
        raise ValueError(f"{tuple(blocks)} is not a composition of {n}")
    levi = []
    start = 0
    for b in blocks:
        levi.extend(range(start, start + b - 1))
        start += b
    return tuple(levi)


def p0_from_first_principles(rs: RootSystem) -> int:
    index, _ = rootsys.minimal_fundamental_weight(rs)
    bound = rootsys.weight_phi_pairing(rs, rootsys.fundamental_weight(rs, index))
    return int(nextprime(bound))


@dataclass(frozen=True)
class ExponentialThreshold:
    label: str
    family: str
    rank: int
    generic_bound: int
    p0: Optional[int]
    condition: str

    def admits(self, p: int) -> bool:
        """Whether p satisfies one of the three sufficient conditions."""
        check_prime(p)
        if p > self.generic_bound:
            return True
        if self.family == "A":
            return (self.rank + 1) % p != 0
        if self.family in ("B", "C", "D"):
            return p != 2
        return self.p0 is not None and p >= self.p0

    def to_dict(self) -> Dict:
        return {
            "type": self.label,
            "generic_bound": self.generic_bound,
            "p0": self.p0,
            "condition": self.condition,
        }


def exponential_type_threshold(rs: RootSystem) -> ExponentialThreshold:
    if not rs.is_indecomposable:
        raise ValueError(f"{rs.label} is not quasisimple")
    family, rank, _ = rs.components[0]
    h = rootsys.coxeter_number(rs)
    generic = 2 * h - 2
    if family == "A":
        return ExponentialThreshold(rs.label, family, rank, generic, None, f"r != -1 (mod p), r = {rank}")
    if family in ("B", "C", "D"):
        return ExponentialThreshold(rs.label, family, rank, generic, None, "p != 2")
    tabulated = P0_TABLE[rs.label]
    derived = p0_from_first_principles(rs)
    if tabulated != derived:
        raise InternalConsistencyError(f"{rs.label}: tabulated p0={tabulated}, derived p0={derived}")
    return ExponentialThreshold(rs.label, family, rank, generic, tabulated, f"p >= {tabulated}")
