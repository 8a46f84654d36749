#!/usr/bin/env python3
import logging
from collections import deque
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix

from unipotent.errors import InternalConsistencyError
from unipotent.services.exact import check_prime

logger = logging.getLogger(__name__)

Root = Tuple[int, ...]

FAMILIES = ("A", "B", "C", "D", "E", "F", "G")

#Bad primes per family, Bourbaki tables
BAD_PRIMES = {
    "A": (),
    "B": (2,),
    "C": (2,),
    "D": (2,),
    "E6": (2, 3),
    "E7": (2, 3),
    "E8": (2, 3, 5),
    "F": (2, 3),
    "G": (2, 3),
}


def validate_family_rank(family: str, rank: int):
    family = family.upper()
    ok = {
        "A": rank >= 1,
        "B": rank >= 2,
        "C": rank >= 2,
        "D": rank >= 4,
        "E": rank in (6, 7, 8),
        "F": rank == 4,
        "G": rank == 2,
    }.get(family, False)
    if not ok:
        raise ValueError(f"Invalid root system {family}{rank}")
    return family


def parse_type_label(label: str) -> Tuple[str, int]:
    """'E8' -> ('E', 8)."""
    label = label.strip().upper()
    if len(label) < 2 or not label[1:].isdigit():
        raise ValueError(f"Cannot parse root system label {label!r}")
    family, rank = label[0], int(label[1:])
    return validate_family_rank(family, rank), rank


def cartan_matrix(family: str, rank: int) -> np.ndarray:
    """cartan[i][j] = <alpha_i^vee, alpha_j>, Bourbaki numbering (0-based)."""
    family = validate_family_rank(family, rank)
    c = np.eye(rank, dtype=np.int64) * 2

    def link(i, j, cij=-1, cji=-1):
        c[i, j] = cij
        c[j, i] = cji

    if family in ("A", "B", "C"):
        for i in range(rank - 1):
            link(i, i + 1)
        if family == "B":
            c[rank - 1, rank - 2] = -2
        elif family == "C":
            c[rank - 2, rank - 1] = -2
    elif family == "D":
        for i in range(rank - 2):
            link(i, i + 1)
        link(rank - 3, rank - 1)
    elif family == "E":
        link(0, 2)
        link(1, 3)
        for i in range(2, rank - 1):
            link(i, i + 1)
    elif family == "F":
        link(0, 1)
        link(1, 2, -1, -2)
        link(2, 3)
    elif family == "G":
        link(0, 1, -3, -1)
    return c


class RootSystem:
    """Positive roots as coefficient vectors over the simple roots."""

    def __init__(self, label: str, cartan: np.ndarray, components: List[Tuple[str, int, int]]):
        self.label = label
        self.cartan = np.array(cartan, dtype=np.int64)
        self.rank = int(self.cartan.shape[0])
        #(family, rank, offset) per indecomposable factor
        self.components = list(components)
        self.simple_roots = tuple(range(self.rank))

        self.simple_lengths = self._simple_lengths()
        self.positive_roots: List[Root] = self._enumerate_positive_roots()
        self.norms: Dict[Root, Fraction] = {a: self._norm(a) for a in self.positive_roots}
        self.coroot_coeffs: Dict[Root, Root] = {a: self._coroot(a) for a in self.positive_roots}
        self.length_class: Dict[Root, str] = self._length_classes()
        logger.debug(f"Built root system {label} with {len(self.positive_roots)} positive roots")

    @property
    def family(self) -> str:
        if len(self.components) != 1:
            return "x".join(f"{f}{r}" for f, r, _ in self.components)
        return self.components[0][0]

    @property
    def is_indecomposable(self) -> bool:
        return len(self.components) == 1

    def _simple_lengths(self) -> List[Fraction]:
        lengths: List[Optional[Fraction]] = [None] * self.rank
        for start in range(self.rank):
            if lengths[start] is not None:
                continue
            lengths[start] = Fraction(1)
            seen = [start]
            queue = deque([start])
            while queue:
                i = queue.popleft()
                for j in range(self.rank):
                    if j != i and self.cartan[i, j] != 0 and lengths[j] is None:
                        lengths[j] = lengths[i] * int(self.cartan[i, j]) / int(self.cartan[j, i])
                        seen.append(j)
                        queue.append(j)
            #shortest simple root of each component has squared length 1
            shortest = min(lengths[k] for k in seen)
            for k in seen:
                lengths[k] = lengths[k] / shortest
        return lengths

    def _enumerate_positive_roots(self) -> List[Root]:
        simple = [tuple(1 if k == i else 0 for k in range(self.rank)) for i in range(self.rank)]
        found = set(simple)
        queue = deque(simple)
        while queue:
            beta = queue.popleft()
            for i in range(self.rank):
                pairing = sum(beta[j] * int(self.cartan[i, j]) for j in range(self.rank))
                image = list(beta)
                image[i] -= pairing
                image = tuple(image)
                if any(x < 0 for x in image) or not any(image):
                    continue
                if image not in found:
                    found.add(image)
                    queue.append(image)
        return sorted(found, key=lambda a: (sum(a), tuple(-x for x in a)))

    def _norm(self, root: Sequence[int]) -> Fraction:
        total = Fraction(0)
        for i in range(self.rank):
            if not root[i]:
                continue
            for j in range(self.rank):
                if root[j]:
                    total += root[i] * root[j] * self.simple_lengths[i] * int(self.cartan[i, j]) / 2
        return total

    def _coroot(self, root: Root) -> Root:
        norm = self.norms[root]
        coeffs = []
        for i in range(self.rank):
            value = root[i] * self.simple_lengths[i] / norm
            if value.denominator != 1:
                raise InternalConsistencyError(f"Non-integral coroot coefficient for {root} in {self.label}")
            coeffs.append(int(value))
        return tuple(coeffs)

    def _length_classes(self) -> Dict[Root, str]:
        classes = {}
        for f, r, offset in self.components:
            comp_roots = [a for a in self.positive_roots if self.component_index(a) == offset]
            longest = max(self.norms[a] for a in comp_roots)
            for a in comp_roots:
                classes[a] = "long" if self.norms[a] == longest else "short"
        return classes

    def component_index(self, root: Sequence[int]) -> int:
        """Offset of the component carrying the root's support."""
        support = [i for i, x in enumerate(root) if x]
        for f, r, offset in self.components:
            if offset <= support[0] < offset + r:
                return offset
        raise ValueError(f"Root {root} has no component")

    def component_roots(self, offset: int) -> List[Root]:
        return [a for a in self.positive_roots if self.component_index(a) == offset]

    def height(self, root: Sequence[int]) -> int:
        return int(sum(root))

    def reflect(self, i: int, beta: Sequence[int]) -> Root:
        return weyl_reflection(self, i, beta)

    def to_dict(self) -> Dict:
        return {
            "label": self.label,
            "rank": self.rank,
            "cartan": self.cartan.tolist(),
            "positive_roots": [list(a) for a in self.positive_roots],
            "coroots": [list(self.coroot_coeffs[a]) for a in self.positive_roots],
            "heights": [self.height(a) for a in self.positive_roots],
            "length_class": [self.length_class[a] for a in self.positive_roots],
        }

    def __repr__(self) -> str:
        return f"RootSystem({self.label})"


@lru_cache(maxsize=None)
def build_root_system(family: str, rank: int) -> RootSystem:
    family = validate_family_rank(family, rank)
    rs = RootSystem(f"{family}{rank}", cartan_matrix(family, rank), [(family, rank, 0)])
    logger.info(f"Root system {rs.label}: {len(rs.positive_roots)} positive roots")
    return rs


def product_root_system(components: Sequence[RootSystem]) -> RootSystem:
    if not components:
        raise ValueError("A product needs at least one factor")
    rank = sum(rs.rank for rs in components)
    cartan = np.zeros((rank, rank), dtype=np.int64)
    parts = []
    offset = 0
    for rs in components:
        cartan[offset:offset + rs.rank, offset:offset + rs.rank] = rs.cartan
        for f, r, inner in rs.components:
            parts.append((f, r, offset + inner))
        offset += rs.rank
    label = "x".join(rs.label for rs in components)
    return RootSystem(label, cartan, parts)


def weyl_reflection(rs: RootSystem, i: int, beta: Sequence[int]) -> Root:
    pairing = sum(beta[j] * int(rs.cartan[i, j]) for j in range(rs.rank))
    image = list(beta)
    image[i] -= pairing
    return tuple(image)


def root_norm(rs: RootSystem, root: Sequence[int]) -> Fraction:
    return rs._norm(root)


def coroot_coefficients(rs: RootSystem, root: Sequence[int]) -> Root:
    return rs.coroot_coeffs[tuple(root)]


def height(root: Sequence[int]) -> int:
    return int(sum(root))


def _require_indecomposable(rs: RootSystem):
    if not rs.is_indecomposable:
        raise ValueError(f"{rs.label} is not indecomposable")


def highest_long_root(rs: RootSystem, offset: int = None) -> Root:
    if offset is None:
        _require_indecomposable(rs)
        offset = 0
    roots = [a for a in rs.component_roots(offset) if rs.length_class[a] == "long"]
    top = max(height(a) for a in roots)
    candidates = [a for a in roots if height(a) == top]
    if len(candidates) != 1:
        raise InternalConsistencyError(f"{rs.label}: {len(candidates)} long roots of maximal height")
    return candidates[0]


def highest_short_root(rs: RootSystem, offset: int = None) -> Root:
    if offset is None:
        _require_indecomposable(rs)
        offset = 0
    roots = [a for a in rs.component_roots(offset) if rs.length_class[a] == "short"]
    if not roots:
        #simply laced: every root counts as long
        return highest_long_root(rs, offset)
    top = max(height(a) for a in roots)
    candidates = [a for a in roots if height(a) == top]
    if len(candidates) != 1:
        raise InternalConsistencyError(f"{rs.label}: {len(candidates)} short roots of maximal height")
    return candidates[0]


def coxeter_number(rs: RootSystem) -> int:
    _require_indecomposable(rs)
    return height(highest_long_root(rs)) + 1


def _bad_primes(family: str, rank: int) -> Tuple[int, ...]:
    key = f"E{rank}" if family == "E" else family
    return BAD_PRIMES[key]


def is_good_prime(rs: RootSystem, p: int) -> bool:
    """Good iff good for every factor; list form and coroot form must agree."""
    check_prime(p)
    verdict = True
    for family, rank, offset in rs.components:
        by_list = p not in _bad_primes(family, rank)
        beta = highest_short_root(rs, offset)
        by_coroot = all(a % p != 0 for a in coroot_coefficients(rs, beta) if a)
        if by_list != by_coroot:
            raise InternalConsistencyError(
                f"Good-prime disagreement for {family}{rank}, p={p}: list={by_list}, coroot={by_coroot}"
            )
        verdict = verdict and by_list
    return verdict


def fundamental_group_order(rs: RootSystem) -> int:
    return int(Matrix(rs.cartan.tolist()).det())


def root_to_weight(rs: RootSystem, root: Sequence[int]) -> Tuple[int, ...]:
    """Fundamental-weight coordinates: lambda_j = sum_i a_i * cartan[j][i]."""
    return tuple(int(sum(root[i] * int(rs.cartan[j, i]) for i in range(rs.rank))) for j in range(rs.rank))


def coroot_sum(rs: RootSystem) -> Tuple[int, ...]:
    total = [0] * rs.rank
    for a in rs.positive_roots:
        for i, c in enumerate(rs.coroot_coeffs[a]):
            total[i] += c
    return tuple(total)


def _check_dominant(rs: RootSystem, weight: Sequence[int]):
    if len(weight) != rs.rank:
        raise ValueError(f"Weight {tuple(weight)} has wrong length for {rs.label}")
    if any(x < 0 for x in weight):
        raise ValueError(f"Weight {tuple(weight)} is not dominant")


def weight_phi_pairing(rs: RootSystem, weight: Sequence[int]) -> int:
    _check_dominant(rs, weight)
    return int(sum(l * c for l, c in zip(weight, coroot_sum(rs))))


def weyl_dimension(rs: RootSystem, weight: Sequence[int]) -> int:
    _check_dominant(rs, weight)
    num = Fraction(1)
    for a in rs.positive_roots:
        k = rs.coroot_coeffs[a]
        num *= Fraction(sum((weight[i] + 1) * k[i] for i in range(rs.rank)), sum(k))
    if num.denominator != 1:
        raise InternalConsistencyError(f"Non-integral Weyl dimension for {tuple(weight)} in {rs.label}")
    return int(num)


def fundamental_weight(rs: RootSystem, i: int) -> Tuple[int, ...]:
    return tuple(1 if k == i else 0 for k in range(rs.rank))


def minimal_fundamental_weight(rs: RootSystem) -> Tuple[int, int]:
    """(index, dimension) of the smallest fundamental module; ties go to the lowest index."""
    _require_indecomposable(rs)
    dims = [(weyl_dimension(rs, fundamental_weight(rs, i)), i) for i in range(rs.rank)]
    dim, index = min(dims)
    return index, dim
