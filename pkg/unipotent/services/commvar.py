#!/usr/bin/env python3
import logging
import time
from dataclasses import dataclass
from itertools import product
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from unipotent.config import settings
from unipotent.errors import CensusTooLargeError
from unipotent.services.exact import check_prime
from unipotent.services.matlie import FpMatrix, inverse_fp

logger = logging.getLogger(__name__)

CommutingTuple = Tuple[FpMatrix, ...]


@dataclass
class Ambient:
    """F_p-span of integer basis matrices."""

    descriptor: str
    n: int
    p: int
    basis: List[np.ndarray]
    #n(P) of the parabolic whose nilradical this is (None for gl)
    nP: Optional[int] = None

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return self.p ** self.dimension

    def points(self) -> np.ndarray:
        """All elements as an array of shape (p^dim, n, n)."""
        if not self.basis:
            return np.zeros((1, self.n, self.n), dtype=np.int64)
        coeffs = np.array(list(product(range(self.p), repeat=self.dimension)), dtype=np.int64)
        stacked = np.stack(self.basis).astype(np.int64)
        return np.einsum("kb,bij->kij", coeffs, stacked) % self.p


def _units(n: int, pairs) -> List[np.ndarray]:
    out = []
    for i, j in pairs:
        E = np.zeros((n, n), dtype=np.int64)
        E[i, j] = 1
        out.append(E)
    return out


def parse_ambient(descriptor: str, p: int) -> Ambient:
    """strict-upper:n | gl:n | blocks:b1,b2,..."""
    check_prime(p)
    kind, _, arg = descriptor.partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "strict-upper":
            n = int(arg)
            ambient = Ambient(descriptor, n, p, _units(n, [(i, j) for i in range(n) for j in range(i + 1, n)]), n)
        elif kind == "gl":
            n = int(arg)
            ambient = Ambient(descriptor, n, p, _units(n, [(i, j) for i in range(n) for j in range(n)]))
        elif kind == "blocks":
            from unipotent.services.chevalley import blocks_nilradical

            blocks = [int(b) for b in arg.split(",")]
            nm = blocks_nilradical(sum(blocks), blocks)
            ambient = Ambient(descriptor, nm.n, p, nm.basis(), nm.nP)
        else:
            raise ValueError(f"Unknown ambient kind {kind!r}")
    except ValueError as e:
        raise ValueError(f"Bad ambient descriptor {descriptor!r}: {e}") from e
    if ambient.n < 1 or ambient.n > settings.MAX_CENSUS_DIMENSION:
        raise ValueError(f"Ambient matrix size must lie in 1..{settings.MAX_CENSUS_DIMENSION}, got {ambient.n}")
    return ambient


def is_p_nilpotent(X: FpMatrix) -> bool:
    return X.power(X.p).is_zero()


def is_member(tuple_: Sequence[FpMatrix]) -> bool:
    """Pairwise commuting and each p-th power zero."""
    if not tuple_:
        return True
    p, n = tuple_[0].p, tuple_[0].n
    if any(X.p != p or X.n != n for X in tuple_):
        raise ValueError("Tuple entries must share size and prime")
    if not all(is_p_nilpotent(X) for X in tuple_):
        return False
    for i, X in enumerate(tuple_):
        for Y in tuple_[i + 1:]:
            if not X.commutator(Y).is_zero():
                return False
    return True


def _p_nilpotent_points(ambient: Ambient) -> np.ndarray:
    points = ambient.points()
    power = points.copy()
    for _ in range(ambient.p - 1):
        power = np.einsum("kij,kjl->kil", power, points) % ambient.p
    keep = ~power.reshape(len(points), -1).any(axis=1)
    return points[keep]


def _commute_matrix(members: np.ndarray, p: int) -> np.ndarray:
    count = len(members)
    C = np.zeros((count, count), dtype=np.int64)
    chunk = max(1, settings.CENSUS_CHUNK // max(1, count))
    for start in range(0, count, chunk):
        block = members[start:start + chunk]
        left = np.einsum("aij,bjk->abik", block, members) % p
        right = np.einsum("bij,ajk->abik", members, block) % p
        C[start:start + chunk] = ~((left - right) % p).reshape(len(block), count, -1).any(axis=2)
    return C


@dataclass
class CensusResult:
    descriptor: str
    p: int
    d: int
    count: int
    p_nilpotent: int
    points: int
    wall_time_s: float

    def to_dict(self) -> Dict:
        return {
            "ambient": self.descriptor,
            "p": self.p,
            "d": self.d,
            "count": self.count,
            "p_nilpotent": self.p_nilpotent,
            "points": self.points,
            "wall_time_s": round(self.wall_time_s, 6),
        }


def census(d: int, ambient: Ambient, bound: int = None) -> CensusResult:
    """Exact number of commuting d-tuples of p-nilpotent elements of the ambient."""
    bound = settings.CENSUS_POINT_LIMIT if bound is None else bound
    if d < 1 or d > settings.MAX_CENSUS_D:
        raise ValueError(f"d must lie in 1..{settings.MAX_CENSUS_D}, got {d}")
    points = ambient.size ** d
    if points > bound:
        raise CensusTooLargeError(f"{ambient.descriptor} over F_{ambient.p} with d={d} has {points} points > {bound}")
    started = time.perf_counter()
    members = _p_nilpotent_points(ambient)
    if d == 1:
        count = len(members)
    else:
        C = _commute_matrix(members, ambient.p)
        if d == 2:
            count = int(C.sum())
        else:
            count = int(((C @ C) * C).sum())
    elapsed = time.perf_counter() - started
    logger.info(f"Census {ambient.descriptor} p={ambient.p} d={d}: {count} tuples in {elapsed:.3f}s")
    return CensusResult(ambient.descriptor, ambient.p, d, count, len(members), points, elapsed)


def member_tuples(ambient: Ambient, d: int) -> List[CommutingTuple]:
    members = [FpMatrix(M, ambient.p) for M in _p_nilpotent_points(ambient)]
    if d == 1:
        return [(X,) for X in members]
    C = _commute_matrix(np.stack([X.data for X in members]), ambient.p)
    out = []
    for idx in product(range(len(members)), repeat=d):
        if all(C[idx[i], idx[j]] for i in range(d) for j in range(i + 1, d)):
            out.append(tuple(members[i] for i in idx))
    return out


def random_point(ambient: Ambient, rng: np.random.Generator) -> FpMatrix:
    if not ambient.basis:
        return FpMatrix.zeros(ambient.n, ambient.p)
    coeffs = rng.integers(0, ambient.p, size=ambient.dimension)
    return FpMatrix(np.einsum("b,bij->ij", coeffs, np.stack(ambient.basis).astype(np.int64)), ambient.p)


def random_member_tuple(ambient: Ambient, d: int, rng: np.random.Generator, attempts: int = 10000) -> CommutingTuple:
    """Rejection sample of a commuting p-nilpotent d-tuple of ambient points."""
    for _ in range(attempts):
        tuple_ = tuple(random_point(ambient, rng) for _ in range(d))
        if is_member(tuple_):
            return tuple_
    raise ValueError(f"No member {d}-tuple of {ambient.descriptor} in {attempts} draws")


def tuple_rank(tuple_: Sequence[FpMatrix]) -> int:
    """Dimension of the F_p-span of the tuple."""
    return FpMatrix(np.stack([X.data.ravel() for X in tuple_]), tuple_[0].p).rank()


def conjugate_tuple(g: FpMatrix, tuple_: Sequence[FpMatrix]) -> CommutingTuple:
    g_inv = inverse_fp(g)
    return tuple(g @ X @ g_inv for X in tuple_)


def general_linear_group(n: int, p: int) -> List[FpMatrix]:
    out = []
    for entries in product(range(p), repeat=n * n):
        g = FpMatrix(np.array(entries).reshape(n, n), p)
        if g.rank() == n:
            out.append(g)
    return out


def triangular_conjugates_count(d: int, n: int, p: int) -> int:
    """Distinct GL_n(F_p)-conjugates of member tuples of strict upper triangular matrices."""
    ambient = parse_ambient(f"strict-upper:{n}", p)
    seen = set()
    group = general_linear_group(n, p)
    for tuple_ in member_tuples(ambient, d):
        for g in group:
            seen.add(tuple(X.key() for X in conjugate_tuple(g, tuple_)))
    return len(seen)


#One-parameter subgroups t -> prod_i exp(t^(p^i) X_i)


class PolyMatrixMap:
    """Square matrix of polynomials in t over F_p, stored by coefficient matrices."""

    def __init__(self, coeffs: Sequence[FpMatrix]):
        coeffs = list(coeffs)
        while len(coeffs) > 1 and coeffs[-1].is_zero():
            coeffs.pop()
        self.coeffs = coeffs
        self.p = coeffs[0].p
        self.n = coeffs[0].n

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, k: int) -> FpMatrix:
        if k < len(self.coeffs):
            return self.coeffs[k]
        return FpMatrix.zeros(self.n, self.p)

    def evaluate(self, t: int) -> FpMatrix:
        result = FpMatrix.zeros(self.n, self.p)
        for C in reversed(self.coeffs):
            result = result.scale(t) + C
        return result

    def __matmul__(self, other: "PolyMatrixMap") -> "PolyMatrixMap":
        out = [FpMatrix.zeros(self.n, self.p) for _ in range(self.degree + other.degree + 1)]
        for i, A in enumerate(self.coeffs):
            if A.is_zero():
                continue
            for j, B in enumerate(other.coeffs):
                if not B.is_zero():
                    out[i + j] = out[i + j] + A @ B
        return PolyMatrixMap(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrixMap):
            return NotImplemented
        return self.degree == other.degree and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def key(self) -> Tuple[bytes, ...]:
        return tuple(C.key() for C in self.coeffs)

    def is_homomorphism(self) -> bool:
        """binom(j+l, j) C_(j+l) == C_j C_l for all j, l: M(t+s) = M(t)M(s)."""
        top = self.degree
        if self.coeffs[0] != FpMatrix.identity(self.n, self.p):
            return False
        for j in range(top + 1):
            for l in range(top + 1):
                lhs = self.coefficient(j + l).scale(comb(j + l, j) % self.p)
                if lhs != self.coeffs[j] @ self.coeffs[l]:
                    return False
        return True


def _exp_in_power(X: FpMatrix, step: int) -> PolyMatrixMap:
    """exp(t^step X) for X^p = 0."""
    p = X.p
    coeffs = [FpMatrix.zeros(X.n, p) for _ in range(step * (p - 1) + 1)]
    power = FpMatrix.identity(X.n, p)
    factorial = 1
    for k in range(p):
        if k:
            power = power @ X
            factorial *= k
        coeffs[k * step] = power.scale(pow(factorial, -1, p))
    return PolyMatrixMap(coeffs)


def one_psg(tuple_: Sequence[FpMatrix], d: int = None) -> PolyMatrixMap:
    d = len(tuple_) if d is None else d
    if d != len(tuple_):
        raise ValueError(f"Expected a {d}-tuple, got {len(tuple_)} matrices")
    if not is_member(tuple_):
        raise ValueError("one_psg needs commuting p-nilpotent matrices")
    p = tuple_[0].p
    result = PolyMatrixMap([FpMatrix.identity(tuple_[0].n, p)])
    for i, X in enumerate(tuple_):
        result = result @ _exp_in_power(X, p ** i)
    return result


def recover_tuple(psg: PolyMatrixMap, d: int) -> CommutingTuple:
    """Invert one_psg: X_0 is the degree-one coefficient; strip exp(t X_0) and pass to t^p."""
    p = psg.p
    recovered = []
    current = psg
    for _ in range(d):
        X = current.coefficient(1)
        recovered.append(X)
        current = _exp_in_power(-X, 1) @ current
        if any(not current.coefficient(k).is_zero() for k in range(current.degree + 1) if k % p):
            raise ValueError("Map is not a product of the expected one-parameter subgroups")
        current = PolyMatrixMap([current.coefficient(k) for k in range(0, current.degree + 1, p)])
    return tuple(recovered)


def injectivity_check(tuple_a: Sequence[FpMatrix], tuple_b: Sequence[FpMatrix], nP: int = None) -> bool:
    """(a == b) iff one_psg(a) == one_psg(b), with each tuple recovered from its map."""
    p = tuple_a[0].p
    if nP is not None and nP >= p:
        raise ValueError(f"Injectivity needs n(P) < p, got n(P)={nP}, p={p}")
    d = len(tuple_a)
    map_a, map_b = one_psg(tuple_a, d), one_psg(tuple_b, d)
    if recover_tuple(map_a, d) != tuple(tuple_a) or recover_tuple(map_b, d) != tuple(tuple_b):
        return False
    same_tuple = all(x == y for x, y in zip(tuple_a, tuple_b))
    return same_tuple == (map_a == map_b)


@dataclass
class InjectivityReport:
    members: int
    distinct_maps: int
    recovered: int

    @property
    def injective(self) -> bool:
        return self.members == self.distinct_maps == self.recovered


def injectivity_exhaustive(ambient: Ambient, d: int) -> InjectivityReport:
    """Every member tuple has its own map, and the map gives the tuple back."""
    if ambient.nP is not None and ambient.nP >= ambient.p:
        raise ValueError(f"Injectivity needs n(P) < p for {ambient.descriptor}")
    tuples = member_tuples(ambient, d)
    maps = set()
    recovered = 0
    for t in tuples:
        psg = one_psg(t, d)
        maps.add(psg.key())
        if recover_tuple(psg, d) == t:
            recovered += 1
    return InjectivityReport(len(tuples), len(maps), recovered)
