#!/usr/bin/env python3
import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy

from unipotent.services.exact import check_prime, vp

logger = logging.getLogger(__name__)

Partition = Tuple[int, ...]


@lru_cache(maxsize=None)
def _prime(p: int) -> int:
    return check_prime(p)


class FpMatrix:
    """Dense square-or-rectangular matrix over F_p, entries kept in [0, p)."""

    __slots__ = ("p", "data")

    def __init__(self, data, p: int):
        self.p = _prime(p)
        self.data = np.asarray(data, dtype=np.int64) % self.p

    @classmethod
    def zeros(cls, n: int, p: int, m: int = None) -> "FpMatrix":
        return cls(np.zeros((n, n if m is None else m), dtype=np.int64), p)

    @classmethod
    def identity(cls, n: int, p: int) -> "FpMatrix":
        return cls(np.eye(n, dtype=np.int64), p)

    @classmethod
    def unit(cls, n: int, i: int, j: int, p: int) -> "FpMatrix":
        data = np.zeros((n, n), dtype=np.int64)
        data[i, j] = 1
        return cls(data, p)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape

    @property
    def n(self) -> int:
        return self.data.shape[0]

    def _check(self, other: "FpMatrix"):
        if not isinstance(other, FpMatrix) or other.p != self.p:
            raise ValueError("Matrices over different prime fields")

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        return FpMatrix(self.data @ other.data, self.p)

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        return FpMatrix(self.data + other.data, self.p)

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        return FpMatrix(self.data - other.data, self.p)

    def __neg__(self) -> "FpMatrix":
        return FpMatrix(-self.data, self.p)

    def scale(self, c: Union[int, Fraction]) -> "FpMatrix":
        c = Fraction(c)
        factor = c.numerator * pow(c.denominator, -1, self.p) % self.p
        return FpMatrix(self.data * factor, self.p)

    def power(self, k: int) -> "FpMatrix":
        result = FpMatrix.identity(self.n, self.p)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def transpose(self) -> "FpMatrix":
        return FpMatrix(self.data.T, self.p)

    def is_zero(self) -> bool:
        return not self.data.any()

    def rank(self) -> int:
        return rank_fp(self)

    def commutator(self, other: "FpMatrix") -> "FpMatrix":
        return self @ other - other @ self

    def tolist(self) -> List[List[int]]:
        return self.data.tolist()

    def key(self) -> bytes:
        return self.data.tobytes()

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.data.shape == other.data.shape and np.array_equal(self.data, other.data)

    def __hash__(self) -> int:
        return hash((self.p, self.data.shape, self.key()))

    def __repr__(self) -> str:
        return f"FpMatrix(p={self.p}, {self.tolist()})"


class QMatrix:
    """Dense matrix with exact rational entries."""

    __slots__ = ("data",)

    def __init__(self, data):
        arr = np.array(data, dtype=object)
        self.data = np.vectorize(Fraction, otypes=[object])(arr) if arr.size else arr

    @classmethod
    def zeros(cls, n: int, m: int = None) -> "QMatrix":
        return cls([[0] * (n if m is None else m) for _ in range(n)])

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> "QMatrix":
        data = [[0] * n for _ in range(n)]
        data[i][j] = 1
        return cls(data)

    @classmethod
    def from_fp(cls, X: FpMatrix) -> "QMatrix":
        return cls(X.data.tolist())

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape

    @property
    def n(self) -> int:
        return self.data.shape[0]

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        return QMatrix(self.data.dot(other.data))

    def __add__(self, other: "QMatrix") -> "QMatrix":
        return QMatrix(self.data + other.data)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return QMatrix(self.data - other.data)

    def __neg__(self) -> "QMatrix":
        return QMatrix(-self.data)

    def scale(self, c: Union[int, Fraction]) -> "QMatrix":
        return QMatrix(self.data * Fraction(c))

    def power(self, k: int) -> "QMatrix":
        result = QMatrix.identity(self.n)
        for _ in range(k):
            result = result @ self
        return result

    def transpose(self) -> "QMatrix":
        return QMatrix(self.data.T)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.data.flat)

    def rank(self) -> int:
        return int(sympy.Matrix(self.to_sympy()).rank())

    def commutator(self, other: "QMatrix") -> "QMatrix":
        return self @ other - other @ self

    def to_sympy(self) -> sympy.Matrix:
        return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in self.data])

    def min_valuation(self, p: int):
        return min((vp(x, p) for x in self.data.flat), default=float("inf"))

    def is_p_integral(self, p: int) -> bool:
        return self.min_valuation(p) >= 0

    def denominators(self) -> List[int]:
        return sorted({x.denominator for x in self.data.flat})

    def to_fp(self, p: int) -> FpMatrix:
        if not self.is_p_integral(p):
            raise ValueError(f"Matrix is not {p}-integral")
        return FpMatrix([[x.numerator * pow(x.denominator, -1, p) for x in row] for row in self.data], p)

    def tolist(self) -> List[List[Fraction]]:
        return self.data.tolist()

    def __eq__(self, other) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.data.shape == other.data.shape and all(
            a == b for a, b in zip(self.data.flat, other.data.flat)
        )

    def __repr__(self) -> str:
        return f"QMatrix({[[str(x) for x in row] for row in self.data]})"


Matrix = Union[FpMatrix, QMatrix]


def _identity_like(X: Matrix) -> Matrix:
    return FpMatrix.identity(X.n, X.p) if isinstance(X, FpMatrix) else QMatrix.identity(X.n)


#Gaussian elimination over F_p

def _row_reduce(A: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form mod p and pivot columns."""
    A = A.copy() % p
    m, n = A.shape
    pivots = []
    r = 0
    for c in range(n):
        pivot = None
        for i in range(r, m):
            if A[i, c] % p != 0:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != r:
            A[[r, pivot], :] = A[[pivot, r], :]
        inv = pow(int(A[r, c]), -1, p)
        A[r, :] = (A[r, :] * inv) % p
        for i in range(m):
            if i != r and A[i, c] % p != 0:
                A[i, :] = (A[i, :] - A[i, c] * A[r, :]) % p
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A, pivots


def rank_fp(A: FpMatrix) -> int:
    if A.data.size == 0:
        return 0
    _, pivots = _row_reduce(A.data, A.p)
    return len(pivots)


def nullspace_fp(A: FpMatrix) -> List[np.ndarray]:
    """Basis of {v : A v = 0} as integer vectors mod p."""
    m, n = A.shape
    R, pivots = _row_reduce(A.data, A.p)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for row, c in enumerate(pivots):
            v[c] = (-R[row, f]) % A.p
        basis.append(v)
    return basis


def inverse_fp(A: FpMatrix) -> FpMatrix:
    n = A.n
    aug = np.concatenate([A.data, np.eye(n, dtype=np.int64)], axis=1)
    R, pivots = _row_reduce(aug, A.p)
    if pivots[:n] != list(range(n)):
        raise ValueError("Matrix is singular over F_p")
    return FpMatrix(R[:, n:], A.p)


def random_fp(n: int, p: int, rng: np.random.Generator) -> FpMatrix:
    return FpMatrix(rng.integers(0, p, size=(n, n)), p)


def random_invertible(n: int, p: int, rng: np.random.Generator) -> FpMatrix:
    while True:
        g = random_fp(n, p, rng)
        if rank_fp(g) == n:
            return g


def random_strict_upper(n: int, p: int, rng: np.random.Generator) -> FpMatrix:
    return FpMatrix(np.triu(rng.integers(0, p, size=(n, n)), k=1), p)


def is_strictly_upper(X: Matrix) -> bool:
    n = X.n
    return all(X.data[i, j] == 0 for i in range(n) for j in range(i + 1))


#Nilpotence data

def nilpotence_degree(X: Matrix) -> int:
    """Least e >= 1 with X^e = 0."""
    power = X
    for e in range(1, X.n + 1):
        if power.is_zero():
            return e
        power = power @ X
    raise ValueError("Matrix is not nilpotent")


def p_nilpotence_degree(X: FpMatrix, p: int = None) -> int:
    """Least m >= 0 with X^(p^m) = 0; the [p]-map on matrices is the p-th power."""
    p = X.p if p is None else p
    nilpotence_degree(X)
    m, power = 0, X
    while not power.is_zero():
        power = power.power(p)
        m += 1
    return m


def rank_profile(X: Matrix) -> Tuple[int, ...]:
    """(rank X, rank X^2, ...) down to the first zero power."""
    ranks = []
    power = X
    for _ in range(X.n):
        r = power.rank()
        ranks.append(r)
        if r == 0:
            break
        power = power @ X
    return tuple(ranks)


def jordan_type(X: Matrix) -> Partition:
    nilpotence_degree(X)
    ranks = [X.n] + list(rank_profile(X))
    ranks += [0] * 2
    at_least = [ranks[i - 1] - ranks[i] for i in range(1, len(ranks))]
    blocks = []
    for size in range(1, len(at_least) + 1):
        exact = at_least[size - 1] - (at_least[size] if size < len(at_least) else 0)
        blocks.extend([size] * exact)
    return tuple(sorted(blocks, reverse=True))


def dual_partition(partition: Sequence[int]) -> Partition:
    if not partition:
        return ()
    return tuple(sum(1 for part in partition if part >= i) for i in range(1, max(partition) + 1))


def jordan_block(size: int, p: Optional[int] = None, scale: int = 1) -> Matrix:
    rows = [[scale if j == i + 1 else 0 for j in range(size)] for i in range(size)]
    return FpMatrix(rows, p) if p is not None else QMatrix(rows)


def block_diagonal(blocks: Sequence[Matrix]) -> Matrix:
    n = sum(b.n for b in blocks)
    if isinstance(blocks[0], FpMatrix):
        data = np.zeros((n, n), dtype=np.int64)
    else:
        data = np.empty((n, n), dtype=object)
        data.fill(Fraction(0))
    offset = 0
    for b in blocks:
        data[offset:offset + b.n, offset:offset + b.n] = b.data
        offset += b.n
    return FpMatrix(data, blocks[0].p) if isinstance(blocks[0], FpMatrix) else QMatrix(data)


def multiplicative_order_p(u: FpMatrix) -> int:
    """Order of a unipotent matrix over F_p, found by repeated p-th powers."""
    one = FpMatrix.identity(u.n, u.p)
    order, current = 1, u
    for _ in range(u.n + 1):
        if current == one:
            return order
        current = current.power(u.p)
        order *= u.p
    raise ValueError("Matrix is not unipotent")


#Exponential and logarithm of nilpotent / unipotent matrices

def nilpotent_exp(X: Matrix) -> Matrix:
    """sum X^i / i! over the nonzero powers."""
    degree = nilpotence_degree(X)
    result = _identity_like(X)
    power = _identity_like(X)
    for i in range(1, degree):
        power = power @ X
        result = result + power.scale(Fraction(1, math.factorial(i)))
    return result


def unipotent_log(u: Matrix) -> Matrix:
    N = u - _identity_like(u)
    degree = nilpotence_degree(N)
    result = N.scale(0)
    power = _identity_like(u)
    for k in range(1, degree):
        power = power @ N
        result = result + power.scale(Fraction((-1) ** (k + 1), k))
    return result


def jacobson_defect(X_list: Sequence[FpMatrix], p: int = None) -> Tuple[FpMatrix, bool]:
    """(sum X)^p - sum X^p and whether it lies in C^p of the strict upper triangulars."""
    if not X_list:
        raise ValueError("Need at least one matrix")
    p = X_list[0].p if p is None else p
    for X in X_list:
        if X.p != p or not is_strictly_upper(X):
            raise ValueError("Jacobson defect is tested inside strict upper triangular matrices")
    total = X_list[0]
    for X in X_list[1:]:
        total = total + X
    defect = total.power(p)
    for X in X_list:
        defect = defect - X.power(p)
    #C^p L: support on superdiagonals >= p
    n = defect.n
    member = all(defect.data[i, j] == 0 for i in range(n) for j in range(i + 1, min(n, i + p)))
    return defect, member


def bch(X: QMatrix, Y: QMatrix) -> QMatrix:
    """log(exp X exp Y) over the rationals."""
    product = nilpotent_exp(X) @ nilpotent_exp(Y)
    try:
        return unipotent_log(product)
    except ValueError as e:
        raise ValueError(f"BCH needs a unipotent product: {e}") from e


def bch_denominator_primes(Z: QMatrix) -> List[int]:
    primes = set()
    for d in Z.denominators():
        primes.update(sympy.primefactors(d))
    return sorted(primes)


def commute(X: Matrix, Y: Matrix) -> bool:
    return X.commutator(Y).is_zero()


def simultaneous_strict_triangularize(X_list: Sequence[FpMatrix]) -> FpMatrix:
    """g with g X g^-1 strictly upper triangular for every X, from a flag of joint kernels."""
    if not X_list:
        raise ValueError("Need at least one matrix")
    for i, X in enumerate(X_list):
        nilpotence_degree(X)
        for Y in X_list[i + 1:]:
            if not commute(X, Y):
                raise ValueError("Matrices do not commute")
    n, p = X_list[0].n, X_list[0].p
    chosen: List[np.ndarray] = []
    while len(chosen) < n:
        if chosen:
            B = FpMatrix(np.stack(chosen, axis=1), p)
            annihilator = nullspace_fp(B.transpose())
            Q = np.stack(annihilator, axis=0)
        else:
            Q = np.eye(n, dtype=np.int64)
        stacked = FpMatrix(np.concatenate([Q @ X.data for X in X_list], axis=0), p)
        grew = False
        for v in nullspace_fp(stacked):
            candidate = chosen + [v]
            if rank_fp(FpMatrix(np.stack(candidate, axis=1), p)) == len(candidate):
                chosen = candidate
                grew = True
        if not grew:
            raise ValueError("No common flag found; matrices are not simultaneously nilpotent")
    P = FpMatrix(np.stack(chosen, axis=1), p)
    return inverse_fp(P)


def conjugate(g: FpMatrix, X: FpMatrix) -> FpMatrix:
    return g @ X @ inverse_fp(g)
