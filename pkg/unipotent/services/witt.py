#!/usr/bin/env python3
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, Iterator, List, Sequence, Tuple

from unipotent.config import settings
from unipotent.errors import IntegralityError
from unipotent.services.exact import (
    ExactPoly,
    check_prime,
    poly_min_valuation,
    polynomial_ring,
    to_fraction,
)

logger = logging.getLogger(__name__)

COEFFICIENT_RINGS = ("GF", "ZZ", "QQ")

#Compiled polynomial: list of (exponent tuple, Fraction coefficient)
Compiled = List[Tuple[Tuple[int, ...], Fraction]]


@dataclass(frozen=True)
class WittVector:
    p: int
    coords: Tuple
    ring: str = "GF"

    def __post_init__(self):
        check_prime(self.p)
        if self.ring not in COEFFICIENT_RINGS:
            raise ValueError(f"Unknown coefficient ring {self.ring!r}")
        if self.ring == "GF":
            object.__setattr__(self, "coords", tuple(int(c) % self.p for c in self.coords))
        elif self.ring == "ZZ":
            object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))
        else:
            object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))
        if not self.coords:
            raise ValueError("Witt vectors need length at least 1")

    @property
    def n(self) -> int:
        return len(self.coords)

    @classmethod
    def zero(cls, p: int, n: int, ring: str = "GF") -> "WittVector":
        return cls(p, (0,) * n, ring)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def to_dict(self) -> Dict:
        return {"p": self.p, "n": self.n, "ring": self.ring, "coords": [str(c) for c in self.coords]}


def _names(prefix: str, n: int) -> Tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(n))


def witt_polynomial(p: int, m: int) -> ExactPoly:
    """w_m = X_0^(p^m) + p X_1^(p^(m-1)) + ... + p^m X_m."""
    check_prime(p)
    if m < 0:
        raise ValueError(f"Witt polynomial index must be non-negative, got {m}")
    R, X = polynomial_ring(_names("X", m + 1))
    return sum((p ** i * X[i] ** (p ** (m - i)) for i in range(m + 1)), R.zero)


def _check_length(n: int):
    if n < 1 or n > settings.MAX_WITT_LENGTH:
        raise ValueError(f"Witt length must lie in 1..{settings.MAX_WITT_LENGTH}, got {n}")


def _witt_in(R, gens: Sequence, p: int, m: int) -> ExactPoly:
    return sum((p ** i * gens[i] ** (p ** (m - i)) for i in range(m + 1)), R.zero)


@lru_cache(maxsize=None)
def witt_sum_polynomials(p: int, n: int) -> Tuple[ExactPoly, ...]:
    """S_0..S_{n-1} in X0..,Y0.. with w_m(S) = w_m(X) + w_m(Y); integrality is certified."""
    check_prime(p)
    _check_length(n)
    R, gens = polynomial_ring(_names("X", n) + _names("Y", n))
    X, Y = gens[:n], gens[n:]
    sums: List[ExactPoly] = []
    for m in range(n):
        rest = _witt_in(R, X, p, m) + _witt_in(R, Y, p, m)
        for j in range(m):
            rest -= p ** j * sums[j] ** (p ** (m - j))
        S_m = rest * R.domain(1, p ** m)
        if poly_min_valuation(S_m, p) < 0:
            raise IntegralityError(f"Witt sum polynomial S_{m} for p={p} is not p-integral")
        sums.append(S_m)
    logger.info(f"Computed Witt sum polynomials p={p}, n={n} ({sum(len(s) for s in sums)} terms)")
    return tuple(sums)


@lru_cache(maxsize=None)
def _compiled_sums(p: int, n: int, law: str = "witt") -> Tuple[Compiled, ...]:
    polys = witt_sum_polynomials(p, n) if law == "witt" else v2_sum_polynomials(p)
    return tuple([(monom, to_fraction(c)) for monom, c in poly.terms()] for poly in polys)


def _evaluate(compiled: Compiled, values: Sequence, p: int, ring: str):
    if ring == "GF":
        total = 0
        for monom, c in compiled:
            term = c.numerator * pow(c.denominator, -1, p)
            for v, e in zip(values, monom):
                if e:
                    term = term * pow(v, e, p) % p
                    if not term:
                        break
            total = (total + term) % p
        return total
    total = Fraction(0)
    for monom, c in compiled:
        term = c
        for v, e in zip(values, monom):
            if e:
                term *= v ** e
                if not term:
                    break
        total += term
    if ring == "ZZ":
        if total.denominator != 1:
            raise IntegralityError(f"Integer Witt addition produced {total}")
        return int(total)
    return total


def _check_compatible(a: WittVector, b: WittVector):
    if (a.p, a.n, a.ring) != (b.p, b.n, b.ring):
        raise ValueError(f"Mismatched Witt vectors: (p={a.p}, n={a.n}, {a.ring}) vs (p={b.p}, n={b.n}, {b.ring})")


def _add_with_law(a: WittVector, b: WittVector, law: str) -> WittVector:
    _check_compatible(a, b)
    compiled = _compiled_sums(a.p, a.n, law)
    values = list(a.coords) + list(b.coords)
    return WittVector(a.p, tuple(_evaluate(s, values, a.p, a.ring) for s in compiled), a.ring)


def witt_add(a: WittVector, b: WittVector) -> WittVector:
    return _add_with_law(a, b, "witt")


def witt_neg(a: WittVector) -> WittVector:
    """b_m = -S_m(a, (b_0..b_{m-1}, 0, ..., 0))."""
    compiled = _compiled_sums(a.p, a.n)
    zero = 0 if a.ring != "QQ" else Fraction(0)
    b = [zero] * a.n
    for m in range(a.n):
        value = _evaluate(compiled[m], list(a.coords) + b, a.p, a.ring)
        b[m] = (-value) % a.p if a.ring == "GF" else -value
    return WittVector(a.p, tuple(b), a.ring)


def witt_multiple(a: WittVector, k: int) -> WittVector:
    if k < 0:
        return witt_multiple(witt_neg(a), -k)
    total = WittVector.zero(a.p, a.n, a.ring)
    addend = a
    while k:
        if k & 1:
            total = witt_add(total, addend)
        addend = witt_add(addend, addend)
        k >>= 1
    return total


def _order_with_law(a: WittVector, law: str) -> int:
    if a.ring != "GF":
        raise ValueError("Element orders are only defined here over F_p")
    order = 1
    current = a
    while not current.is_zero():
        current = _add_with_law(current, a, law)
        order += 1
    return order


def witt_order(a: WittVector) -> int:
    if a.ring != "GF":
        raise ValueError("Element orders are only defined here over F_p")
    order = 1
    while not witt_multiple(a, order).is_zero():
        order *= a.p
    return order


def predicted_witt_order(a: WittVector) -> int:
    leading = next((j for j, c in enumerate(a.coords) if c), a.n)
    return a.p ** (a.n - leading)


def ghost(a: WittVector) -> Tuple[Fraction, ...]:
    if a.ring == "GF":
        raise ValueError("Ghost components need p invertible; got F_p coefficients")
    return tuple(
        sum((Fraction(a.p) ** i * Fraction(a.coords[i]) ** (a.p ** (m - i)) for i in range(m + 1)), Fraction(0))
        for m in range(a.n)
    )


def from_ghost(p: int, components: Sequence[Fraction], ring: str = "QQ") -> WittVector:
    """Inverse of ghost: c_m = (g_m - sum_{i<m} p^i c_i^(p^(m-i))) / p^m."""
    coords: List[Fraction] = []
    for m, g in enumerate(components):
        rest = Fraction(g) - sum((Fraction(p) ** i * coords[i] ** (p ** (m - i)) for i in range(m)), Fraction(0))
        coords.append(rest / p ** m)
    return WittVector(p, tuple(coords), ring)


def ghost_lift_add(a: WittVector, b: WittVector) -> WittVector:
    """F_p addition computed through integer lifts and ghost components only."""
    _check_compatible(a, b)
    lift_a = WittVector(a.p, a.coords, "QQ")
    lift_b = WittVector(b.p, b.coords, "QQ")
    total = from_ghost(a.p, [x + y for x, y in zip(ghost(lift_a), ghost(lift_b))])
    for c in total.coords:
        if c.denominator != 1:
            raise IntegralityError(f"Ghost-lift sum has non-integral coordinate {c}")
    return WittVector(a.p, tuple(int(c) for c in total.coords), "GF")


def all_witt_vectors(p: int, n: int) -> Iterator[WittVector]:
    for coords in product(range(p), repeat=n):
        yield WittVector(p, coords)


#Frobenius-twisted length-2 law: (t0 + s0, F(t0, s0)^p + t1 + s1)

@lru_cache(maxsize=None)
def v2_sum_polynomials(p: int) -> Tuple[ExactPoly, ...]:
    check_prime(p)
    R, gens = polynomial_ring(_names("X", 2) + _names("Y", 2))
    X0, X1, Y0, Y1 = gens
    F = (X0 ** p + Y0 ** p - (X0 + Y0) ** p) * R.domain(1, p)
    return (X0 + Y0, F ** p + X1 + Y1)


def v2_add(a: WittVector, b: WittVector) -> WittVector:
    if a.n != 2:
        raise ValueError(f"The twisted law is defined on length 2, got {a.n}")
    return _add_with_law(a, b, "v2")


def v2_order(a: WittVector) -> int:
    return _order_with_law(a, "v2")


#Derivations of F_p[T_0..T_{n-1}] truncated at a total degree


class TruncatedDerivation:
    """A derivation given by its values on the generators T_i."""

    def __init__(self, p: int, images: Sequence, bound: int):
        self.p = check_prime(p)
        self.n = len(images)
        self.bound = bound
        self.ring, self.gens = derivation_ring(p, self.n)
        self.images = tuple(self.truncate(self.ring(g)) for g in images)

    def truncate(self, f):
        return self.ring.from_dict({m: c for m, c in f.items() if sum(m) <= self.bound})

    def max_degree(self) -> int:
        return max((sum(m) for g in self.images for m in g.itermonoms()), default=0)

    def apply(self, f, truncate: bool = True):
        out = self.ring.zero
        for image, T in zip(self.images, self.gens):
            if image:
                out += image * f.diff(T)
        return self.truncate(out) if truncate else out

    def iterate(self, f, k: int, truncate: bool = True):
        for _ in range(k):
            f = self.apply(f, truncate)
        return f

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedDerivation):
            return NotImplemented
        return self.p == other.p and self.images == other.images

    def __repr__(self) -> str:
        parts = [f"({g.as_expr()})*d/dT{i}" for i, g in enumerate(self.images) if g]
        return " + ".join(parts) or "0"


def derivation_ring(p: int, n: int):
    return polynomial_ring(_names("T", n), f"GF({p})")


def partial_derivation(p: int, n: int, i: int, bound: int) -> TruncatedDerivation:
    R, T = derivation_ring(p, n)
    images = [R.one if k == i else R.zero for k in range(n)]
    return TruncatedDerivation(p, images, bound)


def derivation_p_power(D: TruncatedDerivation, p: int) -> TruncatedDerivation:
    if p != D.p:
        raise ValueError(f"Derivation lives in characteristic {D.p}, not {p}")
    needed = p * D.max_degree()
    if D.bound < needed:
        raise ValueError(f"Truncation degree {D.bound} below p*maxdeg = {needed}")
    images = [D.iterate(T, p) for T in D.gens]
    return TruncatedDerivation(p, images, D.bound)


def monomials_up_to(n: int, degree: int) -> Iterator[Tuple[int, ...]]:
    for exps in product(range(degree + 1), repeat=n):
        if sum(exps) <= degree:
            yield exps


def agrees_with_iteration(D: TruncatedDerivation, power: TruncatedDerivation, degree: int) -> bool:
    """power(m) == D^p(m) on every monomial of total degree <= degree."""
    for exps in monomials_up_to(D.n, degree):
        m = D.ring.from_dict({exps: 1})
        lhs = power.truncate(power.apply(m, truncate=False))
        rhs = D.truncate(D.iterate(m, D.p, truncate=False))
        if lhs != rhs:
            return False
    return True


def _reduce_mod_p(c, p: int) -> int:
    q = to_fraction(c)
    return q.numerator * pow(q.denominator, -1, p) % p


def invariant_derivations_from_law(sums: Sequence[ExactPoly], p: int, bound: int) -> List[TruncatedDerivation]:
    """X_j(T_i) = dS_i/dY_j at Y = 0, reduced mod p."""
    n = len(sums)
    R, T = derivation_ring(p, n)
    src_ring = sums[0].ring
    Y = src_ring.gens[n:]
    derivations = []
    for j in range(n):
        images = []
        for S in sums:
            dS = S.diff(Y[j])
            coeffs = {}
            for monom, c in dS.terms():
                if any(monom[n:]):
                    continue
                value = _reduce_mod_p(c, p)
                if value:
                    coeffs[monom[:n]] = value
            images.append(R.from_dict(coeffs) if coeffs else R.zero)
        derivations.append(TruncatedDerivation(p, images, bound))
    return derivations


def invariant_derivations(p: int, n: int = 2, bound: int = None) -> List[TruncatedDerivation]:
    bound = 4 * p if bound is None else bound
    return invariant_derivations_from_law(witt_sum_polynomials(p, n), p, bound)


def v2_invariant_derivations(p: int, bound: int = None) -> List[TruncatedDerivation]:
    bound = 4 * p if bound is None else bound
    return invariant_derivations_from_law(v2_sum_polynomials(p), p, bound)


def displayed_derivation(p: int, sign: int = 1, bound: int = None) -> TruncatedDerivation:
    """d/dT0 + sign * T0^(p-1) d/dT1 on F_p[T0, T1]."""
    bound = 4 * p if bound is None else bound
    R, (T0, T1) = derivation_ring(p, 2)
    return TruncatedDerivation(p, [R.one, sign * T0 ** (p - 1)], bound)
