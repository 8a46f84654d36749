#!/usr/bin/env python3
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy
from sympy import mobius

from unipotent.errors import DegreeTooLargeError, IntegralityError
from unipotent.services.exact import (
    ExactSeries,
    check_prime,
    series_binomial,
    series_exp,
    series_min_valuation,
    series_mul,
    vp,
)
from unipotent.services.matlie import (
    FpMatrix,
    Matrix,
    QMatrix,
    nilpotence_degree,
    nilpotent_exp,
    unipotent_log,
    multiplicative_order_p,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AHSeries:
    """F(t) = exp(-(t + t^p/p + t^(p^2)/p^2 + ...)) modulo t^(N+1)."""

    p: int
    series: ExactSeries

    @property
    def truncation_order(self) -> int:
        return self.series.truncation_order

    def __getitem__(self, k: int) -> Fraction:
        return self.series[k]

    def valuations(self) -> List[Union[int, float]]:
        return [vp(c, self.p) for c in self.series]

    def fp_coefficients(self) -> List[int]:
        return fp_series_coefficients(self)


def _certify(series: ExactSeries, p: int, label: str) -> AHSeries:
    if series[0] != 1:
        raise IntegralityError(f"{label}: constant term {series[0]} != 1")
    if series_min_valuation(series, p) < 0:
        bad = next(k for k, c in enumerate(series) if vp(c, p) < 0)
        raise IntegralityError(f"{label}: coefficient of t^{bad} is not {p}-integral")
    return AHSeries(p, series)


@lru_cache(maxsize=None)
def ah_series(p: int, N: int) -> AHSeries:
    check_prime(p)
    if N < 1:
        raise ValueError(f"Truncation order must be at least 1, got {N}")
    coeffs = [Fraction(0)] * (N + 1)
    power = 1
    while power <= N:
        coeffs[power] = Fraction(-1, power)
        power *= p
    result = _certify(series_exp(ExactSeries(coeffs)), p, f"Artin-Hasse series p={p}")
    logger.debug(f"Artin-Hasse series p={p} certified to order {N}")
    return result


@lru_cache(maxsize=None)
def ah_product_form(p: int, N: int) -> AHSeries:
    """Product over m <= N prime to p of (1 - t^m)^(mu(m)/m)."""
    check_prime(p)
    if N < 1:
        raise ValueError(f"Truncation order must be at least 1, got {N}")
    result = ExactSeries.one(N)
    for m in range(1, N + 1):
        if gcd(m, p) != 1:
            continue
        mu = int(mobius(m))
        if mu == 0:
            continue
        u = ExactSeries.monomial(m, N, -1)
        result = series_mul(result, series_binomial(u, Fraction(mu, m)))
    return _certify(result, p, f"Moebius product p={p}")


def fp_series_coefficients(ah: AHSeries) -> List[int]:
    p = ah.p
    return [c.numerator * pow(c.denominator, -1, p) % p for c in ah.series]


def _scalar(c: Fraction, X: Matrix) -> Fraction:
    if isinstance(X, FpMatrix):
        return Fraction(c.numerator * pow(c.denominator, -1, X.p) % X.p)
    return c


def _identity(X: Matrix) -> Matrix:
    return FpMatrix.identity(X.n, X.p) if isinstance(X, FpMatrix) else QMatrix.identity(X.n)


def _series_of_matrix(coeffs: Sequence[Fraction], A: Matrix, degree: int) -> Matrix:
    """sum_k coeffs[k] A^k for nilpotent A with A^degree = 0."""
    result = _identity(A)
    power = _identity(A)
    for k in range(1, degree):
        power = power @ A
        if power.is_zero():
            break
        if coeffs[k]:
            result = result + power.scale(_scalar(coeffs[k], A))
    return result


def ex_eval(X: Matrix, t: Sequence, p: int, n: int = None) -> Matrix:
    """E_X(t) = F(t_0 X) F(t_1 X^p) ... F(t_{n-1} X^(p^(n-1)))."""
    check_prime(p)
    n = len(t) if n is None else n
    if len(t) != n:
        raise ValueError(f"Expected {n} Witt coordinates, got {len(t)}")
    if isinstance(X, FpMatrix) and X.p != p:
        raise ValueError(f"Matrix lives over F_{X.p}, not F_{p}")
    degree = nilpotence_degree(X)
    if degree > p ** n:
        raise ValueError(f"X^(p^n) != 0: nilpotence degree {degree} exceeds {p}^{n}")
    F = ah_series(p, max(degree, 1))
    result = _identity(X)
    power = X
    for i in range(n):
        if power.is_zero():
            break
        ti = t[i]
        if isinstance(X, FpMatrix):
            ti = Fraction(ti)
            if ti.denominator % p == 0:
                raise ValueError(f"Coordinate {ti} has no reduction mod {p}")
            arg = power.scale(ti.numerator * pow(ti.denominator, -1, p) % p)
        else:
            arg = power.scale(Fraction(ti))
        result = result @ _series_of_matrix(F.series.coefficients, arg, degree)
        power = power.power(p)
    return result


def ghost_factorization_check(X: QMatrix, t: Optional[Sequence], p: int, n: int, sign: int = -1) -> bool:
    """exp(sign * sum_j p^-j w_j(t) X^(p^j)) == E_X(t); symbolic in t when t is None.

    F(t) carries exp(-(t + t^p/p + ...)), so the identity holds for sign = -1.
    """
    check_prime(p)
    if sign not in (1, -1):
        raise ValueError(f"sign must be 1 or -1, got {sign}")
    if t is None:
        return _ghost_factorization_symbolic(X, p, n, sign)
    t = [Fraction(c) for c in t]
    exponent = QMatrix.zeros(X.n)
    power = X
    for j in range(n):
        w_j = sum((Fraction(p) ** i * t[i] ** (p ** (j - i)) for i in range(j + 1)), Fraction(0))
        exponent = exponent + power.scale(sign * w_j / p ** j)
        power = power.power(p)
    return nilpotent_exp(exponent) == ex_eval(X, t, p, n)


def _sympy_nilpotent_exp(A: sympy.Matrix, degree: int) -> sympy.Matrix:
    result = sympy.eye(A.rows)
    power = sympy.eye(A.rows)
    for k in range(1, degree):
        power = (power * A).expand()
        result += power / sympy.factorial(k)
    return result.expand()


def _ghost_factorization_symbolic(X: QMatrix, p: int, n: int, sign: int) -> bool:
    degree = nilpotence_degree(X)
    if degree > p ** n:
        raise ValueError(f"X^(p^n) != 0: nilpotence degree {degree} exceeds {p}^{n}")
    t = sympy.symbols(f"t0:{n}")
    M = X.to_sympy()
    exponent = sympy.zeros(X.n, X.n)
    for j in range(n):
        w_j = sum(sympy.Integer(p) ** i * t[i] ** (p ** (j - i)) for i in range(j + 1))
        exponent += sign * (w_j / sympy.Integer(p) ** j) * M ** (p ** j)
    lhs = _sympy_nilpotent_exp(exponent, degree)
    F = ah_series(p, degree)
    rhs = sympy.eye(X.n)
    for i in range(n):
        factor = sympy.eye(X.n)
        power = M ** (p ** i)
        for k in range(1, degree):
            c = F[k]
            if c:
                factor += sympy.Rational(c.numerator, c.denominator) * t[i] ** k * power ** k
        rhs = (rhs * factor).expand()
    return (lhs - rhs).expand().is_zero_matrix


def trunc_exp(X: Matrix) -> Matrix:
    """sum X^i / i!; over F_p only for nilpotence degree <= p."""
    degree = nilpotence_degree(X)
    if isinstance(X, FpMatrix) and degree > X.p:
        raise DegreeTooLargeError(
            f"Nilpotence degree {degree} exceeds p={X.p}; use the Artin-Hasse exponential instead"
        )
    return nilpotent_exp(X)


def trunc_log(u: Matrix) -> Matrix:
    N = u - _identity(u)
    degree = nilpotence_degree(N)
    if isinstance(u, FpMatrix) and degree > u.p:
        raise DegreeTooLargeError(f"Unipotent degree {degree} exceeds p={u.p}")
    return unipotent_log(u)


@dataclass(frozen=True)
class LatticeCertificate:
    preserved: bool
    min_valuation: Union[int, float]
    power_condition: bool

    def to_dict(self) -> Dict:
        return {
            "preserved": self.preserved,
            "min_valuation": self.min_valuation,
            "power_condition": self.power_condition,
        }


def lattice_preservation(X: QMatrix, p: int) -> LatticeCertificate:
    """Does exp(X) preserve the standard lattice at p; also X^p in pL and X^(p^2) = 0."""
    check_prime(p)
    if any(x.denominator != 1 for x in X.data.flat):
        raise ValueError("Lattice test needs integer entries")
    expX = nilpotent_exp(X)
    valuation = expX.min_valuation(p)
    Xp = X.power(p)
    power_condition = Xp.min_valuation(p) >= 1 and Xp.power(p).is_zero()
    return LatticeCertificate(valuation >= 0, valuation, power_condition)


def ex_order(X: FpMatrix, t: Sequence, n: int = None) -> int:
    return multiplicative_order_p(ex_eval(X, t, X.p, n))


def witt_lie_span(X: FpMatrix, n: int) -> List[FpMatrix]:
    basis = []
    power = X
    for _ in range(n):
        basis.append(power)
        power = power.power(X.p)
    return basis


def witt_lie_span_exponent(X: FpMatrix, n: int) -> Tuple[int, bool]:
    """(p-exponent of span{X^(p^i)}, whether the span is closed under p-th powers); exhaustive."""
    p = X.p
    basis = witt_lie_span(X, n)
    members = {}
    for coeffs in product(range(p), repeat=n):
        Y = FpMatrix.zeros(X.n, p)
        for c, B in zip(coeffs, basis):
            if c:
                Y = Y + B.scale(c)
        members[Y.key()] = Y
    closed = all(Y.power(p).key() in members for Y in members.values())
    exponent = 0
    for Y in members.values():
        e, power = 0, Y
        while not power.is_zero():
            power = power.power(p)
            e += 1
        exponent = max(exponent, e)
    return exponent, closed
