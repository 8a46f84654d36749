#!/usr/bin/env python3
import math
import logging
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, Tuple, Union

from sympy import isprime, multiplicity
from sympy.polys.domains import QQ, ZZ
from sympy.polys.rings import PolyElement, ring

logger = logging.getLogger(__name__)

Rational = Fraction
Number = Union[int, Fraction]

INFINITY = math.inf


def check_prime(p: int) -> int:
    if not isinstance(p, int) or isinstance(p, bool) or not isprime(p):
        raise ValueError(f"Expected a prime, got {p!r}")
    return p


def vp(q: Number, p: int) -> Union[int, float]:
    """p-adic valuation of a rational; +infinity for zero."""
    check_prime(p)
    q = Fraction(q)
    if q == 0:
        return INFINITY
    return multiplicity(p, abs(q.numerator)) - multiplicity(p, q.denominator)


def rational_str(q: Number) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"Not a rational: {text!r}") from e


def to_fraction(c) -> Fraction:
    """Convert a sympy ground-domain element (ZZ/QQ) to a Fraction."""
    if isinstance(c, (int, Fraction)):
        return Fraction(c)
    return Fraction(int(QQ.numer(QQ.convert(c))), int(QQ.denom(QQ.convert(c))))


class ExactSeries:
    """Power series with rational coefficients known modulo t^(N+1)."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable[Number]):
        coefficients = tuple(Fraction(c) for c in coefficients)
        if not coefficients:
            raise ValueError("A series needs at least its constant term")
        object.__setattr__(self, "coefficients", coefficients)

    def __setattr__(self, name, value):
        raise AttributeError("ExactSeries is immutable")

    @classmethod
    def zero(cls, order: int) -> "ExactSeries":
        return cls([0] * (order + 1))

    @classmethod
    def one(cls, order: int) -> "ExactSeries":
        return cls([1] + [0] * order)

    @classmethod
    def monomial(cls, degree: int, order: int, coefficient: Number = 1) -> "ExactSeries":
        coeffs = [0] * (order + 1)
        if degree <= order:
            coeffs[degree] = coefficient
        return cls(coeffs)

    @property
    def truncation_order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coefficients[k]

    def __len__(self) -> int:
        return len(self.coefficients)

    def __iter__(self):
        return iter(self.coefficients)

    def truncate(self, order: int) -> "ExactSeries":
        if order > self.truncation_order:
            raise ValueError(f"Cannot extend precision from {self.truncation_order} to {order}")
        return ExactSeries(self.coefficients[:order + 1])

    def __add__(self, other: "ExactSeries") -> "ExactSeries":
        return series_add(self, other)

    def __sub__(self, other: "ExactSeries") -> "ExactSeries":
        return series_add(self, series_scale(other, -1))

    def __neg__(self) -> "ExactSeries":
        return series_scale(self, -1)

    def __mul__(self, other: "ExactSeries") -> "ExactSeries":
        return series_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactSeries):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def __repr__(self) -> str:
        terms = [f"{c}*t^{k}" for k, c in enumerate(self.coefficients) if c]
        return f"ExactSeries({' + '.join(terms) or '0'} + O(t^{self.truncation_order + 1}))"


def series_add(f: ExactSeries, g: ExactSeries) -> ExactSeries:
    order = min(f.truncation_order, g.truncation_order)
    return ExactSeries(f[k] + g[k] for k in range(order + 1))


def series_scale(f: ExactSeries, c: Number) -> ExactSeries:
    c = Fraction(c)
    return ExactSeries(c * a for a in f)


def series_mul(f: ExactSeries, g: ExactSeries) -> ExactSeries:
    order = min(f.truncation_order, g.truncation_order)
    out = [Fraction(0)] * (order + 1)
    for i in range(order + 1):
        if not f[i]:
            continue
        for j in range(order + 1 - i):
            out[i + j] += f[i] * g[j]
    return ExactSeries(out)


def series_substitute_power(f: ExactSeries, m: int, order: int = None) -> ExactSeries:
    """f(t^m); known modulo t^(m(N+1)) so the default order is m(N+1)-1."""
    if m < 1:
        raise ValueError(f"Exponent must be positive, got {m}")
    limit = m * (f.truncation_order + 1) - 1
    order = limit if order is None else order
    if order > limit:
        raise ValueError(f"Substitution only known up to t^{limit}")
    out = [Fraction(0)] * (order + 1)
    for k, c in enumerate(f):
        if k * m > order:
            break
        out[k * m] = c
    return ExactSeries(out)


def series_equal(f: ExactSeries, g: ExactSeries) -> bool:
    order = min(f.truncation_order, g.truncation_order)
    return f.coefficients[:order + 1] == g.coefficients[:order + 1]


def series_exp(f: ExactSeries) -> ExactSeries:
    """exp(f) via n*g_n = sum_k k*f_k*g_{n-k}."""
    if f[0] != 0:
        raise ValueError(f"series_exp needs zero constant term, got {f[0]}")
    order = f.truncation_order
    g = [Fraction(1)] + [Fraction(0)] * order
    for n in range(1, order + 1):
        acc = Fraction(0)
        for k in range(1, n + 1):
            if f[k]:
                acc += k * f[k] * g[n - k]
        g[n] = acc / n
    return ExactSeries(g)


def series_log(f: ExactSeries) -> ExactSeries:
    if f[0] != 1:
        raise ValueError(f"series_log needs constant term 1, got {f[0]}")
    order = f.truncation_order
    l = [Fraction(0)] * (order + 1)
    for n in range(1, order + 1):
        acc = n * f[n]
        for k in range(1, n):
            if l[k]:
                acc -= k * l[k] * f[n - k]
        l[n] = acc / n
    return ExactSeries(l)


def series_binomial(u: ExactSeries, e: Number) -> ExactSeries:
    """(1+u)^e for rational e."""
    if u[0] != 0:
        raise ValueError(f"series_binomial needs zero constant term, got {u[0]}")
    e = Fraction(e)
    if e == 0:
        return ExactSeries.one(u.truncation_order)
    one_plus_u = ExactSeries([1] + list(u.coefficients[1:]))
    return series_exp(series_scale(series_log(one_plus_u), e))


def series_min_valuation(f: ExactSeries, p: int) -> Union[int, float]:
    return min(vp(c, p) for c in f)


#Multivariate polynomials: sympy sparse rings, sorted by the ring's monomial order

@lru_cache(maxsize=None)
def polynomial_ring(names: Tuple[str, ...], domain: str = "QQ"):
    """Cached sympy polynomial ring over QQ, ZZ or GF(p) ("GF(p)")."""
    if domain == "QQ":
        dom = QQ
    elif domain == "ZZ":
        dom = ZZ
    elif domain.startswith("GF(") and domain.endswith(")"):
        from sympy.polys.domains import GF
        dom = GF(check_prime(int(domain[3:-1])))
    else:
        raise ValueError(f"Unknown coefficient domain {domain!r}")
    R, *gens = ring(",".join(names), dom)
    return R, tuple(gens)


ExactPoly = PolyElement


def sorted_terms(poly: ExactPoly) -> List[Tuple[Tuple[int, ...], Fraction]]:
    """Term list in the ring's canonical order; empty for the zero polynomial."""
    return [(monom, to_fraction(coeff)) for monom, coeff in poly.terms()]


def poly_min_valuation(poly: ExactPoly, p: int) -> Union[int, float]:
    terms = sorted_terms(poly)
    if not terms:
        return INFINITY
    return min(vp(c, p) for _, c in terms)


def poly_str(poly: ExactPoly) -> str:
    return str(poly.as_expr())
