#!/usr/bin/env python3
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy
from sympy import nextprime

from unipotent.config import settings
from unipotent.errors import DegreeTooLargeError
from unipotent.models import OrderReport
from unipotent.services import parabolic, rootsys
from unipotent.services.artinhasse import ex_eval, trunc_exp
from unipotent.services.exact import check_prime
from unipotent.services.matlie import (
    FpMatrix,
    QMatrix,
    multiplicative_order_p,
    p_nilpotence_degree,
    rank_profile,
)
from unipotent.services.rootsys import Root, RootSystem
from unipotent.utils import rng_for

logger = logging.getLogger(__name__)

KINDS = ("CG1", "CG2", "CG3")
KIND_NAMES = {"CG1": "sl", "CG2": "sp", "CG3": "so"}


@dataclass
class ClassicalRealization:
    kind: str
    n: int
    form: np.ndarray
    rs: RootSystem
    root_vectors: Dict[Root, np.ndarray]
    p: Optional[int] = None

    @property
    def label(self) -> str:
        return f"{KIND_NAMES[self.kind]}{self.n}"

    def vector_q(self, root: Root) -> QMatrix:
        return QMatrix(self.root_vectors[root].tolist())

    def vector_fp(self, root: Root, p: int) -> FpMatrix:
        return FpMatrix(self.root_vectors[root], p)

    def in_algebra(self, X: np.ndarray) -> bool:
        if self.kind == "CG1":
            return True
        X = np.asarray(X, dtype=object)
        J = self.form.astype(object)
        return not (X.T.dot(J) + J.dot(X)).any()

    def preserves_form(self, g) -> bool:
        """g^T J g == J, over F_p or the rationals."""
        if self.kind == "CG1":
            return True
        if isinstance(g, FpMatrix):
            J = FpMatrix(self.form, g.p)
            return g.transpose() @ J @ g == J
        J = QMatrix(self.form.tolist())
        return g.transpose() @ J @ g == J


def _antidiagonal(n: int) -> np.ndarray:
    return np.fliplr(np.eye(n, dtype=np.int64))


def _form(kind: str, n: int) -> np.ndarray:
    if kind == "CG1":
        return np.zeros((n, n), dtype=np.int64)
    if kind == "CG2":
        r = n // 2
        K = _antidiagonal(r)
        J = np.zeros((n, n), dtype=np.int64)
        J[:r, r:] = K
        J[r:, :r] = -K
        return J
    return _antidiagonal(n)


def _root_type(kind: str, n: int) -> Tuple[str, int]:
    if kind == "CG1":
        if n < 2:
            raise ValueError(f"sl_n needs n >= 2, got {n}")
        return "A", n - 1
    if kind == "CG2":
        if n < 4 or n % 2:
            raise ValueError(f"sp_n needs even n >= 4, got {n}")
        return "C", n // 2
    if n % 2 == 1 and n >= 5:
        return "B", n // 2
    if n % 2 == 0 and n >= 8:
        return "D", n // 2
    raise ValueError(f"so_n realized for odd n >= 5 or even n >= 8, got {n}")


def _position_weight(kind: str, n: int, i: int) -> Tuple[int, ...]:
    """Torus weight of the i-th basis vector in epsilon coordinates."""
    if kind == "CG1":
        return tuple(1 if k == i else 0 for k in range(n))
    r = n // 2
    if i < r:
        return tuple(1 if k == i else 0 for k in range(r))
    if n % 2 == 1 and i == r:
        return (0,) * r
    mirror = n - 1 - i
    return tuple(-1 if k == mirror else 0 for k in range(r))


def _simple_root_epsilons(family: str, rank: int, kind: str, n: int) -> List[Tuple[int, ...]]:
    width = n if kind == "CG1" else rank
    simple = []
    for i in range(rank):
        v = [0] * width
        if family == "A" or i < rank - 1:
            v[i], v[i + 1] = 1, -1
        elif family == "B":
            v[i] = 1
        elif family == "C":
            v[i] = 2
        else:
            v[i - 1], v[i] = 1, 1
        simple.append(tuple(v))
    return simple


def _normalize_sign(M: np.ndarray) -> np.ndarray:
    first = M.flat[np.flatnonzero(M)[0]]
    return M if first > 0 else -M


@lru_cache(maxsize=None)
def _build(kind: str, n: int) -> ClassicalRealization:
    family, rank = _root_type(kind, n)
    rs = rootsys.build_root_system(family, rank)
    J = _form(kind, n)
    J_inv = np.round(np.linalg.inv(J)).astype(np.int64) if kind != "CG1" else None
    simple_eps = _simple_root_epsilons(family, rank, kind, n)
    eps_to_root = {}
    for a in rs.positive_roots:
        eps = tuple(sum(a[i] * simple_eps[i][k] for i in range(rank)) for k in range(len(simple_eps[0])))
        eps_to_root[eps] = a

    vectors: Dict[Root, np.ndarray] = {}
    for a_idx in range(n):
        for b_idx in range(a_idx + 1, n):
            E = np.zeros((n, n), dtype=np.int64)
            E[a_idx, b_idx] = 1
            if kind == "CG1":
                M = E
            else:
                Y = -J_inv @ E.T @ J
                if np.array_equal(Y, -E):
                    continue
                M = E if np.array_equal(Y, E) else E + Y
            weight = tuple(x - y for x, y in zip(_position_weight(kind, n, a_idx), _position_weight(kind, n, b_idx)))
            root = eps_to_root.get(weight)
            if root is None:
                raise ValueError(f"{kind} n={n}: weight {weight} of E[{a_idx},{b_idx}] is not a positive root")
            M = _normalize_sign(M)
            if root in vectors:
                if not np.array_equal(vectors[root], M):
                    raise ValueError(f"{kind} n={n}: two root vectors for {root}")
                continue
            vectors[root] = M
    if len(vectors) != len(rs.positive_roots):
        raise ValueError(f"{kind} n={n}: {len(vectors)} root vectors for {len(rs.positive_roots)} roots")
    realization = ClassicalRealization(kind, n, J, rs, vectors)
    logger.info(f"Built realization {realization.label} of type {rs.label}")
    return realization


def build_realization(kind: str, n: int, p: Optional[int] = None) -> ClassicalRealization:
    kind = kind.upper()
    if kind not in KINDS:
        raise ValueError(f"Unknown realization kind {kind!r}")
    if p is not None:
        check_prime(p)
        if kind == "CG3" and p == 2:
            raise ValueError("Orthogonal realizations need p != 2")
    base = _build(kind, n)
    return ClassicalRealization(base.kind, base.n, base.form, base.rs, base.root_vectors, p)


def structure_constant(realization: ClassicalRealization, alpha: Root, beta: Root) -> Optional[Fraction]:
    """c with [e_alpha, e_beta] = c e_(alpha+beta); None when alpha+beta is not a root."""
    A = realization.root_vectors[alpha].astype(object)
    B = realization.root_vectors[beta].astype(object)
    bracket = A.dot(B) - B.dot(A)
    gamma = tuple(x + y for x, y in zip(alpha, beta))
    if gamma not in realization.root_vectors:
        if bracket.any():
            raise ValueError(f"Bracket of {alpha}, {beta} is nonzero but {gamma} is not a root")
        return None
    target = realization.root_vectors[gamma]
    k = np.flatnonzero(target)[0]
    c = Fraction(int(bracket.flat[k]), int(target.flat[k]))
    if any(Fraction(int(x)) != c * int(y) for x, y in zip(bracket.flat, target.flat)):
        raise ValueError(f"Bracket of {alpha}, {beta} is not proportional to e_{gamma}")
    return c


@dataclass
class NilradicalModel:
    realization: ClassicalRealization
    levi_set: Tuple[int, ...]
    roots: List[Root]
    blocks: Optional[Tuple[int, ...]] = None
    graded: parabolic.GradedParabolic = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.realization.n

    @property
    def dimension(self) -> int:
        return len(self.roots)

    @property
    def nP(self) -> int:
        return self.graded.nP

    @property
    def label(self) -> str:
        if self.blocks is not None:
            return f"gl{self.n}:blocks" + "(" + ",".join(map(str, self.blocks)) + ")"
        return f"{self.realization.label}:I" + parabolic.levi_descriptor(self.levi_set)

    def basis(self) -> List[np.ndarray]:
        return [self.realization.root_vectors[a] for a in self.roots]

    def element(self, coeffs: Sequence[int], p: int) -> FpMatrix:
        data = np.zeros((self.n, self.n), dtype=np.int64)
        for c, B in zip(coeffs, self.basis()):
            data = (data + int(c) * B) % p
        return FpMatrix(data, p)

    def element_q(self, coeffs: Sequence) -> QMatrix:
        data = np.zeros((self.n, self.n), dtype=object)
        data.fill(Fraction(0))
        for c, B in zip(coeffs, self.basis()):
            data = data + Fraction(c) * B.astype(object)
        return QMatrix(data)


def nilradical(realization: ClassicalRealization, levi_set: Sequence[int]) -> NilradicalModel:
    levi = tuple(sorted(set(levi_set)))
    if any(i < 0 or i >= realization.rs.rank for i in levi):
        raise ValueError(f"Levi set {levi} out of range for {realization.rs.label}")
    roots = [a for a in realization.rs.positive_roots if any(a[i] for i in range(len(a)) if i not in levi)]
    graded = parabolic.grade(realization.rs, levi)
    return NilradicalModel(realization, levi, roots, None, graded)


def blocks_nilradical(n: int, blocks: Sequence[int]) -> NilradicalModel:
    """Block-strictly-upper matrices of gl_n for a block composition."""
    levi = parabolic.blocks_to_levi(n, blocks)
    model = nilradical(build_realization("CG1", n), levi)
    model.blocks = tuple(blocks)
    return model


def compositions(n: int) -> List[Tuple[int, ...]]:
    if n == 0:
        return [()]
    out = []
    for first in range(1, n + 1):
        out.extend((first,) + rest for rest in compositions(n - first))
    return out


#Richardson sampling

def _padded(profile: Sequence[int], width: int) -> Tuple[int, ...]:
    return tuple(profile) + (0,) * (width - len(profile))


def random_element(nm: NilradicalModel, q: int, rng: np.random.Generator) -> FpMatrix:
    return nm.element(rng.integers(0, q, size=nm.dimension), q)


@dataclass
class RichardsonSample:
    X: FpMatrix
    profile: Tuple[int, ...]
    hits: int
    trials: int

    @property
    def stable(self) -> bool:
        return self.hits >= settings.INCONCLUSIVE_FRACTION * self.trials


def richardson_sample(nm: NilradicalModel, q: int, trials: int, rng: np.random.Generator) -> RichardsonSample:
    """Element with the largest rank profile among `trials` draws; first occurrence wins."""
    check_prime(q)
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    best, best_profile, hits = None, None, 0
    for _ in range(trials):
        X = random_element(nm, q, rng)
        profile = _padded(rank_profile(X), nm.n)
        if best_profile is None or profile > best_profile:
            best, best_profile, hits = X, profile, 1
        elif profile == best_profile:
            hits += 1
    return RichardsonSample(best, best_profile, hits, trials)


def richardson_in_characteristic(nm: NilradicalModel, p: int, target: Sequence[int], budget: int,
                                 rng: np.random.Generator) -> Tuple[Optional[FpMatrix], int, bool]:
    """Search F_p for an element with the target rank profile: (element, draws, exceeded)."""
    target = _padded(target, nm.n)
    for draw in range(1, budget + 1):
        X = random_element(nm, p, rng)
        profile = _padded(rank_profile(X), nm.n)
        if profile == target:
            return X, draw, False
        if any(a > b for a, b in zip(profile, target)):
            return None, draw, True
    return None, budget, False


def field_for_sampling(p: int) -> int:
    q = settings.RICHARDSON_FIELD
    return q if q != p else int(nextprime(q))


def unipotent_of(X: FpMatrix) -> FpMatrix:
    """trunc_exp when the degree allows, otherwise the Artin-Hasse exponential at (1, 0, ...)."""
    try:
        return trunc_exp(X)
    except DegreeTooLargeError:
        n = p_nilpotence_degree(X)
        return ex_eval(X, (1,) + (0,) * (n - 1), X.p, n)


def nilradical_exponent(nm: NilradicalModel, p: int, samples: int, rng: np.random.Generator) -> int:
    """Largest unipotent order seen among random nilradical elements over F_p."""
    order = 1
    for _ in range(samples):
        X = random_element(nm, p, rng)
        order = max(order, multiplicative_order_p(unipotent_of(X)))
    return order


#Exponential coordinates

def _sympy_exp(A: sympy.Matrix) -> sympy.Matrix:
    result = sympy.eye(A.rows)
    power = sympy.eye(A.rows)
    for k in range(1, A.rows):
        power = (power * A).expand()
        if power.is_zero_matrix:
            break
        result += power / sympy.factorial(k)
    return result.expand()


def exp_coordinates(realization: ClassicalRealization, coeffs: Dict[Root, object],
                    order: Sequence[Root]) -> Dict[Root, sympy.Expr]:
    """u with exp(sum c_g e_g) = prod_g exp(u_g e_g) in the given order, by left peeling.

    The order must be non-decreasing in height."""
    heights = [rootsys.height(g) for g in order]
    if heights != sorted(heights):
        raise ValueError("Peeling order must be sorted by height")
    vectors = {g: sympy.Matrix(realization.root_vectors[g].tolist()) for g in order}
    X = sympy.zeros(realization.n, realization.n)
    for g, c in coeffs.items():
        X += sympy.sympify(c) * vectors[g]
    u = _sympy_exp(X)
    coords = {}
    for g in order:
        e = vectors[g]
        k = next(i for i, x in enumerate(e) if x != 0)
        value = sympy.expand(u[k] / e[k])
        coords[g] = value
        u = (_sympy_exp(-value * e) * u).expand()
    return coords


def sp4_roots() -> Tuple[Root, Root, Root, Root]:
    """(long simple, short simple, their sum, highest) in C2 coefficients."""
    return (0, 1), (1, 0), (1, 1), (2, 1)


def sp4_exp_coordinates(a, b, c, d) -> Tuple[sympy.Expr, ...]:
    """Coordinates of exp(a e_long + b e_short + c e_sum + d e_highest) in the product order."""
    realization = build_realization("CG2", 4)
    order = sp4_roots()
    coords = exp_coordinates(realization, dict(zip(order, (a, b, c, d))), order)
    return tuple(coords[g] for g in order)


def sp4_expected(a, b, c, d) -> Tuple[sympy.Expr, ...]:
    a, b, c, d = (sympy.sympify(x) for x in (a, b, c, d))
    return (a, b, sympy.expand(c + a * b / 2), sympy.expand(d - b * c - sympy.Rational(2, 3) * a * b ** 2))


def matches_up_to_signs(got: Sequence[sympy.Expr], expected: Sequence[sympy.Expr],
                        symbols: Sequence[sympy.Symbol]) -> bool:
    """Same monomials with coefficients equal in absolute value, coordinate by coordinate."""
    for g, e in zip(got, expected):
        pg = sympy.Poly(g, *symbols).as_dict()
        pe = sympy.Poly(e, *symbols).as_dict()
        if set(pg) != set(pe) or any(abs(pg[m]) != abs(pe[m]) for m in pg):
            return False
    return True


def coordinate_denominators(coords: Sequence[sympy.Expr], symbols: Sequence[sympy.Symbol]) -> List[int]:
    dens = set()
    for expr in coords:
        for coeff in sympy.Poly(expr, *symbols).coeffs():
            dens.add(int(sympy.Rational(coeff).q))
    return sorted(dens)


#Order formula verification

@dataclass(frozen=True)
class OrderCase:
    kind: str
    n: int
    p: int
    levi_set: Tuple[int, ...] = ()
    blocks: Optional[Tuple[int, ...]] = None

    @property
    def case_id(self) -> str:
        if self.blocks is not None:
            shape = "gl"
            parab = "blocks(" + ",".join(map(str, self.blocks)) + ")"
        else:
            shape = KIND_NAMES[self.kind]
            parab = "I" + parabolic.levi_descriptor(self.levi_set)
        return f"{shape}{self.n:02d}:{parab}:p{self.p:03d}"

    def model(self) -> NilradicalModel:
        if self.blocks is not None:
            return blocks_nilradical(self.n, self.blocks)
        return nilradical(build_realization(self.kind, self.n, self.p), self.levi_set)


#(model label, q, trials, seed) -> (profile, hits); write-once
_generic_profiles: Dict[Tuple[str, int, int, int], Tuple[Tuple[int, ...], int]] = {}


def generic_profile(nm: NilradicalModel, q: int, trials: int, seed: int) -> Tuple[Tuple[int, ...], int]:
    """Rank profile of the Richardson orbit learned over F_q; shared by every p of the same model."""
    key = (nm.label, q, trials, seed)
    if key not in _generic_profiles:
        sample = richardson_sample(nm, q, trials, rng_for(seed, f"richardson:{nm.label}:q{q}"))
        _generic_profiles[key] = (sample.profile, sample.hits)
    return _generic_profiles[key]


def verify_order_formula(case: OrderCase, trials: int, seed: int) -> OrderReport:
    p = check_prime(case.p)
    nm = case.model()
    if nm.dimension == 0:
        raise ValueError(f"{case.case_id}: trivial nilradical")
    rs = nm.realization.rs
    if not rootsys.is_good_prime(rs, p):
        raise ValueError(f"{case.case_id}: p={p} is not good for {rs.label}")
    nP = nm.nP
    m = parabolic.order_exponent(p, nP)
    report = OrderReport(
        case_id=case.case_id, group=nm.realization.label if case.blocks is None else f"gl{case.n}",
        parabolic=nm.label.split(":", 1)[1], p=p, nP=nP, m=m, predicted_order=p ** m,
    )
    q = field_for_sampling(p)
    profile, hits = generic_profile(nm, q, trials, seed)
    if hits < settings.INCONCLUSIVE_FRACTION * trials:
        report.status = "inconclusive"
        report.detail = f"generic rank profile reached by {hits}/{trials} draws over F_{q}"
        logger.warning(f"{case.case_id}: {report.detail}")
        return report
    rng = rng_for(seed, case.case_id)
    budget = trials * settings.RICHARDSON_BUDGET_FACTOR
    X, draws, exceeded = richardson_in_characteristic(nm, p, profile, budget, rng)
    if X is None:
        report.status = "inconclusive"
        report.detail = ("sample over F_p exceeded the generic profile" if exceeded
                         else f"no element with the generic profile in {draws} draws")
        logger.warning(f"{case.case_id}: {report.detail}")
        return report
    report.measured_degree = p_nilpotence_degree(X)
    report.measured_order = multiplicative_order_p(unipotent_of(X))
    report.exponent_order = nilradical_exponent(nm, p, trials, rng)
    ok = (report.measured_degree == m and report.measured_order == p ** m
          and report.exponent_order <= p ** m)
    report.status = "pass" if ok else "fail"
    report.detail = f"jordan profile {profile} after {draws} draws"
    if not ok:
        logger.error(f"{case.case_id}: predicted m={m}, measured degree {report.measured_degree}, "
                     f"order {report.measured_order}, exponent {report.exponent_order}")
    return report
