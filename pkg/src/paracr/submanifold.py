"""Submanifolds of solutions given by two graphs, normal coordinates and Levi forms.

``M = {y = Q(x, a, b)} = {b = P(a, x, y)}`` with ``n`` variables ``x``, ``m``
parameters ``a`` and codimension one.  Both graphing functions are kept as
series; everything else is computed from them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import gmpy2

from .linalg import minors, rational_inverse, rational_rank, series_det, series_generic_rank
from .naming import Names, infer_names, standard_names
from .parser import ModelFile
from .series import (
    Rational,
    Series,
    SingularImplicit,
    Substituter,
    VarSpace,
    format_rational,
    implicit_solve,
    rational,
)
from .verdict import Verdict, check_equal, combine


class SubmanifoldError(Exception):
    pass


class NotNormalized(SubmanifoldError):
    pass


class RankMismatch(SubmanifoldError):
    pass


class DegeneracyViolation(SubmanifoldError):
    pass


class NotGenericAtOrigin(SubmanifoldError):
    pass


class DimensionMismatch(SubmanifoldError):
    pass


def _zero_assignments(space: VarSpace, names: Sequence[str], trunc: int) -> dict[str, Series]:
    zero = Series.zero(space, trunc)
    return {n: zero for n in names}


@dataclass(frozen=True)
class Submanifold:
    """The pair of graphs (Q, P) of a codimension-one submanifold of solutions."""

    names: Names
    Q: Series
    P: Series
    trunc: int

    @property
    def n(self) -> int:
        return self.names.n

    @property
    def m(self) -> int:
        return self.names.m

    @property
    def qspace(self) -> VarSpace:
        return self.Q.space

    @property
    def pspace(self) -> VarSpace:
        return self.P.space

    # --------------------------------------------------------- construction
    @classmethod
    def from_Q(cls, Q: Series, n: int, m: int, names: Names | None = None) -> Submanifold:
        names = names or infer_names(Q.space, n, m)
        if Q.space != names.qspace():
            raise ValueError(f"Q must live in {names.qspace().names}, got {Q.space.names}")
        if Q.constant_term():
            raise ValueError(f"Q(0) = {format_rational(Q.constant_term())}; the origin must lie on M")
        if not Q.diff(names.b).constant_term():
            raise SingularImplicit(f"Q_{names.b}(0) = 0: the graph cannot be solved for {names.b}")
        full = names.full()
        R = Q.to_space(full) - Series.variable(full, names.y, Q.trunc)
        P = implicit_solve(R, names.b).to_space(names.pspace())
        M = cls(names, Q, P, Q.trunc)
        M._verify_relations()
        return M

    @classmethod
    def from_P(cls, P: Series, n: int, m: int, names: Names | None = None) -> Submanifold:
        if names is None:
            names = next(
                (c for c in (standard_names(n, m), standard_names(n, m, indexed=True)) if c.pspace() == P.space),
                None,
            )
            if names is None:
                names = infer_names(P.space, m, n).swapped()
        dual = cls.from_Q(P, m, n, names.swapped())
        return dual.swap()

    @classmethod
    def from_R(cls, R: Series, n: int, m: int, names: Names) -> Submanifold:
        """From an implicit equation R(x, y, a, b) = 0 with R_y(0) != 0."""
        if R.space != names.full():
            raise ValueError(f"R must live in {names.full().names}")
        Q = implicit_solve(R, names.y).to_space(names.qspace())
        return cls.from_Q(Q, n, m, names)

    @classmethod
    def from_model(cls, model: ModelFile, trunc: int | None = None) -> Submanifold:
        names = model.names()
        s = model.series(trunc)
        if model.side == "Q":
            return cls.from_Q(s, model.n, model.m, names)
        if model.side == "P":
            return cls.from_P(s, model.n, model.m, names)
        return cls.from_R(s, model.n, model.m, names)

    def swap(self) -> Submanifold:
        """The same M with variables and parameters exchanged (Q and P trade places)."""
        return Submanifold(self.names.swapped(), self.P, self.Q, self.trunc)

    def with_trunc(self, trunc: int) -> Submanifold:
        return Submanifold.from_Q(self.Q.with_trunc(trunc), self.n, self.m, self.names)

    # ------------------------------------------------------------ pullbacks
    # one composition map per chart, so repeated pullbacks share cached powers
    @cached_property
    def _to_q(self) -> Substituter:
        return Substituter({self.names.y: self.Q}, target=self.qspace)

    @cached_property
    def _to_p(self) -> Substituter:
        return Substituter({self.names.b: self.P}, target=self.pspace)

    def pullback_to_q(self, s: Series) -> Series:
        """Express a function of (a, x, y) on M in the chart (x, a, b) via y = Q."""
        return self._to_q(s)

    def pullback_to_p(self, s: Series) -> Series:
        """Express a function of (x, a, b) on M in the chart (a, x, y) via b = P."""
        return self._to_p(s)

    def functional_relations(self) -> Verdict:
        """P(a, x, Q(x, a, b)) ≡ b and Q(x, a, P(a, x, y)) ≡ y."""
        b = Series.variable(self.qspace, self.names.b, self.trunc)
        y = Series.variable(self.pspace, self.names.y, self.trunc)
        parts = [
            check_equal("P(a,x,Q) = b", self.pullback_to_q(self.P), b),
            check_equal("Q(x,a,P) = y", self.pullback_to_p(self.Q), y),
        ]
        q_b = self.Q.diff(self.names.b)
        p_y = self.pullback_to_q(self.P.diff(self.names.y))
        parts.append(check_equal("Q_b * P_y = 1", q_b * p_y, Series.constant(self.qspace, 1, self.trunc)))
        return combine("functional_relations", parts)

    def _verify_relations(self) -> None:
        v = self.functional_relations()
        if v.status == "fail":
            raise SingularImplicit(f"graph inversion failed: {v.detail}")

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "names": {"x": list(self.names.xs), "y": self.names.y, "a": list(self.names.as_), "b": self.names.b},
            "trunc": self.trunc,
            "Q": str(self.Q),
            "P": str(self.P),
        }


# --------------------------------------------------------------- normalization
@dataclass(frozen=True)
class NormalizationRecord:
    """Coordinate changes used: old y = Y(x, y'), old b = B(a, b')."""

    y_of: Series
    b_of: Series
    identity: bool

    def to_json(self) -> dict:
        return {"y": str(self.y_of), "b": str(self.b_of), "identity": self.identity}


def is_normalized(M: Submanifold) -> bool:
    names = M.names
    b = Series.variable(M.qspace, names.b, M.trunc)
    at_x0 = M.Q.substitute(_zero_assignments(M.qspace, names.xs, M.trunc), target=M.qspace)
    at_a0 = M.Q.substitute(_zero_assignments(M.qspace, names.as_, M.trunc), target=M.qspace)
    return (at_x0 - b).is_zero() and (at_a0 - b).is_zero()


def normalize_coordinates(M: Submanifold) -> tuple[Submanifold, NormalizationRecord]:
    """Straighten Q(0, a, b) ≡ b ≡ Q(x, 0, b) by changes of b and of y."""
    names = M.names
    qs = M.qspace
    trunc = M.trunc
    tmp = "__new"
    # step 1: b = B(a, b') inverting b -> U(a, b) = Q(0, a, b)
    U = M.Q.substitute(_zero_assignments(qs, names.xs, trunc), target=qs)
    s1 = VarSpace(names.as_ + (names.b, tmp))
    R1 = U.to_space(s1) - Series.variable(s1, tmp, trunc)
    B = implicit_solve(R1, names.b).rename({tmp: names.b})
    Q1 = M.Q.substitute({names.b: B.to_space(qs)}, target=qs)
    # step 2: new y' = V(x, y) inverting b -> W(x, b) = Q1(x, 0, b)
    W = Q1.substitute(_zero_assignments(qs, names.as_, trunc), target=qs)
    s2 = VarSpace(names.xs + (names.b, names.y))
    R2 = W.to_space(s2) - Series.variable(s2, names.y, trunc)
    V = implicit_solve(R2, names.b)  # in (xs, y)
    Q2 = V.substitute({names.y: Q1}, target=qs)
    Y = W.to_space(VarSpace(names.xs + (names.b,))).rename({names.b: names.y})
    b_new = Series.variable(B.space, names.b, trunc)
    y_new = Series.variable(Y.space, names.y, trunc)
    identity = (B - b_new).is_zero() and (Y - y_new).is_zero()
    M2 = Submanifold.from_Q(Q2, M.n, M.m, names)
    if not is_normalized(M2):
        raise SingularImplicit("normalization post-condition failed")
    a0 = _zero_assignments(M2.pspace, names.as_, trunc)
    x0 = _zero_assignments(M2.pspace, names.xs, trunc)
    y = Series.variable(M2.pspace, names.y, trunc)
    for sub in (a0, x0):
        if not (M2.P.substitute(sub, target=M2.pspace) - y).is_zero():
            raise SingularImplicit("normalization post-condition failed on P")
    return M2, NormalizationRecord(Y, B, identity)


# ------------------------------------------------------------------ Levi forms
def levi_par_matrix(Q: Series, names: Names) -> list[list[Series]]:
    """n x m matrix ((-Q_b Q_{x_i a_j} + Q_{a_j} Q_{x_i b}) / Q_b^2)."""
    qb = Q.diff(names.b)
    inv = (qb * qb).reciprocal()
    rows = []
    for x in names.xs:
        qx = Q.diff(x)
        qxb = qx.diff(names.b)
        rows.append([(-(qb * qx.diff(a)) + Q.diff(a) * qxb) * inv for a in names.as_])
    return rows


def levi_numerators_at(Q: Series, names: Names, point: Mapping[str, object]) -> list[list[Rational]]:
    """Numerators -Q_b Q_{x_i a_j} + Q_{a_j} Q_{x_i b} evaluated exactly at a point."""
    qb = Q.diff(names.b).evaluate(point)
    rows = []
    for x in names.xs:
        qx = Q.diff(x)
        qxb = qx.diff(names.b).evaluate(point)
        rows.append([-qb * qx.diff(a).evaluate(point) + Q.diff(a).evaluate(point) * qxb for a in names.as_])
    return rows


def sample_points(space_names: Sequence[str], count: int = 5, seed: int = 0) -> list[dict[str, Rational]]:
    """Deterministic rational points with coordinates p/q, |p| <= 3, 1 <= q <= 3."""
    rng = random.Random(seed)
    return [
        {n: gmpy2.mpq(rng.randint(-3, 3), rng.randint(1, 3)) for n in space_names}
        for _ in range(count)
    ]


@dataclass(frozen=True)
class GenericRank:
    series_rank: int
    sampled_rank: int
    points: tuple

    @property
    def rank(self) -> int:
        return self.series_rank


def generic_rank(matrix: list[list[Series]], space_names: Sequence[str], seed: int = 0) -> GenericRank:
    """Series-level minor test, cross-checked by evaluating the truncated minors at seeded points.

    Entries are only known through their reliable degree, so the sampled rank
    evaluates the (truncated) minor series rather than the matrix itself; it
    can only confirm, never exceed, the series-level rank.
    """
    rank, _ = series_generic_rank(matrix)
    points = sample_points(space_names, 5, seed)
    sampled = 0
    if matrix and matrix[0]:
        for size in range(1, min(len(matrix), len(matrix[0])) + 1):
            dets = [d for _, _, d in minors(matrix, size)]
            if not any(d.evaluate(p) for d in dets for p in points):
                break
            sampled = size
    if sampled > rank:
        raise ArithmeticError(f"sampled rank {sampled} exceeds the series-level rank {rank}")
    return GenericRank(rank, sampled, tuple(points))


@dataclass(frozen=True)
class LeviData:
    levi_par: list
    levi_var: list
    rank0: int
    generic_rank: int
    sampled_rank: int

    def to_json(self) -> dict:
        return {
            "levi_par": [[str(e) for e in row] for row in self.levi_par],
            "levi_var": [[str(e) for e in row] for row in self.levi_var],
            "rank0": self.rank0,
            "generic_rank": self.generic_rank,
            "sampled_rank": self.sampled_rank,
        }


def levi(M: Submanifold, seed: int = 0) -> LeviData:
    par = levi_par_matrix(M.Q, M.names)
    var = levi_par_matrix(M.P, M.names.swapped())
    rank0 = rational_rank([[e.constant_term() for e in row] for row in par])
    g = generic_rank(par, M.qspace.names, seed)
    return LeviData(par, var, rank0, g.series_rank, g.sampled_rank)


def levi_cubic_determinant(Q: Series, names: Names) -> Series:
    """L3x3: det of rows (Q_a, Q_b, Q_c), (Q_xa, Q_xb, Q_xc), (Q_ya, Q_yb, Q_yc) for n = m = 2."""
    if names.n != 2 or names.m != 2:
        raise DimensionMismatch("the 3x3 Levi determinant needs n = m = 2")
    cols = names.as_ + (names.b,)
    rows = [[Q.diff(c) for c in cols]]
    for x in names.xs:
        qx = Q.diff(x)
        rows.append([qx.diff(c) for c in cols])
    return series_det(rows)


def check_levi_transpose(M: Submanifold) -> Verdict:
    """Levi_par[i][j] ≡ -P_y · Levi_var[j][i] after pullback; for n = m = 2 also Q_c^2 det Levi_par ≡ det Levi_var."""
    par = levi_par_matrix(M.Q, M.names)
    var = levi_par_matrix(M.P, M.names.swapped())
    py = M.pullback_to_q(M.P.diff(M.names.y))
    parts = []
    for i, x in enumerate(M.names.xs):
        for j, a in enumerate(M.names.as_):
            rhs = -(py * M.pullback_to_q(var[j][i]))
            parts.append(check_equal(f"levi[{x},{a}]", par[i][j], rhs))
    if M.n == 2 and M.m == 2:
        qc = M.Q.diff(M.names.b)
        det_par = series_det(par)
        det_var = M.pullback_to_q(series_det(var))
        parts.append(check_equal("Q_c^2 det Levi_par = det Levi_var", qc * qc * det_par, det_var))
    return combine("levi_transpose", parts)


def levi_determinant_relations(M: Submanifold) -> Verdict:
    """The 3x3 Levi determinant factor relations (n = m = 2)."""
    if M.n != 2 or M.m != 2:
        raise DimensionMismatch("needs n = m = 2")
    names = M.names
    par = levi_par_matrix(M.Q, names)
    var = levi_par_matrix(M.P, names.swapped())
    qc = M.Q.diff(names.b)
    pz = M.P.diff(names.y)
    det_par = series_det(par)
    det_var = series_det(var)
    l3q = levi_cubic_determinant(M.Q, names)
    l3p = levi_cubic_determinant(M.P, names.swapped())
    parts = [
        check_equal("Q_c^2 det Levi_par = det Levi_var", qc * qc * det_par, M.pullback_to_q(det_var)),
        check_equal("L3(Q) = Q_c^3 det Levi_par", l3q, qc * qc * qc * det_par),
        check_equal("L3(P) = P_z^3 det Levi_var", l3p, pz * pz * pz * det_var),
        check_equal("L3(Q) = Q_c^4 L3(P)", l3q, (qc * qc) * (qc * qc) * M.pullback_to_q(l3p)),
    ]
    return combine("levi_determinants", parts)


# --------------------------------------------------------- rank normal form
@dataclass(frozen=True)
class LinearChange:
    """New coordinates x' = Lx x, a' = La a (rows over the old coordinates)."""

    x_matrix: tuple
    a_matrix: tuple

    def to_json(self) -> dict:
        fmt = lambda mat: [[format_rational(v) for v in row] for row in mat]  # noqa: E731
        return {"x": fmt(self.x_matrix), "a": fmt(self.a_matrix)}


def bilinear_part(Q: Series, names: Names) -> list[list[Rational]]:
    """λ_ij = coefficient of x_i a_j in Q."""
    rows = []
    for x in names.xs:
        rows.append([Q.coeff({x: 1, a: 1}) for a in names.as_])
    return rows


def _linear_substitution(Q: Series, names: Sequence[str], inverse: list[list[Rational]]) -> dict[str, Series]:
    space = Q.space
    out = {}
    for i, old in enumerate(names):
        s = Series.zero(space, Q.trunc)
        for j, new in enumerate(names):
            if inverse[i][j]:
                s = s + Series.variable(space, new, Q.trunc).scale(inverse[i][j])
        out[old] = s
    return out


def levi_rank_normal_form(M: Submanifold) -> tuple[int, Submanifold]:
    """Linear changes of x and a making the quadratic part b + x_1 a_1 + ... + x_r a_r."""
    r, M2, _ = levi_rank_normal_form_with_change(M)
    return r, M2


def levi_rank_normal_form_with_change(M: Submanifold) -> tuple[int, Submanifold, LinearChange]:
    """As :func:`levi_rank_normal_form`, also returning the linear change used."""
    if not is_normalized(M):
        raise NotNormalized("Q(0, a, b) ≡ b ≡ Q(x, 0, b) must hold first")
    names = M.names
    lam = bilinear_part(M.Q, names)
    n, m = M.n, M.m
    basis: list[int] = []
    for i in range(n):
        if rational_rank([lam[k] for k in basis + [i]]) > len(basis):
            basis.append(i)
    r = len(basis)
    dependent = [i for i in range(n) if i not in basis]
    # coefficients mu: lam[i] = sum_k mu[i][k] lam[basis[k]]
    mu: dict[int, list[Rational]] = {}
    if r:
        B = [lam[k] for k in basis]
        # pick r independent columns to solve the square system
        cols: list[int] = []
        for j in range(m):
            if rational_rank([[row[c] for c in cols + [j]] for row in B]) > len(cols):
                cols.append(j)
        square = [[B[k][c] for c in cols] for k in range(r)]  # r x r
        inv = rational_inverse(square)
        for i in dependent:
            target = [lam[i][c] for c in cols]
            mu[i] = [sum((target[c] * inv[c][k] for c in range(r)), gmpy2.mpq(0)) for k in range(r)]
    # new a: the r basis rows, completed with standard vectors
    a_rows = [list(lam[k]) for k in basis]
    for j in range(m):
        if len(a_rows) == m:
            break
        e = [gmpy2.mpq(int(j == c)) for c in range(m)]
        if rational_rank(a_rows + [e]) > len(a_rows):
            a_rows.append(e)
    # new x: x'_k = x_{basis k} + sum_dep mu[i][k] x_i, then the dependent x_i
    x_rows = []
    for k, i0 in enumerate(basis):
        row = [gmpy2.mpq(int(c == i0)) for c in range(n)]
        for i in dependent:
            row[i] += mu[i][k]
        x_rows.append(row)
    for i in dependent:
        x_rows.append([gmpy2.mpq(int(c == i)) for c in range(n)])
    subst = {}
    subst.update(_linear_substitution(M.Q, names.xs, rational_inverse(x_rows)))
    subst.update(_linear_substitution(M.Q, names.as_, rational_inverse(a_rows)))
    Q2 = M.Q.substitute(subst, target=M.qspace)
    M2 = Submanifold.from_Q(Q2, n, m, names)
    return r, M2, LinearChange(tuple(map(tuple, x_rows)), tuple(map(tuple, a_rows)))


# ----------------------------------------------------------- (2,2) normal form
@dataclass(frozen=True)
class NormalForm22:
    beta: Rational
    beta_underline: Rational
    submanifold: Submanifold
    absorbed: dict = field(default_factory=dict)
    scaled: bool = False

    def __iter__(self):
        return iter((self.beta, self.beta_underline, self.submanifold))

    def to_json(self) -> dict:
        return {
            "beta": format_rational(self.beta),
            "beta_underline": format_rational(self.beta_underline),
            "absorbed": {k: format_rational(v) for k, v in self.absorbed.items()},
            "scaled": self.scaled,
            "Q": str(self.submanifold.Q),
        }


def _inverse_of_quadratic(space: VarSpace, var: str, other: str, coeffs: tuple, trunc: int) -> Series:
    """Series X with X + c1 X^2 + c2 X*other + c3 other^2 = var (zero constant term)."""
    tmp = "__old"
    s = VarSpace((tmp, other, var))
    u = Series.variable(s, tmp, trunc)
    o = Series.variable(s, other, trunc)
    c1, c2, c3 = coeffs
    R = u + (u * u).scale(c1) + (u * o).scale(c2) + (o * o).scale(c3) - Series.variable(s, var, trunc)
    return implicit_solve(R, tmp).to_space(space)


def normal_form_22(M: Submanifold, scale: bool = False) -> NormalForm22:
    """Reduce a Levi-rank-1 (2,2) model to c + xa + β x²b + β̱ y a² + c O(2) + O(4)."""
    if M.n != 2 or M.m != 2:
        raise DimensionMismatch("normal_form_22 needs n = m = 2")
    if not is_normalized(M):
        M, _ = normalize_coordinates(M)
    r, M = levi_rank_normal_form(M)
    if r != 1:
        raise RankMismatch(f"Levi rank at the origin is {r}, not 1")
    names = M.names
    (x, y), (a, b), c = names.xs, names.as_, names.b
    Q = M.Q
    bad = [
        (exps, coef)
        for exps, coef in Q.part(3).terms()
        if exps[Q.space.index(y)] and exps[Q.space.index(b)]
    ]
    if bad:
        mono = ", ".join(
            "*".join(f"{n}^{e}" if e > 1 else n for n, e in zip(Q.space.names, ex) if e) + f" ({format_rational(cf)})"
            for ex, cf in bad
        )
        raise DegeneracyViolation(f"cubic terms divisible by {y}{b} must vanish for Levi rank 1: {mono}")
    co = lambda **p: Q.coeff(p)  # noqa: E731
    alpha, gamma, delta = co(**{x: 2, a: 1}), co(**{x: 1, y: 1, a: 1}), co(**{y: 2, a: 1})
    alpha_, gamma_, delta_ = co(**{x: 1, a: 2}), co(**{x: 1, a: 1, b: 1}), co(**{x: 1, b: 2})
    absorbed = {
        "alpha": alpha, "gamma": gamma, "delta": delta,
        "alpha_underline": alpha_, "gamma_underline": gamma_, "delta_underline": delta_,
    }
    subst = {}
    if alpha or gamma or delta:
        subst[x] = _inverse_of_quadratic(M.qspace, x, y, (alpha, gamma, delta), M.trunc)
    if alpha_ or gamma_ or delta_:
        subst[a] = _inverse_of_quadratic(M.qspace, a, b, (alpha_, gamma_, delta_), M.trunc)
    if subst:
        Q = Q.substitute(subst, target=M.qspace)
    beta = Q.coeff({x: 2, b: 1})
    beta_ = Q.coeff({y: 1, a: 2})
    scaled = False
    if scale and beta and beta_:
        qs = M.qspace
        Q = Q.substitute(
            {y: Series.variable(qs, y, M.trunc).scale(1 / beta_), b: Series.variable(qs, b, M.trunc).scale(1 / beta)},
            target=qs,
        )
        beta, beta_ = Q.coeff({x: 2, b: 1}), Q.coeff({y: 1, a: 2})
        scaled = True
    M2 = Submanifold.from_Q(Q, 2, 2, names)
    return NormalForm22(beta, beta_, M2, absorbed, scaled)


def levi_rank_at_point(M: Submanifold, point: Mapping[str, object]) -> int:
    """Exact rank of the Levi matrix built from Q at a point with Q_b(p) != 0."""
    if not M.Q.diff(M.names.b).evaluate(point):
        raise ValueError("Q_b vanishes at the probe point")
    return rational_rank(levi_numerators_at(M.Q, M.names, point))


def point_dict(text: str | None, names: Sequence[str]) -> dict[str, Rational]:
    """Parse ``"x=1/2,y=0"``; unspecified coordinates are 0."""
    out = {n: gmpy2.mpq(0) for n in names}
    if not text:
        return out
    for item in text.split(","):
        if not item.strip():
            continue
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in out:
            raise ValueError(f"unknown coordinate {key!r} in point (expected one of {', '.join(names)})")
        out[key] = rational(value.strip())
    return out
