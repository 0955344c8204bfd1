"""Jet maps of the two foliations, nondegeneracy orders and the (2,2) case split."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Mapping, Sequence

from .linalg import rational_rank, series_det, series_generic_rank
from .series import Rational, Series, VarSpace, format_rational
from .submanifold import DimensionMismatch, Submanifold, levi

PAR = "par"
VAR = "var"


class JetError(Exception):
    pass


class OrderTooHighForTruncation(JetError):
    pass


class NotRankOne(JetError):
    pass


class SingularJacobian(JetError):
    pass


def _side(M: Submanifold, side: str) -> Submanifold:
    if side == PAR:
        return M
    if side == VAR:
        return M.swap()
    raise ValueError(f"side must be {PAR!r} or {VAR!r}, got {side!r}")


def multi_indices(n: int, order: int) -> list[tuple[int, ...]]:
    """All exponents β in N^n with |β| <= order, sorted by |β| then lexicographically (descending)."""
    out = []
    for total in range(order + 1):
        level = [b for b in itertools.product(range(total + 1), repeat=n) if sum(b) == total]
        out.extend(sorted(level, reverse=True))
    return out


def jet_jacobian(M: Submanifold, side: str, order: int) -> list[list[Series]]:
    """Rows ∂_x^β Q differentiated in (a_1..a_m, b), for |β| <= order (Q replaced by P for side=var)."""
    S = _side(M, side)
    Q = S.Q
    if order < 0:
        raise ValueError("order must be nonnegative")
    if order + 1 > Q.reliable:
        raise OrderTooHighForTruncation(
            f"jet order {order} needs {order + 1} exact degrees; the series is reliable through degree {Q.reliable}"
        )
    names = S.names
    cols = names.as_ + (names.b,)
    cache: dict[tuple[int, ...], Series] = {(0,) * S.n: Q}

    def deriv(beta: tuple[int, ...]) -> Series:
        if beta not in cache:
            i = next(k for k, e in enumerate(beta) if e)
            lower = beta[:i] + (beta[i] - 1,) + beta[i + 1:]
            cache[beta] = deriv(lower).diff(names.xs[i])
        return cache[beta]

    return [[deriv(beta).diff(c) for c in cols] for beta in multi_indices(S.n, order)]


def _restrict(point: Mapping[str, object] | None, space: VarSpace) -> dict[str, object]:
    return {k: v for k, v in (point or {}).items() if k in space}


def jet_jacobian_rank(M: Submanifold, side: str, order: int, point: Mapping[str, object] | None = None) -> int:
    """Rank of the order-``order`` jet map of the leaves at ``point`` (identity block included)."""
    S = _side(M, side)
    rows = jet_jacobian(M, side, order)
    p = _restrict(point, S.qspace)
    return S.n + rational_rank([[e.evaluate(p) for e in row] for row in rows])


def generic_jet_rank(M: Submanifold, side: str, order: int) -> int:
    """Generic rank of the jet map: size of the largest minor that is a nonzero series."""
    S = _side(M, side)
    rank, _ = series_generic_rank(jet_jacobian(M, side, order))
    return S.n + rank


def nondeg_order(
    M: Submanifold, side: str, point: Mapping[str, object] | None = None, k_max: int | None = None
) -> int | None:
    """Smallest order >= 1 at which the jet map has full rank n + 1 + m, or None up to ``k_max``."""
    reliable = _side(M, side).Q.reliable
    if k_max is None:
        k_max = reliable - 1
    if k_max + 1 > reliable:
        raise OrderTooHighForTruncation(f"search bound {k_max} needs reliable degree {k_max + 1}, have {reliable}")
    full = M.n + 1 + M.m
    for k in range(1, k_max + 1):
        if jet_jacobian_rank(M, side, k, point) == full:
            return k
    return None


def delta_and_box(M: Submanifold) -> tuple[Series, Series]:
    """The two 3x3 second-order jet determinants: Δ from Q (x-derivatives), □ from P (a-derivatives)."""
    if M.n != 2 or M.m != 2:
        raise DimensionMismatch("Δ and □ are defined for n = m = 2")
    return second_jet_determinant(M.Q, M.names.xs[0], M.names.as_ + (M.names.b,)), second_jet_determinant(
        M.P, M.names.as_[0], M.names.xs + (M.names.y,)
    )


def second_jet_determinant(f: Series, along: str, cols: Sequence[str]) -> Series:
    """det of rows (f_u), (f_{t u}), (f_{t t u}) over u in ``cols``, with t = ``along``."""
    f1 = f.diff(along)
    f2 = f1.diff(along)
    return series_det([[g.diff(c) for c in cols] for g in (f, f1, f2)])


CASE_LABELS = {(4, 4): "I", (4, 5): "II", (5, 4): "III", (5, 5): "IV"}


def classify_case(M: Submanifold) -> str:
    """Case label from the generic ranks of the second-order jet maps on both sides."""
    if M.n != 2 or M.m != 2:
        raise DimensionMismatch("the case split is defined for n = m = 2")
    g = levi(M).generic_rank
    if g != 1:
        raise NotRankOne(f"Levi generic rank is {g}, not 1")
    ranks = (generic_jet_rank(M, PAR, 2), generic_jet_rank(M, VAR, 2))
    try:
        return CASE_LABELS[ranks]
    except KeyError:
        raise NotRankOne(f"unexpected second-order jet ranks {ranks} for a Levi rank 1 model") from None


def aut_dim_bound(n: int, m: int, k: int, l: int) -> int:
    """(n+1) C(n+1+2k+2l, n+1) + (m+1) C(m+1+2k+2l, m+1)."""
    for name, v in (("n", n), ("m", m), ("k", k), ("l", l)):
        if not isinstance(v, int) or v < 1:
            raise ValueError(f"{name} must be an integer >= 1, got {v!r}")
    s = 2 * k + 2 * l
    return (n + 1) * comb(n + 1 + s, n + 1) + (m + 1) * comb(m + 1 + s, m + 1)


@dataclass(frozen=True)
class NondegReport:
    k_par: int | None
    l_var: int | None
    probe_point: dict
    k_max_searched: int
    delta0: Rational | None
    box0: Rational | None
    case_label: str | None

    def to_json(self) -> dict:
        fmt = lambda v: None if v is None else format_rational(v)  # noqa: E731
        return {
            "k_par": self.k_par,
            "l_var": self.l_var,
            "probe_point": {k: format_rational(v) for k, v in self.probe_point.items()},
            "k_max_searched": self.k_max_searched,
            "delta0": fmt(self.delta0),
            "box0": fmt(self.box0),
            "case_label": self.case_label,
        }


def nondeg_report(M: Submanifold, point: Mapping[str, object] | None = None, k_max: int | None = None) -> NondegReport:
    reliable = min(M.Q.reliable, M.P.reliable)
    k_max = reliable - 1 if k_max is None else k_max
    probe = dict(point or {})
    k_par = nondeg_order(M, PAR, probe, k_max)
    l_var = nondeg_order(M, VAR, probe, k_max)
    delta0 = box0 = case = None
    if M.n == 2 and M.m == 2:
        delta, box = delta_and_box(M)
        delta0, box0 = delta.constant_term(), box.constant_term()
        try:
            case = classify_case(M)
        except NotRankOne:
            case = None
    return NondegReport(k_par, l_var, probe, k_max, delta0, box0, case)


# ------------------------------------------------------------ 1-D prolongation
@dataclass(frozen=True)
class JetTransform:
    """Images of the jets under (x, y) -> (f, g); ``jets[k-1]`` is the new k-th derivative."""

    space: VarSpace
    f: Series
    g: Series
    jets: tuple[Series, ...]


def jet_space_1d(x: str, y: str, order: int) -> VarSpace:
    return VarSpace((x, y) + tuple(f"{y}_{x * k}" for k in range(1, order + 1)))


def prolong_1d(f: Series, g: Series, order: int) -> JetTransform:
    """Prolong a point transformation of the (x, y)-plane to jets of order <= 3."""
    if f.space != g.space or len(f.space) != 2:
        raise ValueError("f and g must be series in the same two variables (x, y)")
    if not 1 <= order <= 3:
        raise ValueError("order must be 1, 2 or 3")
    x, y = f.space.names
    jac = [[f.diff(x).constant_term(), f.diff(y).constant_term()], [g.diff(x).constant_term(), g.diff(y).constant_term()]]
    if rational_rank(jac) < 2:
        raise SingularJacobian("the linear part of (f, g) is not invertible")
    if not jac[0][0]:
        raise SingularJacobian("f_x(0) = 0: the prolonged map is not defined at the zero jet")
    space = jet_space_1d(x, y, order)
    F, G = f.to_space(space), g.to_space(space)
    chain = space.names[1:]

    def total(s: Series) -> Series:
        out = s.diff(x)
        for lo, hi in zip(chain, chain[1:]):
            out = out + Series.variable(space, hi, s.trunc) * s.diff(lo)
        return out

    inv = total(F).reciprocal()
    jets = [total(G) * inv]
    while len(jets) < order:
        jets.append(total(jets[-1]) * inv)
    return JetTransform(space, F, G, tuple(jets))
