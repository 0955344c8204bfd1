"""Levi-kernel line fields, bracket checks and the initial coframe of the PDE system.

1-forms are coefficient vectors over a fixed basis of differentials and
vector fields are first-order derivations with series coefficients; nothing
here needs a general exterior algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import series_det
from .pde import PdeSystem, delta, jet_pullback, total_derivative
from .series import Series, VarSpace
from .submanifold import DimensionMismatch, Submanifold
from .verdict import FAIL, PASS, Verdict, check_equal, check_zero, combine


class CoframeError(Exception):
    pass


class NonUnitDenominator(CoframeError):
    pass


class PrerequisiteIdentityFailed(CoframeError):
    pass


# ----------------------------------------------------------------- vector fields
@dataclass(frozen=True)
class VectorField:
    """Σ coeffs[v] ∂/∂v on a fixed coordinate space."""

    space: VarSpace
    coeffs: dict

    @classmethod
    def coordinate(cls, space: VarSpace, name: str, trunc: int) -> VectorField:
        return cls(space, {name: Series.constant(space, 1, trunc)})

    def coeff(self, name: str) -> Series:
        c = self.coeffs.get(name)
        if c is None:
            first = next(iter(self.coeffs.values()))
            return Series.zero(self.space, first.trunc)
        return c

    def apply(self, s: Series) -> Series:
        out = Series.zero(self.space, s.trunc)
        for name, c in self.coeffs.items():
            out = out + c * s.diff(name)
        return out

    def __add__(self, other: VectorField) -> VectorField:
        names = [n for n in self.space.names if n in self.coeffs or n in other.coeffs]
        return VectorField(self.space, {n: self.coeff(n) + other.coeff(n) for n in names})

    def times(self, f: Series) -> VectorField:
        return VectorField(self.space, {n: f * c for n, c in self.coeffs.items()})

    def bracket(self, other: VectorField) -> VectorField:
        """[U, V]^i = U(V^i) − V(U^i)."""
        names = self.space.names
        return VectorField(
            self.space, {n: self.apply(other.coeff(n)) - other.apply(self.coeff(n)) for n in names}
        )


# -------------------------------------------------------------- kernel quotients
@dataclass(frozen=True)
class KernelQuotients:
    """k on the (a, b, x, y, z) chart and l on the (x, y, a, b, c) chart."""

    k: Series
    l: Series
    k_q_side: Series
    check: Verdict

    def __iter__(self):
        return iter((self.k, self.l))


def kernel_quotients(M: Submanifold) -> KernelQuotients:
    """k = −(−P_z P_ay + P_y P_az)/(−P_z P_ax + P_x P_az), l = −(−Q_c Q_xb + Q_b Q_xc)/(−Q_c Q_xa + Q_a Q_xc)."""
    if M.n != 2 or M.m != 2:
        raise DimensionMismatch("kernel quotients are defined for n = m = 2")
    (x, y), (a, b), c, z = M.names.xs, M.names.as_, M.names.b, M.names.y
    P, Q = M.P, M.Q
    pa, pz = P.diff(a), P.diff(z)
    den_p = -(pz * pa.diff(x)) + P.diff(x) * pa.diff(z)
    num_p = -(pz * pa.diff(y)) + P.diff(y) * pa.diff(z)
    qx, qc = Q.diff(x), Q.diff(c)
    den_q = -(qc * qx.diff(a)) + Q.diff(a) * qx.diff(c)
    num_q = -(qc * qx.diff(b)) + Q.diff(b) * qx.diff(c)
    if not den_p.constant_term() or not den_q.constant_term():
        raise NonUnitDenominator("the (1,1) Levi entry vanishes at the origin")
    k = -(num_p * den_p.reciprocal())
    l = -(num_q * den_q.reciprocal())
    qy = Q.diff(y)
    k_q = -((-(qc * qy.diff(a)) + Q.diff(a) * qy.diff(c)) * den_q.reciprocal())
    check = check_equal("k agrees with its Q-side expression", M.pullback_to_q(k), k_q)
    return KernelQuotients(k, l, k_q, check)


def _p_chart_fields(M: Submanifold):
    (x, y), z = M.names.xs, M.names.y
    P, sp, t = M.P, M.pspace, M.trunc
    inv = P.diff(z).reciprocal()
    Hx = VectorField(sp, {x: Series.constant(sp, 1, t), z: -(P.diff(x) * inv)})
    Hy = VectorField(sp, {y: Series.constant(sp, 1, t), z: -(P.diff(y) * inv)})
    return Hx, Hy


def _q_chart_fields(M: Submanifold):
    (a, b), c = M.names.as_, M.names.b
    Q, sq, t = M.Q, M.qspace, M.trunc
    inv = Q.diff(c).reciprocal()
    La = VectorField(sq, {a: Series.constant(sq, 1, t), c: -(Q.diff(a) * inv)})
    Lb = VectorField(sq, {b: Series.constant(sq, 1, t), c: -(Q.diff(b) * inv)})
    return La, Lb


def transversal_p(M: Submanifold, v: VectorField) -> Series:
    """Component of v along ∂z modulo span(H_x, H_y, ∂a, ∂b) in the P-chart."""
    (x, y), z = M.names.xs, M.names.y
    P = M.P
    return v.coeff(z) + (v.coeff(x) * P.diff(x) + v.coeff(y) * P.diff(y)) * P.diff(z).reciprocal()


def transversal_q(M: Submanifold, v: VectorField) -> Series:
    """Component of v along ∂c modulo span(∂x, ∂y, L_a, L_b) in the Q-chart."""
    (a, b), c = M.names.as_, M.names.b
    Q = M.Q
    return v.coeff(c) + (v.coeff(a) * Q.diff(a) + v.coeff(b) * Q.diff(b)) * Q.diff(c).reciprocal()


def check_kernel_brackets(M: Submanifold) -> Verdict:
    """The four kernel line fields stay in the contact distribution under the coordinate brackets."""
    kq = kernel_quotients(M)
    (x, y), (a, b) = M.names.xs, M.names.as_
    Hx, Hy = _p_chart_fields(M)
    K = Hx.times(kq.k) + Hy
    La, Lb = _q_chart_fields(M)
    L = La.times(kq.l) + Lb
    parts = []
    for name in (a, b):
        d = VectorField.coordinate(M.pspace, name, M.trunc)
        parts.append(check_zero(f"[d/d{name}, K_ker]", transversal_p(M, d.bracket(K))))
    for name in (x, y):
        d = VectorField.coordinate(M.qspace, name, M.trunc)
        parts.append(check_zero(f"[d/d{name}, L_ker]", transversal_q(M, d.bracket(L))))
    return combine("kernel_brackets", parts)


# ------------------------------------------------------------- initial coframe
FORMS = ("lambda", "mu1", "mu2", "nu1", "nu2")


def group_mask(triangular: bool) -> list[list[str]]:
    """Admissible group matrix acting on (λ, μ₁, μ₂, ν₁, ν₂); ``"0"`` marks forced zeros."""
    return [
        ["a", "0", "0", "0", "0"],
        ["b1", "f1", "0", "0", "0"],
        ["b2", "f2", "f3", "0", "0"],
        ["c1", "0", "0", "h1", "0" if triangular else "h4"],
        ["c2", "0", "0", "h2", "h3"],
    ]


@dataclass(frozen=True)
class CoframeData:
    k: Series | None
    l: Series | None
    contact_forms: list
    contact_det: Verdict
    nu1_dy: Series
    triangular: bool
    mask: list

    def to_json(self) -> dict:
        return {
            "k": None if self.k is None else str(self.k),
            "l": None if self.l is None else str(self.l),
            "contact_forms": [[str(e) for e in row] for row in self.contact_forms],
            "contact_det": self.contact_det.to_json(),
            "nu1": {"dx": "1", "dy": str(self.nu1_dy)},
            "nu2": {"dy": "1"},
            "triangular": self.triangular,
            "group_mask": self.mask,
        }


def contact_matrix(M: Submanifold) -> list[list[Series]]:
    x = M.names.xs[0]
    cols = M.names.as_ + (M.names.b,)
    qx = M.Q.diff(x)
    return [[g.diff(c) for c in cols] for g in (M.Q, qx, qx.diff(x))]


def initial_coframe(M: Submanifold, S: PdeSystem) -> CoframeData:
    """Contact forms in (da, db, dc), ν₁ = dx + F_zx dy, ν₂ = dy and the group pattern."""
    z, zx, zxx = S.jet_vars
    if check_zero("F_zxx", S.F.diff(zxx)).status != PASS:
        raise PrerequisiteIdentityFailed("F depends on z_xx (Levi rank > 1); the rank-one coframe does not apply")
    rows = contact_matrix(M)
    det_check = check_equal("det(contact forms) = Delta", series_det(rows), delta(M))
    try:
        kq = kernel_quotients(M)
        k, l = kq.k, kq.l
    except NonUnitDenominator:
        k = l = None
    F_zx = S.F.diff(zx)
    triangular = bool(F_zx.diff(zx).constant_term())
    return CoframeData(k, l, rows, det_check, F_zx, triangular, group_mask(triangular))


# ------------------------------------------------------------- contact transfer
@dataclass(frozen=True)
class ContactTransfer:
    """Pullbacks of λ, μ₁, μ₂ over the basis (dx, dy, da, db, dc) and the kernel-form check."""

    forms: dict
    verdict: Verdict
    degenerate: bool

    def to_json(self) -> dict:
        return {
            "forms": {k: [str(e) for e in v] for k, v in self.forms.items()},
            "verdict": self.verdict.to_json(),
            "degenerate": self.degenerate,
        }


def check_contact_transfer(M: Submanifold, S: PdeSystem | None = None) -> ContactTransfer:
    names = M.names
    (x, y), (a, b), c = names.xs, names.as_, names.b
    Q = M.Q
    rows = contact_matrix(M)
    zero = Series.zero(M.qspace, M.trunc)
    parts = []
    forms = {}
    if S is not None:
        dxF = total_derivative("Dx", S.F, S)
        dxxF = total_derivative("Dx", dxF, S)
        qx = Q.diff(x)
        qxx = qx.diff(x)
        dy_parts = [
            Q.diff(y) - jet_pullback(M, S, S.F),
            qx.diff(y) - jet_pullback(M, S, dxF),
            qxx.diff(y) - jet_pullback(M, S, dxxF),
        ]
        dx_parts = [zero, zero, qxx.diff(x) - jet_pullback(M, S, S.H)]
        for name, row, ddx, ddy in zip(FORMS[:3], rows, dx_parts, dy_parts):
            parts.append(check_zero(f"{name}: dx cancels", ddx))
            parts.append(check_zero(f"{name}: dy cancels", ddy))
            forms[name] = [ddx, ddy] + row
    else:
        for name, row in zip(FORMS[:3], rows):
            forms[name] = [zero, zero] + row
    qa, qb, qc = rows[0]
    xa, xb, xc = rows[1]
    ratio = xc * qc.reciprocal()
    u = xa - ratio * qa
    v = xb - ratio * qb
    forms["mu1 - (Q_xc/Q_c) lambda"] = [zero, zero, u, v, xc - ratio * qc]
    degenerate = not u.constant_term()
    if degenerate:
        parts.append(
            Verdict("mu1 - (Q_xc/Q_c) lambda is a unit multiple of (da - l db)", FAIL, u.reliable,
                    "degenerate: the da-coefficient vanishes at the origin")
        )
    else:
        l = -((-(qc * xb) + qb * xc) * (-(qc * xa) + qa * xc).reciprocal())
        parts.append(check_equal("db-coefficient = -l * da-coefficient", v, -(l * u)))
    return ContactTransfer(forms, combine("contact_transfer", parts), degenerate)
