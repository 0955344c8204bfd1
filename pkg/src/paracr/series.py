"""Truncated multivariate formal power series with exact rational coefficients.

A :class:`Series` lives in a :class:`VarSpace` (an ordered tuple of variable
names) and stores its homogeneous components separately: ``_g[d]`` maps a
packed exponent key of total degree ``d`` to a nonzero :data:`Rational`.

Every series carries two degrees:

``trunc``
    the nominal cutoff ``D`` of the computation it belongs to;
``reliable``
    the degree through which its coefficients are guaranteed exact.

Operations propagate ``reliable`` as the minimum over their inputs (minus one
per differentiation) and keep only coefficients through the reliable degree,
so every stored coefficient is exact.  An identity "holds" when the difference
of both sides has no stored coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

import gmpy2

from . import _kernels

Rational = type(gmpy2.mpq(0))
"""Exact rational number type (``gmpy2.mpq``: always reduced, positive denominator)."""

BITS = 8
MASK = (1 << BITS) - 1
MAX_TRUNC = 120  # keeps every exponent below 2**BITS
ROLES = ("variable", "parameter", "transversal", "jet")


class SeriesError(Exception):
    """Base class for series-level failures."""


class SpaceMismatch(SeriesError):
    pass


class UnknownVariable(SeriesError):
    pass


class NonUnitDivisor(SeriesError):
    pass


class NonzeroConstantSubstitution(SeriesError):
    pass


class SingularImplicit(SeriesError):
    pass


class NonzeroConstant(SeriesError):
    pass


def rational(value: object) -> Rational:
    """Coerce ints, ``Fraction``, ``"p/q"`` strings and mpq values to :data:`Rational`."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return gmpy2.mpq(value)
    if isinstance(value, Fraction):
        return gmpy2.mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            return gmpy2.mpq(int(num), int(den))
        return gmpy2.mpq(int(text))
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(value: Rational) -> str:
    """``p/q`` (or ``p`` when the denominator is 1)."""
    value = rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True, eq=False)
class VarSpace:
    """Ordered, duplicate-free variable names plus a role tag per variable."""

    names: tuple[str, ...]
    roles: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        roles = tuple(self.roles) if self.roles else ("variable",) * len(names)
        if len(roles) != len(names):
            raise ValueError("one role per variable is required")
        for role in roles:
            if role not in ROLES:
                raise ValueError(f"unknown role {role!r}")
        object.__setattr__(self, "roles", roles)
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VarSpace) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self._index  # type: ignore[attr-defined]

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __repr__(self) -> str:
        return f"VarSpace({', '.join(self.names)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]  # type: ignore[attr-defined]
        except KeyError:
            raise UnknownVariable(f"variable {name!r} not in {self.names}") from None

    def role(self, name: str) -> str:
        return self.roles[self.index(name)]

    def shift(self, name: str) -> int:
        return BITS * self.index(name)

    def pack(self, exps: Sequence[int]) -> int:
        if len(exps) != len(self.names):
            raise ValueError(f"exponent vector {tuple(exps)} has wrong length for {self.names}")
        key = 0
        for i, e in enumerate(exps):
            if e < 0 or e > MASK:
                raise ValueError(f"exponent {e} out of range")
            key |= e << (BITS * i)
        return key

    def unpack(self, key: int) -> tuple[int, ...]:
        return tuple((key >> (BITS * i)) & MASK for i in range(len(self.names)))

    def without(self, *names: str) -> VarSpace:
        for n in names:
            self.index(n)
        keep = [i for i, n in enumerate(self.names) if n not in names]
        return VarSpace(tuple(self.names[i] for i in keep), tuple(self.roles[i] for i in keep))

    def renamed(self, mapping: Mapping[str, str]) -> VarSpace:
        return VarSpace(tuple(mapping.get(n, n) for n in self.names), self.roles)


def _strip(graded: list) -> list:
    while graded and not graded[-1]:
        graded.pop()
    return graded


def _key_degree(key: int) -> int:
    total = 0
    while key:
        total += key & MASK
        key >>= BITS
    return total


class Series:
    """Immutable truncated power series; see the module docstring."""

    __slots__ = ("space", "trunc", "reliable", "_g")

    def __init__(self, space: VarSpace, graded: list, trunc: int, reliable: int | None = None):
        if not 0 <= trunc <= MAX_TRUNC:
            raise ValueError(f"truncation {trunc} outside [0, {MAX_TRUNC}]")
        rel = trunc if reliable is None else min(reliable, trunc)
        rel = max(rel, -1)
        self.space = space
        self.trunc = trunc
        self.reliable = rel
        self._g = _strip(list(graded[: rel + 1]))

    # ------------------------------------------------------------------ build
    @classmethod
    def zero(cls, space: VarSpace, trunc: int, reliable: int | None = None) -> Series:
        return cls(space, [], trunc, reliable)

    @classmethod
    def constant(cls, space: VarSpace, value: object, trunc: int) -> Series:
        v = rational(value)
        return cls(space, [{0: v}] if v else [], trunc)

    @classmethod
    def variable(cls, space: VarSpace, name: str, trunc: int) -> Series:
        if trunc < 1:
            return cls.zero(space, trunc)
        return cls(space, [{}, {1 << space.shift(name): gmpy2.mpq(1)}], trunc)

    @classmethod
    def from_dict(
        cls,
        space: VarSpace,
        terms: Mapping[tuple[int, ...], object],
        trunc: int,
        reliable: int | None = None,
    ) -> Series:
        """Build from ``{exponent tuple: coefficient}``; terms above the cutoff are dropped."""
        graded: list = []
        for exps, coef in terms.items():
            c = rational(coef)
            d = sum(exps)
            if not c or d > trunc:
                continue
            while len(graded) <= d:
                graded.append({})
            key = space.pack(exps)
            graded[d][key] = graded[d].get(key, 0) + c
            if not graded[d][key]:
                del graded[d][key]
        return cls(space, graded, trunc, reliable)

    @classmethod
    def monomial(cls, space: VarSpace, powers: Mapping[str, int], coef: object, trunc: int) -> Series:
        exps = [0] * len(space)
        for name, e in powers.items():
            exps[space.index(name)] += e
        return cls.from_dict(space, {tuple(exps): coef}, trunc)

    # -------------------------------------------------------------- inspect
    def __repr__(self) -> str:
        return f"Series({self}; space={list(self.space.names)}, trunc={self.trunc}, reliable={self.reliable})"

    def __str__(self) -> str:
        parts = []
        for exps, coef in self.terms():
            mono = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.space.names, exps)
                if e
            )
            sign = "-" if coef < 0 else "+"
            mag = abs(coef)
            if not mono:
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_rational(mag)}*{mono}"
            parts.append((sign, body))
        if not parts:
            return "0"
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def terms(self) -> Iterator[tuple[tuple[int, ...], Rational]]:
        """Terms sorted by total degree, then by exponent vector (descending lexicographic)."""
        for d, h in enumerate(self._g):
            for exps, coef in sorted(((self.space.unpack(k), c) for k, c in h.items()), reverse=True):
                yield exps, coef

    def graded(self) -> list:
        """Copy of the homogeneous components (packed keys)."""
        return [dict(h) for h in self._g]

    def __len__(self) -> int:
        return sum(len(h) for h in self._g)

    def is_zero(self) -> bool:
        """True when no coefficient is nonzero through the reliable degree."""
        return not self._g

    def __bool__(self) -> bool:
        return not self.is_zero()

    def first_nonzero(self) -> tuple[tuple[int, ...], Rational] | None:
        for term in self.terms():
            return term
        return None

    def constant_term(self) -> Rational:
        if not self._g:
            return gmpy2.mpq(0)
        return self._g[0].get(0, gmpy2.mpq(0))

    def coeff(self, exps: Sequence[int] | Mapping[str, int]) -> Rational:
        if isinstance(exps, Mapping):
            vec = [0] * len(self.space)
            for name, e in exps.items():
                vec[self.space.index(name)] = e
            exps = vec
        d = sum(exps)
        if d >= len(self._g):
            return gmpy2.mpq(0)
        return self._g[d].get(self.space.pack(exps), gmpy2.mpq(0))

    def valuation(self) -> int | None:
        for d, h in enumerate(self._g):
            if h:
                return d
        return None

    def degree(self) -> int:
        return len(self._g) - 1

    def part(self, d: int) -> Series:
        """Homogeneous component of degree ``d``."""
        graded = [{} for _ in range(d)] + [dict(self._g[d])] if d < len(self._g) else []
        return Series(self.space, graded, self.trunc, self.reliable)

    def variables_used(self) -> set[str]:
        used = 0
        for h in self._g:
            for k in h:
                used |= k
        return {n for i, n in enumerate(self.space.names) if (used >> (BITS * i)) & MASK}

    def __eq__(self, other: object) -> bool:
        """Same space and the same coefficient table (metadata is not compared)."""
        if isinstance(other, (int, Fraction, Rational)):
            other = Series.constant(self.space, other, self.trunc)
        if not isinstance(other, Series):
            return NotImplemented
        return self.space == other.space and self._g == other._g

    __hash__ = None  # type: ignore[assignment]

    def agrees_with(self, other: Series) -> bool:
        """Equality through the common reliable degree."""
        return (self - other).is_zero()

    # ----------------------------------------------------------- arithmetic
    def _coerce(self, other: object) -> Series:
        if isinstance(other, Series):
            if other.space != self.space:
                raise SpaceMismatch(f"{self.space} vs {other.space}")
            return other
        return Series.constant(self.space, other, self.trunc)

    def _meta(self, other: Series, drop: int = 0) -> tuple[int, int]:
        return min(self.trunc, other.trunc), min(self.reliable, other.reliable) - drop

    def __add__(self, other: object) -> Series:
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        trunc, rel = self._meta(o)
        n = max(0, min(rel + 1, max(len(self._g), len(o._g))))
        graded = []
        for d in range(n):
            a = self._g[d] if d < len(self._g) else {}
            b = o._g[d] if d < len(o._g) else {}
            if not b:
                graded.append(a)
                continue
            if not a:
                graded.append(b)
                continue
            h = dict(a)
            for k, v in b.items():
                s = h.get(k)
                if s is None:
                    h[k] = v
                else:
                    s = s + v
                    if s:
                        h[k] = s
                    else:
                        del h[k]
            graded.append(h)
        return Series(self.space, graded, trunc, rel)

    __radd__ = __add__

    def __neg__(self) -> Series:
        return Series(self.space, [{k: -v for k, v in h.items()} for h in self._g], self.trunc, self.reliable)

    def __sub__(self, other: object) -> Series:
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> Series:
        return (-self) + other

    def scale(self, factor: object) -> Series:
        f = rational(factor)
        if not f:
            return Series.zero(self.space, self.trunc, self.reliable)
        return Series(self.space, [{k: v * f for k, v in h.items()} for h in self._g], self.trunc, self.reliable)

    def __mul__(self, other: object) -> Series:
        if not isinstance(other, Series):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        o = self._coerce(other)
        trunc, rel = self._meta(o)
        return Series(self.space, _kernels.mul_graded(self._g, o._g, rel), trunc, rel)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> Series:
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = Series.constant(self.space, 1, self.trunc)
        result = Series(self.space, result._g, self.trunc, self.reliable)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def reciprocal(self) -> Series:
        """Multiplicative inverse of a unit, by the graded recurrence."""
        a0 = self.constant_term()
        if not a0:
            raise NonUnitDivisor("reciprocal of a series with zero constant term")
        inv0 = 1 / a0
        rel = self.reliable
        out: list = [{0: inv0}]
        for d in range(1, rel + 1):
            acc: dict = {}
            for i in range(1, min(d, len(self._g) - 1) + 1):
                hi = self._g[i]
                if not hi:
                    continue
                prod = _kernels.mul_graded([hi], [out[d - i]], 0)
                if prod:
                    for k, v in prod[0].items():
                        s = acc.get(k)
                        acc[k] = v if s is None else s + v
            out.append({k: -v * inv0 for k, v in acc.items() if v})
        return Series(self.space, out, self.trunc, rel)

    def __truediv__(self, other: object) -> Series:
        if isinstance(other, Series):
            return self * self._coerce(other).reciprocal()
        try:
            f = rational(other)
        except TypeError:
            return NotImplemented
        if not f:
            raise NonUnitDivisor("division by zero")
        return self.scale(1 / f)

    def __rtruediv__(self, other: object) -> Series:
        return self._coerce(other) * self.reciprocal()

    # ---------------------------------------------------------- calculus
    def diff(self, name: str) -> Series:
        """Formal partial derivative; reliable degree drops by one."""
        shift = self.space.shift(name)
        return Series(self.space, _kernels.diff_graded(self._g, shift), self.trunc, self.reliable - 1)

    def d(self, *names: str) -> Series:
        """Iterated partial derivative, e.g. ``Q.d("x", "a")`` for Q_xa."""
        out = self
        for name in names:
            out = out.diff(name)
        return out

    def truncate(self, degree: int) -> Series:
        """Forget everything above ``degree`` (reliable becomes at most ``degree``)."""
        return Series(self.space, self._g, self.trunc, min(self.reliable, degree))

    def with_reliable(self, reliable: int) -> Series:
        """Re-tag the reliable degree (callers must justify raising it)."""
        return Series(self.space, self._g, self.trunc, reliable)

    def with_trunc(self, trunc: int) -> Series:
        return Series(self.space, self._g, trunc, min(self.reliable, trunc))

    def evaluate(self, point: Mapping[str, object]) -> Rational:
        """Value of the stored (truncated) polynomial; absent variables are 0."""
        vals = [rational(point.get(n, 0)) for n in self.space.names]
        for n in point:
            self.space.index(n)
        total = gmpy2.mpq(0)
        for h in self._g:
            for key, coef in h.items():
                term = coef
                i = 0
                while key:
                    e = key & MASK
                    if e:
                        term *= vals[i] ** e
                    key >>= BITS
                    i += 1
                total += term
        return total

    def to_space(self, space: VarSpace) -> Series:
        """Re-embed by variable names; every variable actually used must exist in ``space``."""
        if space == self.space:
            return self
        shifts = []
        used = self.variables_used()
        for i, n in enumerate(self.space.names):
            if n in space:
                shifts.append((i, space.shift(n)))
            elif n in used:
                raise UnknownVariable(f"variable {n!r} has no counterpart in {space.names}")
        graded = []
        for h in self._g:
            nh = {}
            for k, v in h.items():
                nk = 0
                for i, s in shifts:
                    nk |= ((k >> (BITS * i)) & MASK) << s
                nh[nk] = v
            graded.append(nh)
        return Series(space, graded, self.trunc, self.reliable)

    def rename(self, mapping: Mapping[str, str], space: VarSpace | None = None) -> Series:
        """Rename variables (``mapping`` old -> new) and embed into ``space``."""
        renamed_space = self.space.renamed(mapping)
        moved = Series(renamed_space, self._g, self.trunc, self.reliable)
        return moved if space is None else moved.to_space(space)

    def substitute(
        self,
        assignments: Mapping[str, Series],
        strict: bool = True,
        target: VarSpace | None = None,
    ) -> Series:
        """Compose: replace each assigned variable by a series in a common target space."""
        return Substituter(assignments, target=target, strict=strict, source=self.space)(self)

    # -------------------------------------------------------- serialisation
    def to_json(self) -> dict:
        return {
            "space": list(self.space.names),
            "trunc": self.trunc,
            "reliable": self.reliable,
            "coeffs": {",".join(map(str, exps)): format_rational(c) for exps, c in self.terms()},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> Series:
        space = VarSpace(tuple(data["space"]))
        terms = {tuple(int(e) for e in k.split(",")) if k else (): v for k, v in data["coeffs"].items()}
        return cls.from_dict(space, terms, int(data["trunc"]), int(data["reliable"]))


class Substituter:
    """Reusable composition map ``{variable: image}`` with a shared power cache.

    Variables of the source series that are not assigned map to the variable of
    the same name in the target space.  Products of image powers are cached by
    their packed source exponent, so composing many series with the same map
    (a Jacobian, a system of equations) multiplies each power only once.
    """

    def __init__(
        self,
        assignments: Mapping[str, Series],
        target: VarSpace | None = None,
        strict: bool = True,
        source: VarSpace | None = None,
    ):
        images = dict(assignments)
        spaces = {img.space for img in images.values()}
        if target is None:
            if len(spaces) > 1:
                raise SpaceMismatch("substituted series live in different spaces")
            target = next(iter(spaces)) if spaces else source
        if target is None:
            raise ValueError("cannot infer the target space of an empty substitution")
        for name, img in images.items():
            if img.space != target:
                raise SpaceMismatch(f"image of {name!r} is not in the target space {target}")
            if strict and img.constant_term():
                raise NonzeroConstantSubstitution(
                    f"image of {name!r} has nonzero constant term {format_rational(img.constant_term())}"
                )
        self.images = images
        self.target = target
        self.strict = strict
        self.image_reliable = min((img.reliable for img in images.values()), default=MAX_TRUNC)
        self.image_trunc = min((img.trunc for img in images.values()), default=MAX_TRUNC)
        self._cache: dict[tuple[VarSpace, int], list] = {}
        self._plans: dict[VarSpace, tuple] = {}

    def _plan(self, space: VarSpace) -> tuple:
        plan = self._plans.get(space)
        if plan is None:
            assigned = []
            free = []
            for i, n in enumerate(space.names):
                if n in self.images:
                    assigned.append((i, n))
                else:
                    free.append((i, self.target.shift(n) if n in self.target else None, n))
            amask = 0
            for i, _ in assigned:
                amask |= MASK << (BITS * i)
            plan = (assigned, free, amask)
            self._plans[space] = plan
        return plan

    def _power(self, space: VarSpace, akey: int, assigned: list, top: int) -> list:
        if akey == 0:
            return [{0: gmpy2.mpq(1)}]
        cached = self._cache.get((space, akey))
        if cached is not None:
            return cached
        for i, name in assigned:
            if (akey >> (BITS * i)) & MASK:
                prev = self._power(space, akey - (1 << (BITS * i)), assigned, top)
                result = _kernels.mul_graded(prev, self.images[name]._g, top)
                break
        self._cache[(space, akey)] = result
        return result

    def __call__(self, s: Series) -> Series:
        assigned, free, amask = self._plan(s.space)
        if self.strict:
            rel = min(s.reliable, self.image_reliable)
        else:
            rel = self.image_reliable
        trunc = min(s.trunc, self.image_trunc)
        top = min(self.image_reliable, MAX_TRUNC)
        groups: dict[int, list] = {}
        for d, h in enumerate(s._g):
            for k, c in h.items():
                akey = k & amask
                fkey = k - akey
                tkey = 0
                fdeg = 0
                for i, shift, name in free:
                    e = (fkey >> (BITS * i)) & MASK
                    if e:
                        if shift is None:
                            raise UnknownVariable(f"variable {name!r} is not assigned and absent from {self.target}")
                        tkey |= e << shift
                        fdeg += e
                poly = groups.get(akey)
                if poly is None:
                    poly = groups[akey] = []
                while len(poly) <= fdeg:
                    poly.append({})
                poly[fdeg][tkey] = poly[fdeg].get(tkey, 0) + c
        out: list = []
        for akey, poly in groups.items():
            if rel < 0:
                break
            power = self._power(s.space, akey, assigned, top)
            prod = _kernels.mul_graded(poly, power, rel)
            while len(out) < len(prod):
                out.append({})
            for d, h in enumerate(prod):
                acc = out[d]
                for k, v in h.items():
                    prev = acc.get(k)
                    if prev is None:
                        acc[k] = v
                    else:
                        v = prev + v
                        if v:
                            acc[k] = v
                        else:
                            del acc[k]
        return Series(self.target, out, trunc, rel)


# ---------------------------------------------------------------- solving
def _rational_det(m: list[list[Rational]]) -> Rational:
    from .linalg import rational_det

    return rational_det(m)


def solve_system(equations: Sequence[Series], unknowns: Sequence[str]) -> list[Series]:
    """Solve ``R_i(..., u_1..u_k) = 0`` for the unknowns as zero-constant series.

    Newton iteration with the full series Jacobian, doubling the correct degree
    per step.  The answer is returned only after ``R_i(solution)`` has been
    verified to vanish through the common reliable degree of the equations.
    """
    if not equations or len(equations) != len(unknowns):
        raise ValueError("need as many equations as unknowns")
    space = equations[0].space
    for eq in equations:
        if eq.space != space:
            raise SpaceMismatch("equations live in different spaces")
    for u in unknowns:
        space.index(u)
    for i, eq in enumerate(equations):
        if eq.constant_term():
            raise NonzeroConstant(f"equation {i} has constant term {format_rational(eq.constant_term())}")
    jac = [[eq.diff(u) for u in unknowns] for eq in equations]
    j0 = [[entry.constant_term() for entry in row] for row in jac]
    if not _rational_det(j0):
        raise SingularImplicit("Jacobian in the solved variables vanishes at the origin")
    target = space.without(*unknowns)
    goal = min(eq.reliable for eq in equations)
    trunc = min(eq.trunc for eq in equations)
    if goal < 0:
        raise SingularImplicit("equations carry no reliable coefficients")
    k = len(unknowns)
    sol = [Series.zero(target, trunc, 0) for _ in range(k)]
    known = 0
    from .linalg import series_inverse

    for _ in range(4 * goal + 8):
        if known >= goal:
            break
        nxt = min(goal, 2 * known + 1)
        images = {u: s.with_reliable(nxt) for u, s in zip(unknowns, sol)}
        sub = Substituter(images, target=target)
        resid = [sub(eq).truncate(nxt) for eq in equations]
        # The residual vanishes through degree ``known``, so the inverse Jacobian
        # only matters through degree nxt - known - 1: higher terms of it only
        # reach degrees above nxt in the correction.
        jprec = max(nxt - known - 1, 0)
        jm = [[sub(entry.truncate(jprec)) for entry in row] for row in jac]
        inv = [[e.with_reliable(nxt) for e in row] for row in series_inverse(jm)]
        new = []
        for i in range(k):
            delta = Series.zero(target, trunc, nxt)
            for j in range(k):
                delta = delta + inv[i][j] * resid[j]
            new.append((sol[i].with_reliable(nxt) - delta).truncate(nxt))
        sol = new
        known = nxt
    sol = [s.with_reliable(goal) for s in sol]
    sub = Substituter(dict(zip(unknowns, sol)), target=target)
    for i, eq in enumerate(equations):
        residual = sub(eq)
        if not residual.is_zero():
            raise SingularImplicit(f"Newton iteration did not converge (equation {i}: {residual.first_nonzero()})")
    return sol


def implicit_solve(R: Series, solve_var: str) -> Series:
    """Series ``S`` (zero constant term) in the other variables with ``R|_{solve_var=S} = 0``."""
    if R.constant_term():
        raise NonzeroConstant(f"R(0) = {format_rational(R.constant_term())} is not zero")
    if not R.diff(solve_var).constant_term():
        raise SingularImplicit(f"dR/d{solve_var} vanishes at the origin")
    return solve_system([R], [solve_var])[0]


def arith(op: str, a: Series, b: Series | None = None) -> Series:
    """Dispatcher mirroring the operation table: add, sub, mul, reciprocal."""
    if op == "reciprocal":
        return a.reciprocal()
    if b is None:
        raise ValueError(f"{op} needs two operands")
    if b.space != a.space:
        raise SpaceMismatch(f"{a.space} vs {b.space}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def zeros_like(s: Series) -> Series:
    return Series.zero(s.space, s.trunc, s.reliable)


def sum_series(items: Iterable[Series], like: Series) -> Series:
    total = zeros_like(like)
    for item in items:
        total = total + item
    return total
