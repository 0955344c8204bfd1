"""Pass / fail / inconclusive verdicts for series identities."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .series import Series, format_rational

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"

MIN_RELIABLE = 3
"""Identities checked below this reliable degree are reported as inconclusive."""


@dataclass(frozen=True)
class Verdict:
    name: str
    status: str
    reliable: int
    detail: str = ""
    parts: tuple["Verdict", ...] = field(default=())

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def line(self) -> str:
        extra = f" — {self.detail}" if self.detail else ""
        return f"[{self.status.upper()}] {self.name} (reliable degree {self.reliable}){extra}"

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status, "reliable": self.reliable}
        if self.detail:
            out["detail"] = self.detail
        if self.status == INCONCLUSIVE:
            out["reason"] = f"reliable degree {self.reliable} < {MIN_RELIABLE}"
        return out


def describe_term(series: Series, term) -> str:
    exps, coef = term
    mono = "*".join(f"{n}^{e}" if e > 1 else n for n, e in zip(series.space.names, exps) if e) or "1"
    return f"coefficient of {mono} is {format_rational(coef)}"


def check_zero(name: str, series: Series, min_reliable: int = MIN_RELIABLE) -> Verdict:
    """Verdict for ``series ≡ 0`` through its reliable degree."""
    if series.reliable < min_reliable:
        first = series.first_nonzero()
        if first is not None:
            return Verdict(name, FAIL, series.reliable, describe_term(series, first))
        return Verdict(name, INCONCLUSIVE, series.reliable, f"reliable degree {series.reliable} < {min_reliable}")
    first = series.first_nonzero()
    if first is None:
        return Verdict(name, PASS, series.reliable)
    return Verdict(name, FAIL, series.reliable, describe_term(series, first))


def check_equal(name: str, lhs: Series, rhs: Series, min_reliable: int = MIN_RELIABLE) -> Verdict:
    return check_zero(name, lhs - rhs, min_reliable)


def combine(name: str, parts: Iterable[Verdict], detail: str = "") -> Verdict:
    parts = tuple(parts)
    if not parts:
        return Verdict(name, INCONCLUSIVE, -1, detail or "nothing to check")
    if any(p.status == FAIL for p in parts):
        status = FAIL
        failing = next(p for p in parts if p.status == FAIL)
        detail = detail or f"{failing.name}: {failing.detail}"
    elif any(p.status == INCONCLUSIVE for p in parts):
        status = INCONCLUSIVE
    else:
        status = PASS
    return Verdict(name, status, min(p.reliable for p in parts), detail, parts)
