"""Variable-naming schemes for submanifolds of solutions.

A submanifold with ``n`` variables ``x``, one dependent ``y``, ``m``
parameters ``a`` and one dependent parameter ``b`` is written with either

* letters: ``(x; y; a; b)`` when n = m = 1, ``(x, y; z; a, b; c)`` when n = m = 2;
* indexed names: ``(x1..xn; y; a1..am; b)`` (any n, m).
"""

from __future__ import annotations

from dataclasses import dataclass

from .series import VarSpace


@dataclass(frozen=True)
class Names:
    xs: tuple[str, ...]
    y: str
    as_: tuple[str, ...]
    b: str

    @property
    def n(self) -> int:
        return len(self.xs)

    @property
    def m(self) -> int:
        return len(self.as_)

    def qspace(self) -> VarSpace:
        """Coordinates of the graph y = Q(x, a, b)."""
        return VarSpace(
            self.xs + self.as_ + (self.b,),
            ("variable",) * self.n + ("parameter",) * self.m + ("transversal",),
        )

    def pspace(self) -> VarSpace:
        """Coordinates of the graph b = P(a, x, y)."""
        return VarSpace(
            self.as_ + self.xs + (self.y,),
            ("parameter",) * self.m + ("variable",) * self.n + ("transversal",),
        )

    def full(self) -> VarSpace:
        """All coordinates (x, y, a, b), used for implicit equations R = 0."""
        return VarSpace(
            self.xs + (self.y,) + self.as_ + (self.b,),
            ("variable",) * self.n + ("transversal",) + ("parameter",) * self.m + ("transversal",),
        )

    def swapped(self) -> Names:
        """Exchange the roles of variables and parameters."""
        return Names(self.as_, self.b, self.xs, self.y)

    def jet_names(self) -> tuple[str, str, str]:
        """Second-order jet coordinates of the dependent variable along the first x."""
        x1 = self.xs[0]
        return (self.y, f"{self.y}_{x1}", f"{self.y}_{x1}{x1}")

    def all_names(self) -> tuple[str, ...]:
        return self.xs + (self.y,) + self.as_ + (self.b,)


def letter_names(n: int, m: int) -> Names | None:
    if n == m == 1:
        return Names(("x",), "y", ("a",), "b")
    if n == m == 2:
        return Names(("x", "y"), "z", ("a", "b"), "c")
    return None


def indexed_names(n: int, m: int) -> Names:
    return Names(tuple(f"x{i}" for i in range(1, n + 1)), "y", tuple(f"a{j}" for j in range(1, m + 1)), "b")


def standard_names(n: int, m: int, indexed: bool = False) -> Names:
    if n < 1 or m < 1:
        raise ValueError("n and m must be at least 1")
    if not indexed:
        names = letter_names(n, m)
        if names is not None:
            return names
    return indexed_names(n, m)


def infer_names(space: VarSpace, n: int, m: int) -> Names:
    """Recover a naming scheme from a Q-space ordered as (x.., a.., b)."""
    names = space.names
    if len(names) != n + m + 1:
        raise ValueError(f"space {names} does not match n={n}, m={m}")
    xs, as_, b = names[:n], names[n:n + m], names[-1]
    for candidate in (letter_names(n, m), indexed_names(n, m)):
        if candidate and candidate.xs == xs and candidate.as_ == as_ and candidate.b == b:
            return candidate
    used = set(names)
    y = next(c for c in ("y", "z", "w", "y0", "y_") if c not in used)
    return Names(tuple(xs), y, tuple(as_), b)
