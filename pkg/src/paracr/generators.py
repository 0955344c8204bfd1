"""Seeded random models for the identity fuzzer and the property tests."""

from __future__ import annotations

import itertools
import random

import gmpy2

from .jets import second_jet_determinant
from .naming import Names, standard_names
from .series import Series, VarSpace
from .submanifold import Submanifold

GOLDEN = "c + (a*x + b*x^2 + a^2*y)/(1 - 4*b*y)"
CUBIC_PAR = "c + x*a + x^2*b"
CUBIC_VAR = "c + a*x + a^2*y"


def _coef(rng: random.Random, spread: int = 3) -> gmpy2.mpq:
    return gmpy2.mpq(rng.randint(-spread, spread), rng.randint(1, 2))


def random_polynomial(
    rng: random.Random, space: VarSpace, trunc: int, min_deg: int = 1, max_deg: int = 4, density: float = 0.35
) -> Series:
    terms = {}
    for exps in itertools.product(range(max_deg + 1), repeat=len(space)):
        if min_deg <= sum(exps) <= max_deg and rng.random() < density:
            c = _coef(rng)
            if c:
                terms[exps] = c
    return Series.from_dict(space, terms, trunc)


def _random_graph(rng: random.Random, names: Names, trunc: int, max_deg: int) -> Series:
    while True:
        Q = random_polynomial(rng, names.qspace(), trunc, 1, max_deg)
        if Q.coeff({names.b: 1}):
            return Q


def random_model(rng: random.Random, n: int, m: int, trunc: int = 8, max_deg: int = 4) -> Submanifold:
    """Q = u*b + (random polynomial of degree 1..max_deg) with u a nonzero rational."""
    names = standard_names(n, m)
    return Submanifold.from_Q(_random_graph(rng, names, trunc, max_deg), n, m, names)


def random_delta_unit_model(rng: random.Random, trunc: int = 8, max_deg: int = 4) -> Submanifold:
    """A random (2,2) model whose second-order parameter-jet determinant is a unit."""
    names = standard_names(2, 2)
    cols = names.as_ + (names.b,)
    while True:
        Q = _random_graph(rng, names, trunc, max_deg)
        # only the constant term of the determinant matters, so test it on the cubic part
        low = Q.truncate(3)
        if second_jet_determinant(low, names.xs[0], cols).constant_term():
            return Submanifold.from_Q(Q, 2, 2, names)


def _near_identity(rng: random.Random, space: VarSpace, name: str, trunc: int, density: float = 0.3) -> Series:
    return Series.variable(space, name, trunc) + random_polynomial(rng, space, trunc, 2, 2, density)


def random_rank_one_model(rng: random.Random, trunc: int = 8, base: str = GOLDEN) -> Submanifold:
    """An exactly Levi-rank-1 model: ``base`` moved by random near-identity point changes.

    Changes (x, y) -> (f, g), (a, b, c) -> φ and z -> h(x, y, z) preserve the
    geometry, so Levi rank 1 and both second-order determinants at 0 persist.
    """
    from .parser import parse_expression

    names = standard_names(2, 2)
    qs = names.qspace()
    Q0 = parse_expression(base, qs, trunc)
    while True:
        xy = VarSpace(names.xs)
        subst = {v: _near_identity(rng, xy, v, trunc).to_space(qs) for v in names.xs}
        for v in names.as_ + (names.b,):
            subst[v] = _near_identity(rng, VarSpace(names.as_ + (names.b,)), v, trunc).to_space(qs)
        Q1 = Q0.substitute(subst, target=qs)
        xyz = VarSpace(names.xs + (names.y,))
        h = _near_identity(rng, xyz, names.y, trunc)
        Q2 = h.substitute({names.y: Q1}, target=qs)
        if Q2.diff(names.b).constant_term():
            return Submanifold.from_Q(Q2, 2, 2, names)


def named_model(name: str, trunc: int = 8) -> Submanifold:
    from .parser import parse_expression

    text = {"golden": GOLDEN, "cubic_par": CUBIC_PAR, "cubic_var": CUBIC_VAR}[name]
    names: Names = standard_names(2, 2)
    return Submanifold.from_Q(parse_expression(text, names.qspace(), trunc), 2, 2, names)
