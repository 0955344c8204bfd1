from __future__ import annotations

import gmpy2
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from paracr.parser import parse_expression, parse_model
from paracr.series import Series, VarSpace
from paracr.submanifold import Submanifold

settings.register_profile(
    "default",
    max_examples=50,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

GOLDEN = "c + (a*x + b*x^2 + a^2*y)/(1 - 4*b*y)"


def model(expr: str, n: int = 2, m: int = 2, trunc: int = 8) -> Submanifold:
    return Submanifold.from_model(parse_model(f"n = {n}\nm = {m}\ntruncation = {trunc}\nQ = {expr}\n"))


def series(expr: str, names: str, trunc: int = 8) -> Series:
    return parse_expression(expr, VarSpace(tuple(names.split())), trunc)


def q(v) -> gmpy2.mpq:
    return gmpy2.mpq(v)


rationals = st.builds(lambda p, r: gmpy2.mpq(p, r), st.integers(-5, 5), st.integers(1, 4))


@st.composite
def polynomials(draw, space: VarSpace, trunc: int = 5, max_deg: int = 3, min_deg: int = 0, max_terms: int = 6):
    """Random sparse polynomial series in ``space``."""
    k = len(space)

    @st.composite
    def exps(draw_e):
        total = draw_e(st.integers(min_deg, max_deg))
        out = [0] * k
        for _ in range(total):
            out[draw_e(st.integers(0, k - 1))] += 1
        return tuple(out)

    terms = draw(st.dictionaries(exps(), rationals, max_size=max_terms))
    return Series.from_dict(space, terms, trunc)
