from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paracr.generators import CUBIC_PAR, CUBIC_VAR, GOLDEN, random_model, random_rank_one_model
from paracr.jets import delta_and_box
from paracr.naming import standard_names
from paracr.parser import parse_expression
from paracr.series import Series, SingularImplicit
from paracr.submanifold import (
    DegeneracyViolation,
    NotNormalized,
    RankMismatch,
    Submanifold,
    bilinear_part,
    check_levi_transpose,
    is_normalized,
    levi,
    levi_rank_normal_form,
    normal_form_22,
    normalize_coordinates,
    point_dict,
)

from conftest import model, series


def test_from_q_linear():
    M = model("b + x*a", 1, 1)
    assert M.P == series("y - a*x", "a x y")


def test_from_q_cubic():
    M = model("c + x*a + x^2*b")
    assert M.P == series("z - a*x - b*x^2", "a b x y z")


def test_from_q_geometric_series():
    M = model("b + x*b", 1, 1)
    # oracle: P = y/(1 + x) = y * sum (-x)^k
    for k in range(8):
        assert M.P.coeff({"x": k, "y": 1}) == (-1) ** k
    assert all(sum(e) == e[2] + e[1] and e[2] == 1 for e, _ in M.P.terms())


def test_from_q_singular():
    names = standard_names(1, 1)
    with pytest.raises(SingularImplicit):
        Submanifold.from_Q(parse_expression("x*a + b^2", names.qspace(), 6), 1, 1)


def test_swap_exchanges_graphs():
    M = model(GOLDEN)
    S = M.swap()
    assert S.Q == M.P and S.P == M.Q
    assert S.swap() == M


def test_normalize_fixed_point():
    M = model("b + x*a", 1, 1)
    M2, rec = normalize_coordinates(M)
    assert rec.identity and M2.Q == M.Q


@pytest.mark.parametrize("expr", ["b + b^2 + x*a", "b + x*a + a^2", "b + x*a + x^2 + a*b^2 + x^2*b"])
def test_normalize_post_conditions(expr):
    M = model(expr, 1, 1)
    M2, rec = normalize_coordinates(M)
    assert is_normalized(M2)
    assert not rec.identity
    # P side is normalized too
    sp = M2.pspace
    y = Series.variable(sp, "y", M2.trunc)
    zero = Series.zero(sp, M2.trunc)
    assert M2.P.substitute({"a": zero}, target=sp) == y
    assert M2.P.substitute({"x": zero}, target=sp) == y


def test_normalize_absorbs_pure_parameter_term():
    M2, _ = normalize_coordinates(model("b + x*a + a^2", 1, 1))
    assert M2.Q.coeff({"a": 2}) == 0
    assert M2.Q.coeff({"x": 1, "a": 1}) == 1


def test_levi_flat():
    L = levi(model("b", 1, 1))
    assert L.rank0 == 0 and L.generic_rank == 0
    assert all(e.is_zero() for row in L.levi_par for e in row)
    assert all(e.is_zero() for row in L.levi_var for e in row)


def test_levi_linear():
    L = levi(model("b + x*a", 1, 1))
    assert str(L.levi_par[0][0]) == "-1" and L.rank0 == 1


def test_levi_cubic():
    L = levi(model("c + x*a + x^2*b"))
    assert [[str(e) for e in row] for row in L.levi_par] == [["-1", "-2*x"], ["0", "0"]]
    assert L.rank0 == 1 and L.generic_rank == 1 and L.sampled_rank == 1


def test_levi_rank_two():
    L = levi(model("c + x*a + y*b"))
    assert L.rank0 == 2 and L.generic_rank == 2


def test_transpose_examples():
    assert check_levi_transpose(model("b + x*a", 1, 1)).ok
    assert check_levi_transpose(model("b", 1, 1)).ok
    assert check_levi_transpose(model(GOLDEN)).ok


def test_rank_normal_form_scaling():
    r, M2 = levi_rank_normal_form(model("b + 2*x*a", 1, 1))
    assert r == 1
    assert M2.Q == series("b + x*a", "x a b")


def test_rank_normal_form_flat():
    M = model("b", 1, 1)
    r, M2 = levi_rank_normal_form(M)
    assert r == 0 and M2.Q == M.Q


def test_rank_normal_form_rank_one_lambda():
    r, M2 = levi_rank_normal_form(model("c + x*a + x*b + y*a + y*b"))
    assert r == 1
    assert bilinear_part(M2.Q, M2.names) == [[1, 0], [0, 0]]
    assert str(M2.Q.part(2)) == "x*a"


def test_rank_normal_form_requires_normalized():
    with pytest.raises(NotNormalized):
        levi_rank_normal_form(model("b + x*a + a^2", 1, 1))


@pytest.mark.parametrize(
    "expr, expected",
    [(CUBIC_PAR, (1, 0)), (CUBIC_VAR, (0, 1)), (GOLDEN, (1, 1)), ("c + x*a", (0, 0))],
)
def test_normal_form_22(expr, expected):
    beta, beta_u, M2 = normal_form_22(model(expr))
    assert (beta, beta_u) == expected
    assert str(M2.Q.part(2)) == "x*a"


def test_normal_form_22_scaling():
    nf = normal_form_22(model("c + x*a + 3*x^2*b - 2*y*a^2"), scale=True)
    assert (nf.beta, nf.beta_underline) == (1, 1)


def test_normal_form_22_errors():
    with pytest.raises(RankMismatch):
        normal_form_22(model("c + x*a + y*b"))
    with pytest.raises(DegeneracyViolation):
        normal_form_22(model("c + x*a + y*b*x"))


def test_point_dict():
    assert point_dict("x=1/2, y=0", ("x", "y")) == {"x": 1 / 2, "y": 0}
    with pytest.raises(ValueError):
        point_dict("w=1", ("x", "y"))


# ----------------------------------------------------------- properties
DIMS = [(1, 1), (2, 2), (2, 1)]


@settings(max_examples=50)
@given(st.sampled_from(DIMS), st.integers(0, 2**32))
def test_functional_relations_and_transpose(dims, seed):
    M = random_model(random.Random(seed), *dims, trunc=5)
    assert M.functional_relations().ok
    names = M.names
    prod = M.Q.diff(names.b) * M.pullback_to_q(M.P.diff(names.y))
    assert (prod - 1).is_zero()
    assert check_levi_transpose(M).ok
    L = levi(M)
    assert L.rank0 <= L.generic_rank <= min(M.n, M.m)


@settings(max_examples=20)
@given(st.sampled_from(DIMS), st.integers(0, 2**32))
def test_normalize_idempotent(dims, seed):
    M = random_model(random.Random(seed), *dims, trunc=5)
    M1, _ = normalize_coordinates(M)
    M2, rec = normalize_coordinates(M1)
    assert M2.Q == M1.Q and rec.identity


@settings(max_examples=20)
@given(st.sampled_from(DIMS), st.integers(0, 2**32))
def test_rank_normal_form_bilinear_part(dims, seed):
    M, _ = normalize_coordinates(random_model(random.Random(seed), *dims, trunc=5))
    r, M2 = levi_rank_normal_form(M)
    lam = bilinear_part(M2.Q, M2.names)
    assert lam == [[int(i == j and i < r) for j in range(M.m)] for i in range(M.n)]
    assert r == levi(M).rank0


@settings(max_examples=12)
@given(st.sampled_from([GOLDEN, CUBIC_PAR, CUBIC_VAR, "c + x*a", "c + x*a + x^2*b + x*y*a"]), st.integers(0, 2**32))
def test_beta_tracks_determinants(base, seed):
    M = random_rank_one_model(random.Random(seed), trunc=6, base=base)
    delta, box = delta_and_box(M)
    beta, beta_u, _ = normal_form_22(M)
    assert (beta != 0) == (delta.constant_term() != 0)
    assert (beta_u != 0) == (box.constant_term() != 0)
