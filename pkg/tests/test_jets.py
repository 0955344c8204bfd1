from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paracr.generators import CUBIC_PAR, CUBIC_VAR, GOLDEN, random_model, random_polynomial
from paracr.jets import (
    PAR,
    VAR,
    NotRankOne,
    OrderTooHighForTruncation,
    SingularJacobian,
    aut_dim_bound,
    classify_case,
    delta_and_box,
    generic_jet_rank,
    jet_jacobian_rank,
    jet_space_1d,
    nondeg_order,
    nondeg_report,
    prolong_1d,
)
from paracr.series import Series, VarSpace
from paracr.submanifold import levi_rank_at_point, sample_points

from conftest import model, series

XY = VarSpace(("x", "y"))


def test_jet_rank_examples():
    assert jet_jacobian_rank(model("b + x*a", 1, 1), PAR, 1) == 3
    flat = model("b", 1, 1)
    assert [jet_jacobian_rank(flat, PAR, k, {"x": 1, "a": 2}) for k in range(1, 5)] == [2] * 4
    assert jet_jacobian_rank(model(CUBIC_PAR), PAR, 2) == 5


def test_jet_rank_order_limit():
    M = model("b + x*a", 1, 1, trunc=4)
    with pytest.raises(OrderTooHighForTruncation):
        jet_jacobian_rank(M, PAR, 4)


def test_nondeg_orders():
    M = model("b + x*a", 1, 1)
    assert nondeg_order(M, PAR) == 1 and nondeg_order(M, VAR) == 1
    cubic = model(CUBIC_PAR)
    assert nondeg_order(cubic, PAR, k_max=6) == 2
    assert nondeg_order(cubic, VAR, k_max=6) is None
    golden = model(GOLDEN)
    assert nondeg_order(golden, PAR) == 2 and nondeg_order(golden, VAR) == 2


def test_nondeg_report_pairs_none_with_bound():
    rep = nondeg_report(model(CUBIC_PAR), k_max=6).to_json()
    assert rep["k_par"] == 2 and rep["l_var"] is None and rep["k_max_searched"] == 6
    assert (rep["delta0"], rep["box0"], rep["case_label"]) == ("2", "0", "III")


@pytest.mark.parametrize(
    "expr, values, case",
    [(CUBIC_PAR, (2, 0), "III"), (CUBIC_VAR, (0, 2), "II"), (GOLDEN, (2, 2), "IV")],
)
def test_delta_box_and_case(expr, values, case):
    M = model(expr)
    delta, box = delta_and_box(M)
    assert (delta.constant_term(), box.constant_term()) == values
    assert classify_case(M) == case


def test_case_one_and_not_rank_one():
    assert classify_case(model("c + x*a")) == "I"
    with pytest.raises(NotRankOne):
        classify_case(model("c + x*a + y*b"))


def test_case_iii_is_y_independent_and_ii_b_independent():
    assert "y" not in model(CUBIC_PAR).Q.variables_used()
    assert "b" not in model(CUBIC_VAR).Q.variables_used()


def test_aut_dim_bound():
    assert aut_dim_bound(2, 2, 2, 2) == 990
    assert aut_dim_bound(1, 1, 1, 1) == 60
    assert aut_dim_bound(3, 1, 2, 1) == aut_dim_bound(1, 3, 2, 1)
    with pytest.raises(ValueError):
        aut_dim_bound(2, 2, 0, 1)


@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 3), st.integers(1, 3))
def test_aut_dim_bound_formula(n, m, k, l):
    s = 2 * k + 2 * l
    assert aut_dim_bound(n, m, k, l) == (n + 1) * math.comb(n + 1 + s, n + 1) + (m + 1) * math.comb(m + 1 + s, m + 1)
    assert aut_dim_bound(n, m, k, l) == aut_dim_bound(m, n, k, l)


def test_prolong_identity():
    x, y = Series.variable(XY, "x", 6), Series.variable(XY, "y", 6)
    T = prolong_1d(x, y, 3)
    for name, jet in zip(T.space.names[2:], T.jets):
        assert jet == Series.variable(T.space, name, 6).with_reliable(jet.reliable)


def test_prolong_dilations():
    x, y = Series.variable(XY, "x", 6), Series.variable(XY, "y", 6)
    T = prolong_1d(x * 2, y, 2)
    assert str(T.jets[0]) == "1/2*y_x" and str(T.jets[1]) == "1/4*y_xx"
    T = prolong_1d(x, y * 2, 1)
    assert str(T.jets[0]) == "2*y_x"


def test_prolong_quadratic_map_against_oracle():
    T = prolong_1d(series("x + y^2", "x y"), series("y + x^2", "x y"), 2)
    sp = T.space
    j1 = sum((T.jets[0].part(d) for d in range(4)), Series.zero(sp, 8))
    j2 = sum((T.jets[1].part(d) for d in range(3)), Series.zero(sp, 8))
    assert j1.agrees_with(series("y_x + 2*x - 4*x*y*y_x - 2*y*y_x^2", "x y y_x y_xx"))
    assert j2.agrees_with(series("2 + y_xx - 8*y*y_x", "x y y_x y_xx"))


def test_prolong_singular():
    with pytest.raises(SingularJacobian):
        prolong_1d(series("y", "x y"), series("x", "x y"), 1)


# ----------------------------------------------------------- properties
@settings(max_examples=25)
@given(st.sampled_from([(1, 1), (2, 2), (2, 1)]), st.integers(0, 2**32))
def test_order_one_rank_matches_levi_rank(dims, seed):
    M = random_model(random.Random(seed), *dims, trunc=8)
    for p in sample_points(M.qspace.names, 5, seed):
        if not M.Q.diff(M.names.b).evaluate(p):
            continue
        assert jet_jacobian_rank(M, PAR, 1, p) == M.n + 1 + levi_rank_at_point(M, p)


@settings(max_examples=20)
@given(st.sampled_from([(1, 1), (2, 2)]), st.integers(0, 2**32))
def test_generic_rank_stabilizes(dims, seed):
    M = random_model(random.Random(seed), *dims, trunc=6, max_deg=3)
    ranks = [generic_jet_rank(M, PAR, k) for k in range(0, 4)]
    for k in range(len(ranks) - 2):
        if ranks[k] == ranks[k + 1]:
            assert ranks[k + 2] == ranks[k]


def _near_identity_pair(rng: random.Random):
    f = Series.variable(XY, "x", 6) + random_polynomial(rng, XY, 6, 2, 3)
    g = random_polynomial(rng, XY, 6, 2, 3)
    # keep g_xx(0) = 0 so every prolonged jet vanishes at the zero jet
    g = Series.from_dict(XY, {e: c for e, c in g.terms() if e != (2, 0)}, 6)
    return f, Series.variable(XY, "y", 6) + g


@settings(max_examples=20)
@given(st.integers(0, 2**32))
def test_prolongation_composes(seed):
    rng = random.Random(seed)
    f1, g1 = _near_identity_pair(rng)
    f2, g2 = _near_identity_pair(rng)
    T1, T2 = prolong_1d(f1, g1, 2), prolong_1d(f2, g2, 2)
    sp = jet_space_1d("x", "y", 2)
    outer = {"x": T1.f, "y": T1.g, "y_x": T1.jets[0], "y_xx": T1.jets[1]}
    composed = [j.substitute(outer, target=sp) for j in T2.jets]
    f = f2.substitute({"x": f1, "y": g1})
    g = g2.substitute({"x": f1, "y": g1})
    direct = prolong_1d(f, g, 2).jets
    for a, b in zip(composed, direct):
        assert a.agrees_with(b)


@settings(max_examples=20)
@given(st.integers(0, 2**32))
def test_swap_exchanges_delta_and_box(seed):
    M = random_model(random.Random(seed), 2, 2, trunc=5)
    d, b = delta_and_box(M)
    d2, b2 = delta_and_box(M.swap())
    assert (d2.constant_term(), b2.constant_term()) == (b.constant_term(), d.constant_term())


def test_symmetric_model_has_equal_determinants():
    d, b = delta_and_box(model("c + x*a + x^2*b + a^2*y"))
    assert d.constant_term() == b.constant_term() == 2
