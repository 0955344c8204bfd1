from __future__ import annotations

import importlib
import random

import gmpy2
import pytest
from hypothesis import given
from hypothesis import strategies as st

from paracr import _kernels
from paracr._kernels import _pykernels

try:
    from paracr._kernels import _ckernels
except ImportError:  # compiled core not built
    _ckernels = None

needs_compiled = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def graded(nvars: int, degree: int, rng: random.Random, density: float = 0.5) -> list:
    out = [dict() for _ in range(degree + 1)]
    import itertools

    for exps in itertools.product(range(degree + 1), repeat=nvars):
        d = sum(exps)
        if d <= degree and rng.random() < density:
            key = sum(e << (8 * i) for i, e in enumerate(exps))
            out[d][key] = gmpy2.mpq(rng.randint(-9, 9) or 1, rng.randint(1, 4))
    return out


def test_backend_is_reported():
    assert _kernels.BACKEND in ("python", "cython")
    if _ckernels is not None:
        assert _kernels.BACKEND == "cython" or _kernels.mul_graded is _pykernels.mul_graded


def test_pure_python_can_be_forced(monkeypatch):
    monkeypatch.setenv("PARACR_PURE_PYTHON", "1")
    mod = importlib.reload(_kernels)
    try:
        assert mod.BACKEND == "python"
        assert mod.mul_graded is _pykernels.mul_graded
    finally:
        monkeypatch.delenv("PARACR_PURE_PYTHON")
        importlib.reload(_kernels)


@needs_compiled
@given(st.integers(1, 8), st.integers(0, 6), st.integers(0, 10_000))
def test_mul_parity(nvars, degree, seed):
    rng = random.Random(seed)
    a, b = graded(nvars, degree, rng), graded(nvars, degree, rng)
    for cut in (0, degree, 2 * degree):
        assert _ckernels.mul_graded(a, b, cut) == _pykernels.mul_graded(a, b, cut)


@needs_compiled
@given(st.integers(1, 8), st.integers(0, 6), st.integers(0, 10_000))
def test_diff_parity(nvars, degree, seed):
    rng = random.Random(seed)
    a = graded(nvars, degree, rng)
    for v in range(nvars):
        assert _ckernels.diff_graded(a, 8 * v) == _pykernels.diff_graded(a, 8 * v)


@needs_compiled
def test_high_variable_shift_regression():
    # variable index >= 4 puts the exponent at bit >= 32
    key = 3 << 32
    a = [dict(), dict(), dict(), {key: gmpy2.mpq(2)}]
    assert _ckernels.diff_graded(a, 32) == [dict(), dict(), {2 << 32: gmpy2.mpq(6)}]


@needs_compiled
def test_wide_keys_fall_back():
    key = 1 << 70  # more than 8 variables: keys exceed 64 bits
    a = [dict(), {key: gmpy2.mpq(1, 2)}]
    assert _ckernels.mul_graded(a, a, 2) == _pykernels.mul_graded(a, a, 2)
