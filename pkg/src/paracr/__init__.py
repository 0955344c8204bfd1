"""Exact power-series toolkit for para-CR submanifolds of solutions.

Modules: :mod:`series` (truncated rational power series), :mod:`parser`
(model files), :mod:`submanifold` (graphs, normalization, Levi forms),
:mod:`jets` (jet ranks, nondegeneracy, case labels, 1-D prolongation),
:mod:`pde` (associated PDE system and its identities), :mod:`coframe`
(Levi kernels and the initial coframe) and :mod:`cli`.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .series import Rational, Series, VarSpace, implicit_solve, rational, solve_system

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "Rational",
    "Series",
    "VarSpace",
    "implicit_solve",
    "rational",
    "solve_system",
]
