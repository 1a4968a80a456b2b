r"""Direct cubature of J(t) and G(t) over the cube :math:`[0, \pi]^3`.

Both integrands depend on the cosines only through

.. math:: t - c_1 - c_2 - c_3 + c_1 c_2 c_3
          = (t - 2) + e_1 e_2 + e_1 e_3 + e_2 e_3 - e_1 e_2 e_3,
          \qquad e_i = 1 - \cos k_i = 2\sin^2(k_i/2),

and the right-hand form is what gets evaluated: it stays accurate next to the
edges through the origin, where the argument approaches ``t - 2``.

Because the kernel is symmetric in the three axes, the tensor sum runs over
sorted index triples ``i <= j <= k`` with multiplicities 6, 3 or 1. Blocks
are reduced in a fixed order and combined with :func:`math.fsum`, so a given
grid always returns the same bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .numerics import (
    DEFAULT_PRECISION,
    BudgetError,
    DomainError,
    EvalResult,
    PrecisionConfig,
)

__all__ = [
    "CubatureGrid",
    "IntegrandPoint",
    "axis_rule",
    "default_grid",
    "symmetric_cube_mean",
    "full_cube_mean",
    "j_direct",
    "g_direct",
    "j_derivative_check",
]

RULES = ("gauss-legendre", "tanh-sinh", "trapezoid")
TANH_SINH_SWITCH = 2.2


@dataclass(frozen=True)
class CubatureGrid:
    """A per-axis quadrature rule used as a tensor product.

    ``order`` is the Gauss-Legendre order per panel, the tanh-sinh level
    (step ``2**-order``) or the number of trapezoid points.
    """

    order: int = 32
    rule: str = "gauss-legendre"
    subdivisions: int = 4

    def __post_init__(self):
        if self.rule not in RULES:
            raise DomainError(f"unknown rule {self.rule!r}; expected one of {RULES}")
        if self.order < 1 or self.subdivisions < 1:
            raise DomainError("order and subdivisions must be positive")

    def refined(self) -> "CubatureGrid":
        if self.rule == "gauss-legendre":
            return CubatureGrid(self.order, self.rule, 2 * self.subdivisions)
        if self.rule == "tanh-sinh":
            return CubatureGrid(self.order + 1, self.rule, self.subdivisions)
        return CubatureGrid(2 * self.order, self.rule, self.subdivisions)

    def axis_size(self) -> int:
        return len(axis_rule(self, 0.0, math.pi)[0])

    def node_count(self) -> int:
        return self.axis_size() ** 3

    def check_budget(self, budget: int):
        if self.node_count() > budget:
            raise BudgetError(f"{self} needs {self.node_count()} nodes, budget is {budget}")


@dataclass(frozen=True)
class IntegrandPoint:
    """The three cosines at one node and the J/G kernel argument there."""

    c1: float
    c2: float
    c3: float
    t: float

    @property
    def argument(self) -> float:
        c1, c2, c3 = self.c1, self.c2, self.c3
        return self.t - c1 - c2 - c3 + c1 * c2 * c3


def _gauss_legendre(order: int, panels: int, a: float, b: float):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = np.diff(edges) / 2
    mid = (edges[:-1] + edges[1:]) / 2
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _tanh_sinh(level: int, a: float, b: float, cutoff: float = 1e-20):
    """Tanh-sinh nodes on [a, b], truncated where weights fall below ``cutoff``
    relative to the largest one."""
    h = 2.0**-level
    kmax = int(math.ceil(4.5 / h))
    s = np.arange(-kmax, kmax + 1) * h
    u = np.pi / 2 * np.sinh(s)
    # distance from the nearer endpoint, computed without cancellation
    frac = 1.0 / (1.0 + np.exp(2.0 * np.abs(u)))
    length = b - a
    nodes = np.where(s < 0, a + length * frac, b - length * frac)
    weights = length * h * (np.pi / 4) * np.cosh(s) / np.cosh(u) ** 2
    keep = weights > cutoff * weights.max()
    return nodes[keep], weights[keep]


def _trapezoid(points: int, a: float, b: float):
    # half-step offset keeps nodes off the lattice of rational phases with small denominator
    nodes = a + (b - a) * (np.arange(points) + 0.5) / points
    weights = np.full(points, (b - a) / points)
    return nodes, weights


@lru_cache(maxsize=64)
def _axis_rule_cached(order: int, rule: str, subdivisions: int, a: float, b: float):
    if rule == "gauss-legendre":
        x, w = _gauss_legendre(order, subdivisions, a, b)
    elif rule == "tanh-sinh":
        x, w = _tanh_sinh(order, a, b)
    else:
        x, w = _trapezoid(order * subdivisions, a, b)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def axis_rule(grid: CubatureGrid, a: float = 0.0, b: float = math.pi):
    """Nodes and weights of ``grid`` on ``[a, b]`` (read-only arrays)."""
    return _axis_rule_cached(grid.order, grid.rule, grid.subdivisions, float(a), float(b))


def default_grid(t: float, prec: PrecisionConfig = DEFAULT_PRECISION) -> CubatureGrid:
    """Gauss-Legendre panels away from t = 2, tanh-sinh close to it."""
    if t >= TANH_SINH_SWITCH:
        return CubatureGrid(prec.quad_order, "gauss-legendre", prec.panels)
    return CubatureGrid(prec.ts_level, "tanh-sinh", 1)


@lru_cache(maxsize=8)
def _triu(n: int):
    rows, cols = np.triu_indices(n)
    starts = np.concatenate(([0], np.cumsum(np.arange(n, 0, -1))))
    pair_mult = np.where(rows == cols, 3, 6)
    for arr in (rows, cols, starts, pair_mult):
        arr.setflags(write=False)
    return rows, cols, starts, pair_mult


def symmetric_cube_mean(kernel: Callable, values: np.ndarray, weights: np.ndarray) -> float:
    """Tensor-product sum of a fully symmetric ``kernel(v1, v2, v3)``.

    Only sorted triples are visited; the result equals
    ``sum_{i,j,k} w_i w_j w_k kernel(v_i, v_j, v_k)``.
    """
    n = len(values)
    rows, cols, starts, pair_mult = _triu(n)
    partials = []
    for i in range(n):
        sl = slice(starts[i], None)
        j, k = rows[sl], cols[sl]
        # triples with j == i repeat an index: (i,i,k) counts 3 times, (i,i,i) once
        mult = np.where(j == i, np.where(j == k, 1, 3), pair_mult[sl])
        f = kernel(values[i], values[j], values[k])
        partials.append(weights[i] * float(np.sum(weights[j] * weights[k] * mult * f)))
    return math.fsum(partials)


def full_cube_mean(kernel: Callable, values: np.ndarray, weights: np.ndarray) -> float:
    """Unreduced tensor-product sum, used to cross-check the symmetric one."""
    partials = []
    for i in range(len(values)):
        f = kernel(values[i], values[:, None], values[None, :])
        partials.append(weights[i] * float(np.sum(weights[:, None] * weights[None, :] * f)))
    return math.fsum(partials)


def _argument(t: float):
    shift = t - 2.0

    def arg(e1, e2, e3):
        return shift + e1 * e2 + e1 * e3 + e2 * e3 - e1 * e2 * e3

    return arg


def _cube_integral(t: float, grid: CubatureGrid, transform: Callable, symmetric: bool = True) -> float:
    nodes, weights = axis_rule(grid)
    e = 2.0 * np.sin(nodes / 2) ** 2
    arg = _argument(t)

    def kernel(e1, e2, e3):
        return transform(arg(e1, e2, e3))

    reducer = symmetric_cube_mean if symmetric else full_cube_mean
    return reducer(kernel, e, weights) / math.pi**3


def _check_t(t: float, grid: CubatureGrid):
    if not math.isfinite(t) or t < 2:
        raise DomainError(f"t must be real and > 2 (got {t}); the kernel vanishes or turns negative")
    if t == 2 and grid.rule != "tanh-sinh":
        raise DomainError("t = 2 is a singular endpoint and needs the tanh-sinh rule")


def _refined_integral(t, grid, prec, transform, label, symmetric=True) -> EvalResult:
    grid = grid or default_grid(t, prec)
    _check_t(t, grid)
    fine = grid.refined()
    fine.check_budget(prec.node_budget)
    coarse_value = _cube_integral(t, grid, transform, symmetric)
    value = _cube_integral(t, fine, transform, symmetric)
    roundoff = 1e-15 * max(1.0, abs(value))
    flags = ("singular-endpoint",) if t == 2 else ()
    return EvalResult(
        value,
        abs(value - coarse_value) + roundoff,
        f"{label}-{grid.rule}",
        {"nodes": grid.node_count() + fine.node_count()},
        flags,
    )


def j_direct(
    t: float,
    grid: CubatureGrid | None = None,
    prec: PrecisionConfig = DEFAULT_PRECISION,
    *,
    symmetric: bool = True,
) -> EvalResult:
    """J(t) by tensor cubature, reported on the refined grid.

    ``err_bound`` is the change between ``grid`` and ``grid.refined()``.
    ``t = 2`` is accepted only with the tanh-sinh rule and is flagged
    ``singular-endpoint``.
    """
    return _refined_integral(float(t), grid, prec, np.log, "cubature", symmetric)


def g_direct(
    t: float,
    grid: CubatureGrid | None = None,
    prec: PrecisionConfig = DEFAULT_PRECISION,
    *,
    symmetric: bool = True,
) -> EvalResult:
    """G(t) by tensor cubature; same conventions as :func:`j_direct`."""
    t = float(t)
    if t == 2:
        raise DomainError("G diverges at t = 2")
    return _refined_integral(t, grid, prec, np.reciprocal, "cubature", symmetric)


def j_derivative_check(
    t: float,
    h: float,
    grid: CubatureGrid | None = None,
    prec: PrecisionConfig = DEFAULT_PRECISION,
) -> float:
    """``|(J(t+h) - J(t-h)) / 2h - G(t)|`` with all three integrals on one grid."""
    if t - h <= 2:
        raise DomainError("need t - h > 2")
    grid = grid or default_grid(t - h, prec)
    jp = j_direct(t + h, grid, prec).value
    jm = j_direct(t - h, grid, prec).value
    g = g_direct(t, grid, prec).value
    return abs((jp - jm) / (2 * h) - g)
