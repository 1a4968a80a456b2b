r"""Logarithmic Mahler measures of a few three-variable Laurent families.

On the torus ``x + 1/x = 2 cos(2 pi t)``, so every family except the quartic
one is a polynomial in three cosines. All five kernels are invariant under
permutations of the variables, which lets :func:`mahler_measure` use the
sorted-triple reduction from :mod:`jintegral.quadrature` on a periodic
trapezoid grid (spectrally accurate while ``|P|`` stays away from zero).

Families (``C_i = cos 2 pi t_i``):

=====  ==================================================================
P1     ``8(t - C1 - C2 - C3 + C1 C2 C3)``, ``t = sqrt(w) + 1/sqrt(w)``, ``w = 4a(1-a)``
P2     ``4/sqrt(a(1-a)) + 8 C1 C2 C3``
P3     ``4i(1-a)/sqrt(a) + 8 C1 C2 C3``
P4     ``x^4 + y^4 + z^4 + 1 + 2(1+a)/(a(1-a)^2)^(1/4) xyz``
P5     ``k - 2(C1 + C2 + C3) + 2 C1 C2 C3``
const  ``c``
=====  ==================================================================
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .jformula import endpoint_t, j_hyper, t_to_alpha
from .numerics import DEFAULT_PRECISION, DomainError, EvalResult, PrecisionConfig, ZeroOnTorusError
from .quadrature import CubatureGrid, axis_rule, symmetric_cube_mean

__all__ = [
    "FAMILIES",
    "ENDPOINT_ALPHA",
    "LaurentPolySpec",
    "default_mahler_grid",
    "mahler_measure",
    "mahler_identity_residual",
    "mahler_to_j",
]

FAMILIES = ("P1", "P2", "P3", "P4", "P5", "const")
ENDPOINT_ALPHA = 3 - 2 * math.sqrt(2)
ZERO_FLOOR = 1e-8
TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class LaurentPolySpec:
    """One member of a family: ``scale * P_family(param)``."""

    family: str
    param: complex | float
    scale: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.scale == 0:
            raise DomainError("scale must be nonzero")
        p = self.param
        if self.family in ("P1", "P2", "P3", "P4"):
            if isinstance(p, complex) or not 0 < p <= ENDPOINT_ALPHA * (1 + 1e-15):
                raise DomainError(f"{self.family} needs real alpha in (0, (sqrt(2)-1)^2], got {p}")
        elif self.family == "P5":
            if isinstance(p, complex) or p < 2 * float(endpoint_t()) * (1 - 1e-15):
                raise DomainError(f"P5 needs real k >= 4.1604..., got {p}")
        elif p == 0:
            raise DomainError("the constant polynomial 0 has no Mahler measure")

    def kernel(self):
        """``(t1, t2, t3) -> |P|`` on the torus, vectorised in numpy."""
        a = self.param
        s = abs(self.scale)
        if self.family == "P1":
            w = 4 * a * (1 - a)
            t = math.sqrt(w) + 1 / math.sqrt(w)
            # 1 - cos = 2 sin^2 keeps the smallest values of |P1| accurate
            shift = t - 2

            def f(t1, t2, t3):
                e1, e2, e3 = (2 * np.sin(math.pi * u) ** 2 for u in (t1, t2, t3))
                return 8 * s * (shift + e1 * e2 + e1 * e3 + e2 * e3 - e1 * e2 * e3)

        elif self.family in ("P2", "P3"):
            c = 4 / math.sqrt(a * (1 - a)) if self.family == "P2" else 4j * (1 - a) / math.sqrt(a)

            def f(t1, t2, t3):
                return s * np.abs(c + 8 * np.cos(TWO_PI * t1) * np.cos(TWO_PI * t2) * np.cos(TWO_PI * t3))

        elif self.family == "P4":
            c = 2 * (1 + a) / (a * (1 - a) ** 2) ** 0.25

            def f(t1, t2, t3):
                quart = 1 + np.exp(4j * TWO_PI * t1) + np.exp(4j * TWO_PI * t2) + np.exp(4j * TWO_PI * t3)
                return s * np.abs(quart + c * np.exp(1j * TWO_PI * (t1 + t2 + t3)))

        elif self.family == "P5":
            k = a

            def f(t1, t2, t3):
                c1, c2, c3 = np.cos(TWO_PI * t1), np.cos(TWO_PI * t2), np.cos(TWO_PI * t3)
                return s * (k - 2 * (c1 + c2 + c3) + 2 * c1 * c2 * c3)

        else:
            c = abs(a) * s

            def f(t1, t2, t3):
                return np.full(np.broadcast(t1, t2, t3).shape, c)

        return f


def default_mahler_grid(prec: PrecisionConfig = DEFAULT_PRECISION) -> CubatureGrid:
    """Periodic trapezoid with ``2 * quad_order`` points per axis."""
    return CubatureGrid(2 * prec.quad_order, "trapezoid", 1)


def _torus_mean(spec: LaurentPolySpec, grid: CubatureGrid) -> tuple:
    nodes, weights = axis_rule(grid, 0.0, 1.0)
    modulus = spec.kernel()
    smallest = [math.inf]

    def log_abs(t1, t2, t3):
        m = modulus(t1, t2, t3)
        smallest[0] = min(smallest[0], float(np.min(m)))
        with np.errstate(divide="ignore"):
            return np.log(m)

    value = symmetric_cube_mean(log_abs, nodes, weights)
    return value, smallest[0]


def mahler_measure(
    spec: LaurentPolySpec,
    grid: CubatureGrid | None = None,
    prec: PrecisionConfig = DEFAULT_PRECISION,
) -> EvalResult:
    """``m(P)`` as the torus mean of ``log|P|``, reported on ``grid.refined()``.

    ``err_bound`` is the change between the two grids. Raises
    :class:`ZeroOnTorusError` when ``|P|`` drops below ``1e-8`` at any node.
    """
    if spec.family == "const":
        value = math.log(abs(spec.param) * abs(spec.scale))
        return EvalResult(value, 0.0, "mahler-constant", {"nodes": 1})
    grid = grid or default_mahler_grid(prec)
    fine = grid.refined()
    fine.check_budget(prec.node_budget)
    coarse, low1 = _torus_mean(spec, grid)
    value, low2 = _torus_mean(spec, fine)
    low = min(low1, low2)
    if not low > ZERO_FLOOR:
        raise ZeroOnTorusError(f"|{spec.family}| = {low:.3e} at a grid node; the log-integrand is not resolved")
    err = abs(value - coarse) + 1e-15 * max(1.0, abs(value))
    return EvalResult(
        value, err, f"torus-{grid.rule}", {"nodes": grid.node_count() + fine.node_count()}, (),
    )


def mahler_identity_residual(
    alpha: float,
    grid: CubatureGrid | None = None,
    prec: PrecisionConfig = DEFAULT_PRECISION,
) -> float:
    """``|m(P1) - 11 m(P2) + 7 m(P3) + 6 m(P4)|`` with each measure computed numerically."""
    alpha = float(alpha)
    if abs(alpha - ENDPOINT_ALPHA) < 1e-15:
        alpha = ENDPOINT_ALPHA
    m = {f: mahler_measure(LaurentPolySpec(f, alpha), grid, prec).value for f in ("P1", "P2", "P3", "P4")}
    return abs(m["P1"] - 11 * m["P2"] + 7 * m["P3"] + 6 * m["P4"])


def mahler_to_j(k: float, grid: CubatureGrid | None = None, prec: PrecisionConfig = DEFAULT_PRECISION):
    """``(m(P5(k)), log 2 + J(k/2))`` with the measure by quadrature and J by the closed form."""
    measured = mahler_measure(LaurentPolySpec("P5", float(k)), grid, prec).value
    j = j_hyper(t_to_alpha(k / 2, prec), prec).value
    return measured, math.log(2) + float(j)
