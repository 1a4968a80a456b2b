"""Shared precision settings, result records and exceptions."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from functools import lru_cache

import mpmath

DIGITS_ENV = "JINTEGRAL_DIGITS"


class JIntegralError(Exception):
    """Base class for numerical failures raised by this package."""


class DomainError(JIntegralError, ValueError):
    """An argument lies outside the region where an operation is defined."""


class DivergenceError(DomainError):
    """A series argument lies outside its disk of convergence."""


class NonConvergenceError(JIntegralError):
    """A summation or quadrature exhausted its work cap before meeting its target."""


class BudgetError(JIntegralError):
    """A cubature grid exceeds the configured node budget."""


class ZeroOnTorusError(JIntegralError):
    """A Laurent polynomial came too close to zero on the integration torus."""


class ReflectionError(JIntegralError):
    """A measured modular reflection relation disagreed with the assumed one."""


class CutoffError(JIntegralError):
    """A lattice-sum cutoff is too small for the requested tolerance."""


@dataclass(frozen=True)
class PrecisionConfig:
    """Knobs controlling working precision and work caps.

    ``digits`` is the target number of significant digits; series are summed
    with ``digits + guard_digits`` decimal digits.
    """

    digits: int = 30
    guard_digits: int = 10
    term_cap: int = 4_000_000
    quad_order: int = 32
    panels: int = 4
    ts_level: int = 4
    node_budget: int = 40_000_000
    cutoff_radius: int = 2000

    def __post_init__(self):
        if not 15 <= self.digits <= 100:
            raise DomainError(f"digits must lie in [15, 100], got {self.digits}")
        if self.guard_digits < 0 or self.term_cap < 1:
            raise DomainError("guard_digits must be >= 0 and term_cap >= 1")

    @property
    def working_digits(self) -> int:
        return self.digits + self.guard_digits

    @property
    def target(self) -> float:
        """Absolute tolerance the series tails are driven below."""
        return 10.0 ** (-self.digits)

    def with_digits(self, digits: int) -> "PrecisionConfig":
        return replace(self, digits=digits)

    @classmethod
    def from_env(cls, **overrides) -> "PrecisionConfig":
        """Default config, with ``digits`` taken from ``$JINTEGRAL_DIGITS`` if set."""
        env = os.environ.get(DIGITS_ENV)
        if env and "digits" not in overrides:
            overrides["digits"] = int(env)
        return cls(**overrides)


DEFAULT_PRECISION = PrecisionConfig()


@dataclass
class EvalResult:
    """A computed value together with an error claim and work counters.

    ``value`` may be a float, complex or mpmath number. ``work`` counts
    series terms, cubature nodes or lattice points, keyed by what was counted.
    """

    value: object
    err_bound: float
    method: str
    work: dict = field(default_factory=dict)
    flags: tuple = ()

    @property
    def total_work(self) -> int:
        return int(sum(self.work.values()))

    def __float__(self):
        return float(mpmath.re(self.value)) if not isinstance(self.value, float) else self.value


@lru_cache(maxsize=None)
def workctx(dps: int) -> mpmath.MPContext:
    """A private mpmath context fixed at ``dps`` decimal digits.

    Each context is created once and never mutated afterwards, so functions
    that only read from it are safe to call from several threads.
    """
    ctx = mpmath.MPContext()
    ctx.dps = dps
    return ctx
