"""Closed form of the lattice Green function G(t) = J'(t)."""

from __future__ import annotations

from fractions import Fraction

from .hyperfun import HyperSeriesSpec, pfq
from .numerics import DEFAULT_PRECISION, DivergenceError, DomainError, EvalResult, PrecisionConfig, workctx

__all__ = ["g_closed"]


def g_closed(t, prec: PrecisionConfig = DEFAULT_PRECISION) -> EvalResult:
    r"""Evaluate

    .. math:: G(t) = \frac1t\Bigl(1-\frac4{t^2}\Bigr)^{-1/4}
              \Bigl[{}_2F_1\bigl(\tfrac18,\tfrac58;1;\tfrac4{t^2}\bigr)\Bigr]^2

    for ``t`` off the cut ``[-2, 2]`` with ``|4/t^2| < 1``. Powers use the
    principal branch; for real ``t > 2`` every factor is a positive real.
    """
    ctx = workctx(prec.working_digits)
    t = ctx.convert(t)
    if ctx.im(t) == 0 and -2 <= ctx.re(t) <= 2:
        raise DomainError(f"t = {t} lies on the cut [-2, 2]")
    x = 4 / t**2
    if abs(x) >= 1:
        raise DivergenceError(f"|4/t^2| = {abs(x)} >= 1; the series form does not apply")
    f = pfq(HyperSeriesSpec([Fraction(1, 8), Fraction(5, 8)], [1], x), prec)
    pre = (1 - x) ** (-ctx.mpf(1) / 4) / t
    value = pre * f.value**2
    err = float(abs(pre) * (2 * abs(f.value) + f.err_bound) * f.err_bound)
    return EvalResult(value, err, "closed-form-2F1", dict(f.work))
