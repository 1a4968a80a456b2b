r"""J(t) in closed form through three :math:`{}_5F_4` series.

The parametrisation is

.. math:: t = \sqrt{w} + \frac1{\sqrt{w}}, \qquad w = 4\alpha(1-\alpha),

and on the real axis the closed form equals J only for
``0 < alpha <= (sqrt(2) - 1)**2`` (``t >= 2.0802...``). At the right end the
third series argument reaches 1 and only touches it: for larger real alpha it
falls back inside the disk, so the series still converges but to a value on
the wrong side of the branch point. The guard here is therefore explicit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .greens import g_closed
from .hyperfun import HyperSeriesSpec, pfq
from .numerics import (
    DEFAULT_PRECISION,
    DivergenceError,
    DomainError,
    EvalResult,
    PrecisionConfig,
    workctx,
)

__all__ = [
    "AlphaPoint",
    "COMPLEX_SMALL_RADIUS",
    "endpoint_alpha",
    "endpoint_t",
    "alpha_to_t",
    "t_to_alpha",
    "j_hyper",
    "dt_dalpha",
    "presumed_equality_residual",
]

COMPLEX_SMALL_RADIUS = 0.15
# float inputs this close to the endpoint are taken to mean the endpoint itself
_ENDPOINT_SNAP = 1e-15

_H = Fraction(1, 2)
_FIRST = ([Fraction(3, 2)] * 3 + [1, 1], [2, 2, 2, 2])
_THIRD = ([Fraction(5, 4), Fraction(3, 2), Fraction(7, 4), 1, 1], [2, 2, 2, 2])


def endpoint_alpha(prec: PrecisionConfig = DEFAULT_PRECISION):
    """``(sqrt(2) - 1)**2 = 3 - 2 sqrt(2)`` at working precision."""
    ctx = workctx(prec.working_digits)
    return 3 - 2 * ctx.sqrt(2)


def endpoint_t(prec: PrecisionConfig = DEFAULT_PRECISION):
    """``t`` at the endpoint alpha, 2.080247..."""
    return alpha_to_t(endpoint_alpha(prec), prec)


@dataclass(frozen=True)
class AlphaPoint:
    """An alpha value, the t it induces and which region it falls in.

    ``region`` is ``"real-valid"`` for real ``0 < alpha <= (sqrt(2)-1)**2``,
    ``"complex-small"`` for other nonzero alpha with
    ``|alpha| <= COMPLEX_SMALL_RADIUS`` and ``"invalid"`` otherwise.
    """

    alpha: object
    t: object
    region: str

    @classmethod
    def from_alpha(cls, alpha, prec: PrecisionConfig = DEFAULT_PRECISION) -> "AlphaPoint":
        ctx = workctx(prec.working_digits)
        a = ctx.convert(alpha)
        end = endpoint_alpha(prec)
        if ctx.im(a) == 0:
            a = ctx.re(a)
            if isinstance(alpha, float) and abs(a - end) <= _ENDPOINT_SNAP:
                a = end
        if a == 0 or a == 1:
            return cls(a, ctx.inf, "invalid")
        t = alpha_to_t(a, prec)
        if ctx.im(a) == 0 and 0 < a <= end:
            region = "real-valid"
        elif abs(a) <= COMPLEX_SMALL_RADIUS:
            region = "complex-small"
        else:
            region = "invalid"
        return cls(a, t, region)


def alpha_to_t(alpha, prec: PrecisionConfig = DEFAULT_PRECISION):
    """``sqrt(4a(1-a)) + 1/sqrt(4a(1-a))`` with the principal square root."""
    ctx = workctx(prec.working_digits)
    a = ctx.convert(alpha)
    w = 4 * a * (1 - a)
    if w == 0:
        raise DomainError("alpha = 0 and alpha = 1 are poles of t")
    if ctx.im(w) == 0 and w > 0:
        w = ctx.re(w)
    r = ctx.sqrt(w)
    return r + 1 / r


def t_to_alpha(t, prec: PrecisionConfig = DEFAULT_PRECISION):
    """Invert :func:`alpha_to_t` on the real validity ray ``t >= 2.0802...``.

    Takes ``sqrt(w) = (t - sqrt(t^2 - 4)) / 2`` (so ``w <= 1``) and the small
    root ``alpha = (1 - sqrt(1 - w)) / 2``.
    """
    ctx = workctx(prec.working_digits)
    t = ctx.convert(t)
    if ctx.im(t) != 0:
        raise DomainError("t_to_alpha is defined on the real axis only")
    t = ctx.re(t)
    t_end = endpoint_t(prec)
    slack = ctx.mpf(10) ** (-(prec.working_digits - 5))
    if t < t_end - slack:
        raise DomainError(
            f"t = {ctx.nstr(t, 12)} is below {ctx.nstr(t_end, 12)}; the closed form does not reach it"
        )
    root_w = (t - ctx.sqrt(t * t - 4)) / 2
    w = root_w**2
    alpha = (1 - ctx.sqrt(1 - w)) / 2
    end = endpoint_alpha(prec)
    return min(alpha, end)


def _as_point(alpha, prec) -> AlphaPoint:
    if isinstance(alpha, AlphaPoint):
        return alpha
    return AlphaPoint.from_alpha(alpha, prec)


def j_hyper(alpha, prec: PrecisionConfig = DEFAULT_PRECISION) -> EvalResult:
    r"""J(t(alpha)) from the closed form

    .. math::
        -\tfrac12\log\bigl(4\alpha(1-\alpha)^{19}(1+\alpha)^{12}\bigr)
        - \tfrac{11}{4}\alpha(1-\alpha)\,F_1\bigl(4\alpha(1-\alpha)\bigr)
        - \frac{7\alpha}{4(1-\alpha)^2}\,F_1\Bigl(\frac{-4\alpha}{(1-\alpha)^2}\Bigr)
        + \frac{9\alpha(1-\alpha)^2}{4(1+\alpha)^4}\,F_3\Bigl(\frac{16\alpha(1-\alpha)^2}{(1+\alpha)^4}\Bigr)

    with :math:`F_1 = {}_5F_4(\tfrac32,\tfrac32,\tfrac32,1,1;2,2,2,2;\cdot)` and
    :math:`F_3 = {}_5F_4(\tfrac54,\tfrac32,\tfrac74,1,1;2,2,2,2;\cdot)`.

    ``alpha`` may be an :class:`AlphaPoint` or a number. Real alpha beyond
    the endpoint raises :class:`DivergenceError` (branch cut), other invalid
    points raise :class:`DomainError`.
    """
    point = _as_point(alpha, prec)
    ctx = workctx(prec.working_digits)
    a = point.alpha
    if point.region == "invalid":
        if ctx.im(a) == 0 and a > endpoint_alpha(prec) and a < 1:
            raise DivergenceError(
                "alpha beyond (sqrt(2)-1)^2: the third 5F4 argument has passed its branch point at 1"
            )
        raise DomainError(f"alpha = {a} is outside the validity region")

    logs = ctx.log(4) + ctx.log(a) + 19 * ctx.log(1 - a) + 12 * ctx.log(1 + a)
    c1 = ctx.mpf(11) / 4 * a * (1 - a)
    c2 = 7 * a / (4 * (1 - a) ** 2)
    c3 = 9 * a * (1 - a) ** 2 / (4 * (1 + a) ** 4)
    z2 = -4 * a / (1 - a) ** 2
    z3 = 16 * a * (1 - a) ** 2 / (1 + a) ** 4
    if point.alpha == endpoint_alpha(prec):
        # both arguments land on the unit circle exactly
        z2, z3 = ctx.mpf(-1), ctx.mpf(1)
    f1 = pfq(HyperSeriesSpec(*_FIRST, 4 * a * (1 - a)), prec)
    f2 = pfq(HyperSeriesSpec(*_FIRST, z2), prec)
    f3 = pfq(HyperSeriesSpec(*_THIRD, z3), prec)
    value = -logs / 2 - c1 * f1.value - c2 * f2.value + c3 * f3.value
    if ctx.im(value) == 0:
        value = ctx.re(value)
    err = float(abs(c1) * f1.err_bound + abs(c2) * f2.err_bound + abs(c3) * f3.err_bound)
    err += float(10 * ctx.eps * (abs(logs) + 1))
    work = {"terms": f1.work["terms"] + f2.work["terms"] + f3.work["terms"]}
    endpoint = "pfq-unit-richardson" in (f2.method, f3.method)
    method = "closed-form-5F4-endpoint" if endpoint else "closed-form-5F4"
    return EvalResult(value, err, method, work)


def dt_dalpha(alpha, prec: PrecisionConfig = DEFAULT_PRECISION):
    """``dt/dalpha = 2(2a-1)^3 / (4a(1-a))^(3/2)``."""
    ctx = workctx(prec.working_digits)
    a = ctx.convert(alpha)
    return 2 * (2 * a - 1) ** 3 / (4 * a * (1 - a)) ** ctx.mpf(1.5)


def presumed_equality_residual(alpha, prec: PrecisionConfig = DEFAULT_PRECISION):
    r"""``|LHS - RHS|`` for the derivative form of the closed-form identity.

    The left side is :math:`G(t)\,dt/d\alpha` with G from :func:`g_closed`;
    the right side is

    .. math::
        -\frac{11(1-2\alpha)}{2\alpha(1-\alpha)}F(4\alpha(1-\alpha))
        + \frac{7(1+\alpha)}{2\alpha(1-\alpha)}F\Bigl(\frac{-4\alpha}{(1-\alpha)^2}\Bigr)
        + \frac{3(1-6\alpha+\alpha^2)}{2\alpha(1-\alpha^2)}\,
          {}_3F_2\bigl(\tfrac14,\tfrac12,\tfrac34;1,1;\tfrac{16\alpha(1-\alpha)^2}{(1+\alpha)^4}\bigr)

    with :math:`F = {}_3F_2(\tfrac12,\tfrac12,\tfrac12;1,1;\cdot)`.
    """
    ctx = workctx(prec.working_digits)
    a = ctx.convert(alpha)
    if ctx.im(a) != 0 or not 0 < a < endpoint_alpha(prec):
        raise DomainError("alpha must be real and strictly inside (0, (sqrt(2)-1)^2)")
    t = alpha_to_t(a, prec)
    lhs = g_closed(t, prec).value * dt_dalpha(a, prec)

    half3 = ([_H, _H, _H], [1, 1])
    p1 = pfq(HyperSeriesSpec(*half3, 4 * a * (1 - a)), prec).value
    p2 = pfq(HyperSeriesSpec(*half3, -4 * a / (1 - a) ** 2), prec).value
    p3 = pfq(
        HyperSeriesSpec([Fraction(1, 4), _H, Fraction(3, 4)], [1, 1], 16 * a * (1 - a) ** 2 / (1 + a) ** 4),
        prec,
    ).value
    rhs = (
        -11 * (1 - 2 * a) / (2 * a * (1 - a)) * p1
        + 7 * (1 + a) / (2 * a * (1 - a)) * p2
        + 3 * (1 - 6 * a + a * a) / (2 * a * (1 - a * a)) * p3
    )
    return abs(lhs - rhs)
