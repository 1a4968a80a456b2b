r"""Generalized hypergeometric series and the transformation identities behind J.

The workhorse is :func:`pfq`, which sums

.. math:: {}_pF_q(a; b; z) = \sum_{n\ge 0} \frac{(a_1)_n\cdots(a_p)_n}{(b_1)_n\cdots(b_q)_n}\frac{z^n}{n!}

for rational parameters with ``p = q + 1``. Terms are updated with exact
integer ratios in binary fixed point, which keeps a million-term sum at
``|z|`` close to one within a few seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .numerics import (
    DEFAULT_PRECISION,
    DivergenceError,
    DomainError,
    EvalResult,
    NonConvergenceError,
    PrecisionConfig,
    workctx,
)

__all__ = [
    "HyperSeriesSpec",
    "pfq",
    "deriv_5f4_identity_residual",
    "deriv_5f4_coefficients",
    "erdelyi_quadratic_chain",
    "clausen_square_residuals",
    "ENDPOINT_ALPHA",
]

# (sqrt(2) - 1)^2 = 3 - 2 sqrt(2), the right end of the real validity interval.
ENDPOINT_ALPHA = 3 - 2 * math.sqrt(2)


def _rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**6)
    raise TypeError(f"hypergeometric parameters must be rational, got {x!r}")


@dataclass(frozen=True)
class HyperSeriesSpec:
    """Parameters and argument of a :math:`{}_pF_q` series.

    Parameters are stored as :class:`fractions.Fraction`; floats are
    rationalised with a denominator limit of ``10**6`` so ``1.5`` becomes
    ``3/2``.
    """

    upper: tuple
    lower: tuple
    argument: object

    def __init__(self, upper: Sequence, lower: Sequence, argument):
        object.__setattr__(self, "upper", tuple(_rational(a) for a in upper))
        object.__setattr__(self, "lower", tuple(_rational(b) for b in lower))
        object.__setattr__(self, "argument", argument)
        for b in self.lower:
            if b.denominator == 1 and b <= 0:
                raise DomainError(f"lower parameter {b} is zero or a negative integer")
        if len(self.upper) != len(self.lower) + 1:
            raise DomainError(
                f"expected p = q + 1 parameters, got p={len(self.upper)}, q={len(self.lower)}"
            )

    @property
    def excess(self) -> Fraction:
        """Sum of lower minus sum of upper parameters."""
        return sum(self.lower, Fraction(0)) - sum(self.upper, Fraction(0))

    def label(self) -> str:
        up = ",".join(str(a) for a in self.upper)
        lo = ",".join(str(b) for b in self.lower)
        return f"{len(self.upper)}F{len(self.lower)}({up};{lo})"


def _ratio_polys(spec: HyperSeriesSpec):
    """Integer factors (p, q) so the term ratio at n is
    ``prod(p_i + n q_i) / prod(p_j + n q_j)`` over upper / lower (with n! folded in)."""
    qa = math.prod(a.denominator for a in spec.upper)
    qb = math.prod(b.denominator for b in spec.lower)
    up = [(a.numerator, a.denominator) for a in spec.upper]
    lo = [(b.numerator, b.denominator) for b in spec.lower] + [(1, 1)]
    return up, lo, qb, qa


def _bits_for(prec: PrecisionConfig) -> int:
    return int(prec.working_digits * 3.33) + 16 + prec.term_cap.bit_length()


def pfq(spec: HyperSeriesSpec, prec: PrecisionConfig = DEFAULT_PRECISION) -> EvalResult:
    """Sum a convergent :math:`{}_{q+1}F_q` series with a tail bound.

    Inside the unit disk the sum stops once the geometric majorant
    ``|T_{n+1}| r / (1 - r)`` of the remaining tail drops below
    ``10**-digits``, where ``r`` bounds every later term ratio. At ``z = 1``
    (convergent when the parameter excess is positive) partial sums at
    doubling lengths are Richardson-extrapolated in the known powers
    ``N**-(excess + k)``; the error estimate is then the spread of the last
    two extrapolants rather than a strict bound. ``z = -1`` is handled the
    same way on even partial sums, whose error expands in
    ``N**-(1 + excess + k)``.

    Raises
    ------
    DivergenceError
        If ``|z| > 1``, or ``|z| = 1`` with non-positive excess.
    NonConvergenceError
        If ``term_cap`` terms do not meet the target, or ``|z| = 1`` with
        ``z`` other than 1 or -1.
    """
    ctx = workctx(prec.working_digits)
    z = spec.argument
    z = ctx.mpf(z.numerator) / z.denominator if isinstance(z, Fraction) else ctx.convert(z)
    absz = abs(z)
    snap = ctx.mpf(10) ** (-(prec.working_digits - 5))

    if z == 0:
        return EvalResult(ctx.mpf(1), 0.0, "pfq-series", {"terms": 1})
    if absz > 1 + snap:
        raise DivergenceError(f"|z| = {mpmath.nstr(absz, 8)} > 1 for {spec.label()}")
    if abs(absz - 1) <= snap:
        if spec.excess <= 0:
            raise DivergenceError(f"{spec.label()} diverges on |z| = 1 (excess {spec.excess})")
        if abs(z - 1) <= snap:
            return _pfq_unit(spec, prec, 1)
        if abs(z + 1) <= snap:
            return _pfq_unit(spec, prec, -1)
        raise NonConvergenceError("unit-circle evaluation is only implemented at z = 1 and z = -1")
    return _pfq_disk(spec, z, prec)


def _pfq_disk(spec: HyperSeriesSpec, z, prec: PrecisionConfig) -> EvalResult:
    ctx = workctx(prec.working_digits)
    bits = _bits_for(prec)
    one = 1 << bits
    is_complex = ctx.im(z) != 0
    zr = int(ctx.floor(ctx.re(z) * one))
    zi = int(ctx.floor(ctx.im(z) * one)) if is_complex else 0
    absz = float(abs(z))
    up, lo, cnum, cden = _ratio_polys(spec)
    target = prec.target / 10
    cap = prec.term_cap

    tr, ti = one, 0
    sr, si = one, 0
    n = 0
    r_prev = math.inf
    tail = math.inf
    while True:
        num = cnum
        for p, q in up:
            num *= p + n * q
        den = cden
        for p, q in lo:
            den *= p + n * q
        if num == 0:
            tail = 0.0
            break
        if is_complex:
            a = tr * zr - ti * zi
            b = tr * zi + ti * zr
            tr = ((a >> bits) * num) // den
            ti = ((b >> bits) * num) // den
            sr += tr
            si += ti
        else:
            tr = ((tr * zr >> bits) * num) // den
            sr += tr
        n += 1
        r = absz * num / den
        # later ratios are bounded by max(r, |z|) once they move monotonically
        if r <= r_prev or r <= absz:
            rmax = max(r, absz)
            if rmax < 1:
                mag = math.hypot(tr / one, ti / one) if is_complex else abs(tr / one)
                tail = mag * rmax / (1 - rmax)
                if tail < target:
                    break
        r_prev = r
        if n >= cap:
            raise NonConvergenceError(
                f"{spec.label()} at |z|={absz:.6g}: {cap} terms did not reach {target:.1e}"
            )
    rounding = 4.0 * (n + 1) * 2.0 ** (-bits) * (1 + 1 / max(1e-300, 1 - absz))
    if is_complex:
        value = ctx.mpc(ctx.mpf(sr) / one, ctx.mpf(si) / one)
    else:
        value = ctx.mpf(sr) / one
    return EvalResult(value, float(tail + rounding), "pfq-series", {"terms": n + 1})


def _pfq_unit(spec: HyperSeriesSpec, prec: PrecisionConfig, sign: int) -> EvalResult:
    """Evaluate at z = sign (+1 or -1) by Richardson extrapolation of partial sums.

    For z = 1 the tail beyond N expands in N**-(s + k), k = 0, 1, ..., with s
    the parameter excess; for z = -1 the even partial sums differ from the
    limit by a series in N**-(1 + s + k).
    """
    ctx = workctx(prec.working_digits)
    bits = _bits_for(prec)
    one = 1 << bits
    up, lo, cnum, cden = _ratio_polys(spec)
    s = ctx.mpf(spec.excess.numerator) / spec.excess.denominator
    if sign < 0:
        s += 1
    target = prec.target / 10
    cap = prec.term_cap

    checkpoint = 64
    table: list[list] = []
    t, acc = one, one
    n = 0
    best = None
    while True:
        num = cnum
        for p, q in up:
            num *= p + n * q
        den = cden
        for p, q in lo:
            den *= p + n * q
        if num == 0:
            return EvalResult(ctx.mpf(acc) / one, 0.0, "pfq-series", {"terms": n + 1})
        t = (sign * t * num) // den
        acc += t
        n += 1
        if n == checkpoint:
            row = [ctx.mpf(acc) / one]
            for k, prev in enumerate(table[-1] if table else []):
                factor = ctx.mpf(2) ** (s + k) - 1
                row.append(row[k] + (row[k] - prev) / factor)
            table.append(row)
            if len(table) >= 3:
                est = abs(row[-1] - table[-2][-1])
                if best is None or est < best[1]:
                    best = (row[-1], est)
                if est < target:
                    break
            checkpoint *= 2
            if checkpoint > cap:
                if best is not None and best[1] < 1e3 * target:
                    break
                raise NonConvergenceError(
                    f"{spec.label()} at z={sign}: extrapolation stalled at {mpmath.nstr(best[1], 3)}"
                )
    value, est = best
    return EvalResult(value, float(10 * est), "pfq-unit-richardson", {"terms": n + 1})


# -- identities ---------------------------------------------------------------


def _check_s(s) -> Fraction:
    s = _rational(s)
    if not 0 < s < 1:
        raise DomainError(f"s must lie in (0, 1), got {s}")
    return s


def deriv_5f4_identity_residual(s, z, prec: PrecisionConfig = DEFAULT_PRECISION):
    r"""Residual of the derivative formula linking the :math:`{}_5F_4` and :math:`{}_3F_2` families.

    Returns

    .. math:: \Bigl|\tfrac{d}{dz}\bigl[z\,{}_5F_4(2-s,\tfrac32,1+s,1,1;2,2,2,2;z)\bigr]
              - \tfrac{2}{s(1-s)z}\bigl({}_3F_2(1-s,\tfrac12,s;1,1;z)-1\bigr)\Bigr|

    The derivative is taken term by term: multiplying the n-th coefficient by
    ``n + 1 = (2)_n / (1)_n`` appends an upper 2 and a lower 1.
    """
    s = _check_s(s)
    ctx = workctx(prec.working_digits)
    z = ctx.convert(z)
    if not 0 < abs(z) < 1:
        raise DomainError("need 0 < |z| < 1")
    lhs = pfq(HyperSeriesSpec([2 - s, Fraction(3, 2), 1 + s, 1, 1, 2], [2, 2, 2, 2, 1], z), prec)
    f32 = pfq(HyperSeriesSpec([1 - s, Fraction(1, 2), s], [1, 1], z), prec)
    sf = ctx.mpf(s.numerator) / s.denominator
    rhs = 2 / (sf * (1 - sf) * z) * (f32.value - 1)
    return abs(lhs.value - rhs)


def deriv_5f4_coefficients(s, nmax: int) -> list[tuple[Fraction, Fraction]]:
    """Exact rational coefficients of z**(n-1), n = 1..nmax, on both sides of
    the derivative formula (left: derivative of z*5F4, right: 3F2 combination)."""
    s = _check_s(s)
    half = Fraction(1, 2)
    c5 = [Fraction(1)]
    c3 = [Fraction(1)]
    for k in range(nmax):
        c5.append(c5[-1] * (2 - s + k) * (Fraction(3, 2) + k) * (1 + s + k) * (1 + k) ** 2
                  / ((2 + k) ** 4 * (1 + k)))
        c3.append(c3[-1] * (1 - s + k) * (half + k) * (s + k) / (1 + k) ** 3)
    scale = 2 / (s * (1 - s))
    return [(n * c5[n - 1], scale * c3[n]) for n in range(1, nmax + 1)]


def _sqrt2_endpoint(ctx):
    return (ctx.sqrt(2) - 1) ** 2


def erdelyi_quadratic_chain(alpha, prec: PrecisionConfig = DEFAULT_PRECISION):
    r"""Both sides of the composite quadratic transformation

    .. math:: \Bigl(1-\tfrac4{t^2}\Bigr)^{-1/4}\,{}_2F_1\bigl(\tfrac18,\tfrac58;1;\tfrac4{t^2}\bigr)^2
              = \frac{1+4\alpha-4\alpha^2}{1-2\alpha}\,{}_2F_1\bigl(\tfrac12,\tfrac12;1;\alpha\bigr)^2

    with :math:`t = \sqrt{4\alpha(1-\alpha)} + 1/\sqrt{4\alpha(1-\alpha)}`.
    Each side is summed independently.
    """
    ctx = workctx(prec.working_digits)
    alpha = ctx.convert(alpha)
    if alpha == ctx.mpf(1) / 2:
        raise DomainError("alpha = 1/2 is a pole of the right-hand side")
    if ctx.im(alpha) != 0 or not 0 < alpha <= _sqrt2_endpoint(ctx) + ctx.eps * 100:
        raise DomainError("alpha must be real in (0, (sqrt(2)-1)^2]")
    w = 4 * alpha * (1 - alpha)
    t = ctx.sqrt(w) + 1 / ctx.sqrt(w)
    x = 4 / t**2
    f_left = pfq(HyperSeriesSpec([Fraction(1, 8), Fraction(5, 8)], [1], x), prec).value
    lhs = (1 - x) ** (-ctx.mpf(1) / 4) * f_left**2
    f_right = pfq(HyperSeriesSpec([Fraction(1, 2), Fraction(1, 2)], [1], alpha), prec).value
    rhs = (1 + 4 * alpha - 4 * alpha**2) / (1 - 2 * alpha) * f_right**2
    return lhs, rhs


def clausen_square_residuals(alpha, prec: PrecisionConfig = DEFAULT_PRECISION):
    """Absolute residuals of the three Clausen-type squares used to reduce the
    ``3F2`` side of the derivative identity, for real or complex ``alpha``::

        3F2(1/2,1/2,1/2;1,1;4a(1-a))          = K^2
        3F2(1/2,1/2,1/2;1,1;-4a/(1-a)^2)      = (1-a) K^2
        3F2(1/4,1/2,3/4;1,1;16a(1-a)^2/(1+a)^4) = (1+a) K^2

    where ``K = 2F1(1/2,1/2;1;a)``.
    """
    ctx = workctx(prec.working_digits)
    a = ctx.convert(alpha)
    half, quarter = Fraction(1, 2), Fraction(1, 4)
    args = (
        4 * a * (1 - a),
        -4 * a / (1 - a) ** 2,
        16 * a * (1 - a) ** 2 / (1 + a) ** 4,
    )
    for z in args:
        if abs(z) >= 1:
            raise DivergenceError(
                f"transformed argument {mpmath.nstr(z, 8)} leaves the unit disk at alpha={alpha}"
            )
    k2 = pfq(HyperSeriesSpec([half, half], [1], a), prec).value ** 2
    r1 = pfq(HyperSeriesSpec([half, half, half], [1, 1], args[0]), prec).value - k2
    r2 = pfq(HyperSeriesSpec([half, half, half], [1, 1], args[1]), prec).value - (1 - a) * k2
    r3 = pfq(HyperSeriesSpec([quarter, half, 3 * quarter], [1, 1], args[2]), prec).value - (1 + a) * k2
    return abs(r1), abs(r2), abs(r3)
