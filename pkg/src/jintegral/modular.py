r"""Eta products, the modular parameter u(q), lattice sums and special values of J.

The lattice-sum expansion evaluated here is

.. math::
    J\bigl(u(e^{-2\pi v})\bigr) = -3\log 2
      + \frac{15v}{\pi^3}\sum_{(n,k)\ne(0,0)} \frac{3n^2-(2v)^2k^2}{(n^2+(2v)^2k^2)^3}
      + \frac{48v}{\pi^3}\sum_{n,k} \frac{3(2n+1)^2-(2v)^2(2k+1)^2}{((2n+1)^2+(2v)^2(2k+1)^2)^3},

valid for ``v >= 1/2``, with

.. math:: u(q) = m + 1/m, \qquad m = \Bigl(2^{1/4}\frac{\eta(q)\eta(q^4)}{\eta(q^2)^2}\Bigr)^{12}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .numerics import (
    DEFAULT_PRECISION,
    CutoffError,
    DomainError,
    EvalResult,
    PrecisionConfig,
    ReflectionError,
    workctx,
)

__all__ = [
    "QSeries",
    "eta",
    "eta_tail_bound",
    "u_of_q",
    "LatticeSumSpec",
    "lattice_shell_sums",
    "j_lattice",
    "dirichlet_l",
    "kronecker_symbol",
    "eta_product_coefficients",
    "fricke_eigenvalue",
    "l_eta_product_3",
    "j_special",
]


# -- q-series ----------------------------------------------------------------


@dataclass(frozen=True)
class QSeries:
    """A q-expansion ``q**offset * sum_{n < order} coeffs[n] q**n`` known modulo ``q**order``.

    Coefficients are exact Python integers.
    """

    coeffs: tuple
    offset: Fraction = Fraction(0)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int) -> int:
        return self.coeffs[n]

    def truncate(self, order: int) -> "QSeries":
        return QSeries(self.coeffs[:order], self.offset)

    def __mul__(self, other: "QSeries") -> "QSeries":
        order = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [0] * order
        for i, ai in enumerate(a[:order]):
            if ai:
                for j in range(order - i):
                    if b[j]:
                        out[i + j] += ai * b[j]
        return QSeries(tuple(out), self.offset + other.offset)

    def __pow__(self, e: int) -> "QSeries":
        if e < 0:
            raise ValueError("only non-negative powers are supported")
        result = QSeries((1,) + (0,) * (self.order - 1), Fraction(0))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def dilate(self, m: int) -> "QSeries":
        """Substitute ``q -> q**m``, keeping the same truncation order."""
        out = [0] * self.order
        for n, c in enumerate(self.coeffs):
            if n * m >= self.order:
                break
            out[n * m] = c
        return QSeries(tuple(out), self.offset * m)

    @classmethod
    def euler(cls, order: int) -> "QSeries":
        """``prod_{n >= 1} (1 - q**n)`` modulo ``q**order``."""
        c = [0] * order
        c[0] = 1
        for k in range(1, order):
            for n in range(order - 1, k - 1, -1):
                c[n] -= c[n - k]
        return cls(tuple(c))

    @classmethod
    def eta_product(cls, exponents: dict, order: int) -> "QSeries":
        """``prod_m eta(m tau)**e_m`` for non-negative exponents, offset included."""
        base = cls.euler(order)
        result = cls((1,) + (0,) * (order - 1))
        offset = Fraction(0)
        for m, e in sorted(exponents.items()):
            result = result * base.dilate(m) ** e
            offset += Fraction(m * e, 24)
        return cls(result.coeffs, offset)


# -- eta and u ---------------------------------------------------------------


def _check_q(q, ctx):
    q = ctx.convert(q)
    if ctx.im(q) != 0 or not 0 < q < 1:
        raise DomainError(f"q must be real in (0, 1), got {q}")
    return ctx.re(q)


def _default_order(q, dps: int) -> int:
    return max(8, int(math.ceil(dps * math.log(10) / -math.log(float(q)))) + 2)


def eta_tail_bound(q, order: int) -> float:
    """Relative error bound ``exp(q**(order+1) / (1-q)**2) - 1`` of the truncated product."""
    q = float(q)
    return math.expm1(q ** (order + 1) / (1 - q) ** 2)


def eta(q, order: int | None = None, prec: PrecisionConfig = DEFAULT_PRECISION):
    """Dedekind eta ``q**(1/24) prod_{n <= order} (1 - q**n)``.

    ``order`` defaults to the smallest product length whose relative tail
    bound is below the working precision.
    """
    ctx = workctx(prec.working_digits)
    q = _check_q(q, ctx)
    if order is None:
        order = _default_order(q, prec.working_digits)
    prod = ctx.mpf(1)
    qn = q
    for _ in range(order):
        prod *= 1 - qn
        qn *= q
    return q ** (ctx.mpf(1) / 24) * prod


def u_of_q(q, prec: PrecisionConfig = DEFAULT_PRECISION):
    """``m + 1/m`` with ``m = (2**(1/4) eta(q) eta(q^4) / eta(q^2)^2)**12``."""
    ctx = workctx(prec.working_digits)
    q = _check_q(q, ctx)
    m = (ctx.root(2, 4) * eta(q, prec=prec) * eta(q**4, prec=prec) / eta(q**2, prec=prec) ** 2) ** 12
    return m + 1 / m


# -- lattice sums ------------------------------------------------------------


@dataclass(frozen=True)
class LatticeSumSpec:
    """Parameters of the lattice-sum expansion of J.

    Shells ``max(|n|, |k|) <= cutoff_radius`` are summed; ``tail_mode`` is
    ``"richardson"`` (extrapolate in 1/R) or ``"none"`` (raw truncation).
    """

    v: float
    cutoff_radius: int = 2000
    tail_mode: str = "richardson"
    tolerance: float = 1e-8

    def __post_init__(self):
        if not self.v >= 0.5:
            raise DomainError(f"the expansion holds for v >= 1/2, got v = {self.v}")
        if self.cutoff_radius < 16:
            raise CutoffError("cutoff_radius must be at least 16")
        if self.tail_mode not in ("richardson", "none"):
            raise DomainError(f"unknown tail_mode {self.tail_mode!r}")


_ROW_BLOCK = 256
# leading exponents of the square-shell truncation error, fitted on v in [1/2, 8]
_RICHARDSON_EXPONENTS = (2, 3, 4)


def lattice_shell_sums(v: float, radius: int):
    """Per-shell contributions of both lattice sums.

    Returns arrays ``(s1, s2)`` of length ``radius + 1`` where ``s1[r]``
    holds the terms of the first sum with ``max(|n|, |k|) = r`` and ``s2[r]``
    the terms of the odd sum with ``max(|2n+1|, |2k+1|) = 2r + 1``. Both are
    summed over one quadrant with the sign multiplicities folded in, which
    makes them exactly invariant under ``(n, k) -> (-n, -k)``.
    """
    w2 = (2.0 * v) ** 2
    idx = np.arange(radius + 1, dtype=np.float64)
    sq = idx**2
    odd_sq = (2 * idx + 1) ** 2
    mult = np.where(idx > 0, 2.0, 1.0)
    s1 = np.zeros(radius + 1)
    s2 = np.zeros(radius + 1)
    for start in range(0, radius + 1, _ROW_BLOCK):
        rows = slice(start, min(start + _ROW_BLOCK, radius + 1))
        n = np.arange(rows.start, rows.stop)
        shell = np.maximum(n[:, None], np.arange(radius + 1)[None, :]).ravel()

        nn, kk = sq[rows][:, None], w2 * sq[None, :]
        den = (nn + kk) ** 3
        with np.errstate(divide="ignore", invalid="ignore"):
            term = (3 * nn - kk) / den
        if start == 0:
            term[0, 0] = 0.0
        term *= mult[rows][:, None] * mult[None, :]
        s1 += np.bincount(shell, weights=term.ravel(), minlength=radius + 1)

        aa, bb = odd_sq[rows][:, None], w2 * odd_sq[None, :]
        term = 4.0 * (3 * aa - bb) / (aa + bb) ** 3
        s2 += np.bincount(shell, weights=term.ravel(), minlength=radius + 1)
    return s1, s2


def j_lattice(spec: LatticeSumSpec) -> EvalResult:
    """J(u(exp(-2 pi v))) from the lattice-sum expansion.

    With ``tail_mode="richardson"`` the partial sums at R, R/2, R/4, R/8 are
    extrapolated; the spread of the last two extrapolants is the error
    estimate. Raises :class:`CutoffError` if that estimate exceeds
    ``spec.tolerance``.
    """
    v, radius = float(spec.v), int(spec.cutoff_radius)
    s1, s2 = lattice_shell_sums(v, radius)
    partial = -3 * math.log(2) + 15 * v / math.pi**3 * np.cumsum(s1) + 48 * v / math.pi**3 * np.cumsum(s2)
    work = {"lattice_points": 2 * (radius + 1) ** 2}
    if spec.tail_mode == "none":
        est = abs(partial[radius] - partial[radius // 2]) / 3
        if est > spec.tolerance:
            raise CutoffError(f"raw truncation at R={radius} leaves ~{est:.2e}")
        return EvalResult(float(partial[radius]), est, "lattice-shells", work)

    levels = len(_RICHARDSON_EXPONENTS) + 1
    radii = [radius >> j for j in range(levels)][::-1]
    table = [[float(partial[r])] for r in radii]
    for col, p in enumerate(_RICHARDSON_EXPONENTS):
        factor = 2.0**p - 1
        for row in range(col + 1, levels):
            table[row].append(table[row][col] + (table[row][col] - table[row - 1][col]) / factor)
    value = table[-1][-1]
    est = abs(value - table[-1][-2]) + abs(value - table[-2][-1]) + 4e-16 * (abs(value) + 1)
    if est > spec.tolerance:
        raise CutoffError(f"cutoff {radius} too small: tail estimate {est:.2e} > {spec.tolerance:.1e}")
    return EvalResult(value, est, "lattice-shells-richardson", work)


# -- Dirichlet L-values --------------------------------------------------------


def kronecker_symbol(d: int, n: int) -> int:
    """``(d/n)`` for the fundamental discriminants -3 and -4."""
    if d == -4:
        return (0, 1, 0, -1)[n % 4]
    if d == -3:
        return (0, 1, -1)[n % 3]
    raise DomainError(f"only discriminants -3 and -4 are supported, got {d}")


def dirichlet_l(modulus_tag: int, s: int, prec: PrecisionConfig = DEFAULT_PRECISION):
    r"""``L_d(s) = sum_{n >= 1} (d/n) n**-s`` for ``d`` in {-3, -4}.

    The first ``N`` periods are summed directly and the tail of every residue
    class ``a mod m`` is closed with Euler-Maclaurin applied to
    ``x -> (m x + a)**-s``.
    """
    if s < 2 or int(s) != s:
        raise DomainError("s must be an integer >= 2")
    s = int(s)
    m = -modulus_tag
    chars = [(a, kronecker_symbol(modulus_tag, a)) for a in range(1, m + 1)]
    ctx = workctx(prec.working_digits)
    periods = 40
    head = ctx.fsum(
        chi * ctx.mpf(j * m + a) ** -s for j in range(periods) for a, chi in chars if chi
    )
    tail = 0
    terms = max(10, prec.working_digits // 2)
    bern = [ctx.bernoulli(2 * k) / ctx.factorial(2 * k) for k in range(1, terms + 1)]
    for a, chi in chars:
        if not chi:
            continue
        x0 = ctx.mpf(periods * m + a)
        # sum_{j >= periods} (m j + a)^-s = integral + f/2 - sum B_2k/(2k)! f^(2k-1)
        acc = x0 ** (1 - s) / (m * (s - 1)) + x0**-s / 2
        for k, b in enumerate(bern, start=1):
            r = 2 * k - 1
            deriv = ctx.rf(s, r) * (-1) ** r * m**r * x0 ** (-s - r)
            acc -= b * deriv
        tail += chi * acc
    return head + tail


# -- weight-3 cusp form L-value -------------------------------------------------

_LEVEL = 12
_WEIGHT = 3


def eta_product_coefficients(count: int) -> list:
    """``a_1 .. a_count`` of ``eta(2 tau)^3 eta(6 tau)^3 = sum a_n q^n``."""
    series = QSeries.eta_product({2: 3, 6: 3}, count)
    assert series.offset == 1
    return [0] + list(series.coeffs[:count])


def _f_iy(coeffs, y, ctx):
    q = ctx.exp(-2 * ctx.pi * y)
    return ctx.fsum(c * q**n for n, c in enumerate(coeffs) if c)


def fricke_eigenvalue(coeffs, ys=(0.2, 0.25, 0.3, 0.35), prec: PrecisionConfig = DEFAULT_PRECISION):
    """Measure ``f(i/(12y)) / (12**(3/2) y**3 f(iy))`` at several ``y``.

    Returns the list of ratios; for a Fricke eigenform all equal the eigenvalue.
    """
    ctx = workctx(prec.working_digits)
    out = []
    for y in ys:
        y = ctx.mpf(y)
        lhs = _f_iy(coeffs, 1 / (_LEVEL * y), ctx)
        rhs = ctx.mpf(_LEVEL) ** (ctx.mpf(_WEIGHT) / 2) * y**_WEIGHT * _f_iy(coeffs, y, ctx)
        out.append(lhs / rhs)
    return out


def l_eta_product_3(prec: PrecisionConfig = DEFAULT_PRECISION) -> EvalResult:
    r"""``L(f, 3)`` for ``f = eta(2 tau)^3 eta(6 tau)^3`` (weight 3, level 12).

    From :math:`\Gamma(3)(2\pi)^{-3}L(f,3)=\int_0^\infty f(iy)y^2\,dy`, the
    integral is split at :math:`y_0 = 1/\sqrt{12}` and the lower piece is
    folded onto the upper one with :math:`f(i/(12y)) = \varepsilon\,12^{3/2}y^3 f(iy)`:

    .. math:: \frac{2}{(2\pi)^3}L(f,3) = \sum_n a_n\frac{\Gamma(3, 2\pi n y_0)}{(2\pi n)^3}
              + \varepsilon\,12^{-3/2}\sum_n a_n E_1(2\pi n y_0).

    ``epsilon`` is measured first; :class:`ReflectionError` is raised if it is
    not +-1 to working precision.
    """
    ctx = workctx(prec.working_digits)
    dps = prec.working_digits
    count = int(math.ceil((dps * math.log(10) + 20) / (2 * math.pi * 0.2))) + 8
    coeffs = eta_product_coefficients(count)

    ratios = fricke_eigenvalue(coeffs, prec=prec)
    eps_val = ratios[0]
    tol = ctx.mpf(10) ** (-(prec.digits - 5))
    sign = 1 if eps_val > 0 else -1
    if any(abs(r - sign) > tol for r in ratios):
        raise ReflectionError(f"measured Fricke ratios {[ctx.nstr(r, 10) for r in ratios]} are not +-1")

    y0 = 1 / ctx.sqrt(_LEVEL)
    upper = ctx.fsum(
        a * ctx.gammainc(_WEIGHT, 2 * ctx.pi * n * y0) / (2 * ctx.pi * n) ** _WEIGHT
        for n, a in enumerate(coeffs) if a
    )
    lower = ctx.fsum(a * ctx.e1(2 * ctx.pi * n * y0) for n, a in enumerate(coeffs) if a)
    lower *= sign * ctx.mpf(_LEVEL) ** (-ctx.mpf(_WEIGHT) / 2)
    value = (2 * ctx.pi) ** _WEIGHT / ctx.gamma(_WEIGHT) * (upper + lower)
    # first omitted term bounds the remainder (terms decay like exp(-1.81 n))
    tail = float(count**2 * ctx.exp(-2 * ctx.pi * (count + 1) * y0))
    return EvalResult(value, tail + float(ctx.eps) * 10, "mellin-fricke", {"coefficients": count})


def j_special(tag: str, prec: PrecisionConfig = DEFAULT_PRECISION) -> EvalResult:
    r"""Closed-form special values of J.

    ``"t=2"``:   :math:`\frac8\pi L_{-4}(2) - 3\log 2`

    ``"t=5/2"``: :math:`\frac{24\sqrt3}{\pi^3}L(\eta^3(2\tau)\eta^3(6\tau),3)
    + \frac{15\sqrt3}{4\pi}L_{-3}(2) - 3\log 2`
    """
    ctx = workctx(prec.working_digits)
    tag = tag.replace(" ", "")
    if tag in ("t=2", "2"):
        value = 8 / ctx.pi * dirichlet_l(-4, 2, prec) - 3 * ctx.log(2)
        return EvalResult(value, float(ctx.eps) * 10, "closed-form-catalan", {"l_values": 1})
    if tag in ("t=5/2", "5/2", "t=2.5", "2.5"):
        lf = l_eta_product_3(prec)
        s3 = ctx.sqrt(3)
        value = (
            24 * s3 / ctx.pi**3 * lf.value
            + 15 * s3 / (4 * ctx.pi) * dirichlet_l(-3, 2, prec)
            - 3 * ctx.log(2)
        )
        err = 24 * 1.7320508075688772 / math.pi**3 * lf.err_bound + float(ctx.eps) * 10
        return EvalResult(value, err, "closed-form-modular-l", {"l_values": 2, **lf.work})
    raise DomainError(f"no closed form for {tag!r}; expected 't=2' or 't=5/2'")
