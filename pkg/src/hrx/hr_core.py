"""Hüsler-Reiss limit family and its higher-order expansion coefficients.

The max-stable family interpolating between complete dependence and
independence of bivariate Gaussian maxima is

    H_lam(x, y) = exp(-Phi(lam + (y-x)/(2 lam)) e^{-x}
                  - Phi(lam + (x-y)/(2 lam)) e^{-y}),   0 < lam < inf,

with boundary members H_0(x,y) = exp(-e^{-min(x,y)}) (complete
dependence) and H_inf(x,y) = Lambda(x) Lambda(y) (independence), where
Lambda(x) = exp(-e^{-x}) is the Gumbel distribution.

For triangular arrays whose correlations satisfy the refined scaling
lam_n = lam - alpha/b_n^2 - beta/b_n^4 + o(b_n^-4), the distribution of
normalized maxima expands as

    F^n(u_n(x), u_n(y)) = H_lam (1 + kappa/b_n^2
                                 + (tau + kappa^2/2)/b_n^4 + o(b_n^-4)),

and this module carries the closed forms of every coefficient: the
univariate pieces s, t; the second-order coefficient kappa and its
companion kappa1; the fourth-order pieces tau1, tau2, tau3 assembled
into tau; and the auxiliary integrals

    I_k = int_y^inf phi(lam + (x-z)/(2 lam)) e^{-z} z^k dz,  k = 0..3,

whose closed forms the tau derivation rests on.  In the degenerate
regimes the coefficients collapse to the univariate s and t: s(x)+s(y)
(independence) and s(min(x,y)) (complete dependence), which is how
`hr_approx` handles the Zero/Infinity tags.

Every function here is an exact transcription of a closed form; all the
integrals have independent quadrature oracles in the test suite.
"""
from __future__ import annotations

import enum
import math
import operator
from dataclasses import dataclass

from .gauss import std_normal_cdf, std_normal_pdf, std_normal_survival
from .norming import solve_bn

__all__ = [
    "LambdaRegime",
    "HRParams",
    "ApproxOrder",
    "gumbel_cdf",
    "hr_cdf",
    "s_term",
    "t_term",
    "univariate_gumbel_approx",
    "kappa",
    "kappa1",
    "tau1",
    "tau2",
    "tau3",
    "tau",
    "I_closed",
    "hr_approx",
]

# Finite lam this close to a boundary is evaluated by the corresponding
# limit member: (y - x)/(2 lam) is no longer trustworthy beyond these.
_LAM_ZERO_CUTOFF = 1e-6
_LAM_INF_CUTOFF = 1e6


class LambdaRegime(enum.Enum):
    """Dependence regime of the limit: boundary members or interior."""

    ZERO = "zero"
    FINITE = "finite"
    INFINITY = "infinity"


class ApproxOrder(enum.Enum):
    """Truncation level of the 1/b_n^2 expansion."""

    FIRST = 1
    SECOND = 2
    THIRD = 3


@dataclass(frozen=True)
class HRParams:
    """Limit parameter lam plus the refinement coefficients alpha, beta.

    alpha and beta describe how fast the array's lam_n approaches lam;
    they only make sense for an interior (finite, positive) lam, so the
    boundary regimes reject nonzero values instead of ignoring them.
    """

    regime: LambdaRegime
    lam: float | None = None
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self) -> None:
        if self.regime is LambdaRegime.FINITE:
            if self.lam is None or not math.isfinite(self.lam) or self.lam <= 0:
                raise ValueError(
                    f"finite regime requires 0 < lam < inf, got {self.lam}"
                )
        else:
            if self.lam is not None:
                raise ValueError(
                    f"lam is determined by the {self.regime.value} regime; "
                    "leave it unset"
                )
            if self.alpha != 0.0 or self.beta != 0.0:
                raise ValueError(
                    f"alpha and beta are unused in the {self.regime.value} "
                    "regime; got "
                    f"alpha={self.alpha}, beta={self.beta}"
                )

    @classmethod
    def zero(cls) -> "HRParams":
        return cls(LambdaRegime.ZERO)

    @classmethod
    def infinity(cls) -> "HRParams":
        return cls(LambdaRegime.INFINITY)

    @classmethod
    def finite(cls, lam: float, alpha: float = 0.0, beta: float = 0.0) -> "HRParams":
        return cls(LambdaRegime.FINITE, float(lam), float(alpha), float(beta))


def _check_lam(lam: float) -> None:
    if not (math.isfinite(lam) and lam > 0.0):
        raise ValueError(f"requires finite lam > 0, got {lam}")


def gumbel_cdf(x: float) -> float:
    """Lambda(x) = exp(-e^{-x})."""
    return math.exp(-math.exp(-x))


def hr_cdf(params: HRParams, x: float, y: float) -> float:
    """Limit distribution H_lam(x, y) for the given regime."""
    if params.regime is LambdaRegime.ZERO:
        return gumbel_cdf(min(x, y))
    if params.regime is LambdaRegime.INFINITY:
        return gumbel_cdf(x) * gumbel_cdf(y)
    lam = params.lam
    if lam < _LAM_ZERO_CUTOFF:
        return gumbel_cdf(min(x, y))
    if lam > _LAM_INF_CUTOFF:
        return gumbel_cdf(x) * gumbel_cdf(y)
    half = (y - x) / (2.0 * lam)
    return math.exp(
        -std_normal_cdf(lam + half) * math.exp(-x)
        - std_normal_cdf(lam - half) * math.exp(-y)
    )


def s_term(x: float) -> float:
    """s(x) = (x^2 + 2x) e^{-x} / 2, the second-order univariate piece."""
    return 0.5 * (x * x + 2.0 * x) * math.exp(-x)


def t_term(x: float) -> float:
    """t(x) = -(x^4 + 4x^3 + 8x^2 + 16x) e^{-x} / 8."""
    return -0.125 * (((x + 4.0) * x + 8.0) * x + 16.0) * x * math.exp(-x)


def univariate_gumbel_approx(n: int, x: float, order: ApproxOrder) -> float:
    """Expansion of Phi^n(u_n(x)) about Lambda(x), truncated per order."""
    n = operator.index(n)
    if n < 3:
        raise ValueError(f"requires n >= 3, got {n}")
    g = gumbel_cdf(x)
    if order is ApproxOrder.FIRST:
        return g
    b2 = solve_bn(n).b_squared
    s = s_term(x)
    value = 1.0 + s / b2
    if order is ApproxOrder.THIRD:
        value += (t_term(x) + 0.5 * s * s) / (b2 * b2)
    return min(max(g * value, 0.0), 1.0)


def kappa(alpha: float, lam: float, x: float, y: float) -> float:
    """Second-order coefficient of the bivariate expansion."""
    _check_lam(lam)
    half = (y - x) / (2.0 * lam)
    return (
        s_term(x) * std_normal_cdf(lam + half)
        + s_term(y) * std_normal_cdf(lam - half)
        + (2.0 * alpha - lam * (lam * lam + x + y + 2.0))
        * math.exp(-x)
        * std_normal_pdf(lam + half)
    )


def kappa1(alpha: float, lam: float, x: float, y: float) -> float:
    """Second-order coefficient of the joint-tail piece alone.

    kappa splits as s(x)Phi + s(y)Phi + kappa1-like remainder; kappa1 is
    the b_n^2-scaled deviation of the joint exceedance from its limit.
    """
    _check_lam(lam)
    w = lam + (y - x) / (2.0 * lam)
    ex = math.exp(-x)
    lam2 = lam * lam
    return (2.0 * lam2 * lam2 - 2.0 * lam2 * x) * ex * std_normal_survival(w) + (
        2.0 * alpha - 3.0 * lam2 * lam
    ) * ex * std_normal_pdf(w)


def tau1(alpha: float, beta: float, lam: float, x: float, y: float) -> float:
    """Fourth-order piece from the correlation refinement (alpha, beta)."""
    _check_lam(lam)
    w = lam + (y - x) / (2.0 * lam)
    ex = math.exp(-x)
    l2 = lam * lam
    l3 = l2 * lam
    l4 = l2 * l2
    l5 = l4 * lam
    l6 = l4 * l2
    l7 = l6 * lam
    l8 = l4 * l4
    a2 = alpha * alpha
    c_pb = (
        2.0 * l8
        + 8.0 * l6
        - 4.0 * l6 * x
        + 2.0 * l4 * x * x
        - 4.0 * l4 * x
        - 8.0 * alpha * l3
        + 4.0 * alpha * lam * x
    )
    c_ph = (
        2.0 * beta
        + 9.0 * alpha * l2
        - 23.0 / 4.0 * l5
        - 3.0 / 8.0 * l3 * x * y
        - alpha * l2 * x
        + 3.0 / 4.0 * alpha * y * y
        - a2 / (4.0 * l3) * y * y
        - a2 / (4.0 * l3) * x * x
        - alpha * l2 * y
        - alpha / 4.0 * x * x
        - 7.0 / 4.0 * l7
        + 7.0 / 2.0 * l5 * x
        - l3 * x * x / 16.0
        - alpha * l4
        + a2 * lam
        + 3.0 / 2.0 * l5 * y
        - 9.0 / 16.0 * l3 * y * y
        - alpha / 2.0 * x * y
        + a2 / (2.0 * l3) * x * y
    )
    return c_pb * ex * std_normal_survival(w) + c_ph * ex * std_normal_pdf(w)


def tau2(alpha: float, lam: float, x: float, y: float) -> float:
    """Fourth-order cross piece pairing the alpha refinement with x."""
    _check_lam(lam)
    w = lam + (y - x) / (2.0 * lam)
    ex = math.exp(-x)
    l2 = lam * lam
    l3 = l2 * lam
    l4 = l2 * l2
    l5 = l4 * lam
    l6 = l4 * l2
    l7 = l6 * lam
    l8 = l4 * l4
    c_pb = (
        2.0 * l4
        - 4.0 * alpha * lam * x
        - 2.0 * l2 * x
        + 8.0 * l6 * x
        - 5.0 * l4 * x * x
        + 10.0 * l4 * x
        + l2 * x * x * x
        + 8.0 * alpha * l3
        - 4.0 * l8
        - 16.0 * l6
    )
    c_ph = (
        2.0 * alpha
        + 4.0 * l7
        + 12.0 * l5
        - 3.0 * l3
        - 6.0 * l5 * x
        + 2.0 * l3 * x * x
        - alpha * y * y
        + 2.0 * l3 * x * y
        - 2.0 * l5 * y
        + 3.0 / 2.0 * l3 * y * y
        - 8.0 * alpha * l2
    )
    return c_pb * ex * std_normal_survival(w) + c_ph * ex * std_normal_pdf(w)


def tau3(lam: float, x: float, y: float) -> float:
    """Fourth-order piece equal to int_y^inf Phi(lam+(x-z)/2lam) e^{-z}
    (z^4/8 - z^2/2 - 2) dz in closed form."""
    _check_lam(lam)
    w = lam + (y - x) / (2.0 * lam)
    ex = math.exp(-x)
    l2 = lam * lam
    l3 = l2 * lam
    l4 = l2 * l2
    l5 = l4 * lam
    l6 = l4 * l2
    l7 = l6 * lam
    l8 = l4 * l4
    lead = (
        0.125
        * (((y + 4.0) * y + 8.0) * y + 16.0)
        * y
        * math.exp(-y)
        * std_normal_cdf(lam + (x - y) / (2.0 * lam))
    )
    c_pb = (
        4.0 * l6 * x
        - 3.0 * l4 * x * x
        + l2 * x * x * x
        - 2.0 * l8
        - 8.0 * l6
        - x * x * x * x / 8.0
        - 2.0 * l2 * x
        - x * x * x / 2.0
        + 2.0 * l4
        + 6.0 * l4 * x
        - x * x
        - 2.0 * x
    )
    c_ph = (
        2.0 * l7
        - lam * x * x * x / 4.0
        - l5 * y
        + l3 * y * y / 2.0
        + l3 * x * y
        - 3.0 * l5 * x
        + 3.0 / 2.0 * l3 * x * x
        - lam * y * y * y / 4.0
        - lam * y * y * x / 4.0
        - lam * y * x * x / 4.0
        - l3 * y
        - lam * y * y
        - lam * x * y
        - l3 * x
        - lam * x * x
        - 4.0 * l3
        + 6.0 * l5
        - 2.0 * lam * x
        - 2.0 * lam * y
        - 4.0 * lam
    )
    return lead + c_pb * ex * std_normal_survival(w) + c_ph * ex * std_normal_pdf(w)


def tau(alpha: float, beta: float, lam: float, x: float, y: float) -> float:
    """Full fourth-order coefficient: t(x) + tau1 + tau2 - tau3."""
    _check_lam(lam)
    return (
        t_term(x)
        + tau1(alpha, beta, lam, x, y)
        + tau2(alpha, lam, x, y)
        - tau3(lam, x, y)
    )


def I_closed(k: int, lam: float, x: float, y: float) -> float:
    """Closed form of I_k = int_y^inf phi(lam+(x-z)/2lam) e^{-z} z^k dz."""
    k = operator.index(k)
    if k not in (0, 1, 2, 3):
        raise ValueError(f"I_k is defined for k in 0..3, got {k}")
    _check_lam(lam)
    w = lam + (y - x) / (2.0 * lam)
    ex = math.exp(-x)
    pb = std_normal_survival(w)
    ph = std_normal_pdf(w)
    l2 = lam * lam
    l3 = l2 * lam
    l4 = l2 * l2
    l5 = l4 * lam
    l6 = l4 * l2
    l7 = l6 * lam
    if k == 0:
        return 2.0 * lam * ex * pb
    if k == 1:
        return (2.0 * lam * x - 4.0 * l3) * ex * pb + 4.0 * l2 * ex * ph
    if k == 2:
        return (8.0 * l5 - 8.0 * l3 * x + 8.0 * l3 + 2.0 * lam * x * x) * ex * pb + (
            -8.0 * l4 + 4.0 * l2 * x + 4.0 * l2 * y
        ) * ex * ph
    return (
        24.0 * l5 * x
        - 12.0 * l3 * x * x
        + 24.0 * l3 * x
        + 2.0 * lam * x * x * x
        - 16.0 * l7
        - 48.0 * l5
    ) * ex * pb + (
        16.0 * l6
        - 16.0 * l4 * x
        - 8.0 * l4 * y
        + 32.0 * l4
        + 4.0 * l2 * x * x
        + 4.0 * l2 * x * y
        + 4.0 * l2 * y * y
    ) * ex * ph


def _zero_coeffs(x: float, y: float) -> tuple[float, float]:
    m = min(x, y)
    sm = s_term(m)
    return sm, t_term(m) + 0.5 * sm * sm


def _infinity_coeffs(x: float, y: float) -> tuple[float, float]:
    ssum = s_term(x) + s_term(y)
    return ssum, t_term(x) + t_term(y) + 0.5 * ssum * ssum


def _expansion_coeffs(params: HRParams, x: float, y: float) -> tuple[float, float]:
    """(second, fourth) order coefficients for the regime of params."""
    if params.regime is LambdaRegime.ZERO:
        return _zero_coeffs(x, y)
    if params.regime is LambdaRegime.INFINITY:
        return _infinity_coeffs(x, y)
    lam = params.lam
    if lam < _LAM_ZERO_CUTOFF:
        return _zero_coeffs(x, y)
    if lam > _LAM_INF_CUTOFF:
        return _infinity_coeffs(x, y)
    c1 = kappa(params.alpha, lam, x, y)
    c2 = tau(params.alpha, params.beta, lam, x, y) + 0.5 * c1 * c1
    return c1, c2


def hr_approx(
    n: int, params: HRParams, x: float, y: float, order: ApproxOrder
) -> float:
    """Ordered approximant H (1 + c1/b_n^2 [+ c2/b_n^4]) of F^n(u_n(x), u_n(y))."""
    n = operator.index(n)
    if n < 3:
        raise ValueError(f"requires n >= 3, got {n}")
    h = hr_cdf(params, x, y)
    if order is ApproxOrder.FIRST:
        return h
    b2 = solve_bn(n).b_squared
    c1, c2 = _expansion_coeffs(params, x, y)
    value = 1.0 + c1 / b2
    if order is ApproxOrder.THIRD:
        value += c2 / (b2 * b2)
    return min(max(h * value, 0.0), 1.0)
