"""Finite-n triangular arrays of bivariate Gaussian maxima.

Row n of the array holds n iid centered Gaussian pairs with correlation
rho_n; the distribution of the componentwise maximum, normalized by the
thresholds u_n(x) = b_n + x/b_n, converges to a max-stable limit whose
identity is decided by lam_n = (b_n^2 (1 - rho_n)/2)^{1/2}:

    lam_n -> 0        complete dependence,
    lam_n -> lam      the interior one-parameter family,
    lam_n -> inf      independence.

This module builds the correlation sequences for each regime, evaluates
the exact finite-n distribution F^n(u_n(x), u_n(y)) with enough accuracy
that b_n^4-scaled residuals are still meaningful, and exposes the
proof-level diagnostics (the error functional Delta, the A-coefficients,
the h_n remainder, and the tail-integral approximation of the joint
exceedance probability).
"""
from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from typing import Union

from scipy.integrate import quad

from .gauss import bivariate_normal_survival, std_normal_cdf, std_normal_survival
from .hr_core import ApproxOrder, HRParams, hr_cdf
from .norming import NormingConstant, solve_bn, threshold

__all__ = [
    "ConstantRho",
    "ThirdOrderHR",
    "CorollaryInfinity",
    "CorollaryZero",
    "RhoSequenceSpec",
    "ArrayRow",
    "ConvergenceRecord",
    "make_row",
    "exact_joint_max_cdf",
    "delta_error",
    "a_coefficients",
    "h_n_diagnostic",
    "lemma31_tail_approx",
]


@dataclass(frozen=True)
class ConstantRho:
    """rho_n = rho for every n."""

    rho: float

    def __post_init__(self) -> None:
        if not -1.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [-1, 1], got {self.rho}")


@dataclass(frozen=True)
class ThirdOrderHR:
    """lam_n = lam - alpha/b_n^2 - beta/b_n^4 exactly, so the refined
    convergence conditions hold with zero slack."""

    lam: float
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lam) and self.lam > 0.0):
            raise ValueError(f"requires finite lam > 0, got {self.lam}")


@dataclass(frozen=True)
class CorollaryInfinity:
    """rho_n solving (1 - rho) ln n - (2 + rho) ln ln n = 2 gamma, the
    borderline scaling under which lam_n -> inf."""

    gamma: float


@dataclass(frozen=True)
class CorollaryZero:
    """rho_n = 1 - tau_rate^2 / (ln n)^3, under which lam_n -> 0."""

    tau_rate: float

    def __post_init__(self) -> None:
        if not self.tau_rate >= 0.0:
            raise ValueError(f"tau_rate must be >= 0, got {self.tau_rate}")


RhoSequenceSpec = Union[ConstantRho, ThirdOrderHR, CorollaryInfinity, CorollaryZero]


@dataclass(frozen=True)
class ArrayRow:
    """One row of the array: its size, norming constant, correlation,
    implied lam_n, and (for refined specs) the second-order deviation
    delta_n = b^2 (lam - lam_n) - alpha."""

    n: int
    b: NormingConstant
    rho: float
    lambda_n: float
    delta_n: float | None
    clipped: bool


@dataclass(frozen=True)
class ConvergenceRecord:
    """Exact-vs-approximant comparison at one (n, x, y).

    Orders not requested carry None; err_k = |exact - approx_k| and
    scaled_k = b^{2k} err_k.  A point where the limit distribution
    underflows is recorded with skipped=True and null values.
    """

    n: int
    b: float
    rho: float
    x: float
    y: float
    exact: float | None
    approx_first: float | None
    approx_second: float | None
    approx_third: float | None
    err_first: float | None
    err_second: float | None
    err_third: float | None
    scaled_first: float | None
    scaled_second: float | None
    scaled_third: float | None
    clipped: bool
    skipped: bool = False

    def err(self, order: ApproxOrder) -> float | None:
        return {
            ApproxOrder.FIRST: self.err_first,
            ApproxOrder.SECOND: self.err_second,
            ApproxOrder.THIRD: self.err_third,
        }[order]


def _check_n(n: int) -> int:
    n = operator.index(n)
    if n < 3:
        raise ValueError(f"requires n >= 3, got {n}")
    return n


def _check_rho(rho: float) -> None:
    if not -1.0 <= rho <= 1.0:
        raise ValueError(f"correlation must lie in [-1, 1], got {rho}")


def make_row(spec: RhoSequenceSpec, n: int) -> ArrayRow:
    """Materialize row n of the correlation sequence.

    Out-of-range raw correlations (possible for aggressive specs at
    small n) are clipped to [-1, 1] and flagged rather than rejected.
    """
    n = _check_n(n)
    constant = solve_bn(n)
    b2 = constant.b_squared

    lam_exact: float | None = None
    if isinstance(spec, ConstantRho):
        raw = spec.rho
    elif isinstance(spec, ThirdOrderHR):
        lam_exact = spec.lam - spec.alpha / b2 - spec.beta / (b2 * b2)
        raw = 1.0 - 2.0 * lam_exact * lam_exact / b2
    elif isinstance(spec, CorollaryInfinity):
        ln_n = math.log(n)
        lnln_n = math.log(ln_n)
        if lnln_n <= 0.0:
            raise ValueError(f"regime needs ln ln n > 0, got n = {n}")
        raw = (ln_n - 2.0 * lnln_n - 2.0 * spec.gamma) / (ln_n + lnln_n)
    elif isinstance(spec, CorollaryZero):
        raw = 1.0 - spec.tau_rate**2 / math.log(n) ** 3
    else:
        raise TypeError(f"unknown correlation spec {spec!r}")

    clipped = not -1.0 <= raw <= 1.0
    rho = min(max(raw, -1.0), 1.0)

    if lam_exact is not None and lam_exact >= 0.0 and not clipped:
        lambda_n = lam_exact
    else:
        lambda_n = math.sqrt(max(b2 * (1.0 - rho) / 2.0, 0.0))

    delta_n: float | None = None
    if isinstance(spec, ThirdOrderHR):
        delta_n = b2 * (spec.lam - lambda_n) - spec.alpha

    return ArrayRow(n, constant, rho, lambda_n, delta_n, clipped)


def _n_log_joint(n: int, rho: float, x: float, y: float) -> float:
    """n * log F_rho(u_n(x), u_n(y)), with the complement assembled from
    survival pieces so no accuracy is lost against 1."""
    constant = solve_bn(n)
    u1 = threshold(constant, x)
    u2 = threshold(constant, y)
    if rho == 1.0:
        s = std_normal_survival(min(u1, u2))
    else:
        s = (
            std_normal_survival(u1)
            + std_normal_survival(u2)
            - bivariate_normal_survival(u1, u2, rho)
        )
    if s >= 1.0:
        return -math.inf
    return n * math.log1p(-s)


def exact_joint_max_cdf(n: int, rho: float, x: float, y: float) -> float:
    """F_rho^n(u_n(x), u_n(y)) for n iid correlated Gaussian pairs."""
    n = _check_n(n)
    _check_rho(rho)
    return math.exp(_n_log_joint(n, rho, x, y))


def delta_error(
    n: int, spec: RhoSequenceSpec, params: HRParams, x: float, y: float
) -> float:
    """Delta = F^n(u_n(x), u_n(y)) - H(x, y) along the spec's sequence."""
    row = make_row(spec, n)
    return exact_joint_max_cdf(row.n, row.rho, x, y) - hr_cdf(params, x, y)


def a_coefficients(row: ArrayRow, lam: float) -> tuple[float, float, float]:
    """The three b^2-scale coefficients steering the expansion proofs:

        A1 = b^2 (lam - lam_n r),  A2 = (b^2/2)(1/lam - r/lam_n),
        A3 = lam_n r,              r = (1 - lam_n^2/b^2)^{-1/2}.

    Converge to alpha - lam^3/2, -alpha/(2 lam^2) - lam/4 and lam along
    a refined sequence."""
    if not (math.isfinite(lam) and lam > 0.0):
        raise ValueError(f"requires finite lam > 0, got {lam}")
    lam_n = row.lambda_n
    b2 = row.b.b_squared
    if lam_n <= 0.0:
        raise ValueError(f"requires lambda_n > 0, got {lam_n}")
    if lam_n * lam_n >= b2:
        raise ValueError(
            f"requires lambda_n^2 < b^2, got {lam_n * lam_n} >= {b2}"
        )
    r = 1.0 / math.sqrt(1.0 - lam_n * lam_n / b2)
    a1 = b2 * (lam - lam_n * r)
    a2 = 0.5 * b2 * (1.0 / lam - r / lam_n)
    a3 = lam_n * r
    return a1, a2, a3


def h_n_diagnostic(n: int, rho: float, lam: float, x: float, y: float) -> float:
    """h_n = n log F + Phi(lam+(x-y)/2lam) e^{-y} + Phi(lam+(y-x)/2lam) e^{-x}.

    Vanishes as n grows along a matching sequence; b_n^2 h_n tends to
    the second-order coefficient kappa, and exp(h_n) = F^n / H."""
    n = _check_n(n)
    _check_rho(rho)
    if not (math.isfinite(lam) and lam > 0.0):
        raise ValueError(f"requires finite lam > 0, got {lam}")
    half = (x - y) / (2.0 * lam)
    return (
        _n_log_joint(n, rho, x, y)
        + std_normal_cdf(lam + half) * math.exp(-y)
        + std_normal_cdf(lam - half) * math.exp(-x)
    )


def lemma31_tail_approx(
    n: int, rho: float, x: float, y: float, order: ApproxOrder
) -> float:
    """Tail-integral approximation of n P(X > u_n(x), Y > u_n(y)).

    Replaces the inner Gaussian tail by its two- or three-term Mills
    expansion, leaving n Phibar(u_n(y)) minus an explicit integral whose
    weight is 1 + (1 - z^2/2)/b^2 (order Second) plus
    (z^4/8 - z^2/2 - 2)/b^4 (order Third)."""
    n = _check_n(n)
    if not -1.0 < rho < 1.0:
        raise ValueError(f"requires |rho| < 1, got {rho}")
    if order is ApproxOrder.FIRST:
        raise ValueError("tail approximation is defined for Second and Third")
    constant = solve_bn(n)
    b = constant.b
    b2 = constant.b_squared
    b4 = b2 * b2
    u_x = threshold(constant, x)
    spread = math.sqrt((1.0 - rho) * (1.0 + rho))
    third = order is ApproxOrder.THIRD

    def integrand(z: float) -> float:
        arg = (u_x - rho * (b + z / b)) / spread
        z2 = z * z
        w = 1.0 + (1.0 - z2 / 2.0) / b2
        if third:
            w += (z2 * z2 / 8.0 - z2 / 2.0 - 2.0) / b4
        return std_normal_cdf(arg) * math.exp(-z) * w

    integral = quad(integrand, y, math.inf, epsabs=1e-13, epsrel=1e-12,
                    limit=200, full_output=1)[0]
    return n * std_normal_survival(threshold(constant, y)) - integral
