"""Population ground truth for the simulation models.

For each model the joint survival P(X >= s, Y >= t) is available in closed
form (Logistic, Cauchy, Pareto2) or by one-dimensional conditional
quadrature (StudentT).  True CoVaR solves

    P(X >= c, Y >= VaR_Y(tau)) = (1 - tau)^2

by bracketed bisection, and true CoES adds the tail integral

    CoES = c + (1 - tau)^(-2) * int_c^inf P(X >= s, Y >= VaR_Y(tau)) ds

evaluated with the substitution s = c/u on u in (0, 1].  Results are
memoized per (model, tau); the harness asks once per experiment.

A deliberately independent 2-D quadrature route over the raw densities
(``joint_survival_quad``) exists so the closed forms can be cross-checked.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

from scipy import integrate
from scipy.special import gammaln

from .models import ModelSpec, marginal_quantiles, pre_margin_survival, student_t_cdf, true_tail_copula


@dataclass(frozen=True)
class OracleResult:
    """True (VaR_Y, CoVaR, CoES) at one level, with the tolerance achieved.

    Invariants: covar >= VaR_X(tau) in the tail-dependent regime, and
    coes >= covar always.
    """

    tau: float
    var_y: float
    covar: float
    coes: float
    abs_tol: float


_CACHE: dict[tuple[ModelSpec, float], OracleResult] = {}
_CACHE_LOCK = threading.Lock()


def joint_survival(spec: ModelSpec, s: float, t: float) -> float:
    """P(X >= s, Y >= t) for the model, s, t >= 0."""
    if s < 0.0 or t < 0.0:
        raise ValueError("survival arguments must be nonnegative")
    if spec.family == "Logistic":
        # inclusion-exclusion on the logistic max-stable CDF; the s = 0 or
        # t = 0 edges reduce to one Frechet margin
        z = s ** (1.0 / spec.x_exponent)
        if z == 0.0:
            return pre_margin_survival(spec, t)
        if t == 0.0:
            return pre_margin_survival(spec, z)
        inv = 1.0 / spec.theta
        joint_cdf = math.exp(-((z**-inv + t**-inv) ** spec.theta))
        return 1.0 - math.exp(-1.0 / z) - math.exp(-1.0 / t) + joint_cdf
    if spec.family == "Cauchy":
        return 4.0 * _cauchy_quadrant(s ** (1.0 / spec.x_exponent), t)
    if spec.family == "Pareto2":
        return (1.0 + s ** (1.0 / spec.x_exponent) + t) ** (-spec.theta)
    return _student_joint_survival(spec, s ** (1.0 / spec.x_exponent), t)


def _cauchy_quadrant(a: float, b: float) -> float:
    """P(C1 >= a, C2 >= b), a, b >= 0, spherical bivariate Cauchy."""
    root = math.sqrt(1.0 + a * a + b * b)
    return (
        0.5 * math.pi - math.atan(a) - math.atan(b) + math.atan(a * b / root)
    ) / (2.0 * math.pi)


def _t_pdf(z: float, nu: float) -> float:
    log_norm = gammaln(0.5 * (nu + 1.0)) - gammaln(0.5 * nu) - 0.5 * math.log(nu * math.pi)
    return math.exp(log_norm - 0.5 * (nu + 1.0) * math.log1p(z * z / nu))


def _student_joint_survival(spec: ModelSpec, a: float, b: float) -> float:
    """P(|T1| >= a, |T2| >= b) for the correlated bivariate t pair.

    Conditioning on T1 = z, (T2 - rho z)/sigma(z) is t with nu + 1 degrees
    of freedom and sigma(z) = sqrt((nu + z^2)(1 - rho^2)/(nu + 1)), so one
    quadrature over z suffices; central symmetry contributes the factor 2.
    """
    nu, rho = spec.nu, spec.rho
    if a == 0.0 and b == 0.0:
        return 1.0
    if a == 0.0:
        return 2.0 * (1.0 - student_t_cdf(b, nu))
    if b == 0.0:
        return 2.0 * (1.0 - student_t_cdf(a, nu))
    coef = math.sqrt((1.0 - rho * rho) / (nu + 1.0))
    scale = max(a, 1.0)

    def integrand(u: float) -> float:
        # z = a + scale*((1 - u)/u)^2 folds [a, inf) onto (0, 1] with
        # polynomial endpoint behavior for the t tail, uniformly in a
        r = (1.0 - u) / u
        z = a + scale * r * r
        sigma = coef * math.sqrt(nu + z * z)
        upper = 1.0 - student_t_cdf((b - rho * z) / sigma, nu + 1.0)
        lower = student_t_cdf((-b - rho * z) / sigma, nu + 1.0)
        return _t_pdf(z, nu) * (upper + lower) * scale * 2.0 * r / (u * u)

    value, err = integrate.quad(integrand, 0.0, 1.0, epsabs=1e-13, epsrel=1e-10, limit=200)
    if not math.isfinite(value) or err > max(1e-10, 1e-6 * abs(value)):
        raise ValueError(f"StudentT survival quadrature did not converge (err={err:g})")
    return 2.0 * value


def _quad_over_quadrant(density, a: float, b: float) -> float:
    """int_a^inf int_b^inf density(z1, z2) dz2 dz1.

    Each semi-infinite axis is folded onto (0, 1] by
    z = lo + max(lo, 1)*((1 - u)/u)^2; the square makes the u -> 0 endpoint
    behavior polynomial for the regularly-varying tails here (indices
    >= 5/2), which plain infinite-limit rules flag as slowly convergent,
    and the scale keeps the fold conditioned for large lower limits.
    """
    scale1, scale2 = max(a, 1.0), max(b, 1.0)

    def transformed(u2: float, u1: float) -> float:
        r1 = (1.0 - u1) / u1
        r2 = (1.0 - u2) / u2
        jac = scale1 * scale2 * 4.0 * r1 * r2 / (u1 * u1 * u2 * u2)
        return density(a + scale1 * r1 * r1, b + scale2 * r2 * r2) * jac

    value, _ = integrate.dblquad(transformed, 0.0, 1.0, 0.0, 1.0, epsabs=1e-10, epsrel=1e-8)
    return value


def joint_survival_quad(spec: ModelSpec, s: float, t: float) -> float:
    """P(X >= s, Y >= t) by direct 2-D quadrature of the pre-transform density.

    Independent route used only to audit the closed forms; Logistic has no
    tractable planar density here and is rejected.
    """
    if s < 0.0 or t < 0.0:
        raise ValueError("survival arguments must be nonnegative")
    if spec.family == "Logistic":
        raise ValueError("no 2-D density route for the Logistic model")
    a = s ** (1.0 / spec.x_exponent)
    b = t
    if spec.family == "Pareto2":
        theta = spec.theta
        return _quad_over_quadrant(
            lambda z1, z2: theta * (theta + 1.0) * (1.0 + z1 + z2) ** (-theta - 2.0), a, b
        )
    if spec.family == "Cauchy":
        return 4.0 * _quad_over_quadrant(
            lambda z1, z2: (1.0 + z1 * z1 + z2 * z2) ** -1.5 / (2.0 * math.pi), a, b
        )
    nu, rho = spec.nu, spec.rho
    det = 1.0 - rho * rho
    log_norm = gammaln(0.5 * nu + 1.0) - gammaln(0.5 * nu) - math.log(nu * math.pi) - 0.5 * math.log(det)

    def density(z1: float, z2: float) -> float:
        quad_form = (z1 * z1 - 2.0 * rho * z1 * z2 + z2 * z2) / det
        return math.exp(log_norm - (0.5 * nu + 1.0) * math.log1p(quad_form / nu))

    pos = _quad_over_quadrant(density, a, b)
    neg = _quad_over_quadrant(lambda z1, z2: density(z1, -z2), a, b)
    return 2.0 * (pos + neg)


def true_covar(spec: ModelSpec, tau: float) -> float:
    """Root c of P(X >= c, Y >= VaR_Y(tau)) = (1 - tau)^2, rel. tol 1e-9."""
    return _solve_covar(spec, tau)[0]


def _solve_covar(spec: ModelSpec, tau: float) -> tuple[float, float, float]:
    """(covar, var_y, achieved root half-width)."""
    if not 0.0 < tau < 1.0:
        raise ValueError(f"tau must lie in (0, 1), got {tau}")
    var_x, var_y = marginal_quantiles(spec, tau)
    target = (1.0 - tau) ** 2
    lo = var_x
    s_lo = joint_survival(spec, lo, var_y)
    if s_lo < target:
        # under exact independence the root sits at VaR_X itself and float
        # rounding can push the survival a hair below the target
        if s_lo >= target * (1.0 - 1e-9):
            return lo, var_y, 1e-9 * lo
        raise ValueError(
            f"no root at or above VaR_X: survival at {lo:g} already below (1-tau)^2"
        )
    hi = 2.0 * lo
    for _ in range(200):
        if joint_survival(spec, hi, var_y) < target:
            break
        hi *= 2.0
    else:
        raise ValueError("failed to bracket the CoVaR root")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if joint_survival(spec, mid, var_y) >= target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-9 * hi:
            break
    return 0.5 * (lo + hi), var_y, 0.5 * (hi - lo)


def true_coes(spec: ModelSpec, tau: float) -> float:
    """c + (1 - tau)^(-2) * int_c^inf P(X >= s, Y >= VaR_Y) ds, c = true CoVaR."""
    return oracle_result(spec, tau).coes


def _tail_integral(spec: ModelSpec, c: float, var_y: float) -> tuple[float, float]:
    """(int_c^inf S(s) ds, quad error) via s = c/u, u in (0, 1]."""

    def integrand(u: float) -> float:
        return joint_survival(spec, c / u, var_y) * c / (u * u)

    value, err = integrate.quad(integrand, 0.0, 1.0, epsabs=1e-14, epsrel=1e-9, limit=200)
    if not math.isfinite(value):
        raise ValueError("CoES tail quadrature did not converge")
    return value, err


def oracle_result(spec: ModelSpec, tau: float) -> OracleResult:
    """Memoized (VaR_Y, CoVaR, CoES) truth for the model at level tau."""
    key = (spec, tau)
    with _CACHE_LOCK:
        hit = _CACHE.get(key)
    if hit is not None:
        return hit
    covar, var_y, root_tol = _solve_covar(spec, tau)
    tail, quad_err = _tail_integral(spec, covar, var_y)
    scale = (1.0 - tau) ** -2
    coes = covar + scale * tail
    result = OracleResult(
        tau=tau,
        var_y=var_y,
        covar=covar,
        coes=coes,
        abs_tol=max(root_tol, scale * quad_err),
    )
    with _CACHE_LOCK:
        _CACHE.setdefault(key, result)
    return result


def eta_true(spec: ModelSpec, tau: float) -> float:
    """Finite-level eta: F-bar_X(CoVaR)/(1 - tau)."""
    c = true_covar(spec, tau)
    return pre_margin_survival(spec, c ** (1.0 / spec.x_exponent)) / (1.0 - tau)


def eta_star(spec: ModelSpec, tau: float) -> float:
    """Limit analogue: the root of R(eta, 1) = 1 - tau."""
    if not 0.0 < tau < 1.0:
        raise ValueError(f"tau must lie in (0, 1), got {tau}")
    target = 1.0 - tau
    lo, hi = 0.0, 1.0
    for _ in range(200):
        if true_tail_copula(spec, hi, 1.0) >= target:
            break
        hi *= 2.0
    else:
        raise ValueError("failed to bracket the eta* root")
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if true_tail_copula(spec, mid, 1.0) >= target:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-12 * max(hi, 1e-300):
            break
    return 0.5 * (lo + hi)
