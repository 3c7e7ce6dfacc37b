"""Intermediate and extrapolated CoVaR/CoES estimators.

The intermediate estimators work at level 1 - k/n via filtered order
statistics; the extrapolated families push them to an extreme level tau'
using the Hill estimate and either an adjustment factor (variants 1-2) or
the intermediate estimate itself (variants 3-4).  ``estimate_all`` bundles
every estimator from one pass of ranks and order statistics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    LossPairSample,
    WarningRecord,
    build_margin_index,
    validate_tail_config,
)
from .empirical import empirical_var, hill_estimate
from .tail_copula import eta_hat


@dataclass(frozen=True)
class RiskEstimates:
    """Every estimator for one (sample, k, tau') in a single record.

    ``covar_ext`` maps variant 1..3 and ``coes_ext`` variant 1..4 to the
    extrapolated estimates; ``coes_ext[i] = covar_ext[i] / (1 - gamma1_hat)``
    for i <= 3 by construction.  ``warnings`` aggregates the structured
    non-fatal conditions met along the way.
    """

    gamma1_hat: float
    var_x_hat: float
    eta_hat_1: float
    eta_hat_2: float
    covar_int: float
    coes_int: float
    covar_ext: dict[int, float]
    coes_ext: dict[int, float]
    warnings: tuple[WarningRecord, ...]

    def to_record(self) -> dict[str, float]:
        """Flat mapping with stable keys (covar1..covar3, coes1..coes4)."""
        rec = {
            "gamma1": self.gamma1_hat,
            "var_x": self.var_x_hat,
            "eta1": self.eta_hat_1,
            "eta2": self.eta_hat_2,
            "covar_int": self.covar_int,
            "coes_int": self.coes_int,
        }
        for i in (1, 2, 3):
            rec[f"covar{i}"] = self.covar_ext[i]
        for i in (1, 2, 3, 4):
            rec[f"coes{i}"] = self.coes_ext[i]
        return rec


ESTIMATOR_NAMES = ("covar1", "covar2", "covar3", "coes1", "coes2", "coes3", "coes4")


def _filtered_xs(sample: LossPairSample, k: int) -> tuple[np.ndarray, float]:
    """Ascending X values of the k+1 observations with Y >= Y_{n-k,n}."""
    n = sample.n
    y_index = build_margin_index(sample.ys)
    var_y = empirical_var(y_index, k)
    filtered = np.sort(sample.xs[sample.ys >= var_y])
    if filtered.size != k + 1:
        raise ValueError(
            f"system losses tie at the threshold Y_(n-k,n)={var_y}: filtered "
            f"size {filtered.size} != k+1 = {k + 1}"
        )
    return filtered, var_y


def intermediate_covar(sample: LossPairSample, k: int) -> float:
    """CoVaR at level 1 - k/n: the (k+2-m)-th smallest filtered X value."""
    config, _ = validate_tail_config(sample.n, k)
    filtered, _ = _filtered_xs(sample, k)
    if not 1 <= k + 2 - config.m <= filtered.size:
        raise ValueError(f"order-statistic index k+2-m={k + 2 - config.m} out of range")
    return float(filtered[k + 1 - config.m])


def intermediate_covar_scan(sample: LossPairSample, k: int) -> float:
    """Defining right-continuous inverse, by scanning the filtered X values.

    Returns sup{s : C_n(s) >= (k/n)^2} where C_n(s) counts observations with
    X >= s and Y >= Y_{n-k,n}.  The threshold comparison is integer-exact
    (n * count >= k^2).  Test oracle for ``intermediate_covar``.
    """
    n = sample.n
    validate_tail_config(n, k)
    filtered, _ = _filtered_xs(sample, k)
    best = None
    for j in range(filtered.size):
        count = filtered.size - j  # filtered values >= filtered[j], tie-free
        if n * count >= k * k:
            best = filtered[j]
    if best is None:
        raise ValueError("no filtered X value attains the C_n level")
    return float(best)


def intermediate_coes(sample: LossPairSample, k: int) -> float:
    """CoES at level 1 - k/n: (n/k^2) * sum of X over the joint exceedances."""
    covar = intermediate_covar(sample, k)
    _, var_y = _filtered_xs(sample, k)
    n = sample.n
    joint = (sample.xs >= covar) & (sample.ys >= var_y)
    return float(n / (k * k) * np.sum(sample.xs[joint]))


def _extrapolation_base(gamma: float, d: float) -> float:
    return d ** (2.0 * gamma)


def _covar_from_eta(gamma: float, eta: float, var_x: float, d: float) -> float:
    return _extrapolation_base(gamma, d) * eta ** (-gamma) * var_x


def _checked_gamma(sample: LossPairSample, k: int) -> float:
    gamma = hill_estimate(build_margin_index(sample.xs), k)
    if not 0.0 < gamma < 1.0:
        raise ValueError(
            f"tail index estimate gamma1={gamma:.4f} outside (0, 1); "
            "extrapolation is invalid"
        )
    return gamma


def extrapolate_covar(
    sample: LossPairSample, k: int, tau_prime: float, variant: int
) -> float:
    """Extrapolated CoVaR at tau'; variants 1-2 via eta-hat, 3 via the
    intermediate CoVaR."""
    if variant not in (1, 2, 3):
        raise ValueError(f"CoVaR variant must be 1, 2 or 3, got {variant}")
    config, _ = validate_tail_config(sample.n, k, tau_prime)
    gamma = _checked_gamma(sample, k)
    if variant == 3:
        return _extrapolation_base(gamma, config.d) * intermediate_covar(sample, k)
    eta = eta_hat(sample, k, variant)
    var_x = empirical_var(build_margin_index(sample.xs), k)
    return _covar_from_eta(gamma, eta.value, var_x, config.d)


def extrapolate_coes(
    sample: LossPairSample, k: int, tau_prime: float, variant: int
) -> float:
    """Extrapolated CoES at tau'; variants 1-3 are CoVaR/(1 - gamma), 4 is
    the extrapolated intermediate CoES (computable for any gamma)."""
    if variant not in (1, 2, 3, 4):
        raise ValueError(f"CoES variant must be 1, 2, 3 or 4, got {variant}")
    if variant == 4:
        config, _ = validate_tail_config(sample.n, k, tau_prime)
        gamma = hill_estimate(build_margin_index(sample.xs), k)
        return _extrapolation_base(gamma, config.d) * intermediate_coes(sample, k)
    gamma = _checked_gamma(sample, k)
    return extrapolate_covar(sample, k, tau_prime, variant) / (1.0 - gamma)


def estimate_all(sample: LossPairSample, k: int, tau_prime: float) -> RiskEstimates:
    """Compute every intermediate and extrapolated estimator in one pass.

    Raises:
        ValueError: gamma1_hat outside (0, 1) (the variant 1-3
            extrapolations are undefined), or any component failure.
    """
    config, warnings = validate_tail_config(sample.n, k, tau_prime)
    d = config.d
    x_index = build_margin_index(sample.xs)
    gamma = hill_estimate(x_index, k)
    if not 0.0 < gamma < 1.0:
        raise ValueError(
            f"tail index estimate gamma1={gamma:.4f} outside (0, 1); "
            "extrapolation is invalid"
        )
    var_x = empirical_var(x_index, k)
    eta1 = eta_hat(sample, k, 1)
    eta2 = eta_hat(sample, k, 2)
    covar_int = intermediate_covar(sample, k)
    coes_int = intermediate_coes(sample, k)

    covar_ext = {
        1: _covar_from_eta(gamma, eta1.value, var_x, d),
        2: _covar_from_eta(gamma, eta2.value, var_x, d),
        3: _extrapolation_base(gamma, d) * covar_int,
    }
    coes_ext = {i: covar_ext[i] / (1.0 - gamma) for i in (1, 2, 3)}
    coes_ext[4] = _extrapolation_base(gamma, d) * coes_int

    for eta in (eta1, eta2):
        if eta.clamped:
            warnings.append(
                WarningRecord(
                    "eta_clamped",
                    f"eta-hat variant {eta.variant} raw value {eta.raw} floored "
                    f"at 1/(2k) = {eta.value}",
                )
            )
    if gamma >= 0.5:
        warnings.append(
            WarningRecord(
                "gamma_above_half",
                f"gamma1={gamma:.4f} >= 1/2: the intermediate-CoES extrapolation "
                "(variant 4) is outside its supported regime",
            )
        )
    return RiskEstimates(
        gamma1_hat=gamma,
        var_x_hat=var_x,
        eta_hat_1=eta1.value,
        eta_hat_2=eta2.value,
        covar_int=covar_int,
        coes_int=coes_int,
        covar_ext=covar_ext,
        coes_ext=coes_ext,
        warnings=tuple(warnings),
    )
