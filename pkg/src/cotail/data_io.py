"""Price-file ingestion, rolling-window estimation, and diagnostic exports.

Input files are CSV with header ``date,price`` (ISO-8601 date, positive
decimal price).  Two assets are aligned on the intersection of their
dates, and losses are negative log returns of the aligned prices.  The
rolling driver re-estimates on a moving window, optionally averaging the
estimates over a range of k values, and records per-window failures as
gaps with a reason instead of aborting.
"""

from __future__ import annotations

import csv
import datetime
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import LossPairSample, WarningRecord, validate_tail_config
from .covar_coes import RiskEstimates, estimate_all
from .empirical import hill_curve, tail_prob_curve
from .tail_copula import r_hat


@dataclass(frozen=True)
class ReturnSeries:
    """Dated positive prices with their negative log returns.

    ``losses[i] = -log(prices[i+1]/prices[i])``; timestamps are strictly
    increasing dates, one per price.
    """

    timestamps: tuple[datetime.date, ...]
    prices: np.ndarray
    losses: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "timestamps", tuple(self.timestamps))
        prices = np.asarray(self.prices, dtype=float)
        object.__setattr__(self, "prices", prices)
        if prices.ndim != 1 or prices.size != len(self.timestamps):
            raise ValueError("need one price per timestamp")
        if prices.size < 2:
            raise ValueError("need at least two prices to form a return")
        if not np.all(prices > 0.0):
            raise ValueError("prices must be positive")
        for earlier, later in zip(self.timestamps, self.timestamps[1:]):
            if not earlier < later:
                raise ValueError(f"timestamps not strictly increasing at {later}")
        object.__setattr__(self, "losses", -np.diff(np.log(prices)))


@dataclass(frozen=True)
class RollingPlan:
    """Moving-window protocol: window length, k or (kmin, kmax), tau', step."""

    window: int
    k: int | tuple[int, int]
    tau_prime: float
    step: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "window", int(self.window))
        object.__setattr__(self, "step", int(self.step))
        if self.step < 1:
            raise ValueError(f"step must be >= 1, got {self.step}")
        for k in self.k_values():
            validate_tail_config(self.window, k, self.tau_prime)

    def k_values(self) -> tuple[int, ...]:
        if isinstance(self.k, tuple):
            lo, hi = (int(v) for v in self.k)
            if lo > hi:
                raise ValueError(f"empty k range ({lo}, {hi})")
            return tuple(range(lo, hi + 1))
        return (int(self.k),)


@dataclass(frozen=True)
class RollingRow:
    """One rolling output: estimates on success, else a gap with a reason."""

    timestamp: datetime.date
    estimates: RiskEstimates | None
    reason: str | None


def _load_price_file(path) -> dict[datetime.date, float]:
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or [cell.strip().lower() for cell in header] != ["date", "price"]:
            raise ValueError(f"{path}: expected header 'date,price'")
        table: dict[datetime.date, float] = {}
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
            try:
                day = datetime.date.fromisoformat(row[0].strip())
                price = float(row[1])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
            if not math.isfinite(price) or price <= 0.0:
                raise ValueError(f"{path}:{lineno}: non-positive price {row[1]}")
            if day in table:
                raise ValueError(f"{path}:{lineno}: duplicate date {day}")
            table[day] = price
    if not table:
        raise ValueError(f"{path}: no data rows")
    return table


def load_pair_series(path_x, path_y) -> tuple[ReturnSeries, ReturnSeries]:
    """Load two price files and align them on their common dates."""
    table_x = _load_price_file(path_x)
    table_y = _load_price_file(path_y)
    common = sorted(set(table_x) & set(table_y))
    if not common:
        raise ValueError("empty intersection of dates between the two files")
    if len(common) < 2:
        raise ValueError(f"need at least 2 overlapping dates, got {len(common)}")
    series_x = ReturnSeries(timestamps=common, prices=[table_x[d] for d in common])
    series_y = ReturnSeries(timestamps=common, prices=[table_y[d] for d in common])
    return series_x, series_y


def loss_pair(series_x: ReturnSeries, series_y: ReturnSeries) -> LossPairSample:
    """Aligned losses of the two series as an estimation sample."""
    if series_x.timestamps != series_y.timestamps:
        raise ValueError("series are not aligned on the same timestamps")
    return LossPairSample(xs=series_x.losses, ys=series_y.losses)


def _mean_over(estimates: Sequence[RiskEstimates], pick) -> float:
    return float(np.mean([pick(est) for est in estimates]))


def average_estimates(
    estimates: Sequence[RiskEstimates], failed: Sequence[str] = ()
) -> RiskEstimates:
    """Field-wise mean of several estimates (one per k in a k-range).

    Warnings are deduplicated by code; excluded k values add a
    ``k_partial`` warning carrying their reasons.
    """
    if not estimates:
        raise ValueError("need at least one estimate to average")
    warnings: list[WarningRecord] = []
    seen: set[str] = set()
    for est in estimates:
        for warning in est.warnings:
            if warning.code not in seen:
                seen.add(warning.code)
                warnings.append(warning)
    if failed:
        warnings.append(
            WarningRecord(
                "k_partial",
                f"{len(failed)} of {len(estimates) + len(failed)} k values "
                f"failed and were excluded: {'; '.join(failed)}",
            )
        )
    return RiskEstimates(
        gamma1_hat=_mean_over(estimates, lambda e: e.gamma1_hat),
        var_x_hat=_mean_over(estimates, lambda e: e.var_x_hat),
        eta_hat_1=_mean_over(estimates, lambda e: e.eta_hat_1),
        eta_hat_2=_mean_over(estimates, lambda e: e.eta_hat_2),
        covar_int=_mean_over(estimates, lambda e: e.covar_int),
        coes_int=_mean_over(estimates, lambda e: e.coes_int),
        covar_ext={i: _mean_over(estimates, lambda e: e.covar_ext[i]) for i in (1, 2, 3)},
        coes_ext={i: _mean_over(estimates, lambda e: e.coes_ext[i]) for i in (1, 2, 3, 4)},
        warnings=tuple(warnings),
    )


def estimate_with_k_values(
    sample: LossPairSample, ks: Sequence[int], tau_prime: float
) -> RiskEstimates:
    """estimate_all averaged over the k values; raises if every k fails."""
    successes: list[RiskEstimates] = []
    failures: list[str] = []
    for k in ks:
        try:
            successes.append(estimate_all(sample, k, tau_prime))
        except ValueError as exc:
            failures.append(f"k={k}: {exc}")
    if not successes:
        raise ValueError("; ".join(failures))
    return average_estimates(successes, failures)


def rolling_estimates(
    series_x: ReturnSeries, series_y: ReturnSeries, plan: RollingPlan
) -> list[RollingRow]:
    """Re-estimate on every window of the aligned losses.

    Windows end at loss indices window, window+step, ... T; each row is
    stamped with the date of its last loss.  There are
    floor((T - window)/step) + 1 rows at full coverage.
    """
    if series_x.timestamps != series_y.timestamps:
        raise ValueError("series are not aligned on the same timestamps")
    losses_x, losses_y = series_x.losses, series_y.losses
    total = losses_x.size
    if plan.window > total:
        raise ValueError(f"window {plan.window} exceeds loss series length {total}")
    ks = plan.k_values()
    rows: list[RollingRow] = []
    for end in range(plan.window, total + 1, plan.step):
        stamp = series_x.timestamps[end]
        sample = LossPairSample(
            xs=losses_x[end - plan.window : end], ys=losses_y[end - plan.window : end]
        )
        try:
            estimates = estimate_with_k_values(sample, ks, plan.tau_prime)
        except ValueError as exc:
            rows.append(RollingRow(timestamp=stamp, estimates=None, reason=str(exc)))
            continue
        rows.append(RollingRow(timestamp=stamp, estimates=estimates, reason=None))
    return rows


def _write_tsv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\t".join(header) + "\n")
        for row in rows:
            handle.write("\t".join(_format_cell(cell) for cell in row) + "\n")


def _format_cell(cell) -> str:
    if isinstance(cell, float):
        return f"{cell:.10g}"
    return str(cell)


def diagnostics_export(
    sample: LossPairSample, k_range: Sequence[int], tau_grid: Sequence[float], out_dir
) -> dict[str, Path]:
    """Write the three diagnostic curves as TSV files into ``out_dir``.

    hill.tsv: Hill estimates of the X margin with 90% bands over k_range;
    tailprob.tsv: empirical joint tail probability against (1 - tau)^2;
    r11.tsv: both tail-copula estimates at (1, 1) over k_range.
    """
    ks = sorted({int(k) for k in k_range})
    if not ks:
        raise ValueError("empty k range")
    taus = [float(t) for t in tau_grid]
    if not taus:
        raise ValueError("empty tau grid")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    from .core import build_margin_index

    margin = build_margin_index(sample.xs)
    curve = hill_curve(margin, ks[0], ks[-1])
    positions = {int(k): i for i, k in enumerate(curve.ks)}
    hill_rows = [
        (k, float(curve.gammas[positions[k]]), float(curve.lo[positions[k]]), float(curve.hi[positions[k]]))
        for k in ks
    ]
    prob = tail_prob_curve(sample, taus)
    prob_rows = [
        (float(prob.taus[i]), float(prob.p_hat[i]), float(prob.square[i]))
        for i in range(len(taus))
    ]
    r_rows = [(k, r_hat(sample, k, 1, 1.0, 1.0), r_hat(sample, k, 2, 1.0, 1.0)) for k in ks]

    paths = {
        "hill": out / "hill.tsv",
        "tailprob": out / "tailprob.tsv",
        "r11": out / "r11.tsv",
    }
    _write_tsv(paths["hill"], ("k", "gamma", "lo", "hi"), hill_rows)
    _write_tsv(paths["tailprob"], ("tau", "p_hat", "square"), prob_rows)
    _write_tsv(paths["r11"], ("k", "r1", "r2"), r_rows)
    return paths
