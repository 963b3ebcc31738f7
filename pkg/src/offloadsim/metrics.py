"""Monte-Carlo orchestration and statistics.

Each run draws one realized route and evaluates every policy on that same
realization (paired comparison), then metrics are aggregated into means with
Student-t 95% confidence intervals.  Per-run seeds are derived from the
scenario seed with a stable hash, so adding a policy or rerunning a sweep
never reshuffles the realizations.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np
from scipy import stats

from .engine import RunOutcome, run_trip
from .model import EnergyModel, RouteProfile, TransferTask, scale_route
from .policies import Policy
from .prediction import ErrorSpec, realize_route

METRICS = ("offload_pct", "transfer_delay_s", "energy_j", "cache_mb")

CSV_COLUMNS = ("scenario_id", "policy", "metric", "mean", "ci95", "n",
               "infeasible_count")

SWEEPABLE = ("size_mb", "mobile_factor", "wifi_factor", "backhaul_factor",
             "time_error", "throughput_error", "hotspot_count")


class InsufficientSamples(ValueError):
    """Fewer than two samples: no confidence interval exists."""


def ci_halfwidth(samples: Sequence[float]) -> float:
    """Two-sided 95% confidence half-width, Student-t: t(0.975, n-1) s/sqrt(n)."""
    n = len(samples)
    if n < 2:
        raise InsufficientSamples(f"need at least 2 samples, got {n}")
    if min(samples) == max(samples):  # exact, not a float-noise std
        return 0.0
    s = float(np.std(samples, ddof=1))
    return float(stats.t.ppf(0.975, n - 1)) * s / math.sqrt(n)


def relative_gain(a_mean: float, b_mean: float, lower_is_better: bool = False) -> float:
    """Percent advantage of ``a`` over baseline ``b``.

    For higher-is-better metrics (offload): (a - b) / b * 100.  For
    lower-is-better ones (delay, energy): (b - a) / b * 100, so a positive
    number always means ``a`` wins.
    """
    if b_mean <= 0:
        raise ValueError(f"baseline mean must be positive, got {b_mean}")
    if lower_is_better:
        return (b_mean - a_mean) / b_mean * 100.0
    return (a_mean - b_mean) / b_mean * 100.0


def derive_run_seed(base_seed: int, run_index: int) -> int:
    """Stable per-run seed: SeedSequence entropy (base_seed, run_index)."""
    ss = np.random.SeedSequence(entropy=(int(base_seed), int(run_index)))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class ScenarioSpec:
    """One Monte-Carlo experiment: route, rates, task, errors, policies."""

    scenario_id: str
    route: RouteProfile
    route_id: str
    task: TransferTask
    policies: tuple[Policy, ...]
    mobile_factor: float = 1.0 / 3.0
    wifi_factor: float = 1.0 / 3.0
    backhaul_factor: float = 1.0 / 3.0
    errors: ErrorSpec = ErrorSpec(time_error=0.10, throughput_error=0.20)
    runs: int = 120
    seed: int = 0
    energy: EnergyModel = EnergyModel()
    metrics: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        # a single run is allowed (its CI is reported as zero-width)
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if not self.policies:
            raise ValueError("scenario needs at least one policy")
        for p in self.policies:
            if not p.admits(self.task.traffic_class):
                raise ValueError(
                    f"policy {p.cli_name} cannot serve {self.task.traffic_class.value}"
                )

    def scaled_route(self) -> RouteProfile:
        return scale_route(
            self.route,
            mobile_factor=self.mobile_factor,
            wifi_factor=self.wifi_factor,
            backhaul_factor=self.backhaul_factor,
        )


@dataclass(frozen=True)
class MetricSummary:
    mean: float
    ci95: float
    n: int


@dataclass(frozen=True)
class AggregateResult:
    scenario_id: str
    summaries: dict[Policy, dict[str, MetricSummary]]
    infeasible: dict[Policy, int]
    runs: int
    policies: tuple[Policy, ...]

    def mean(self, policy: Policy, metric: str) -> float:
        return self.summaries[policy][metric].mean


TripHook = Callable[[int, Policy, RouteProfile, RunOutcome], None]


def run_scenario(spec: ScenarioSpec, trip_hook: Optional[TripHook] = None) -> AggregateResult:
    """Run every policy over ``spec.runs`` paired realizations and aggregate."""
    nominal = spec.scaled_route()
    samples: dict[Policy, dict[str, list[float]]] = {
        p: {m: [] for m in METRICS} for p in spec.policies
    }
    infeasible = {p: 0 for p in spec.policies}
    for k in range(spec.runs):
        err_k = replace(spec.errors, seed=derive_run_seed(spec.seed, k))
        realized = realize_route(nominal, err_k)
        for p in spec.policies:
            outcome = run_trip(realized, nominal, spec.task, p, err_k, spec.energy)
            if trip_hook is not None:
                trip_hook(k, p, realized, outcome)
            samples[p]["offload_pct"].append(outcome.offload_pct)
            samples[p]["transfer_delay_s"].append(outcome.transfer_delay)
            samples[p]["energy_j"].append(outcome.energy_j)
            samples[p]["cache_mb"].append(outcome.cache_bytes_used)
            if not outcome.deadline_met:
                infeasible[p] += 1
    summaries = {
        p: {
            m: MetricSummary(
                mean=float(np.mean(vals)),
                ci95=ci_halfwidth(vals) if len(vals) >= 2 else 0.0,
                n=len(vals),
            )
            for m, vals in per_policy.items()
        }
        for p, per_policy in samples.items()
    }
    return AggregateResult(
        scenario_id=spec.scenario_id,
        summaries=summaries,
        infeasible=infeasible,
        runs=spec.runs,
        policies=spec.policies,
    )


@dataclass(frozen=True)
class SweepSpec:
    """A scenario re-run across the values of one swept parameter."""

    base: ScenarioSpec
    parameter: str
    values: tuple[float, ...]
    metrics: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        if self.parameter not in SWEEPABLE:
            raise ValueError(
                f"unknown sweep parameter {self.parameter!r}; expected one of {SWEEPABLE}"
            )
        if not self.values:
            raise ValueError("sweep needs at least one value")


def apply_sweep_value(spec: ScenarioSpec, parameter: str, value: float) -> ScenarioSpec:
    """Derive the scenario for one sweep point; ids become 'base@param=value'."""
    sid = f"{spec.scenario_id}@{parameter}={value:g}"
    if parameter == "size_mb":
        return replace(spec, scenario_id=sid, task=replace(spec.task, size_mb=float(value)))
    if parameter == "mobile_factor":
        return replace(spec, scenario_id=sid, mobile_factor=float(value))
    if parameter == "wifi_factor":
        return replace(spec, scenario_id=sid, wifi_factor=float(value))
    if parameter == "backhaul_factor":
        return replace(spec, scenario_id=sid, backhaul_factor=float(value))
    if parameter == "time_error":
        return replace(spec, scenario_id=sid,
                       errors=replace(spec.errors, time_error=float(value)))
    if parameter == "throughput_error":
        return replace(spec, scenario_id=sid,
                       errors=replace(spec.errors, throughput_error=float(value)))
    if parameter == "hotspot_count":
        from .config import load_route  # deferred: config builds on these types

        key = f"{int(value)}ap"
        return replace(spec, scenario_id=sid, route=load_route(key), route_id=key)
    raise ValueError(f"unknown sweep parameter {parameter!r}")


def run_sweep(sweep: SweepSpec, trip_hook: Optional[TripHook] = None) -> list[AggregateResult]:
    return [
        run_scenario(apply_sweep_value(sweep.base, sweep.parameter, v), trip_hook)
        for v in sweep.values
    ]


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def result_rows(
    result: AggregateResult, metrics: Optional[Sequence[str]] = None
) -> Iterable[tuple[str, ...]]:
    """Rows in the fixed CSV column order; one per (policy, metric)."""
    keep = tuple(metrics) if metrics else METRICS
    for p in result.policies:
        for m in keep:
            s = result.summaries[p][m]
            yield (
                result.scenario_id,
                p.cli_name,
                m,
                _fmt(s.mean),
                _fmt(s.ci95),
                str(s.n),
                str(result.infeasible[p]),
            )


def render_csv(
    results: Union[AggregateResult, Sequence[AggregateResult]],
    metrics: Optional[Sequence[str]] = None,
) -> str:
    """Deterministic CSV text for one or many aggregate results."""
    if isinstance(results, AggregateResult):
        results = [results]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in results:
        for row in result_rows(r, metrics):
            writer.writerow(row)
    return buf.getvalue()


def write_csv(
    results: Union[AggregateResult, Sequence[AggregateResult]],
    path: str,
    metrics: Optional[Sequence[str]] = None,
) -> None:
    text = render_csv(results, metrics)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
