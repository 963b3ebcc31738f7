"""Planner-visible forecasts and realized (perturbed) route draws.

The planner never sees the realized route.  It sees the nominal timeline
plus symmetric uncertainty bounds derived from the configured error
fractions; the engine separately executes against an independently drawn
realization of the same route.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import AccessKind, RouteProfile, RouteSegment


@dataclass(frozen=True)
class ErrorSpec:
    """Fractional half-widths of the uniform perturbation intervals.

    A time error of 0.10 means every realized segment duration is drawn
    uniformly from [0.9 d, 1.1 d]; throughput errors perturb each rate the
    same way, independently per segment and per rate.
    """

    time_error: float = 0.0
    throughput_error: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.time_error < 1:
            raise ValueError(f"time_error must be in [0, 1), got {self.time_error}")
        if not 0 <= self.throughput_error < 1:
            raise ValueError(
                f"throughput_error must be in [0, 1), got {self.throughput_error}"
            )


@dataclass(frozen=True)
class HotspotForecast:
    """Duration and rate bounds for one future hotspot, as the planner sees it."""

    hotspot_index: int
    duration_min: float
    duration_max: float
    rate_min: float
    rate_max: float
    backhaul_min: float

    def __post_init__(self) -> None:
        if self.duration_min > self.duration_max or self.rate_min > self.rate_max:
            raise ValueError("forecast bounds must satisfy min <= max")


@dataclass(frozen=True)
class PredictionProfile:
    """Everything a planner may consult when (re)planning at a hotspot exit.

    ``max_mobile_rate`` is the highest nominal mobile rate expected before
    the next hotspot (or to the route end when none remains); it is the rate
    a maximum-throughput policy requests and it prices the cache offset.
    ``sustainable_mobile_rate`` is the lowest nominal mobile rate over the
    remaining planning horizon: the largest constant rate the mobile network
    can carry everywhere, hence the cap for delay-tolerant plans.
    """

    hotspots: tuple[HotspotForecast, ...]
    time_to_next_wifi: float
    remaining_mobile_time: float
    max_mobile_rate: float
    sustainable_mobile_rate: float

    @property
    def n_wifi(self) -> int:
        return len(self.hotspots)


def _mobile_rates_in(route: RouteProfile, now: float, window_end: float) -> list[float]:
    """Nominal mobile rates in [now, window_end); falls back to the remaining
    route, then the whole route, when the window has none."""
    rates = [
        s.mobile_rate for s in route.segments
        if not s.is_wifi and s.end_time > now + 1e-12 and s.start_time < window_end - 1e-12
    ]
    if not rates:
        rates = [
            s.mobile_rate for s in route.segments
            if not s.is_wifi and s.end_time > now + 1e-12
        ]
    if not rates:
        rates = [s.mobile_rate for s in route.segments if not s.is_wifi]
    return rates


def build_prediction(
    route: RouteProfile,
    now: float,
    errors: ErrorSpec,
    use_local_rate: bool = True,
    horizon: Optional[float] = None,
) -> PredictionProfile:
    """Forecast the remaining hotspots of the nominal route from time ``now``.

    ``use_local_rate`` selects which WiFi rate the bounds describe: the
    local-cache rate (prefetching schemes) or the backhaul rate (the
    prediction-only scheme, which always fetches from the origin).

    ``horizon`` truncates the forecast at a deadline: hotspots starting at or
    after it are dropped and a window straddling it only counts the part
    before it.
    """
    if now < -1e-9 or now > route.total_time + 1e-6:
        raise ValueError(f"now={now} outside route [0, {route.total_time}]")
    hi = route.total_time if horizon is None else min(horizon, route.total_time)
    te, re = errors.time_error, errors.throughput_error

    forecasts = []
    first_start = None
    for seg in route.segments:
        if not seg.is_wifi or seg.start_time < now - 1e-9:
            continue
        usable = min(seg.end_time, hi) - seg.start_time
        if usable <= 1e-12:
            continue
        if first_start is None:
            first_start = seg.start_time
        rate = seg.wifi_local_rate if use_local_rate else seg.backhaul_rate
        forecasts.append(
            HotspotForecast(
                hotspot_index=seg.hotspot_index,
                duration_min=(1 - te) * usable,
                duration_max=(1 + te) * usable,
                rate_min=(1 - re) * rate,
                rate_max=(1 + re) * rate,
                backhaul_min=(1 - re) * seg.backhaul_rate,
            )
        )

    if first_start is None:
        time_to_next = 0.0
        gap_end = route.total_time
    else:
        time_to_next = max(0.0, first_start - now)
        gap_end = first_start

    remaining_mobile = sum(
        max(0.0, s.end_time - max(now, s.start_time))
        for s in route.segments
        if not s.is_wifi and s.end_time > now
    )

    gap_rates = _mobile_rates_in(route, now, gap_end)
    horizon_rates = _mobile_rates_in(route, now, hi)
    return PredictionProfile(
        hotspots=tuple(forecasts),
        time_to_next_wifi=time_to_next,
        remaining_mobile_time=remaining_mobile,
        max_mobile_rate=max(gap_rates) if gap_rates else 0.0,
        sustainable_mobile_rate=min(horizon_rates) if horizon_rates else 0.0,
    )


def realize_route(route: RouteProfile, errors: ErrorSpec) -> RouteProfile:
    """Draw one perturbed realization of a nominal route.

    Segment durations and rates are drawn uniformly and independently from
    their error intervals; start times are rebuilt cumulatively.  The draw is
    deterministic for a given ``errors.seed``.  A drawn backhaul rate is
    capped at the drawn local rate, same physical constraint as in
    :func:`offloadsim.model.scale_route`.
    """
    rng = np.random.default_rng(errors.seed)
    te, re = errors.time_error, errors.throughput_error

    def jitter(value: float, err: float) -> float:
        return value * (1.0 + err * rng.uniform(-1.0, 1.0))

    out = []
    cursor = 0.0
    for seg in route.segments:
        dur = jitter(seg.duration, te)
        if seg.is_wifi:
            local = jitter(seg.wifi_local_rate, re)
            back = min(jitter(seg.backhaul_rate, re), local)
            out.append(
                RouteSegment(
                    kind=AccessKind.WIFI,
                    start_time=cursor,
                    duration=dur,
                    wifi_local_rate=local,
                    backhaul_rate=back,
                    hotspot_index=seg.hotspot_index,
                )
            )
        else:
            out.append(
                RouteSegment(
                    kind=AccessKind.MOBILE,
                    start_time=cursor,
                    duration=dur,
                    mobile_rate=jitter(seg.mobile_rate, re),
                )
            )
        cursor += dur
    return RouteProfile(tuple(out), cursor)
