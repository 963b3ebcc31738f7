"""Transfer policies: pure planning functions invoked at trip events.

Plans are made at the route start and whenever the node leaves a hotspot.
Delay-tolerant planning sizes the mobile rate so that the pessimistic WiFi
forecast plus the mobile stream finish exactly at the deadline; the
maximum-throughput policies just request the full predicted mobile rate.
Prefetching policies additionally decide how much of the object to push
into the next hotspot's cache and at which object offset.

On entering a hotspot the node first deals with any hole below the cached
offset (delay-tolerant traffic fetches it from the origin over the backhaul;
delay-sensitive traffic lets its still-running mobile stream finish it),
then drains the local cache, then spends whatever dwell time is left
fetching more from the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from .model import MBIT_PER_MB, TrafficClass, TransferTask
from .prediction import PredictionProfile
from .ranges import RangeSet

# Floor for the mobile-time denominator; avoids division by zero when the
# WiFi-time estimate reaches the remaining budget.
T_MOBILE_FLOOR = 1e-6


class Policy(Enum):
    PREFETCH_DELAY_TOLERANT = "prefetch-dt"
    PREDICTION_ONLY_DELAY_TOLERANT = "prediction-dt"
    NO_PREDICTION_OFFLOAD = "no-prediction"
    PREFETCH_DELAY_SENSITIVE = "prefetch-ds"
    MOBILE_ONLY = "mobile-only"

    @property
    def cli_name(self) -> str:
        return self.value

    @property
    def prefetches(self) -> bool:
        return self in (Policy.PREFETCH_DELAY_TOLERANT, Policy.PREFETCH_DELAY_SENSITIVE)

    @property
    def uses_local_rate_bounds(self) -> bool:
        return self.prefetches

    @property
    def rate_limited(self) -> bool:
        """Deliberately underuses the mobile channel at the planned rate.

        The maximum-throughput policies instead ride whatever rate the
        channel realizes; their plan's mobile_rate is the nominal prediction
        that sizes the cache offset.
        """
        return self in (Policy.PREFETCH_DELAY_TOLERANT,
                        Policy.PREDICTION_ONLY_DELAY_TOLERANT)

    def admits(self, traffic_class: TrafficClass) -> bool:
        if self is Policy.PREFETCH_DELAY_SENSITIVE:
            return traffic_class is TrafficClass.DELAY_SENSITIVE
        if self in (Policy.PREFETCH_DELAY_TOLERANT, Policy.PREDICTION_ONLY_DELAY_TOLERANT):
            return traffic_class is TrafficClass.DELAY_TOLERANT
        return True


class TripEvent(Enum):
    ROUTE_START = "route-start"
    HOTSPOT_EXIT = "hotspot-exit"
    HOTSPOT_ENTER = "hotspot-enter"


class Channel(Enum):
    MOBILE = "mobile"
    WIFI_LOCAL = "wifi-local"
    WIFI_BACKHAUL = "wifi-backhaul"


class PolicyClassMismatch(ValueError):
    """Policy cannot serve the task's traffic class."""


@dataclass(frozen=True)
class TransferPlan:
    """Rate to request from the mobile network until the next replanning point.

    ``infeasible`` is set when the unclamped delay-tolerant rate exceeded the
    predicted mobile capacity; the plan is still usable (clamped).
    """

    mobile_rate: float
    valid_from: float = 0.0
    infeasible: bool = False

    def __post_init__(self) -> None:
        if self.mobile_rate < 0:
            raise ValueError(f"mobile_rate must be >= 0, got {self.mobile_rate}")


@dataclass(frozen=True)
class CachePlan:
    """Byte range [offset, offset + amount) to stage in one hotspot's cache."""

    hotspot_index: Optional[int]
    amount_mb: float
    offset_mb: float

    def __post_init__(self) -> None:
        if self.amount_mb < 0 or self.offset_mb < 0:
            raise ValueError("cache amount and offset must be >= 0")


@dataclass(frozen=True)
class EntryAction:
    """One fetch step inside a hotspot: fill missing bytes of ``window`` in
    order at ``rate`` over ``channel``.  ``window_hi`` None means object end."""

    channel: Channel
    rate: float
    window_lo: float
    window_hi: Optional[float]


def _pessimistic_wifi(pred: PredictionProfile) -> tuple[float, float]:
    """Lower-bound WiFi bytes (MB) and seconds over the remaining hotspots."""
    data_mb = sum(h.rate_min * h.duration_min for h in pred.hotspots) / MBIT_PER_MB
    seconds = sum(h.duration_min for h in pred.hotspots)
    return data_mb, seconds


def _delay_tolerant_rate(
    remaining_mb: float, time_left: float, pred: PredictionProfile
) -> tuple[float, bool]:
    wifi_mb, wifi_s = _pessimistic_wifi(pred)
    data_mobile = max(0.0, remaining_mb - wifi_mb)
    time_mobile = max(T_MOBILE_FLOOR, time_left - wifi_s)
    raw = data_mobile * MBIT_PER_MB / time_mobile
    # The same rate must hold through every remaining mobile stretch, so the
    # cap is the lowest rate on the horizon, not the next gap's best.
    cap = pred.sustainable_mobile_rate
    infeasible = raw > cap
    return min(max(raw, 0.0), cap), infeasible


def _next_cache(
    pred: PredictionProfile,
    mobile_rate: float,
    received_prefix_mb: float,
    remaining_mb: float,
) -> CachePlan:
    """Size the next hotspot's cache from the optimistic bounds.

    The offset is the absolute object position the node expects to have
    reached on arrival: its current prefix plus what the mobile stream
    should deliver across the gap.  The amount is truncated so the cached
    range never extends past the object end.
    """
    size_mb = received_prefix_mb + remaining_mb
    offset = received_prefix_mb + mobile_rate * pred.time_to_next_wifi / MBIT_PER_MB
    if not pred.hotspots:
        return CachePlan(hotspot_index=None, amount_mb=0.0, offset_mb=offset)
    nxt = pred.hotspots[0]
    amount = nxt.rate_max * nxt.duration_max / MBIT_PER_MB
    amount = max(0.0, min(amount, size_mb - offset))
    return CachePlan(hotspot_index=nxt.hotspot_index, amount_mb=amount, offset_mb=offset)


def plan_exit_delay_tolerant(
    remaining_mb: float,
    time_left: float,
    pred: PredictionProfile,
    received_prefix_mb: float = 0.0,
    valid_from: float = 0.0,
) -> tuple[TransferPlan, CachePlan]:
    """Plan mobile rate and next-hotspot cache for delay-tolerant traffic.

    Expects ``pred`` built with local-rate bounds (prefetching makes each
    hotspot serve at its local WiFi rate).
    """
    if remaining_mb < 0:
        raise ValueError(f"remaining_mb must be >= 0, got {remaining_mb}")
    rate, infeasible = _delay_tolerant_rate(remaining_mb, time_left, pred)
    plan = TransferPlan(mobile_rate=rate, valid_from=valid_from, infeasible=infeasible)
    cache = _next_cache(pred, rate, received_prefix_mb, remaining_mb)
    return plan, cache


def plan_exit_prediction_only(
    remaining_mb: float,
    time_left: float,
    pred: PredictionProfile,
    valid_from: float = 0.0,
) -> TransferPlan:
    """Delay-tolerant planning without prefetching.

    Same arithmetic, but ``pred`` must carry backhaul-rate bounds: with no
    cache, a hotspot can only deliver what its backhaul link brings in.
    """
    if remaining_mb < 0:
        raise ValueError(f"remaining_mb must be >= 0, got {remaining_mb}")
    rate, infeasible = _delay_tolerant_rate(remaining_mb, time_left, pred)
    return TransferPlan(mobile_rate=rate, valid_from=valid_from, infeasible=infeasible)


def plan_exit_delay_sensitive(
    remaining_mb: float,
    received_prefix_mb: float,
    pred: PredictionProfile,
    valid_from: float = 0.0,
) -> tuple[TransferPlan, CachePlan]:
    """Plan for delay-sensitive traffic: full predicted mobile rate, plus the
    cache estimate for the next hotspot."""
    if remaining_mb < 0:
        raise ValueError(f"remaining_mb must be >= 0, got {remaining_mb}")
    rate = pred.max_mobile_rate
    plan = TransferPlan(mobile_rate=rate, valid_from=valid_from)
    cache = _next_cache(pred, rate, received_prefix_mb, remaining_mb)
    return plan, cache


def plan_entry(
    received: RangeSet,
    cache: Optional[CachePlan],
    local_rate: float,
    backhaul_rate: float,
    size_mb: float,
) -> list[EntryAction]:
    """Ordered fetch steps for the dwell time in one hotspot.

    With a cache: (1) repair the hole below the cached offset from the
    origin, (2) drain the cached range at the local rate, (3) keep fetching
    from the origin with the remaining dwell.  Without one, the whole dwell
    is an origin fetch (the no-prefetch behavior).
    """
    if cache is None or cache.amount_mb <= 0:
        return [EntryAction(Channel.WIFI_BACKHAUL, backhaul_rate, 0.0, size_mb)]
    cache_end = min(cache.offset_mb + cache.amount_mb, size_mb)
    actions = []
    if received.missing_within(0.0, min(cache.offset_mb, size_mb)) > 0:
        actions.append(
            EntryAction(Channel.WIFI_BACKHAUL, backhaul_rate, 0.0,
                        min(cache.offset_mb, size_mb))
        )
    actions.append(
        EntryAction(Channel.WIFI_LOCAL, local_rate, cache.offset_mb, cache_end)
    )
    actions.append(EntryAction(Channel.WIFI_BACKHAUL, backhaul_rate, 0.0, size_mb))
    return actions


def plan_entry_delay_sensitive(
    received: RangeSet,
    cache: Optional[CachePlan],
    local_rate: float,
    backhaul_rate: float,
    mobile_rate: float,
    size_mb: float,
) -> list[EntryAction]:
    """Hotspot entry steps for the maximum-mobile-throughput prefetch policy.

    The node's mobile stream never throttles, so on arrival it first lets
    that stream finish the hole below the cached offset (the bytes it was
    mid-way through when it reached the hotspot), then drains the cache at
    the local rate and tops up from the origin.
    """
    if cache is None or cache.amount_mb <= 0:
        return [EntryAction(Channel.WIFI_BACKHAUL, backhaul_rate, 0.0, size_mb)]
    cache_end = min(cache.offset_mb + cache.amount_mb, size_mb)
    actions = []
    hole_end = min(cache.offset_mb, size_mb)
    if received.missing_within(0.0, hole_end) > 0 and mobile_rate > 0:
        actions.append(EntryAction(Channel.MOBILE, mobile_rate, 0.0, hole_end))
    actions.append(
        EntryAction(Channel.WIFI_LOCAL, local_rate, cache.offset_mb, cache_end)
    )
    actions.append(EntryAction(Channel.WIFI_BACKHAUL, backhaul_rate, 0.0, size_mb))
    return actions


PlanPair = tuple[TransferPlan, Optional[CachePlan]]


def policy_dispatch(
    policy: Policy,
    event: TripEvent,
    task: TransferTask,
    *,
    pred: Optional[PredictionProfile] = None,
    remaining_mb: float = 0.0,
    received_prefix_mb: float = 0.0,
    time_left: float = math.inf,
    now: float = 0.0,
    received: Optional[RangeSet] = None,
    cache: Optional[CachePlan] = None,
    local_rate: float = 0.0,
    backhaul_rate: float = 0.0,
    mobile_rate: float = 0.0,
) -> Union[PlanPair, list[EntryAction]]:
    """Route a trip event to the planner the policy prescribes.

    ROUTE_START and HOTSPOT_EXIT return ``(TransferPlan, CachePlan | None)``;
    HOTSPOT_ENTER returns the ordered entry actions.  ``mobile_rate`` is the
    mobile throughput reachable inside the hotspot, used only by the
    delay-sensitive entry sequence.
    """
    if not policy.admits(task.traffic_class):
        raise PolicyClassMismatch(
            f"{policy.cli_name} cannot serve {task.traffic_class.value} traffic"
        )

    if event is TripEvent.HOTSPOT_ENTER:
        if policy is Policy.MOBILE_ONLY:
            return []  # stays on the mobile network, never associates
        if policy is Policy.PREFETCH_DELAY_SENSITIVE:
            assert received is not None
            return plan_entry_delay_sensitive(
                received, cache, local_rate, backhaul_rate, mobile_rate, task.size_mb
            )
        if policy.prefetches:
            assert received is not None
            return plan_entry(received, cache, local_rate, backhaul_rate, task.size_mb)
        # prediction-only and no-prediction fetch from the origin all dwell
        return [EntryAction(Channel.WIFI_BACKHAUL, backhaul_rate, 0.0, task.size_mb)]

    assert pred is not None
    if policy is Policy.PREFETCH_DELAY_TOLERANT:
        return plan_exit_delay_tolerant(
            remaining_mb, time_left, pred,
            received_prefix_mb=received_prefix_mb, valid_from=now,
        )
    if policy is Policy.PREDICTION_ONLY_DELAY_TOLERANT:
        plan = plan_exit_prediction_only(remaining_mb, time_left, pred, valid_from=now)
        return plan, None
    if policy is Policy.PREFETCH_DELAY_SENSITIVE:
        return plan_exit_delay_sensitive(
            remaining_mb, received_prefix_mb, pred, valid_from=now
        )
    # MOBILE_ONLY and NO_PREDICTION_OFFLOAD always request the full
    # predicted mobile rate and stage nothing.
    return TransferPlan(mobile_rate=pred.max_mobile_rate, valid_from=now), None
