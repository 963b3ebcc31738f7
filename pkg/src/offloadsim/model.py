"""Domain model for vehicular WiFi-offloading trips.

Routes are pre-segmented connectivity timelines: stretches of mobile-only
coverage interleaved with WiFi hotspot windows, each segment carrying the
throughput the vehicle sees there.  Conventions used everywhere in this
package: rates in Mbit/s, times in seconds, data amounts in decimal
megabytes (1 MB = 10^6 bytes = 8 Mbit).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

MBIT_PER_MB = 8.0


class AccessKind(Enum):
    MOBILE = "mobile"
    WIFI = "wifi"


class TrafficClass(Enum):
    DELAY_TOLERANT = "delay-tolerant"
    DELAY_SENSITIVE = "delay-sensitive"


def mb_to_mbit(x: float) -> float:
    """Megabytes to megabits (1 MB = 8 Mbit). Requires x >= 0."""
    if x < 0:
        raise ValueError(f"negative data amount: {x}")
    return x * MBIT_PER_MB


def mbit_to_mb(x: float) -> float:
    """Megabits to megabytes. Requires x >= 0."""
    if x < 0:
        raise ValueError(f"negative data amount: {x}")
    return x / MBIT_PER_MB


@dataclass(frozen=True)
class RouteSegment:
    """One contiguous stretch of the route with a single access technology.

    Mobile segments carry ``mobile_rate``.  WiFi segments carry the rate for
    serving bytes out of the hotspot's local cache (``wifi_local_rate``), the
    rate for fetching from the object's origin through the hotspot backhaul
    (``backhaul_rate``), and a 1-based ``hotspot_index``.
    """

    kind: AccessKind
    start_time: float
    duration: float
    mobile_rate: Optional[float] = None
    wifi_local_rate: Optional[float] = None
    backhaul_rate: Optional[float] = None
    hotspot_index: Optional[int] = None

    def __post_init__(self) -> None:
        if self.duration <= 0:
            raise ValueError(f"segment duration must be positive, got {self.duration}")
        if self.start_time < -1e-9:
            raise ValueError(f"segment start_time must be >= 0, got {self.start_time}")
        if self.kind is AccessKind.MOBILE:
            if self.mobile_rate is None or self.mobile_rate <= 0:
                raise ValueError("mobile segment needs a positive mobile_rate")
            if self.wifi_local_rate is not None or self.backhaul_rate is not None:
                raise ValueError("mobile segment must not carry WiFi rates")
        else:
            if self.wifi_local_rate is None or self.wifi_local_rate <= 0:
                raise ValueError("wifi segment needs a positive wifi_local_rate")
            if self.backhaul_rate is None or self.backhaul_rate <= 0:
                raise ValueError("wifi segment needs a positive backhaul_rate")
            # The backhaul path traverses the same radio link, so it can
            # never beat the local-cache rate.
            if self.backhaul_rate > self.wifi_local_rate * (1 + 1e-12):
                raise ValueError(
                    f"backhaul_rate {self.backhaul_rate} exceeds wifi_local_rate "
                    f"{self.wifi_local_rate}"
                )
            if self.hotspot_index is None or self.hotspot_index < 1:
                raise ValueError("wifi segment needs a 1-based hotspot_index")

    @property
    def end_time(self) -> float:
        return self.start_time + self.duration

    @property
    def is_wifi(self) -> bool:
        return self.kind is AccessKind.WIFI


@dataclass(frozen=True)
class RouteProfile:
    """Ordered, contiguous, non-overlapping connectivity segments."""

    segments: tuple[RouteSegment, ...]
    total_time: float

    def __post_init__(self) -> None:
        if not self.segments:
            raise ValueError("route needs at least one segment")
        object.__setattr__(self, "segments", tuple(self.segments))
        cursor = 0.0
        for i, seg in enumerate(self.segments):
            if not math.isclose(seg.start_time, cursor, rel_tol=1e-9, abs_tol=1e-6):
                raise ValueError(
                    f"segment {i} starts at {seg.start_time}, expected {cursor} "
                    "(segments must be contiguous)"
                )
            cursor += seg.duration
        if not math.isclose(self.total_time, cursor, rel_tol=1e-9, abs_tol=1e-6):
            raise ValueError(
                f"total_time {self.total_time} != sum of durations {cursor}"
            )
        indices = [s.hotspot_index for s in self.segments if s.is_wifi]
        if indices != sorted(set(indices)):
            raise ValueError(f"hotspot indices must be strictly increasing: {indices}")

    @classmethod
    def from_segments(cls, segments: Sequence[RouteSegment]) -> "RouteProfile":
        return cls(tuple(segments), sum(s.duration for s in segments))

    @property
    def hotspots(self) -> tuple[RouteSegment, ...]:
        return tuple(s for s in self.segments if s.is_wifi)

    @property
    def n_hotspots(self) -> int:
        return len(self.hotspots)

    def mobile_time(self) -> float:
        return sum(s.duration for s in self.segments if not s.is_wifi)


def scale_route(
    route: RouteProfile,
    mobile_factor: float = 1.0,
    wifi_factor: float = 1.0,
    backhaul_factor: float = 1.0,
) -> RouteProfile:
    """Multiply every rate by the factor for its channel; times unchanged.

    A scaled backhaul rate is capped at the scaled local WiFi rate (the
    backhaul path cannot outrun the radio link it shares), so extreme factor
    combinations still produce a valid route.
    """
    for name, f in (("mobile", mobile_factor), ("wifi", wifi_factor),
                    ("backhaul", backhaul_factor)):
        if f <= 0:
            raise ValueError(f"{name} factor must be positive, got {f}")
    out = []
    for seg in route.segments:
        if seg.is_wifi:
            local = seg.wifi_local_rate * wifi_factor
            back = min(seg.backhaul_rate * backhaul_factor, local)
            out.append(
                RouteSegment(
                    kind=seg.kind,
                    start_time=seg.start_time,
                    duration=seg.duration,
                    wifi_local_rate=local,
                    backhaul_rate=back,
                    hotspot_index=seg.hotspot_index,
                )
            )
        else:
            out.append(
                RouteSegment(
                    kind=seg.kind,
                    start_time=seg.start_time,
                    duration=seg.duration,
                    mobile_rate=seg.mobile_rate * mobile_factor,
                )
            )
    return RouteProfile(tuple(out), route.total_time)


@dataclass(frozen=True)
class TransferTask:
    """A single data object to move during one trip.

    ``delay_threshold`` is the completion deadline in seconds for
    delay-tolerant traffic; delay-sensitive planners ignore it (they always
    run the mobile channel at full predicted rate).
    """

    size_mb: float
    delay_threshold: float
    traffic_class: TrafficClass = TrafficClass.DELAY_TOLERANT

    def __post_init__(self) -> None:
        if self.size_mb <= 0:
            raise ValueError(f"task size must be positive, got {self.size_mb}")
        if self.delay_threshold <= 0:
            raise ValueError(
                f"delay threshold must be positive, got {self.delay_threshold}"
            )

    def effective_deadline(self) -> float:
        if self.traffic_class is TrafficClass.DELAY_SENSITIVE:
            return math.inf
        return self.delay_threshold


@dataclass(frozen=True)
class EnergyModel:
    """Per-technology transfer and idle costs of the handset radios.

    Defaults: 100 J/MB over mobile, 5 J/MB over WiFi, 0.77 W while the WiFi
    interface is on but not transferring, and the interface is woken 20 s
    before each hotspot is reached.
    """

    mobile_transfer_j_per_mb: float = 100.0
    wifi_transfer_j_per_mb: float = 5.0
    wifi_idle_w: float = 0.77
    wifi_preactivation_s: float = 20.0

    def __post_init__(self) -> None:
        for name in ("mobile_transfer_j_per_mb", "wifi_transfer_j_per_mb",
                     "wifi_idle_w", "wifi_preactivation_s"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class SnrBand:
    """One row of the SNR-to-throughput lookup: (lower_db, upper_db] -> rates.

    ``None`` bounds are open ends.  A boundary SNR belongs to the band that
    names it as its upper bound, e.g. -60 dB maps to the band (-70, -60].
    """

    lower_db: Optional[float]
    upper_db: Optional[float]
    wifi_rate: float
    adsl_rate: float

    def __post_init__(self) -> None:
        if self.wifi_rate <= 0 or self.adsl_rate <= 0:
            raise ValueError("band rates must be strictly positive")
        if (self.lower_db is not None and self.upper_db is not None
                and self.lower_db >= self.upper_db):
            raise ValueError(f"empty band ({self.lower_db}, {self.upper_db}]")

    def contains(self, snr_db: float) -> bool:
        lo = -math.inf if self.lower_db is None else self.lower_db
        hi = math.inf if self.upper_db is None else self.upper_db
        return lo < snr_db <= hi


def validate_snr_table(table: Sequence[SnrBand]) -> tuple[SnrBand, ...]:
    """Check that the bands partition the SNR axis; returns them sorted."""
    if not table:
        raise ValueError("SNR table must not be empty")
    def low_key(b: SnrBand) -> float:
        return -math.inf if b.lower_db is None else b.lower_db
    bands = tuple(sorted(table, key=low_key))
    if bands[0].lower_db is not None or bands[-1].upper_db is not None:
        raise ValueError("SNR table must be open-ended on both sides")
    for a, b in zip(bands, bands[1:]):
        if a.upper_db is None or b.lower_db is None or a.upper_db != b.lower_db:
            raise ValueError(
                f"SNR bands must tile the axis; gap/overlap between "
                f"(*, {a.upper_db}] and ({b.lower_db}, *]"
            )
    return bands


def snr_to_throughput(snr_db: float, table: Sequence[SnrBand]) -> tuple[float, float]:
    """Map an SNR value to the (wifi_rate, adsl_rate) pair of its band."""
    bands = validate_snr_table(table)
    for band in bands:
        if band.contains(snr_db):
            return band.wifi_rate, band.adsl_rate
    raise AssertionError("validated table must cover every SNR")  # pragma: no cover
