import math

import pytest

from offloadsim.config import load_snr_table
from offloadsim.model import (
    AccessKind,
    EnergyModel,
    RouteProfile,
    RouteSegment,
    SnrBand,
    TrafficClass,
    TransferTask,
    mb_to_mbit,
    mbit_to_mb,
    scale_route,
    snr_to_throughput,
    validate_snr_table,
)


def mobile(t, d, r):
    return RouteSegment(AccessKind.MOBILE, t, d, mobile_rate=r)


def wifi(t, d, local, back, idx):
    return RouteSegment(AccessKind.WIFI, t, d, wifi_local_rate=local,
                        backhaul_rate=back, hotspot_index=idx)


class TestRouteSegment:
    def test_mobile_segment_needs_rate(self):
        with pytest.raises(ValueError):
            RouteSegment(AccessKind.MOBILE, 0.0, 10.0)

    def test_duration_must_be_positive(self):
        with pytest.raises(ValueError):
            mobile(0.0, 0.0, 5.0)
        with pytest.raises(ValueError):
            mobile(0.0, -3.0, 5.0)

    def test_backhaul_cannot_exceed_local(self):
        with pytest.raises(ValueError):
            wifi(0.0, 10.0, 5.0, 6.0, 1)

    def test_wifi_needs_hotspot_index(self):
        with pytest.raises(ValueError):
            RouteSegment(AccessKind.WIFI, 0.0, 10.0, wifi_local_rate=10.0,
                         backhaul_rate=5.0)

    def test_mobile_rejects_wifi_rates(self):
        with pytest.raises(ValueError):
            RouteSegment(AccessKind.MOBILE, 0.0, 10.0, mobile_rate=5.0,
                         wifi_local_rate=10.0)


class TestRouteProfile:
    def test_contiguity_enforced(self):
        with pytest.raises(ValueError):
            RouteProfile((mobile(0, 10, 5), mobile(11, 10, 5)), 21.0)

    def test_total_time_must_match(self):
        with pytest.raises(ValueError):
            RouteProfile((mobile(0, 10, 5),), 11.0)

    def test_hotspot_indices_increasing(self):
        with pytest.raises(ValueError):
            RouteProfile(
                (wifi(0, 10, 10, 5, 2), wifi(10, 10, 10, 5, 1)), 20.0
            )

    def test_bundled_routes(self, route_4ap, route_2ap, route_8ap):
        for route, n in ((route_4ap, 4), (route_2ap, 2), (route_8ap, 8)):
            assert route.total_time == pytest.approx(269.0)
            assert route.n_hotspots == n
        # every layout keeps the same total WiFi window time
        for route in (route_4ap, route_8ap):
            assert sum(s.duration for s in route.hotspots) == pytest.approx(72.0)
        assert route_4ap.mobile_time() == pytest.approx(197.0)


class TestUnits:
    @pytest.mark.parametrize("mb,mbit", [(0.0, 0.0), (1.0, 8.0), (60.0, 480.0)])
    def test_mb_to_mbit(self, mb, mbit):
        assert mb_to_mbit(mb) == mbit
        assert mbit_to_mb(mbit) == mb

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            mb_to_mbit(-1.0)
        with pytest.raises(ValueError):
            mbit_to_mb(-8.0)


class TestSnrLookup:
    @pytest.mark.parametrize(
        "snr,expected",
        [
            (-45.0, (19.90, 15.87)),
            (-75.0, (17.23, 9.46)),
            (-95.0, (16.16, 6.81)),
            # a boundary value belongs to the band naming it as upper bound
            (-60.0, (17.76, 10.13)),
            (-50.0, (18.30, 11.86)),
        ],
    )
    def test_default_table(self, snr, expected):
        table = load_snr_table()
        assert snr_to_throughput(snr, table) == expected

    def test_monotone_in_snr(self):
        table = load_snr_table()
        grid = [x / 2 for x in range(-240, 1)]
        pairs = [snr_to_throughput(s, table) for s in grid]
        for (w1, a1), (w2, a2) in zip(pairs, pairs[1:]):
            assert w2 >= w1
            assert a2 >= a1

    def test_gap_in_table_rejected(self):
        bands = (
            SnrBand(None, -80.0, 10.0, 5.0),
            SnrBand(-70.0, None, 12.0, 6.0),
        )
        with pytest.raises(ValueError):
            validate_snr_table(bands)

    def test_bounded_ends_rejected(self):
        bands = (SnrBand(-90.0, -80.0, 10.0, 5.0),)
        with pytest.raises(ValueError):
            validate_snr_table(bands)


class TestScaleRoute:
    def test_identity(self, route_4ap):
        scaled = scale_route(route_4ap, 1.0, 1.0, 1.0)
        assert scaled == route_4ap

    def test_mobile_third(self, route_4ap):
        scaled = scale_route(route_4ap, mobile_factor=1 / 3)
        assert scaled.segments[0].mobile_rate == pytest.approx(1.61, abs=1e-12)

    def test_backhaul_third(self, route_4ap):
        scaled = scale_route(route_4ap, backhaul_factor=1 / 3)
        assert scaled.segments[1].backhaul_rate == pytest.approx(2.27, abs=1e-12)

    @pytest.mark.parametrize("first", [(0.25, 0.5, 0.5), (1 / 3, 1 / 3, 1 / 3)])
    @pytest.mark.parametrize("second", [(0.5, 0.5, 0.25), (1.0, 0.5, 0.5)])
    def test_composition(self, route_4ap, first, second):
        # factor pairs chosen so the backhaul cap never engages
        once = scale_route(scale_route(route_4ap, *first), *second)
        combined = scale_route(
            route_4ap,
            first[0] * second[0],
            first[1] * second[1],
            first[2] * second[2],
        )
        for a, b in zip(once.segments, combined.segments):
            for field in ("mobile_rate", "wifi_local_rate", "backhaul_rate"):
                x, y = getattr(a, field), getattr(b, field)
                if x is not None:
                    assert math.isclose(x, y, rel_tol=1e-12)

    def test_backhaul_capped_at_local(self, route_4ap):
        # W/4 with full A would put every backhaul above its radio link
        scaled = scale_route(route_4ap, wifi_factor=0.25, backhaul_factor=1.0)
        for seg in scaled.hotspots:
            assert seg.backhaul_rate == pytest.approx(seg.wifi_local_rate)

    def test_nonpositive_factor_rejected(self, route_4ap):
        with pytest.raises(ValueError):
            scale_route(route_4ap, mobile_factor=0.0)


class TestEnergyModel:
    def test_defaults(self):
        m = EnergyModel()
        assert m.mobile_transfer_j_per_mb == 100.0
        assert m.wifi_transfer_j_per_mb == 5.0
        assert m.wifi_idle_w == 0.77
        assert m.wifi_preactivation_s == 20.0

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            EnergyModel(wifi_idle_w=-0.1)


class TestTransferTask:
    def test_validation(self):
        with pytest.raises(ValueError):
            TransferTask(size_mb=0.0, delay_threshold=100.0)
        with pytest.raises(ValueError):
            TransferTask(size_mb=10.0, delay_threshold=0.0)

    def test_delay_sensitive_ignores_threshold(self):
        task = TransferTask(50.0, 100.0, TrafficClass.DELAY_SENSITIVE)
        assert math.isinf(task.effective_deadline())
        task = TransferTask(50.0, 100.0, TrafficClass.DELAY_TOLERANT)
        assert task.effective_deadline() == 100.0
