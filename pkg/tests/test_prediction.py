import numpy as np
import pytest

from conftest import random_route
from offloadsim.model import scale_route
from offloadsim.prediction import ErrorSpec, build_prediction, realize_route


class TestErrorSpec:
    @pytest.mark.parametrize("field", ["time_error", "throughput_error"])
    @pytest.mark.parametrize("value", [-0.1, 1.0, 1.5])
    def test_bounds(self, field, value):
        with pytest.raises(ValueError):
            ErrorSpec(**{field: value})


class TestBuildPrediction:
    def test_zero_errors_equal_nominal(self, default_route, zero_errors):
        pred = build_prediction(default_route, 0.0, zero_errors, use_local_rate=True)
        assert pred.n_wifi == 4
        for fc, seg in zip(pred.hotspots, default_route.hotspots):
            assert fc.duration_min == fc.duration_max == seg.duration
            assert fc.rate_min == fc.rate_max == seg.wifi_local_rate

    def test_bounds_with_errors(self, route_4ap):
        # second hotspot of the one-third-scaled route, seen from t = 36 s
        route = scale_route(route_4ap, wifi_factor=1 / 3)
        errors = ErrorSpec(time_error=0.10, throughput_error=0.20)
        pred = build_prediction(route, 36.0, errors, use_local_rate=True)
        first = pred.hotspots[0]
        assert first.hotspot_index == 2
        assert first.duration_min == pytest.approx(16.2, abs=1e-12)
        assert first.duration_max == pytest.approx(19.8, abs=1e-12)
        assert first.rate_min == pytest.approx(4.464, abs=1e-12)
        assert first.rate_max == pytest.approx(6.696, abs=1e-12)

    def test_backhaul_bounds(self, default_route, default_errors):
        pred = build_prediction(default_route, 0.0, default_errors,
                                use_local_rate=False)
        seg = default_route.hotspots[0]
        assert pred.hotspots[0].rate_min == pytest.approx(0.8 * seg.backhaul_rate)
        assert pred.hotspots[0].backhaul_min == pytest.approx(0.8 * seg.backhaul_rate)

    def test_gap_and_horizon_quantities(self, default_route, zero_errors):
        pred = build_prediction(default_route, 0.0, zero_errors)
        assert pred.time_to_next_wifi == pytest.approx(18.0)
        assert pred.remaining_mobile_time == pytest.approx(197.0)
        assert pred.max_mobile_rate == pytest.approx(4.83 / 3)
        assert pred.sustainable_mobile_rate == pytest.approx(4.58 / 3)

        pred36 = build_prediction(default_route, 36.0, zero_errors)
        assert pred36.time_to_next_wifi == pytest.approx(54.0)
        assert pred36.max_mobile_rate == pytest.approx(4.58 / 3)

    def test_no_hotspots_left(self, default_route, zero_errors):
        pred = build_prediction(default_route, 260.0, zero_errors)
        assert pred.n_wifi == 0
        assert pred.hotspots == ()
        assert pred.time_to_next_wifi == 0.0

    def test_horizon_clips_windows(self, default_route, zero_errors):
        # deadline lands 9 s into the second hotspot window
        pred = build_prediction(default_route, 0.0, zero_errors, horizon=99.0)
        assert pred.n_wifi == 2
        assert pred.hotspots[1].duration_max == pytest.approx(9.0)
        # and drops hotspots past it entirely
        pred = build_prediction(default_route, 0.0, zero_errors, horizon=80.0)
        assert pred.n_wifi == 1

    def test_now_out_of_range(self, default_route, zero_errors):
        with pytest.raises(ValueError):
            build_prediction(default_route, 300.0, zero_errors)


class TestRealizeRoute:
    def test_zero_errors_identity(self, default_route):
        realized = realize_route(default_route, ErrorSpec(0.0, 0.0, seed=7))
        assert realized == default_route

    def test_deterministic_for_seed(self, default_route):
        errors = ErrorSpec(0.10, 0.20, seed=1234)
        assert realize_route(default_route, errors) == realize_route(default_route, errors)

    def test_different_seeds_differ(self, default_route):
        a = realize_route(default_route, ErrorSpec(0.10, 0.20, seed=1))
        b = realize_route(default_route, ErrorSpec(0.10, 0.20, seed=2))
        assert a != b

    def test_draws_stay_in_intervals(self, default_route):
        errors_by_seed = (ErrorSpec(0.10, 0.20, seed=s) for s in range(1200))
        for errors in errors_by_seed:
            realized = realize_route(default_route, errors)
            for seg, nom in zip(realized.segments, default_route.segments):
                assert 0.9 * nom.duration <= seg.duration <= 1.1 * nom.duration
                if nom.is_wifi:
                    assert 0.8 * nom.wifi_local_rate <= seg.wifi_local_rate <= 1.2 * nom.wifi_local_rate
                    assert seg.backhaul_rate <= 1.2 * nom.backhaul_rate
                else:
                    assert 0.8 * nom.mobile_rate <= seg.mobile_rate <= 1.2 * nom.mobile_rate

    def test_sample_mean_matches_nominal(self, default_route):
        # uniform symmetric perturbation: the average realized duration of the
        # first segment converges on its nominal 18 s
        draws = [
            realize_route(default_route, ErrorSpec(0.10, 0.20, seed=s)).segments[0].duration
            for s in range(10_000)
        ]
        assert np.mean(draws) == pytest.approx(18.0, rel=0.01)

    def test_start_times_rebuilt(self, default_route):
        realized = realize_route(default_route, ErrorSpec(0.30, 0.0, seed=5))
        cursor = 0.0
        for seg in realized.segments:
            assert seg.start_time == pytest.approx(cursor)
            cursor += seg.duration
        assert realized.total_time == pytest.approx(cursor)

    def test_backhaul_capped_at_local_under_large_error(self, default_route):
        for seed in range(300):
            realized = realize_route(default_route, ErrorSpec(0.10, 0.80, seed=seed))
            for seg in realized.hotspots:
                assert seg.backhaul_rate <= seg.wifi_local_rate + 1e-12

    def test_random_routes_survive_realization(self):
        rng = np.random.default_rng(99)
        for _ in range(50):
            route = random_route(rng)
            realized = realize_route(route, ErrorSpec(0.40, 0.80, seed=int(rng.integers(1 << 30))))
            assert realized.total_time > 0
