import math
from dataclasses import replace

import numpy as np
import pytest

from conftest import make_task
from offloadsim.metrics import (
    METRICS,
    InsufficientSamples,
    ScenarioSpec,
    SweepSpec,
    apply_sweep_value,
    ci_halfwidth,
    derive_run_seed,
    relative_gain,
    render_csv,
    run_scenario,
    run_sweep,
)
from offloadsim.policies import Policy
from offloadsim.prediction import ErrorSpec

DT_POLICIES = (Policy.PREFETCH_DELAY_TOLERANT, Policy.PREDICTION_ONLY_DELAY_TOLERANT,
               Policy.NO_PREDICTION_OFFLOAD)


def make_spec(route, runs=40, seed=0, time_error=0.10, throughput_error=0.20,
              policies=DT_POLICIES, size=60.0, scenario_id="test"):
    return ScenarioSpec(
        scenario_id=scenario_id,
        route=route,
        route_id="4ap",
        task=make_task(size),
        policies=policies,
        errors=ErrorSpec(time_error, throughput_error),
        runs=runs,
        seed=seed,
    )


class TestCiHalfwidth:
    def test_constant_samples(self):
        assert ci_halfwidth([4.2] * 50) == 0.0

    def test_two_point_closed_form(self):
        # t(0.975, 1) * std / sqrt(2) = 12.70620... * 0.70710... / 1.41421...
        assert ci_halfwidth([0.0, 1.0]) == pytest.approx(6.3531023680161837, rel=1e-9)

    def test_uniform_samples(self):
        rng = np.random.default_rng(0)
        samples = rng.uniform(0, 1, size=120)
        # closed form: ~1.98 * sqrt(1/12) / sqrt(120) = 0.0517
        assert ci_halfwidth(samples) == pytest.approx(0.0517, rel=0.20)

    def test_unit_variance_noise(self):
        rng = np.random.default_rng(1)
        widths = [ci_halfwidth(rng.normal(0, 1, size=120)) for _ in range(100)]
        assert np.mean(widths) == pytest.approx(1.96 / math.sqrt(120), rel=0.15)

    @pytest.mark.parametrize("samples", [[], [1.0]])
    def test_insufficient_samples(self, samples):
        with pytest.raises(InsufficientSamples):
            ci_halfwidth(samples)


class TestRelativeGain:
    def test_equal_means(self):
        assert relative_gain(5.0, 5.0) == 0.0

    def test_higher_is_better(self):
        assert relative_gain(1.65 * 3.0, 3.0) == pytest.approx(65.0)

    def test_lower_is_better(self):
        assert relative_gain(0.7 * 80.0, 80.0, lower_is_better=True) == pytest.approx(30.0)

    def test_zero_baseline_guarded(self):
        with pytest.raises(ValueError):
            relative_gain(1.0, 0.0)


class TestDeriveRunSeed:
    def test_stable_and_distinct(self):
        a = derive_run_seed(0, 0)
        assert a == derive_run_seed(0, 0)
        assert len({derive_run_seed(0, k) for k in range(100)}) == 100
        assert derive_run_seed(0, 1) != derive_run_seed(1, 0)


class TestRunScenario:
    def test_zero_error_collapses_ci(self, route_4ap):
        spec = make_spec(route_4ap, runs=10, time_error=0.0, throughput_error=0.0)
        result = run_scenario(spec)
        for p in spec.policies:
            for metric in METRICS:
                assert result.summaries[p][metric].ci95 == 0.0

    def test_deterministic_metric_mean_is_single_run_value(self, route_4ap):
        spec = make_spec(route_4ap, runs=5, time_error=0.0, throughput_error=0.0)
        result = run_scenario(spec)
        spec1 = replace(spec, runs=2)
        result1 = run_scenario(spec1)
        for p in spec.policies:
            assert result.mean(p, "offload_pct") == pytest.approx(
                result1.mean(p, "offload_pct"), abs=1e-12)

    def test_policy_ordering_at_defaults(self, route_4ap):
        spec = make_spec(route_4ap, runs=60)
        result = run_scenario(spec)
        prefetch = result.mean(Policy.PREFETCH_DELAY_TOLERANT, "offload_pct")
        prediction = result.mean(Policy.PREDICTION_ONLY_DELAY_TOLERANT, "offload_pct")
        nothing = result.mean(Policy.NO_PREDICTION_OFFLOAD, "offload_pct")
        assert prefetch > prediction > nothing

    def test_paired_realizations(self, route_4ap):
        """Every policy in a run must see the same realized route."""
        seen = {}
        def hook(run_index, policy, realized, outcome):
            seen.setdefault(run_index, set()).add(id(realized))
        spec = make_spec(route_4ap, runs=8)
        run_scenario(spec, trip_hook=hook)
        assert len(seen) == 8
        assert all(len(ids) == 1 for ids in seen.values())

    def test_ci_shrinks_with_sqrt_n(self, route_4ap):
        small = run_scenario(make_spec(route_4ap, runs=120))
        large = run_scenario(make_spec(route_4ap, runs=480))
        p = Policy.PREFETCH_DELAY_TOLERANT
        ratio = (large.summaries[p]["offload_pct"].ci95
                 / small.summaries[p]["offload_pct"].ci95)
        assert ratio == pytest.approx(0.5, rel=0.25)

    def test_run_count_floor(self, route_4ap):
        with pytest.raises(ValueError):
            make_spec(route_4ap, runs=0)

    def test_single_run_reports_zero_ci(self, route_4ap):
        result = run_scenario(make_spec(route_4ap, runs=1))
        for p in DT_POLICIES:
            s = result.summaries[p]["offload_pct"]
            assert s.n == 1 and s.ci95 == 0.0

    def test_infeasible_runs_reported(self, route_4ap):
        spec = make_spec(route_4ap, runs=10, size=10_000.0)
        result = run_scenario(spec)
        assert result.infeasible[Policy.PREFETCH_DELAY_TOLERANT] == 10


class TestSweep:
    def test_values_required(self, route_4ap):
        with pytest.raises(ValueError):
            SweepSpec(base=make_spec(route_4ap), parameter="size_mb", values=())

    def test_unknown_parameter_rejected(self, route_4ap):
        with pytest.raises(ValueError):
            SweepSpec(base=make_spec(route_4ap), parameter="nonsense", values=(1,))

    def test_each_parameter_applies(self, route_4ap):
        spec = make_spec(route_4ap)
        assert apply_sweep_value(spec, "size_mb", 30).task.size_mb == 30
        assert apply_sweep_value(spec, "mobile_factor", 0.5).mobile_factor == 0.5
        assert apply_sweep_value(spec, "wifi_factor", 0.5).wifi_factor == 0.5
        assert apply_sweep_value(spec, "backhaul_factor", 1.0).backhaul_factor == 1.0
        assert apply_sweep_value(spec, "time_error", 0.3).errors.time_error == 0.3
        assert apply_sweep_value(spec, "throughput_error", 0.6).errors.throughput_error == 0.6
        swapped = apply_sweep_value(spec, "hotspot_count", 2)
        assert swapped.route.n_hotspots == 2
        assert swapped.scenario_id == "test@hotspot_count=2"

    def test_run_sweep_keys_results(self, route_4ap):
        sweep = SweepSpec(base=make_spec(route_4ap, runs=4, time_error=0.0,
                                         throughput_error=0.0),
                          parameter="size_mb", values=(30.0, 60.0))
        results = run_sweep(sweep)
        assert [r.scenario_id for r in results] == ["test@size_mb=30", "test@size_mb=60"]


class TestCsv:
    def test_fixed_columns_and_determinism(self, route_4ap):
        spec = make_spec(route_4ap, runs=4)
        result = run_scenario(spec)
        text = render_csv(result)
        again = render_csv(run_scenario(spec))
        assert text == again
        header = text.splitlines()[0]
        assert header == "scenario_id,policy,metric,mean,ci95,n,infeasible_count"
        rows = text.splitlines()[1:]
        assert len(rows) == len(spec.policies) * len(METRICS)

    def test_metric_filter(self, route_4ap):
        spec = make_spec(route_4ap, runs=4)
        text = render_csv(run_scenario(spec), metrics=("offload_pct",))
        rows = text.splitlines()[1:]
        assert len(rows) == len(spec.policies)
        assert all(",offload_pct," in r for r in rows)
