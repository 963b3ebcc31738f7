"""JSON configuration: routes, SNR table, energy model, scenarios, sweeps.

Bundled under ``offloadsim/data``: three route layouts (``2ap``, ``4ap``,
``8ap``), the SNR-to-throughput table, the energy model, two default
scenarios, and one sweep recipe per result figure under ``data/recipes``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Optional, Union

from .metrics import ScenarioSpec, SweepSpec
from .model import (
    AccessKind,
    EnergyModel,
    RouteProfile,
    RouteSegment,
    SnrBand,
    TrafficClass,
    TransferTask,
    validate_snr_table,
)
from .policies import Policy
from .prediction import ErrorSpec


class ConfigError(Exception):
    """A configuration file is missing, malformed, or inconsistent."""


_BUNDLED_ROUTES = {"2ap": "route_2ap.json", "4ap": "route_4ap.json",
                   "8ap": "route_8ap.json"}

_POLICY_BY_NAME = {p.cli_name: p for p in Policy}

_CLASS_BY_NAME = {c.value: c for c in TrafficClass}


def _data_file(name: str):
    return resources.files("offloadsim.data").joinpath(name)


def _read_json(source: Union[str, Path], label: str) -> Any:
    try:
        text = Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{label}: cannot read {source}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{label}: invalid JSON in {source}: {exc}") from exc


def _read_bundled(name: str) -> Any:
    with resources.as_file(_data_file(name)) as path:
        return _read_json(path, name)


def parse_factor(value: Union[str, int, float], label: str = "factor") -> float:
    """Accept 0.5, 1, or fraction strings like "1/3"."""
    try:
        if isinstance(value, str):
            return float(Fraction(value))
        return float(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{label}: cannot parse rate factor {value!r}") from exc


def parse_policy(name: str) -> Policy:
    try:
        return _POLICY_BY_NAME[name]
    except KeyError:
        raise ConfigError(
            f"unknown policy {name!r}; expected one of {sorted(_POLICY_BY_NAME)}"
        ) from None


def route_from_dict(data: dict, label: str = "route") -> RouteProfile:
    try:
        segments = []
        for i, seg in enumerate(data["segments"]):
            kind = AccessKind(seg["kind"])
            if kind is AccessKind.MOBILE:
                segments.append(
                    RouteSegment(
                        kind=kind,
                        start_time=float(seg["start_time"]),
                        duration=float(seg["duration"]),
                        mobile_rate=float(seg["mobile_rate"]),
                    )
                )
            else:
                segments.append(
                    RouteSegment(
                        kind=kind,
                        start_time=float(seg["start_time"]),
                        duration=float(seg["duration"]),
                        wifi_local_rate=float(seg["wifi_local_rate"]),
                        backhaul_rate=float(seg["backhaul_rate"]),
                        hotspot_index=int(seg["hotspot_index"]),
                    )
                )
        return RouteProfile(tuple(segments), float(data["total_time"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{label}: {exc}") from exc


def load_route(key_or_path: str) -> RouteProfile:
    """Load a bundled route by key ('4ap', '2ap', '8ap') or any JSON path."""
    if key_or_path in _BUNDLED_ROUTES:
        data = _read_bundled(_BUNDLED_ROUTES[key_or_path])
        return route_from_dict(data, label=key_or_path)
    return route_from_dict(_read_json(key_or_path, "route"), label=key_or_path)


def load_snr_table(path: Optional[str] = None) -> tuple[SnrBand, ...]:
    data = _read_bundled("snr_table.json") if path is None else _read_json(path, "snr table")
    try:
        bands = tuple(
            SnrBand(
                lower_db=row["lower_db"],
                upper_db=row["upper_db"],
                wifi_rate=float(row["wifi_rate"]),
                adsl_rate=float(row["adsl_rate"]),
            )
            for row in data["bands"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"snr table: {exc}") from exc
    return validate_snr_table(bands)


def load_energy_model(path: Optional[str] = None) -> EnergyModel:
    data = _read_bundled("energy.json") if path is None else _read_json(path, "energy model")
    return energy_from_dict(data)


def energy_from_dict(data: dict) -> EnergyModel:
    try:
        return EnergyModel(
            mobile_transfer_j_per_mb=float(data["mobile_transfer_j_per_mb"]),
            wifi_transfer_j_per_mb=float(data["wifi_transfer_j_per_mb"]),
            wifi_idle_w=float(data["wifi_idle_w"]),
            wifi_preactivation_s=float(data["wifi_preactivation_s"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"energy model: {exc}") from exc


def scenario_from_dict(data: dict, label: str = "scenario") -> ScenarioSpec:
    try:
        route_id = data.get("route", "4ap")
        route = load_route(route_id)

        factors = data.get("rate_factors", {})
        mobile_f = parse_factor(factors.get("mobile", "1/3"), f"{label}.rate_factors.mobile")
        wifi_f = parse_factor(factors.get("wifi", "1/3"), f"{label}.rate_factors.wifi")
        back_f = parse_factor(factors.get("backhaul", "1/3"), f"{label}.rate_factors.backhaul")

        task_d = data["task"]
        klass = _CLASS_BY_NAME.get(task_d.get("class", "delay-tolerant"))
        if klass is None:
            raise ConfigError(
                f"{label}.task.class: expected one of {sorted(_CLASS_BY_NAME)}"
            )
        threshold = float(task_d.get("delay_threshold_s", route.total_time))
        task = TransferTask(
            size_mb=float(task_d["size_mb"]),
            delay_threshold=threshold,
            traffic_class=klass,
        )

        err_d = data.get("errors", {})
        errors = ErrorSpec(
            time_error=float(err_d.get("time_error", 0.10)),
            throughput_error=float(err_d.get("throughput_error", 0.20)),
        )

        policies = tuple(parse_policy(p) for p in data["policies"])
        energy = energy_from_dict(data["energy"]) if "energy" in data else EnergyModel()
        metrics = tuple(data["metrics"]) if "metrics" in data else None

        return ScenarioSpec(
            scenario_id=str(data.get("scenario_id", label)),
            route=route,
            route_id=str(route_id),
            task=task,
            policies=policies,
            mobile_factor=mobile_f,
            wifi_factor=wifi_f,
            backhaul_factor=back_f,
            errors=errors,
            runs=int(data.get("runs", 120)),
            seed=int(data.get("seed", 0)),
            energy=energy,
            metrics=metrics,
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{label}: {exc}") from exc


def sweep_from_dict(data: dict, label: str = "sweep") -> SweepSpec:
    try:
        base = scenario_from_dict(data["scenario"], label=f"{label}.scenario")
        sweep_d = data["sweep"]
        values = tuple(
            parse_factor(v, f"{label}.sweep.values") for v in sweep_d["values"]
        )
        metrics = tuple(data["metrics"]) if "metrics" in data else base.metrics
        return SweepSpec(
            base=base,
            parameter=str(sweep_d["parameter"]),
            values=values,
            metrics=metrics,
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{label}: {exc}") from exc


def load_scenario(path: str) -> ScenarioSpec:
    data = _read_json(path, "scenario")
    if not isinstance(data, dict):
        raise ConfigError(f"scenario: {path} must contain a JSON object")
    return scenario_from_dict(data, label=Path(path).stem)


def load_sweep(path: str) -> SweepSpec:
    data = _read_json(path, "sweep")
    if not isinstance(data, dict) or "sweep" not in data:
        raise ConfigError(f"sweep: {path} must contain a JSON object with a 'sweep' key")
    return sweep_from_dict(data, label=Path(path).stem)


def load_experiment(path: str) -> Union[ScenarioSpec, SweepSpec]:
    """Load either kind of file; sweep files carry a 'sweep' key."""
    data = _read_json(path, "experiment")
    if not isinstance(data, dict):
        raise ConfigError(f"experiment: {path} must contain a JSON object")
    label = Path(path).stem
    if "sweep" in data:
        return sweep_from_dict(data, label=label)
    return scenario_from_dict(data, label=label)


def bundled_recipe_path(name: str) -> Path:
    """Filesystem path of a bundled sweep recipe, e.g. 'fig2a'."""
    fname = name if name.endswith(".json") else f"{name}.json"
    with resources.as_file(_data_file(f"recipes/{fname}")) as path:
        return Path(path)


def bundled_scenario_path(name: str) -> Path:
    fname = name if name.endswith(".json") else f"{name}.json"
    with resources.as_file(_data_file(fname)) as path:
        return Path(path)
