"""JSON run configuration: schema checking, conversion to engine objects, fixtures.

A configuration is a single JSON object.  Unknown keys are rejected so that a
typo cannot silently fall back to a default.  Diagnostics carry the line of
the offending key when it can be located in the source text.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import tables
from .channel import AttenuationModel, DeploymentScenario, PenetrationTable
from .errors import BudgetError, ConfigError
from .geometry import (
    BfModulePlacement,
    FrequencyPlan,
    UeLayout,
    fig5_layout,
    fig8_frequency_plan,
)
from .rate import SE_CAP_256QAM, SeMapping, SeMode
from .scenario import Direction, HoldingPosition, ScenarioConfig

SCHEMA_VERSION = 1

NUM = (int, float)
_PAIR = ("pair",)

# key -> python type(s), nested schema dict, or a list marker
_MODULE = {"id": int, "center_mm": _PAIR, "width_mm": NUM, "length_mm": NUM}
_LAYOUT = {
    "housing_mm": _PAIR,
    "carrier_ghz": NUM,
    "min_isolation_mm": NUM,
    "min_modules": int,
    "modules": [_MODULE],
}
_FREQPLAN = {
    "rf_band_ghz": _PAIR,
    "if_center_ghz": NUM,
    "if_bandwidth_mhz": NUM,
    "control_mhz": NUM,
    "ref_clock_mhz": NUM,
    "protected_bands_ghz": [_PAIR],
    "max_harmonic": int,
}
SCHEMA: dict[str, Any] = {
    "schema_version": int,
    "name": str,
    "scenario": str,
    "frequency_ghz": NUM,
    "distance_m": NUM,
    "bandwidth_mhz": NUM,
    "n_carriers": int,
    "direction": str,
    "n_ant": int,
    "n_bf": int,
    "n_array": int,
    "holding": str,
    "p_pa_dbm": (int, float, type(None)),
    "body_blockage_db": NUM,
    "overhead": NUM,
    "receiver": {
        "front_end_loss_db": NUM,
        "noise_figure_db": NUM,
        "bs_noise_figure_db": NUM,
        "element_gain_dbi": NUM,
    },
    "weather": {"specific_attenuation_db_per_km": NUM, "rain_rate_mm_h": NUM},
    "penetration": {"material": str, "losses_db": "mapping"},
    "se": {"mode": str, "backoff_db": NUM, "cap": NUM, "value": (int, float, type(None))},
    "regulatory": {"ue_eirp_limit_dbm": NUM, "bs_psd_dbm": NUM, "bs_psd_ref_mhz": NUM},
    "layout": _LAYOUT,
    "frequency_plan": _FREQPLAN,
    "output": {"format": str, "path": (str, type(None)), "rounding": str},
}


def _locate(text: str | None, path: list[str]) -> int | None:
    """Best-effort 1-based line of the last key in ``path`` within ``text``."""
    if not text:
        return None
    pos = 0
    for key in path:
        if key.startswith("["):
            continue
        m = re.compile(r'"%s"\s*:' % re.escape(key)).search(text, pos)
        if m is None:
            return None
        pos = m.start()
    return text.count("\n", 0, pos) + 1


class ConfigSchemaError(ConfigError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = source or "config"
        if line is not None:
            where = f"{where}:{line}"
        super().__init__(f"{where}: {message}")


def _check(obj: Any, schema: Any, path: list[str], text: str | None, source: str | None) -> None:
    def fail(msg: str, at: list[str]):
        raise ConfigSchemaError(msg, _locate(text, at), source)

    dotted = ".".join(path) or "<root>"
    if isinstance(schema, dict):
        if not isinstance(obj, dict):
            fail(f"{dotted} must be an object", path)
        for k, v in obj.items():
            if k not in schema:
                fail(f"unknown key {'.'.join(path + [k])!r}", path + [k])
            _check(v, schema[k], path + [k], text, source)
    elif isinstance(schema, list):
        if not isinstance(obj, list):
            fail(f"{dotted} must be a list", path)
        for i, item in enumerate(obj):
            _check(item, schema[0], path + [f"[{i}]"], text, source)
    elif schema == _PAIR:
        if not (isinstance(obj, list) and len(obj) == 2 and all(_is_num(x) for x in obj)):
            fail(f"{dotted} must be a pair of numbers", path)
    elif schema == "mapping":
        if not (isinstance(obj, dict) and all(_is_num(v) for v in obj.values())):
            fail(f"{dotted} must map names to numbers", path)
    else:
        types = schema if isinstance(schema, tuple) else (schema,)
        ok = isinstance(obj, types) and not (isinstance(obj, bool) and bool not in types)
        if not ok:
            names = "/".join("null" if t is type(None) else t.__name__ for t in types)
            fail(f"{dotted} must be {names}, got {type(obj).__name__}", path)


def _is_num(x: Any) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


@dataclass
class OutputOptions:
    format: str = "table"
    path: str | None = None
    rounding: str = "display"


@dataclass
class RunConfig:
    raw: dict
    output: OutputOptions = field(default_factory=OutputOptions)

    def scenario_config(self) -> ScenarioConfig:
        return scenario_from_dict(self.raw)

    def layout(self) -> tuple[UeLayout, int]:
        if "layout" not in self.raw:
            raise ConfigError("configuration has no 'layout' section")
        return layout_from_dict(self.raw["layout"])

    def frequency_plan(self) -> tuple[FrequencyPlan, int]:
        if "frequency_plan" not in self.raw:
            raise ConfigError("configuration has no 'frequency_plan' section")
        return freqplan_from_dict(self.raw["frequency_plan"])


def parse_config(text: str, source: str | None = None) -> RunConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigSchemaError(f"invalid JSON: {e.msg} (column {e.colno})", e.lineno, source) from None
    _check(raw, SCHEMA, [], text, source)
    version = raw.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigSchemaError(
            f"unsupported schema_version {version}; expected {SCHEMA_VERSION}",
            _locate(text, ["schema_version"]),
            source,
        )
    out = raw.get("output", {})
    opts = OutputOptions(out.get("format", "table"), out.get("path"), out.get("rounding", "display"))
    if opts.format not in ("table", "csv"):
        raise ConfigSchemaError(f"output.format must be table or csv, got {opts.format!r}",
                                _locate(text, ["output", "format"]), source)
    if opts.rounding not in ("display", "full"):
        raise ConfigSchemaError(f"output.rounding must be display or full, got {opts.rounding!r}",
                                _locate(text, ["output", "rounding"]), source)
    rc = RunConfig(raw, opts)
    # Surface value errors (bad enums, out-of-range numbers) at load time.
    try:
        if any(k in raw for k in ("scenario", "distance_m", "direction")):
            rc.scenario_config()
        if "layout" in raw:
            rc.layout()
        if "frequency_plan" in raw:
            rc.frequency_plan()
    except BudgetError as e:
        raise ConfigSchemaError(str(e), None, source) from None
    return rc


def load_config(path: str | Path) -> RunConfig:
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"config not found: {p}")
    return parse_config(p.read_text(encoding="utf-8"), str(p))


# --------------------------------------------------------------------------
# dict -> engine objects
# --------------------------------------------------------------------------


def _se_mapping(d: dict) -> SeMapping:
    mode = d.get("mode", "shannon").lower()
    cap = float(d.get("cap", SE_CAP_256QAM))
    value = d.get("value")
    if mode == "shannon":
        return SeMapping(SeMode.SHANNON, 0.0, cap)
    if mode in ("backoff", "shannon-with-backoff"):
        return SeMapping(SeMode.SHANNON_WITH_BACKOFF, float(d.get("backoff_db", 0.0)), cap)
    if mode in ("table", "table-injected"):
        return SeMapping(SeMode.TABLE_INJECTED, 0.0, cap, None if value is None else float(value))
    raise ConfigError(f"se.mode must be shannon, backoff or table, got {mode!r}")


def layout_from_dict(d: dict) -> tuple[UeLayout, int]:
    h, w = d.get("housing_mm", (160.0, 80.0))
    modules = []
    for i, m in enumerate(d.get("modules", [])):
        _require(m, "center_mm", f"layout.modules[{i}]")
        modules.append(
            BfModulePlacement(
                int(m.get("id", i + 1)),
                tuple(float(c) for c in m["center_mm"]),
                float(m.get("width_mm", 25.0)),
                float(m.get("length_mm", 18.0)),
            )
        )
    layout = UeLayout(
        (float(h), float(w)),
        tuple(modules),
        float(d.get("carrier_ghz", 28.0)) * 1e9,
        float(d.get("min_isolation_mm", 16.0)),
    )
    return layout, int(d.get("min_modules", 5))


def _require(m: dict, key: str, where: str) -> None:
    if key not in m:
        raise ConfigError(f"{where} is missing required key {key!r}")


def freqplan_from_dict(d: dict) -> tuple[FrequencyPlan, int]:
    for key in ("rf_band_ghz", "if_center_ghz", "control_mhz"):
        _require(d, key, "frequency_plan")
    plan = FrequencyPlan(
        rf_band_hz=tuple(float(x) * 1e9 for x in d["rf_band_ghz"]),
        if_center_hz=float(d["if_center_ghz"]) * 1e9,
        control_hz=float(d["control_mhz"]) * 1e6,
        ref_clock_hz=float(d.get("ref_clock_mhz", 100.0)) * 1e6,
        protected_bands_hz=tuple(
            (float(lo) * 1e9, float(hi) * 1e9) for lo, hi in d.get("protected_bands_ghz", [])
        ),
        if_bandwidth_hz=float(d.get("if_bandwidth_mhz", 200.0)) * 1e6,
    )
    return plan, int(d.get("max_harmonic", 10))


def scenario_from_dict(d: dict) -> ScenarioConfig:
    rx = d.get("receiver", {})
    reg = d.get("regulatory", {})
    pen = d.get("penetration", {})
    weather = d.get("weather", {})
    table = PenetrationTable(float(d.get("frequency_ghz", 28.0)) * 1e9)
    if "losses_db" in pen:
        table = table.with_losses(**{k: float(v) for k, v in pen["losses_db"].items()})
    layout = layout_from_dict(d["layout"])[0] if "layout" in d else None
    try:
        direction = Direction(d.get("direction", "downlink"))
    except ValueError:
        raise ConfigError(f"direction must be downlink or uplink, got {d.get('direction')!r}") from None
    p_pa = d.get("p_pa_dbm")
    return ScenarioConfig(
        scenario=DeploymentScenario.parse(d.get("scenario", "UMa-NLOS")),
        frequency_hz=float(d.get("frequency_ghz", 28.0)) * 1e9,
        distance_m=float(d.get("distance_m", 100.0)),
        bandwidth_hz=float(d.get("bandwidth_mhz", 200.0)) * 1e6,
        n_carriers=int(d.get("n_carriers", 1)),
        direction=direction,
        n_ant=int(d.get("n_ant", 8)),
        n_bf=int(d.get("n_bf", len(layout.placements) if layout else 8)),
        n_array=int(d.get("n_array", 64)),
        ue_layout=layout,
        holding=HoldingPosition.parse(d.get("holding", "on-surface")),
        weather=AttenuationModel(
            float(weather.get("specific_attenuation_db_per_km", 0.0)),
            float(weather.get("rain_rate_mm_h", 0.0)),
        ),
        penetration=pen.get("material", "none"),
        penetration_table=table,
        body_blockage_db=float(d.get("body_blockage_db", 35.0)),
        se_mapping=_se_mapping(d.get("se", {})),
        overhead=float(d.get("overhead", 0.2)),
        ue_eirp_limit_dbm=float(reg.get("ue_eirp_limit_dbm", 43.0)),
        bs_psd_dbm=float(reg.get("bs_psd_dbm", 75.0)),
        bs_psd_ref_hz=float(reg.get("bs_psd_ref_mhz", 100.0)) * 1e6,
        p_pa_dbm=None if p_pa is None else float(p_pa),
        front_end_loss_db=float(rx.get("front_end_loss_db", 4.0)),
        noise_figure_db=float(rx.get("noise_figure_db", 7.0)),
        bs_noise_figure_db=float(rx.get("bs_noise_figure_db", 7.0)),
        element_gain_dbi=float(rx.get("element_gain_dbi", 5.0)),
    )


# --------------------------------------------------------------------------
# Built-in fixtures
# --------------------------------------------------------------------------


def _layout_dict(layout: UeLayout, min_modules: int = 5) -> dict:
    return {
        "housing_mm": list(layout.housing),
        "carrier_ghz": layout.carrier_frequency_hz / 1e9,
        "min_isolation_mm": layout.min_isolation_mm,
        "min_modules": min_modules,
        "modules": [
            {"id": p.id, "center_mm": list(p.center), "width_mm": p.width, "length_mm": p.length}
            for p in layout.placements
        ],
    }


def _table_fixture(cell: tables.TableCell) -> dict:
    d = {
        "schema_version": SCHEMA_VERSION,
        "name": f"{cell.direction} column {cell.column}, {cell.n_rx_elements} receive elements",
        "scenario": cell.scenario.value,
        "frequency_ghz": 28.0,
        "distance_m": cell.distance_m,
        "bandwidth_mhz": 200.0,
        "direction": cell.direction,
        "n_bf": 8,
        "holding": "on-surface",
        "se": {"mode": "table"},
    }
    if cell.direction == "downlink":
        d["n_ant"] = cell.n_rx_elements
    else:
        d["n_ant"] = 8
        d["n_array"] = cell.n_rx_elements
    return d


def _build_fixtures() -> dict[str, dict]:
    fx: dict[str, dict] = {}
    for cell in tables.DOWNLINK_CELLS:
        suffix = "" if cell.n_rx_elements == 8 else f"_n{cell.n_rx_elements}"
        fx[f"table3_col{cell.column}{suffix}"] = _table_fixture(cell)
    for cell in tables.UPLINK_CELLS:
        suffix = "" if cell.n_rx_elements == 64 else f"_n{cell.n_rx_elements}"
        fx[f"table4_col{cell.column}{suffix}"] = _table_fixture(cell)
    fx["uma_nlos_dl"] = {
        "schema_version": SCHEMA_VERSION,
        "name": "UMa-NLOS 28 GHz downlink, 8x8 DPA-MIMO on a surface",
        "scenario": "UMa-NLOS",
        "frequency_ghz": 28.0,
        "distance_m": 1000.0,
        "bandwidth_mhz": 200.0,
        "direction": "downlink",
        "n_ant": 8,
        "n_bf": 8,
        "holding": "on-surface",
        "se": {"mode": "shannon"},
    }
    fig5 = fig5_layout()
    fx["fig5_layout"] = {"schema_version": SCHEMA_VERSION, "layout": _layout_dict(fig5)}
    four = UeLayout(fig5.housing, fig5.placements[:2] + fig5.placements[6:], 28e9, 16.0)
    fx["four_module_layout"] = {"schema_version": SCHEMA_VERSION, "layout": _layout_dict(four)}
    plan = fig8_frequency_plan()
    fx["freqplan_28ghz"] = {
        "schema_version": SCHEMA_VERSION,
        "frequency_plan": {
            "rf_band_ghz": [plan.rf_band_hz[0] / 1e9, plan.rf_band_hz[1] / 1e9],
            "if_center_ghz": plan.if_center_hz / 1e9,
            "if_bandwidth_mhz": plan.if_bandwidth_hz / 1e6,
            "control_mhz": plan.control_hz / 1e6,
            "ref_clock_mhz": plan.ref_clock_hz / 1e6,
            "protected_bands_ghz": [[lo / 1e9, hi / 1e9] for lo, hi in plan.protected_bands_hz],
            "max_harmonic": 10,
        },
    }
    return fx


FIXTURES = _build_fixtures()


def fixture_text(name: str) -> str:
    if name not in FIXTURES:
        raise ConfigError(f"unknown fixture {name!r}; run 'fixtures' to list them")
    return json.dumps(FIXTURES[name], indent=2) + "\n"


def load_fixture(name: str) -> RunConfig:
    return parse_config(fixture_text(name), f"<fixture {name}>")
