"""Scenario files: a versioned JSON schema describing one network.

Only the device and gateway lists are mandatory; every channel, path loss,
traffic, and table entry falls back to the package defaults. The writer is
canonical (fixed key order, repr float formatting, trailing newline), so
load followed by save reproduces a saved file byte for byte.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .network import NetworkConfig
from .radio import SPREADING_FACTORS, ChannelParams, PathLossParams, RadioTables

SCHEMA_VERSION = 1


class ScenarioError(ValueError):
    """Structural problem in a scenario file, addressed by field path."""


def _require(mapping: dict, key: str, context: str) -> Any:
    if key not in mapping:
        raise ScenarioError(f"{context}: missing required field {key!r}")
    return mapping[key]


def _number(value: Any, context: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{context}: expected a number, got {value!r}")
    return float(value)


def _integer(value: Any, context: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"{context}: expected an integer, got {value!r}")
    return value


def _section(doc: dict, key: str) -> dict:
    section = doc.get(key, {})
    if not isinstance(section, dict):
        raise ScenarioError(f"{key}: expected an object")
    return section


def _check_keys(section: dict, allowed: set[str], context: str) -> None:
    unknown = set(section) - allowed
    if unknown:
        raise ScenarioError(f"{context}: unknown field(s) {sorted(unknown)}")


def _parse_channel(doc: dict) -> ChannelParams:
    sec = _section(doc, "channel")
    _check_keys(
        sec,
        {
            "bandwidth_hz",
            "preamble_symbols",
            "coding_rate",
            "payload_bytes",
            "crc_enabled",
            "header_disabled",
            "low_data_rate_mode",
            "noise_floor_dbm",
        },
        "channel",
    )
    defaults = ChannelParams()
    noise = sec.get("noise_floor_dbm", defaults.noise_floor_dbm)
    return ChannelParams(
        bandwidth_hz=_number(sec.get("bandwidth_hz", defaults.bandwidth_hz), "channel.bandwidth_hz"),
        preamble_symbols=_integer(
            sec.get("preamble_symbols", defaults.preamble_symbols), "channel.preamble_symbols"
        ),
        coding_rate=_integer(sec.get("coding_rate", defaults.coding_rate), "channel.coding_rate"),
        payload_bytes=_integer(sec.get("payload_bytes", defaults.payload_bytes), "channel.payload_bytes"),
        crc_enabled=_integer(sec.get("crc_enabled", defaults.crc_enabled), "channel.crc_enabled"),
        header_disabled=_integer(
            sec.get("header_disabled", defaults.header_disabled), "channel.header_disabled"
        ),
        low_data_rate_mode=str(sec.get("low_data_rate_mode", defaults.low_data_rate_mode)),
        noise_floor_dbm=None if noise is None else _number(noise, "channel.noise_floor_dbm"),
    )


def _parse_path_loss(doc: dict) -> PathLossParams:
    sec = _section(doc, "path_loss")
    _check_keys(
        sec, {"ref_loss_db", "ref_distance_m", "exponent", "shadow_sigma_db"}, "path_loss"
    )
    defaults = PathLossParams()
    return PathLossParams(
        ref_loss_db=_number(sec.get("ref_loss_db", defaults.ref_loss_db), "path_loss.ref_loss_db"),
        ref_distance_m=_number(
            sec.get("ref_distance_m", defaults.ref_distance_m), "path_loss.ref_distance_m"
        ),
        exponent=_number(sec.get("exponent", defaults.exponent), "path_loss.exponent"),
        shadow_sigma_db=_number(
            sec.get("shadow_sigma_db", defaults.shadow_sigma_db), "path_loss.shadow_sigma_db"
        ),
    )


def _parse_sf_table(raw: Any, context: str, fallback: dict[int, float]) -> dict[int, float]:
    if raw is None:
        return dict(fallback)
    if not isinstance(raw, dict):
        raise ScenarioError(f"{context}: expected an object keyed by spreading factor")
    table: dict[int, float] = {}
    for key, value in raw.items():
        try:
            sf = int(key)
        except (TypeError, ValueError):
            raise ScenarioError(f"{context}: bad spreading factor key {key!r}") from None
        table[sf] = _number(value, f"{context}[{key}]")
    return table


def _parse_tables(doc: dict) -> RadioTables:
    sec = _section(doc, "tables")
    _check_keys(
        sec,
        {"sensitivity_dbm", "min_snr_db", "sir_threshold_db", "power_draw_mw"},
        "tables",
    )
    defaults = RadioTables()
    sir_raw = sec.get("sir_threshold_db")
    if sir_raw is None:
        sir = defaults.sir_threshold_db
    else:
        if not isinstance(sir_raw, list) or any(not isinstance(r, list) for r in sir_raw):
            raise ScenarioError("tables.sir_threshold_db: expected a 6x6 array of rows")
        sir = tuple(
            tuple(_number(v, f"tables.sir_threshold_db[{i}][{j}]") for j, v in enumerate(row))
            for i, row in enumerate(sir_raw)
        )
    draw_raw = sec.get("power_draw_mw")
    if draw_raw is None:
        draw = dict(defaults.power_draw_mw)
    else:
        if not isinstance(draw_raw, dict):
            raise ScenarioError("tables.power_draw_mw: expected an object keyed by dBm level")
        draw = {}
        for key, value in draw_raw.items():
            try:
                level = float(key)
            except (TypeError, ValueError):
                raise ScenarioError(f"tables.power_draw_mw: bad power key {key!r}") from None
            draw[level] = _number(value, f"tables.power_draw_mw[{key}]")
    return RadioTables(
        sensitivity_dbm=_parse_sf_table(
            sec.get("sensitivity_dbm"), "tables.sensitivity_dbm", defaults.sensitivity_dbm
        ),
        min_snr_db=_parse_sf_table(sec.get("min_snr_db"), "tables.min_snr_db", defaults.min_snr_db),
        sir_threshold_db=sir,
        power_draw_mw=draw,
    )


def parse_scenario(text: str) -> NetworkConfig:
    """Build a NetworkConfig from scenario JSON text.

    Raises ScenarioError for structural problems; semantic range checks are
    the validation step's job.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ScenarioError("top level: expected an object")
    _check_keys(
        doc,
        {"version", "channel", "path_loss", "traffic", "tables", "devices", "gateways"},
        "top level",
    )
    version = _require(doc, "version", "top level")
    if version != SCHEMA_VERSION:
        raise ScenarioError(f"version: expected {SCHEMA_VERSION}, got {version!r}")

    devices = _require(doc, "devices", "top level")
    gateways = _require(doc, "gateways", "top level")
    if not isinstance(devices, list):
        raise ScenarioError("devices: expected an array")
    if not isinstance(gateways, list):
        raise ScenarioError("gateways: expected an array")

    ed_xy, ed_sf, ed_power = [], [], []
    for i, entry in enumerate(devices):
        if not isinstance(entry, dict):
            raise ScenarioError(f"devices[{i}]: expected an object")
        _check_keys(entry, {"x", "y", "sf", "power_dbm"}, f"devices[{i}]")
        ed_xy.append(
            (_number(_require(entry, "x", f"devices[{i}]"), f"devices[{i}].x"),
             _number(_require(entry, "y", f"devices[{i}]"), f"devices[{i}].y"))
        )
        ed_sf.append(_integer(_require(entry, "sf", f"devices[{i}]"), f"devices[{i}].sf"))
        ed_power.append(
            _number(_require(entry, "power_dbm", f"devices[{i}]"), f"devices[{i}].power_dbm")
        )
    gw_xy = []
    for i, entry in enumerate(gateways):
        if not isinstance(entry, dict):
            raise ScenarioError(f"gateways[{i}]: expected an object")
        _check_keys(entry, {"x", "y"}, f"gateways[{i}]")
        gw_xy.append(
            (_number(_require(entry, "x", f"gateways[{i}]"), f"gateways[{i}].x"),
             _number(_require(entry, "y", f"gateways[{i}]"), f"gateways[{i}].y"))
        )

    traffic = _section(doc, "traffic")
    _check_keys(traffic, {"packet_rate_hz"}, "traffic")
    rate = _number(traffic.get("packet_rate_hz", 0.001), "traffic.packet_rate_hz")

    return NetworkConfig(
        ed_positions=np.array(ed_xy, dtype=np.float64).reshape(len(ed_xy), 2),
        gw_positions=np.array(gw_xy, dtype=np.float64).reshape(len(gw_xy), 2),
        ed_sf=np.array(ed_sf, dtype=np.int64),
        ed_power_dbm=np.array(ed_power, dtype=np.float64),
        channel=_parse_channel(doc),
        path_loss=_parse_path_loss(doc),
        tables=_parse_tables(doc),
        packet_rate_hz=rate,
    )


def load_scenario(path: str | Path) -> NetworkConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from None
    return parse_scenario(text)


def scenario_to_json(cfg: NetworkConfig) -> str:
    """Canonical scenario JSON for a config (full float precision)."""
    doc = {
        "version": SCHEMA_VERSION,
        "channel": {
            "bandwidth_hz": cfg.channel.bandwidth_hz,
            "preamble_symbols": cfg.channel.preamble_symbols,
            "coding_rate": cfg.channel.coding_rate,
            "payload_bytes": cfg.channel.payload_bytes,
            "crc_enabled": cfg.channel.crc_enabled,
            "header_disabled": cfg.channel.header_disabled,
            "low_data_rate_mode": cfg.channel.low_data_rate_mode,
            "noise_floor_dbm": cfg.channel.noise_floor_dbm,
        },
        "path_loss": {
            "ref_loss_db": cfg.path_loss.ref_loss_db,
            "ref_distance_m": cfg.path_loss.ref_distance_m,
            "exponent": cfg.path_loss.exponent,
            "shadow_sigma_db": cfg.path_loss.shadow_sigma_db,
        },
        "traffic": {"packet_rate_hz": cfg.packet_rate_hz},
        "tables": {
            "sensitivity_dbm": {str(sf): cfg.tables.sensitivity_dbm[sf] for sf in SPREADING_FACTORS},
            "min_snr_db": {str(sf): cfg.tables.min_snr_db[sf] for sf in SPREADING_FACTORS},
            "sir_threshold_db": [list(row) for row in cfg.tables.sir_threshold_db],
            "power_draw_mw": {
                str(level): cfg.tables.power_draw_mw[level]
                for level in cfg.tables.power_levels_dbm
            },
        },
        "devices": [
            {
                "x": float(cfg.ed_positions[i, 0]),
                "y": float(cfg.ed_positions[i, 1]),
                "sf": int(cfg.ed_sf[i]),
                "power_dbm": float(cfg.ed_power_dbm[i]),
            }
            for i in range(cfg.n_ed)
        ],
        "gateways": [
            {"x": float(cfg.gw_positions[i, 0]), "y": float(cfg.gw_positions[i, 1])}
            for i in range(cfg.n_gw)
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def save_scenario(cfg: NetworkConfig, path: str | Path) -> None:
    Path(path).write_text(scenario_to_json(cfg), encoding="utf-8")
