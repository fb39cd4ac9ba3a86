"""Serialization of results to CSV and JSON.

Fixed output precision keeps files diffable across runs and platforms:
probabilities and energy efficiency get 6 decimals, dB/dBm quantities 3,
timestamps 6 (microsecond resolution). Missed receptions are written as
empty CSV cells and JSON nulls. All CSV output uses bare "\n" line ends.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any

import numpy as np

from .adr import TraceEvent
from .analytics import EvaluationResult
from .network import NetworkConfig
from .oracle import OracleResult, mae_sde
from .sampling import SampledMatrices


def _prob(x: float) -> str:
    return f"{x:.6f}"


def _db(x: float) -> str:
    return f"{x:.3f}"


def _time(x: float) -> str:
    return f"{x:.6f}"


def _rows_to_csv(header: list[str], rows: list[list[str]], comments: list[str] | None = None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    text = buf.getvalue()
    if comments:
        text += "".join(f"# {line}\n" for line in comments)
    return text


def _round_grid(matrix: np.ndarray, digits: int) -> list[list[float | None]]:
    out: list[list[float | None]] = []
    for row in np.asarray(matrix, dtype=np.float64):
        out.append([None if not math.isfinite(v) else round(float(v), digits) for v in row])
    return out


def _json_text(doc: dict[str, Any]) -> str:
    return json.dumps(doc, indent=2) + "\n"


def evaluation_to_csv(cfg: NetworkConfig, result: EvaluationResult) -> str:
    header = ["ed", "sf", "power_dbm", "pdr", "ee_bits_per_mj"]
    header += [f"pdr_gw{k}" for k in range(result.n_gw)]
    rows = []
    for i in range(result.n_ed):
        row = [
            str(i),
            str(int(cfg.ed_sf[i])),
            _db(cfg.ed_power_dbm[i]),
            _prob(result.pdr[i]),
            _prob(result.ee[i]),
        ]
        row += [_prob(result.pdr_gw[i, k]) for k in range(result.n_gw)]
        rows.append(row)
    return _rows_to_csv(header, rows)


def evaluation_to_json(cfg: NetworkConfig, result: EvaluationResult) -> str:
    doc = {
        "n_ed": result.n_ed,
        "n_gw": result.n_gw,
        "sf": [int(v) for v in cfg.ed_sf],
        "power_dbm": [round(float(v), 3) for v in cfg.ed_power_dbm],
        "toa_s": [round(float(v), 6) for v in result.toa_s],
        "pdr": [round(float(v), 6) for v in result.pdr],
        "ee_bits_per_mj": [round(float(v), 6) for v in result.ee],
        "rss_mean_dbm": _round_grid(result.rss_mean, 3),
        "detect_prob": _round_grid(result.detect_prob, 6),
        "survive_prob": _round_grid(result.survive_prob, 6),
        "pdr_gw": _round_grid(result.pdr_gw, 6),
    }
    return _json_text(doc)


def samples_to_csv(cfg: NetworkConfig, samples: SampledMatrices) -> str:
    n_gw = samples.rss_dbm.shape[1]
    header = ["ed", "sf", "power_dbm"]
    header += [f"rss_gw{k}_dbm" for k in range(n_gw)]
    header += [f"snr_gw{k}_db" for k in range(n_gw)]
    rows = []
    for i in range(samples.rss_dbm.shape[0]):
        row = [str(i), str(int(cfg.ed_sf[i])), _db(cfg.ed_power_dbm[i])]
        row += ["" if not math.isfinite(v) else _db(v) for v in samples.rss_dbm[i]]
        row += ["" if not math.isfinite(v) else _db(v) for v in samples.snr_db[i]]
        rows.append(row)
    return _rows_to_csv(header, rows)


def samples_to_json(cfg: NetworkConfig, samples: SampledMatrices) -> str:
    doc = {
        "n_ed": int(samples.rss_dbm.shape[0]),
        "n_gw": int(samples.rss_dbm.shape[1]),
        "rss_dbm": _round_grid(samples.rss_dbm, 3),
        "snr_db": _round_grid(samples.snr_db, 3),
    }
    return _json_text(doc)


def oracle_to_csv(
    cfg: NetworkConfig, oracle: OracleResult, model: EvaluationResult
) -> str:
    header = [
        "ed",
        "sf",
        "power_dbm",
        "sent",
        "received",
        "pdr_oracle",
        "pdr_model",
        "ee_oracle",
        "ee_model",
    ]
    rows = []
    for i in range(cfg.n_ed):
        rows.append(
            [
                str(i),
                str(int(cfg.ed_sf[i])),
                _db(cfg.ed_power_dbm[i]),
                str(int(oracle.sent[i])),
                str(int(oracle.received[i])),
                _prob(oracle.pdr[i]),
                _prob(model.pdr[i]),
                _prob(oracle.ee[i]),
                _prob(model.ee[i]),
            ]
        )
    mae_pdr, sde_pdr = mae_sde(oracle.pdr, model.pdr)
    mae_ee, sde_ee = mae_sde(oracle.ee, model.ee)
    comments = [
        f"backend={oracle.backend} duration_s={_time(oracle.duration_s)}",
        f"pdr mae={mae_pdr:.6e} sde={sde_pdr:.6e}",
        f"ee mae={mae_ee:.6e} sde={sde_ee:.6e}",
    ]
    return _rows_to_csv(header, rows, comments)


def oracle_to_json(
    cfg: NetworkConfig, oracle: OracleResult, model: EvaluationResult
) -> str:
    mae_pdr, sde_pdr = mae_sde(oracle.pdr, model.pdr)
    mae_ee, sde_ee = mae_sde(oracle.ee, model.ee)
    doc = {
        "backend": oracle.backend,
        "duration_s": round(float(oracle.duration_s), 6),
        "sent": [int(v) for v in oracle.sent],
        "received": [int(v) for v in oracle.received],
        "pdr_oracle": [round(float(v), 6) for v in oracle.pdr],
        "pdr_model": [round(float(v), 6) for v in model.pdr],
        "ee_oracle": [round(float(v), 6) for v in oracle.ee],
        "ee_model": [round(float(v), 6) for v in model.ee],
        "summary": {
            "pdr_mae": mae_pdr,
            "pdr_sde": sde_pdr,
            "ee_mae": mae_ee,
            "ee_sde": sde_ee,
        },
    }
    return _json_text(doc)


def trace_to_csv(events: list[TraceEvent]) -> str:
    header = ["time_s", "ed", "event", "sf", "power_dbm", "max_snr_db"]
    rows = []
    for ev in events:
        snr = "" if ev.snr_db is None or not math.isfinite(ev.snr_db) else _db(ev.snr_db)
        rows.append([_time(ev.time_s), str(ev.ed), ev.event, str(ev.sf), _db(ev.power_dbm), snr])
    return _rows_to_csv(header, rows)


def bench_to_csv(rows: list[dict[str, Any]]) -> str:
    if not rows:
        return ""
    header = list(rows[0].keys())
    body = []
    for row in rows:
        body.append(
            [f"{v:.3f}" if isinstance(v, float) else str(v) for v in (row[h] for h in header)]
        )
    return _rows_to_csv(header, body)
