"""Timing harnesses for the analytical sweep and the event kernels."""

from __future__ import annotations

import time
from typing import Any

from ._kernels import available_backends
from .analytics import compute_result
from .network import generate_scenario
from .oracle import run_oracle


def _time_call(fn, reps: int) -> tuple[float, float, float]:
    fn()  # warm up caches and lazy imports before measuring
    times = []
    for _ in range(reps):
        start = time.perf_counter()
        fn()
        times.append((time.perf_counter() - start) * 1e3)
    return sum(times) / len(times), min(times), max(times)


def bench_evaluate(
    n_ed_list: list[int], n_gw_list: list[int], reps: int, seed: int
) -> list[dict[str, Any]]:
    rows = []
    for n_ed in n_ed_list:
        for n_gw in n_gw_list:
            cfg = generate_scenario(n_ed, n_gw, area_m=2000.0, seed=seed)
            mean, best, worst = _time_call(lambda: compute_result(cfg), reps)
            rows.append(
                {
                    "case": "evaluate",
                    "n_ed": n_ed,
                    "n_gw": n_gw,
                    "reps": reps,
                    "mean_ms": mean,
                    "min_ms": best,
                    "max_ms": worst,
                }
            )
    return rows


def bench_kernels(
    n_ed: int, n_gw: int, duration_s: float, reps: int, seed: int
) -> list[dict[str, Any]]:
    """Time the reception sweep once per available backend, same workload."""
    cfg = generate_scenario(n_ed, n_gw, area_m=2000.0, seed=seed)
    rows = []
    for backend in available_backends():
        mean, best, worst = _time_call(
            lambda: run_oracle(cfg, duration_s=duration_s, seed=seed, kernel=backend), reps
        )
        rows.append(
            {
                "case": f"oracle[{backend}]",
                "n_ed": n_ed,
                "n_gw": n_gw,
                "reps": reps,
                "mean_ms": mean,
                "min_ms": best,
                "max_ms": worst,
            }
        )
    return rows
