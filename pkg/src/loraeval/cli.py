"""Command line front end.

Exit codes: 0 success, 1 usage/file/parse problems, 2 scenario validation
failures, 3 unexpected internal errors. Commands that draw random numbers
(generate, sample, oracle, adr-sim) require an explicit --seed so every run
is reproducible.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import NoReturn

import numpy as np

from . import export
from .adr import run_adr_simulation
from .analytics import compute_result
from .bench import bench_evaluate, bench_kernels
from .network import InvalidConfigError, generate_scenario, validate_or_raise
from .oracle import run_oracle
from .sampling import sample_matrix
from .scenario import ScenarioError, load_scenario, save_scenario, scenario_to_json

_USAGE_EXIT = 1
_VALIDATION_EXIT = 2
_INTERNAL_EXIT = 3


class _Parser(argparse.ArgumentParser):
    """argparse maps usage errors to status 2; we reserve 2 for validation."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(_USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part]


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="loraeval", description="Analytical LoRa network evaluation.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_scenario(p: argparse.ArgumentParser) -> None:
        p.add_argument("--scenario", required=True, help="scenario JSON file")

    def add_out(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", default=None, help="output path ('-' or omitted: stdout)")

    def add_format(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("evaluate", help="closed-form link metrics for a scenario")
    add_scenario(p)
    add_format(p)
    add_out(p)

    p = sub.add_parser("sample", help="draw one fading realization per link")
    add_scenario(p)
    p.add_argument("--seed", type=int, required=True)
    add_format(p)
    add_out(p)

    p = sub.add_parser("oracle", help="event-level Monte Carlo check of the model")
    add_scenario(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--duration", type=float, required=True, help="simulated seconds")
    p.add_argument("--kernel", choices=("auto", "compiled", "pure"), default="auto")
    add_format(p)
    add_out(p)

    p = sub.add_parser("adr-sim", help="closed-loop rate adaptation simulation")
    add_scenario(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--duration", type=float, required=True, help="simulated seconds")
    p.add_argument("--ack-limit", type=int, default=64)
    p.add_argument("--ack-delay", type=int, default=32)
    p.add_argument("--margin", type=float, default=10.0, help="device margin, dB")
    p.add_argument(
        "--final-scenario", default=None, help="write the post-run assignment as scenario JSON"
    )
    add_out(p)

    p = sub.add_parser("generate", help="draw a random scenario file")
    p.add_argument("--n-ed", type=int, required=True)
    p.add_argument("--n-gw", type=int, required=True)
    p.add_argument("--area", type=float, default=2000.0, help="square side, meters")
    p.add_argument("--rate", type=float, default=0.001, help="packet rate per device, Hz")
    p.add_argument("--seed", type=int, required=True)
    add_out(p)

    p = sub.add_parser("bench", help="time the evaluation sweep (and kernels)")
    p.add_argument("--n-ed", type=_int_list, default=[100, 500, 1000])
    p.add_argument("--n-gw", type=_int_list, default=[1, 4])
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument(
        "--kernels", action="store_true", help="also compare event-kernel backends"
    )
    p.add_argument("--duration", type=float, default=2.0e6, help="kernel workload, seconds")
    add_out(p)

    return parser


def _cmd_evaluate(args: argparse.Namespace) -> int:
    cfg = load_scenario(args.scenario)
    validate_or_raise(cfg)
    result = compute_result(cfg)
    text = (
        export.evaluation_to_csv(cfg, result)
        if args.format == "csv"
        else export.evaluation_to_json(cfg, result)
    )
    _emit(text, args.out)
    return 0


def _cmd_sample(args: argparse.Namespace) -> int:
    cfg = load_scenario(args.scenario)
    validate_or_raise(cfg)
    samples = sample_matrix(cfg, np.random.default_rng(args.seed))
    text = (
        export.samples_to_csv(cfg, samples)
        if args.format == "csv"
        else export.samples_to_json(cfg, samples)
    )
    _emit(text, args.out)
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    cfg = load_scenario(args.scenario)
    oracle = run_oracle(cfg, duration_s=args.duration, seed=args.seed, kernel=args.kernel)
    model = compute_result(cfg)
    text = (
        export.oracle_to_csv(cfg, oracle, model)
        if args.format == "csv"
        else export.oracle_to_json(cfg, oracle, model)
    )
    _emit(text, args.out)
    return 0


def _cmd_adr_sim(args: argparse.Namespace) -> int:
    cfg = load_scenario(args.scenario)
    sim = run_adr_simulation(
        cfg,
        duration_s=args.duration,
        seed=args.seed,
        ack_limit=args.ack_limit,
        ack_delay=args.ack_delay,
        device_margin_db=args.margin,
    )
    _emit(export.trace_to_csv(sim.events), args.out)
    if args.final_scenario is not None:
        save_scenario(sim.final_config, args.final_scenario)
    return 0


def _cmd_generate(args: argparse.Namespace) -> int:
    cfg = generate_scenario(
        args.n_ed, args.n_gw, area_m=args.area, seed=args.seed, packet_rate_hz=args.rate
    )
    _emit(scenario_to_json(cfg), args.out)
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    rows = bench_evaluate(args.n_ed, args.n_gw, reps=args.reps, seed=args.seed)
    if args.kernels:
        rows += bench_kernels(
            n_ed=50, n_gw=2, duration_s=args.duration, reps=args.reps, seed=args.seed
        )
    _emit(export.bench_to_csv(rows), args.out)
    return 0


_COMMANDS = {
    "evaluate": _cmd_evaluate,
    "sample": _cmd_sample,
    "oracle": _cmd_oracle,
    "adr-sim": _cmd_adr_sim,
    "generate": _cmd_generate,
    "bench": _cmd_bench,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ScenarioError as exc:
        print(f"loraeval: scenario error: {exc}", file=sys.stderr)
        return _USAGE_EXIT
    except OSError as exc:
        print(f"loraeval: {exc}", file=sys.stderr)
        return _USAGE_EXIT
    except InvalidConfigError as exc:
        print(f"loraeval: invalid scenario:\n{exc}", file=sys.stderr)
        return _VALIDATION_EXIT
    except ValueError as exc:
        print(f"loraeval: invalid value: {exc}", file=sys.stderr)
        return _VALIDATION_EXIT
    except Exception as exc:  # pragma: no cover - safety net
        print(f"loraeval: internal error: {exc}", file=sys.stderr)
        return _INTERNAL_EXIT


if __name__ == "__main__":
    sys.exit(main())
