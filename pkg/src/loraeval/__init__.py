"""Analytical evaluation of LoRa uplink networks.

Closed-form per-link delivery and energy metrics, a Poisson event oracle
for checking them, per-link sampling, and a network-side rate adaptation
loop, all deterministic under explicit seeds.
"""

from ._kernels import DEFAULT_BACKEND, available_backends
from .adr import (
    ADR_RECEIVED,
    REQUEST_ACKNOWLEDGED,
    UPLINK_ATTEMPT,
    AdrSimResult,
    AdrState,
    BackoffState,
    TraceEvent,
    adr_add_measurement,
    adr_reset,
    backoff_step,
    run_adr_simulation,
)
from .analytics import (
    EvaluationResult,
    Evaluator,
    capture_corruption_prob,
    compute_result,
    detection_matrix,
    evaluate,
    interference_interval,
    interference_prob,
    survival_matrix,
)
from .network import (
    ConfigViolation,
    InvalidConfigError,
    NetworkConfig,
    distance_matrix,
    generate_scenario,
    validate,
    validate_or_raise,
)
from .oracle import OracleResult, mae_sde, run_oracle
from .radio import (
    DEFAULT_MIN_SNR_DB,
    DEFAULT_POWER_DRAW_MW,
    DEFAULT_SENSITIVITY_DBM,
    DEFAULT_SIR_THRESHOLD_DB,
    SPREADING_FACTORS,
    ChannelParams,
    PathLossParams,
    RadioTables,
    TableLookupError,
    TransmissionConfig,
    mean_rss,
    payload_symbols,
    preamble_time,
    symbol_time,
    time_on_air,
)
from .sampling import (
    MISSED,
    SampledMatrices,
    SampledReception,
    poisson_arrivals,
    sample_matrix,
    sample_rss,
    sample_snr,
    snr_offset_db,
)
from .scenario import (
    SCHEMA_VERSION,
    ScenarioError,
    load_scenario,
    parse_scenario,
    save_scenario,
    scenario_to_json,
)

__version__ = "0.1.0"

__all__ = [
    "ADR_RECEIVED",
    "AdrSimResult",
    "AdrState",
    "BackoffState",
    "ChannelParams",
    "ConfigViolation",
    "DEFAULT_BACKEND",
    "DEFAULT_MIN_SNR_DB",
    "DEFAULT_POWER_DRAW_MW",
    "DEFAULT_SENSITIVITY_DBM",
    "DEFAULT_SIR_THRESHOLD_DB",
    "EvaluationResult",
    "Evaluator",
    "InvalidConfigError",
    "MISSED",
    "NetworkConfig",
    "OracleResult",
    "PathLossParams",
    "RadioTables",
    "REQUEST_ACKNOWLEDGED",
    "SCHEMA_VERSION",
    "SPREADING_FACTORS",
    "SampledMatrices",
    "SampledReception",
    "ScenarioError",
    "TableLookupError",
    "TraceEvent",
    "TransmissionConfig",
    "UPLINK_ATTEMPT",
    "adr_add_measurement",
    "adr_reset",
    "available_backends",
    "backoff_step",
    "capture_corruption_prob",
    "compute_result",
    "detection_matrix",
    "distance_matrix",
    "evaluate",
    "generate_scenario",
    "interference_interval",
    "interference_prob",
    "load_scenario",
    "mae_sde",
    "mean_rss",
    "parse_scenario",
    "payload_symbols",
    "poisson_arrivals",
    "preamble_time",
    "run_adr_simulation",
    "run_oracle",
    "sample_matrix",
    "sample_rss",
    "sample_snr",
    "save_scenario",
    "scenario_to_json",
    "snr_offset_db",
    "survival_matrix",
    "symbol_time",
    "time_on_air",
    "validate",
    "validate_or_raise",
]
