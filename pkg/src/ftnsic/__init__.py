"""Faster-than-Nyquist signaling simulator.

Symbol-rate model of SRRC-shaped transmission at a packing factor
tau = P/Q <= 1, successive interference cancellation estimators
(single-pass, go-back, multi-layer, and improved multi-layer), matching
capacity calculators, and a deterministic Monte Carlo BER harness with
table presets and a CLI.
"""
from .capacity import (
    CapacityQuery,
    ftn_capacity,
    nyquist_capacity,
    shannon_capacity,
    sinc_query,
    srrc_query,
)
from .chain import (
    FtnConfig,
    ReceivedSequence,
    add_awgn,
    analytic_receive,
    chain_tap_vector,
    colored_noise,
    receive,
    transmit,
)
from .constellations import (
    KINDS,
    Constellation,
    build_constellation,
    deci,
    deci_index,
    demap,
    modulate,
)
from .errors import ConfigError, NumericsError
from .estimators import (
    BlockResult,
    EstimatorConfig,
    ImlisicConfig,
    MlisicConfig,
    SssgbkseConfig,
    SssseConfig,
    ValidityReport,
    make_estimator,
    run_block,
    run_stream,
    validate_lengths,
)
from .harness import (
    BerRecord,
    Scenario,
    complexity_report,
    degradation_db,
    run_scenario,
    snr_at_ber,
    write_records_csv,
)
from .presets import preset, preset_names
from .pulse import SrrcSpec, TapVector, chain_taps, sinc_taps, srrc_impulse

__version__ = "0.1.0"

__all__ = [
    "BerRecord",
    "BlockResult",
    "CapacityQuery",
    "Constellation",
    "ConfigError",
    "EstimatorConfig",
    "FtnConfig",
    "ImlisicConfig",
    "KINDS",
    "MlisicConfig",
    "NumericsError",
    "ReceivedSequence",
    "Scenario",
    "SrrcSpec",
    "SssgbkseConfig",
    "SssseConfig",
    "TapVector",
    "ValidityReport",
    "add_awgn",
    "analytic_receive",
    "build_constellation",
    "chain_tap_vector",
    "chain_taps",
    "colored_noise",
    "complexity_report",
    "deci",
    "deci_index",
    "degradation_db",
    "demap",
    "ftn_capacity",
    "make_estimator",
    "modulate",
    "nyquist_capacity",
    "preset",
    "preset_names",
    "receive",
    "run_block",
    "run_scenario",
    "run_stream",
    "shannon_capacity",
    "sinc_query",
    "sinc_taps",
    "snr_at_ber",
    "srrc_impulse",
    "srrc_query",
    "transmit",
    "validate_lengths",
    "write_records_csv",
]
