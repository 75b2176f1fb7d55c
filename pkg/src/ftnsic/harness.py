"""Monte Carlo BER harness: scenarios, deterministic sharding, records.

A scenario fixes the modulation, the chain (P/Q, rolloff, filter order),
the estimator configurations, an SNR grid and a stopping rule.  Work is
cut into fixed-size shards; shard i draws every random quantity from its
own child of SeedSequence([seed, scenario-id, estimator-id, snr-index, i]),
so the bit stream it simulates does not depend on which worker ran it or
in what order.  Aggregation folds shard results strictly in shard order
and stops at the first shard where the cumulative count satisfies the
stopping rule, which makes the folded prefix - and therefore every
reported number except wall time - a pure function of the scenario.
"""
from __future__ import annotations

import csv
import math
import time
import warnings
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.stats import binomtest

from .chain import FtnConfig, add_awgn, analytic_receive, chain_tap_vector, colored_noise, receive, transmit
from .constellations import (
    KINDS,
    build_constellation,
    indices_from_bits,
    theoretical_ber_reference,
)
from .errors import ConfigError
from .estimators import EstimatorConfig, run_block
from .pulse import TapVector

__all__ = [
    "SHARD_SYMBOLS",
    "Scenario",
    "BerRecord",
    "run_scenario",
    "write_records_csv",
    "CSV_COLUMNS",
    "snr_at_ber",
    "degradation_db",
    "complexity_report",
]

# Shard granularity.  Large enough that per-shard filter edges and JIT
# dispatch are negligible, small enough that the stopping rule lands
# close to its thresholds.
SHARD_SYMBOLS = 20_000

CSV_COLUMNS = (
    "scenario",
    "estimator",
    "snr_db",
    "bits",
    "errors",
    "ber",
    "ci_lo",
    "ci_hi",
    "mults_per_sym",
    "adds_per_sym",
    "seconds",
)


@dataclass(frozen=True)
class Scenario:
    """One experiment: a chain, a modulation, estimators, an SNR grid.

    snr_db entries are Es/N0 in dB, with Es the actual transmitted
    energy per symbol (Eb/N0 = Es/N0 - 10 log10 bits_per_symbol).
    `reference` selects the ISI-free comparison curve: "qfunc" (closed
    form, QPSK only), "nyquist-sim", "auto", or "none".
    """

    name: str
    kind: str
    p_up: int
    q_down: int
    alpha: float
    estimators: tuple[EstimatorConfig, ...]
    snr_db: tuple[float, ...]
    min_bits: int = 2_000_000
    min_errors: int = 200
    seed: int = 20260821
    order: int = 201
    reference: str = "auto"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown modulation {self.kind!r}")
        if not self.estimators:
            raise ConfigError(f"{self.name}: estimator list is empty")
        if not self.snr_db:
            raise ConfigError(f"{self.name}: SNR grid is empty")
        if self.min_bits < 1 or self.min_errors < 1:
            raise ConfigError(f"{self.name}: stopping rule must be positive")
        if self.min_errors < 100:
            warnings.warn(
                f"{self.name}: min_errors={self.min_errors} is below the "
                f"publication-grade floor of 100; confidence intervals "
                f"will be wide",
                stacklevel=3,
            )
        object.__setattr__(self, "estimators", tuple(self.estimators))
        object.__setattr__(self, "snr_db", tuple(float(s) for s in self.snr_db))
        # fail on an invalid chain now, not inside a worker
        self.ftn_config(self.snr_db[0])

    def ftn_config(self, es_n0_db: float) -> FtnConfig:
        return FtnConfig(
            p_up=self.p_up,
            q_down=self.q_down,
            alpha=self.alpha,
            order=self.order,
            es_n0_db=es_n0_db,
        )

    def with_updates(self, **kw) -> "Scenario":
        return replace(self, **kw)


@dataclass(frozen=True)
class BerRecord:
    """One CSV row: one estimator at one SNR point."""

    scenario: str
    estimator: str
    snr_db: float
    bits: int
    errors: int
    ber: float
    ci_lo: float
    ci_hi: float
    mults_per_sym: int
    adds_per_sym: int
    seconds: float


def _stable_id(text: str) -> int:
    # process-independent (unlike hash()) so reruns reseed identically
    return zlib.crc32(text.encode())


def _shard_counts(
    s: Scenario,
    cfg: EstimatorConfig,
    const,
    channel_taps: TapVector,
    est_taps: np.ndarray,
    snr_index: int,
    shard: int,
    full_chain: bool,
) -> tuple[int, int]:
    """Simulate one shard; returns (bits, bit_errors)."""
    rng = np.random.default_rng(
        np.random.SeedSequence(
            [s.seed, _stable_id(s.name), _stable_id(cfg.label()), snr_index, shard]
        )
    )
    fc = s.ftn_config(s.snr_db[snr_index])
    bps = const.bits_per_symbol
    bits = rng.integers(0, 2, size=SHARD_SYMBOLS * bps, dtype=np.uint8)
    tx_idx = indices_from_bits(bits, const)
    symbols = const.points[tx_idx]
    if full_chain:
        chips = add_awgn(transmit(symbols, fc), fc, rng)
        y = receive(chips, fc).samples
    else:
        noise = colored_noise(SHARD_SYMBOLS, fc, rng)
        y = analytic_receive(symbols, channel_taps, noise)
    rx_idx = run_block(cfg, est_taps, const, y).indices
    nerr = int(np.bitwise_count(const.labels[tx_idx] ^ const.labels[rx_idx]).sum())
    return SHARD_SYMBOLS * bps, nerr


def _clopper_pearson(errors: int, bits: int) -> tuple[float, float]:
    ci = binomtest(errors, bits).proportion_ci(confidence_level=0.95, method="exact")
    return float(ci.low), float(ci.high)


def run_scenario(
    s: Scenario, *, threads: int = 1, full_chain: bool = False
) -> list[BerRecord]:
    """Run every (estimator, SNR) point of a scenario to its stopping rule.

    Deterministic for a fixed scenario: the same records (wall time
    aside) come back for any `threads` value.  `full_chain` swaps the
    symbol-rate channel model for the actual oversampled filter pair;
    the two paths draw different noise streams but identical statistics.
    """
    if threads < 1:
        raise ConfigError(f"threads must be >= 1, got {threads}")
    const = build_constellation(s.kind)
    channel_taps = chain_tap_vector(s.ftn_config(s.snr_db[0]))
    records: list[BerRecord] = []
    round_size = max(2 * threads, 4)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for cfg in s.estimators:
            if cfg.max_span > channel_taps.span:
                raise ConfigError(
                    f"{cfg.label()} span {cfg.max_span} exceeds the chain's "
                    f"full ISI span {channel_taps.span}"
                )
            est_taps = np.asarray(channel_taps.taps[: cfg.max_span])
            mults, adds = cfg.op_count()
            for j in range(len(s.snr_db)):
                t0 = time.perf_counter()
                cum_bits = cum_errors = 0
                shard = 0
                done = False
                while not done:
                    futs = [
                        pool.submit(
                            _shard_counts,
                            s, cfg, const, channel_taps, est_taps, j,
                            shard + i, full_chain,
                        )
                        for i in range(round_size)
                    ]
                    shard += round_size
                    # fold strictly in shard order; results past the
                    # stopping shard are discarded so the folded prefix
                    # is independent of round size and thread count
                    for f in futs:
                        b, e = f.result()
                        if done:
                            continue
                        cum_bits += b
                        cum_errors += e
                        if cum_bits >= s.min_bits or cum_errors >= s.min_errors:
                            done = True
                lo, hi = _clopper_pearson(cum_errors, cum_bits)
                records.append(
                    BerRecord(
                        scenario=s.name,
                        estimator=cfg.label(),
                        snr_db=s.snr_db[j],
                        bits=cum_bits,
                        errors=cum_errors,
                        ber=cum_errors / cum_bits,
                        ci_lo=lo,
                        ci_hi=hi,
                        mults_per_sym=mults,
                        adds_per_sym=adds,
                        seconds=time.perf_counter() - t0,
                    )
                )
    return records


def write_records_csv(records: list[BerRecord], path) -> None:
    """Emit records in the stable column order (one scenario per file)."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(CSV_COLUMNS)
        for r in records:
            w.writerow(
                [
                    r.scenario,
                    r.estimator,
                    f"{r.snr_db:g}",
                    r.bits,
                    r.errors,
                    f"{r.ber:.10e}",
                    f"{r.ci_lo:.10e}",
                    f"{r.ci_hi:.10e}",
                    r.mults_per_sym,
                    r.adds_per_sym,
                    f"{r.seconds:.3f}",
                ]
            )


def snr_at_ber(points: list[tuple[float, float]], target: float) -> float | None:
    """SNR (dB) where a BER curve crosses `target`, by log-BER interpolation.

    `points` are (snr_db, ber) pairs; returns None when the curve never
    brackets the target.  Zero-BER points count as below any target.
    """
    if target <= 0:
        raise ConfigError(f"target BER {target} must be positive")
    pts = sorted(points)
    lt = math.log10(target)
    for (s0, b0), (s1, b1) in zip(pts, pts[1:]):
        if b0 < target or b1 > target:
            continue
        if b0 == target:
            return s0
        if b1 == 0.0:
            # crossing lies in this interval but the lower anchor is
            # unbounded in log-BER; report the midpoint conservatively
            return (s0 + s1) / 2.0
        l0, l1 = math.log10(b0), math.log10(b1)
        if l0 == l1:
            return s0
        return s0 + (s1 - s0) * (l0 - lt) / (l0 - l1)
    if pts and pts[-1][1] == target:
        return pts[-1][0]
    return None


def degradation_db(
    records: list[BerRecord],
    reference: list[tuple[float, float]],
    target: float,
    *,
    in_eb_n0: bool = True,
    bits_per_symbol: int | None = None,
) -> dict[str, float | None]:
    """Per-estimator SNR penalty versus an ISI-free reference curve.

    Both curves are interpolated at `target`; the gap is reported in dB.
    With `in_eb_n0`, record SNRs are shifted by -10 log10(bits/symbol)
    so the comparison matches a reference given in Eb/N0.
    """
    shift = 0.0
    if in_eb_n0:
        if bits_per_symbol is None:
            raise ConfigError("bits_per_symbol is required for an Eb/N0 comparison")
        shift = 10.0 * math.log10(bits_per_symbol)
    ref_snr = snr_at_ber(reference, target)
    out: dict[str, float | None] = {}
    for label in dict.fromkeys(r.estimator for r in records):
        pts = [(r.snr_db - shift, r.ber) for r in records if r.estimator == label]
        est_snr = snr_at_ber(pts, target)
        out[label] = None if est_snr is None or ref_snr is None else est_snr - ref_snr
    return out


def reference_curve(s: Scenario) -> list[tuple[float, float]]:
    """ISI-free reference for a scenario, in Eb/N0 against BER.

    Closed form for QPSK under "qfunc"/"auto", otherwise the simulated
    ideal symbol channel at matching desk-scale budgets.
    """
    if s.reference == "none":
        raise ConfigError(f"{s.name}: scenario declares no reference curve")
    c = build_constellation(s.kind)
    shift = 10.0 * math.log10(c.bits_per_symbol)
    rows = theoretical_ber_reference(
        s.kind,
        s.snr_db,
        mode=s.reference,
        min_bits=s.min_bits,
        min_errors=s.min_errors,
        seed=s.seed,
    )
    return [(snr - shift, ber) for snr, ber, _, _ in rows]


def measured_op_counts(
    cfg: EstimatorConfig, *, n_long: int = 4096, n_short: int = 1024, seed: int = 7
) -> tuple[int, int]:
    """Per-symbol operation counters measured from instrumented runs.

    Two block lengths cancel the fixed start-up deficit of the go-back
    revision loops: counters(n_long) - counters(n_short) is exactly
    (n_long - n_short) * (per-symbol count) for every estimator here.
    Returns integer (mults, adds) per symbol.
    """
    const = build_constellation("qpsk")
    rng = np.random.default_rng(seed)
    tv = chain_tap_vector(FtnConfig(p_up=4, q_down=5, alpha=0.5), span=cfg.max_span)
    taps = np.asarray(tv.taps)
    totals = []
    for n in (n_long, n_short):
        sym = const.points[rng.integers(0, const.size, size=n)]
        y = analytic_receive(sym, tv)
        res = run_block(cfg, taps, const, y)
        totals.append((res.mults, res.adds))
    dm = totals[0][0] - totals[1][0]
    da = totals[0][1] - totals[1][1]
    span = n_long - n_short
    if dm % span or da % span:
        raise ConfigError(
            f"{cfg.label()}: measured counters are not an integer per symbol"
        )
    return dm // span, da // span


def complexity_report(configs: list[EstimatorConfig], *, measure: bool = True) -> list[dict]:
    """Formula operation counts per config, with measured counters beside.

    The measured numbers come from instrumented runs and must equal the
    formulas; a mismatch raises rather than printing a wrong table.
    """
    rows = []
    for cfg in configs:
        mults, adds = cfg.op_count()
        row = {
            "estimator": cfg.label(),
            "mults_per_sym": mults,
            "adds_per_sym": adds,
        }
        if measure:
            mm, ma = measured_op_counts(cfg)
            if (mm, ma) != (mults, adds):
                raise ConfigError(
                    f"{cfg.label()}: measured ({mm}, {ma}) disagrees with "
                    f"formula ({mults}, {adds})"
                )
            row["mults_measured"] = mm
            row["adds_measured"] = ma
        rows.append(row)
    return rows
