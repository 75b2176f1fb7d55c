"""Scenario running, determinism, intervals, and curve readouts."""
import dataclasses
import math

import numpy as np
import pytest

from ftnsic.constellations import qpsk_ber_closed_form
from ftnsic.errors import ConfigError
from ftnsic.estimators import (
    ImlisicConfig,
    MlisicConfig,
    SssgbkseConfig,
    SssseConfig,
)
from ftnsic.harness import (
    CSV_COLUMNS,
    BerRecord,
    Scenario,
    complexity_report,
    degradation_db,
    measured_op_counts,
    reference_curve,
    run_scenario,
    snr_at_ber,
    write_records_csv,
)


def _small_scenario(**kw) -> Scenario:
    base = dict(
        name="unit",
        kind="qpsk",
        p_up=9,
        q_down=10,
        alpha=0.3,
        estimators=(SssseConfig(6),),
        snr_db=(6.0, 8.0),
        min_bits=100_000,
        min_errors=10**9,
        seed=123,
    )
    base.update(kw)
    return Scenario(**base)


# ---------------------------------------------------------------------------
# scenario contract


def test_scenario_validation():
    with pytest.raises(ConfigError):
        _small_scenario(kind="64qam")
    with pytest.raises(ConfigError):
        _small_scenario(estimators=())
    with pytest.raises(ConfigError):
        _small_scenario(snr_db=())
    with pytest.raises(ConfigError):
        _small_scenario(min_bits=0)
    with pytest.raises(ConfigError):
        _small_scenario(p_up=11, q_down=10)  # would pack above rate one


def test_scenario_warns_on_thin_stopping_rule():
    with pytest.warns(UserWarning, match="below the publication-grade floor"):
        _small_scenario(min_errors=50)


def test_scenario_updates_revalidate():
    s = _small_scenario()
    assert s.with_updates(seed=7).seed == 7
    with pytest.raises(ConfigError):
        s.with_updates(snr_db=())


def test_scenario_ftn_config():
    fc = _small_scenario().ftn_config(9.0)
    assert (fc.p_up, fc.q_down, fc.alpha, fc.es_n0_db) == (9, 10, 0.3, 9.0)


def test_run_scenario_rejects_oversized_estimator():
    s = _small_scenario(estimators=(SssseConfig(40),))
    with pytest.raises(ConfigError, match="exceeds the chain"):
        run_scenario(s)


def test_run_scenario_rejects_bad_thread_count():
    with pytest.raises(ConfigError):
        run_scenario(_small_scenario(), threads=0)


# ---------------------------------------------------------------------------
# determinism and stopping


def _strip_seconds(records):
    return [
        {k: v for k, v in dataclasses.asdict(r).items() if k != "seconds"}
        for r in records
    ]


def test_records_independent_of_thread_count():
    s = _small_scenario(min_bits=120_000)
    a = run_scenario(s, threads=1)
    b = run_scenario(s, threads=3)
    assert _strip_seconds(a) == _strip_seconds(b)


def test_records_reproducible_across_runs():
    s = _small_scenario()
    assert _strip_seconds(run_scenario(s)) == _strip_seconds(run_scenario(s))


def test_stopping_rule_satisfied_and_recorded():
    s = _small_scenario(min_bits=90_000, snr_db=(6.0,),
                        estimators=(SssseConfig(6), SssgbkseConfig(6, 2)))
    records = run_scenario(s)
    assert len(records) == 2
    for r in records:
        assert r.bits >= 90_000 or r.errors >= s.min_errors
        assert r.ber == r.errors / r.bits
        assert r.ci_lo <= r.ber <= r.ci_hi
        assert r.scenario == "unit"
    assert [r.estimator for r in records] == ["sssse_L6", "sssgbkse_L6_K2"]
    m, a = SssgbkseConfig(6, 2).op_count()
    assert (records[1].mults_per_sym, records[1].adds_per_sym) == (m, a)


def test_error_stopping_cuts_short():
    # at 6 dB the error count trips long before two million bits
    s = _small_scenario(min_bits=2_000_000, min_errors=150, snr_db=(6.0,))
    (r,) = run_scenario(s)
    assert r.errors >= 150
    assert r.bits < 2_000_000


def test_confidence_interval_coverage():
    """Exact binomial intervals from sharded runs must cover the known
    rate of the ideal channel essentially every time (95% nominal,
    conservative in practice)."""
    truth = qpsk_ber_closed_form(6.0 - 10.0 * math.log10(2.0))
    hits = 0
    for seed in range(20):
        s = Scenario(
            name="cover",
            kind="qpsk",
            p_up=10,
            q_down=10,
            alpha=0.3,
            estimators=(SssseConfig(2),),
            snr_db=(6.0,),
            min_bits=10_000,
            min_errors=10**9,
            seed=seed,
        )
        (r,) = run_scenario(s)
        hits += r.ci_lo <= truth <= r.ci_hi
    assert hits >= 17


def test_full_chain_matches_symbol_channel_statistics():
    s = _small_scenario(min_bits=80_000, snr_db=(6.0,))
    (fast,) = run_scenario(s)
    (full,) = run_scenario(s, full_chain=True)
    assert full.bits == fast.bits
    # different noise streams, same law: the counts agree loosely
    assert 0.5 < (full.errors + 1) / (fast.errors + 1) < 2.0


# ---------------------------------------------------------------------------
# CSV


def test_write_records_csv_golden(tmp_path):
    rec = BerRecord(
        scenario="demo",
        estimator="sssse_L6",
        snr_db=9.0,
        bits=2_000_000,
        errors=137,
        ber=137 / 2_000_000,
        ci_lo=5.755e-05,
        ci_hi=8.1e-05,
        mults_per_sym=5,
        adds_per_sym=5,
        seconds=1.23456,
    )
    path = tmp_path / "out.csv"
    write_records_csv([rec], path)
    want = (
        ",".join(CSV_COLUMNS) + "\r\n"
        "demo,sssse_L6,9,2000000,137,6.8500000000e-05,"
        "5.7550000000e-05,8.1000000000e-05,5,5,1.235\r\n"
    )
    assert path.read_bytes().decode() == want


# ---------------------------------------------------------------------------
# curve readouts


def test_snr_at_ber_interpolation():
    pts = [(0.0, 1e-2), (2.0, 1e-4)]
    assert snr_at_ber(pts, 1e-3) == pytest.approx(1.0)
    assert snr_at_ber(pts, 1e-2) == 0.0
    assert snr_at_ber(list(reversed(pts)), 1e-3) == pytest.approx(1.0)
    assert snr_at_ber([(1.0, 1e-3)], 1e-3) == 1.0


def test_snr_at_ber_zero_floor_and_gaps():
    # a zero-BER anchor cannot be placed on a log axis; the crossing is
    # pinned to the interval midpoint
    assert snr_at_ber([(0.0, 1e-2), (2.0, 0.0)], 1e-3) == pytest.approx(1.0)
    assert snr_at_ber([(0.0, 1e-2), (1.0, 5e-3)], 1e-3) is None
    assert snr_at_ber([(0.0, 1e-5), (1.0, 1e-6)], 1e-3) is None
    assert snr_at_ber([], 1e-3) is None
    with pytest.raises(ConfigError):
        snr_at_ber([(0.0, 1e-2)], 0.0)


def _rec(label: str, snr: float, ber: float) -> BerRecord:
    return BerRecord(
        scenario="syn", estimator=label, snr_db=snr, bits=10**6,
        errors=int(ber * 10**6), ber=ber, ci_lo=0.0, ci_hi=1.0,
        mults_per_sym=0, adds_per_sym=0, seconds=0.0,
    )


def test_degradation_db_synthetic():
    ref = [(0.0, 1e-2), (2.0, 1e-4)]  # crosses 1e-3 at 1.0
    records = [
        _rec("a", 1.2, 1e-2), _rec("a", 3.2, 1e-4),
        _rec("b", 0.5, 1e-2), _rec("b", 2.5, 1e-4),
        _rec("c", 5.0, 1e-2), _rec("c", 6.0, 5e-3),
    ]
    out = degradation_db(records, ref, 1e-3, in_eb_n0=False)
    assert list(out) == ["a", "b", "c"]
    assert out["a"] == pytest.approx(1.2)
    assert out["b"] == pytest.approx(0.5)
    assert out["c"] is None


def test_degradation_db_eb_n0_shift():
    ref = [(0.0, 1e-2), (2.0, 1e-4)]
    records = [_rec("a", 1.2, 1e-2), _rec("a", 3.2, 1e-4)]
    out = degradation_db(records, ref, 1e-3, in_eb_n0=True, bits_per_symbol=2)
    assert out["a"] == pytest.approx(1.2 - 10.0 * math.log10(2.0))
    with pytest.raises(ConfigError):
        degradation_db(records, ref, 1e-3, in_eb_n0=True)


def test_reference_curve_qpsk_closed_form():
    # scenario grids are Es/N0; the curve comes back on the Eb/N0 axis
    s = _small_scenario(snr_db=(6.0, 9.0))
    curve = reference_curve(s)
    shift = 10.0 * math.log10(2.0)
    assert curve[0][0] == pytest.approx(6.0 - shift)
    assert curve[0][1] == pytest.approx(
        qpsk_ber_closed_form(6.0 - shift), rel=1e-12
    )
    assert curve[1][1] == pytest.approx(
        qpsk_ber_closed_form(9.0 - shift), rel=1e-12
    )
    with pytest.raises(ConfigError):
        reference_curve(_small_scenario(reference="none"))


# ---------------------------------------------------------------------------
# complexity instrumentation


def test_measured_op_counts_match_formulas():
    for cfg in (
        SssseConfig(6),
        SssgbkseConfig(6, 3),
        SssgbkseConfig(8, 5),
        MlisicConfig(6, 2),
        ImlisicConfig((13, 7, 6)),
        ImlisicConfig((13, 12, 11, 10, 9, 8), mode="simplified"),
    ):
        assert measured_op_counts(cfg) == cfg.op_count(), cfg.label()


def test_complexity_report_rows():
    rows = complexity_report([SssgbkseConfig(6, 3), MlisicConfig(6, 2)])
    assert rows[0]["estimator"] == "sssgbkse_L6_K3"
    assert rows[0]["mults_per_sym"] == 31
    assert rows[0]["mults_measured"] == 31
    assert rows[1]["mults_per_sym"] == 20
    rows = complexity_report([SssseConfig(6)], measure=False)
    assert "mults_measured" not in rows[0]
