"""Command-line surface: parsing, exit codes, CSV output."""
import csv
import io
import json
import math

import numpy as np
import pytest

from ftnsic.cli import main


def _rows(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))


def _write_config(tmp_path, **overrides):
    doc = {
        "name": "clicase",
        "kind": "qpsk",
        "p_up": 9,
        "q_down": 10,
        "alpha": 0.3,
        "estimators": [{"kind": "sssse", "span": 6}],
        "snr_db": [6.0],
        "min_bits": 20000,
        "min_errors": 1000000000,
        "seed": 5,
    }
    doc.update(overrides)
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(doc))
    return path


def test_preset_list(capsys):
    assert main(["preset-list"]) == 0
    out = capsys.readouterr().out
    assert "table3-qpsk: qpsk tau=9/10 alpha=0.3" in out
    assert "table2-grid: expands to 18 scenarios" in out
    assert "imlisic_L25-13-7-6" in out


def test_run_requires_exactly_one_source(tmp_path, capsys):
    cfg = _write_config(tmp_path)
    assert main(["run", "--out", str(tmp_path)]) == 2
    assert main([
        "run", "--preset", "table3-qpsk", "--config", str(cfg),
        "--out", str(tmp_path),
    ]) == 2
    assert "configuration error" in capsys.readouterr().err


def test_run_unknown_preset(tmp_path, capsys):
    assert main(["run", "--preset", "nope", "--out", str(tmp_path)]) == 2
    assert "unknown preset" in capsys.readouterr().err


def test_run_config_file_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["run", "--config", str(bad), "--out", str(tmp_path)]) == 2
    assert main(["run", "--config", str(tmp_path / "missing.json"),
                 "--out", str(tmp_path)]) == 2
    noest = _write_config(tmp_path, estimators=[])
    assert main(["run", "--config", str(noest), "--out", str(tmp_path)]) == 2
    badkind = _write_config(tmp_path, estimators=[{"kind": "viterbi", "span": 6}])
    assert main(["run", "--config", str(badkind), "--out", str(tmp_path)]) == 2
    nofield = _write_config(tmp_path)
    doc = json.loads(nofield.read_text())
    del doc["alpha"]
    nofield.write_text(json.dumps(doc))
    assert main(["run", "--config", str(nofield), "--out", str(tmp_path)]) == 2
    err = capsys.readouterr().err
    assert "missing field 'alpha'" in err


def test_run_config_end_to_end(tmp_path, capsys):
    cfg = _write_config(tmp_path)
    outdir = tmp_path / "results"
    assert main(["run", "--config", str(cfg), "--out", str(outdir)]) == 0
    out = capsys.readouterr().out
    assert "clicase sssse_L6 snr=6" in out
    assert f"wrote {outdir / 'clicase.csv'}" in out
    rows = _rows((outdir / "clicase.csv").read_text())
    assert len(rows) == 1
    assert rows[0]["scenario"] == "clicase"
    assert int(rows[0]["bits"]) >= 20000
    assert 0.0 < float(rows[0]["ber"]) < 0.5


def test_run_overrides(tmp_path):
    cfg = _write_config(tmp_path)
    outdir = tmp_path / "r2"
    assert main([
        "run", "--config", str(cfg), "--out", str(outdir),
        "--snr", "6,8", "--seed", "9", "--threads", "2",
    ]) == 0
    rows = _rows((outdir / "clicase.csv").read_text())
    assert [r["snr_db"] for r in rows] == ["6", "8"]


def test_run_output_failure_is_runtime_error(tmp_path, capsys):
    cfg = _write_config(tmp_path)
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    code = main(["run", "--config", str(cfg), "--out", str(blocker / "sub")])
    assert code == 3
    assert "runtime error" in capsys.readouterr().err


def test_usage_errors_exit_two():
    with pytest.raises(SystemExit) as e:
        main([])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2


def test_taps_dump_srrc(capsys):
    assert main(["taps-dump", "--tau", "4/5", "--alpha", "0.5", "--span", "4"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert [r["n"] for r in rows] == ["1", "2", "3", "4"]
    taps = [float(r["tap"]) for r in rows]
    assert taps[0] == 1.0
    assert taps[1] == pytest.approx(0.2007525, abs=1e-6)
    assert taps[2] == pytest.approx(-0.0981232, abs=1e-6)


def test_taps_dump_sinc(capsys):
    assert main(["taps-dump", "--tau", "4/5", "--sinc", "--span", "5"]) == 0
    taps = [float(r["tap"]) for r in _rows(capsys.readouterr().out)]
    want = [float(np.sinc(n * 0.8)) for n in range(5)]
    assert taps == pytest.approx(want, abs=1e-9)


def test_taps_dump_bad_inputs(capsys):
    assert main(["taps-dump", "--tau", "5/4"]) == 2
    assert main(["taps-dump", "--tau", "abc"]) == 2
    assert main(["taps-dump", "--tau", "4/5", "--sinc"]) == 2
    err = capsys.readouterr().err
    assert "--span is required with --sinc" in err


def test_constellation_dump(capsys):
    assert main(["constellation-dump", "--kind", "qpsk"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert len(rows) == 4
    assert [r["label_bits"] for r in rows] == ["00", "10", "11", "01"]
    v = 1.0 / math.sqrt(2.0)
    assert float(rows[0]["re"]) == pytest.approx(v, abs=1e-9)
    assert float(rows[0]["im"]) == pytest.approx(v, abs=1e-9)
    for r in rows:
        assert abs(complex(float(r["re"]), float(r["im"]))) == pytest.approx(1.0)


def test_capacity_stdout_and_file(tmp_path, capsys):
    assert main(["capacity", "--alpha", "0.3", "--snr-db", "10",
                 "--taus", "0.8,1.0"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert len(rows) == 2
    r08 = rows[0]
    assert float(r08["ftn_bits_per_s"]) > float(r08["nyquist_bits_per_s"])
    r10 = rows[1]
    # no packing: the band stops at the symbol rate and the taper region
    # beyond it is wasted, so the integral sits below the flat-spectrum form
    assert float(r10["ftn_bits_per_s"]) < float(r10["nyquist_bits_per_s"])
    assert float(r10["nyquist_bits_per_s"]) == pytest.approx(2.196158711, abs=1e-6)

    out = tmp_path / "cap.csv"
    assert main(["capacity", "--alpha", "0.5", "--snr-db", "0,10",
                 "--taus", "0.9", "--out", str(out)]) == 0
    assert len(_rows(out.read_text())) == 2


def test_complexity_preset(capsys):
    assert main(["complexity", "--preset", "table3-qpsk"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert [r["estimator"] for r in rows] == [
        "sssgbkse_L6_K3", "mlisic_L6_K2", "imlisic_L7-6",
    ]
    assert [int(r["mults_per_sym"]) for r in rows] == [31, 20, 22]
    for r in rows:
        assert r["mults_measured"] == r["mults_per_sym"]
        assert r["adds_measured"] == r["adds_per_sym"]


def test_complexity_requires_one_source(capsys):
    assert main(["complexity"]) == 2
    assert main(["complexity", "--preset", "a", "--config", "b"]) == 2
