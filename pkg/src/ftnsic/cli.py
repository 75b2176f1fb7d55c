"""Command-line front end.

Subcommands:
  run                 Monte Carlo BER runs from a preset or a config file
  preset-list         show every built-in scenario name
  taps-dump           ISI tap vector for a chain, as CSV
  constellation-dump  points and bit labels of a modulation, as CSV
  capacity            accelerated vs Nyquist capacity across tau, as CSV
  complexity          per-symbol operation counts, formula and measured

Exit codes: 0 success, 2 configuration error, 3 runtime failure.

A run config file is JSON mirroring the Scenario fields:

    {
      "name": "my-case",
      "kind": "qpsk",
      "p_up": 9, "q_down": 10,
      "alpha": 0.3,
      "estimators": [
        {"kind": "sssse", "span": 6},
        {"kind": "sssgbkse", "span": 6, "go_back": 3},
        {"kind": "mlisic", "span": 6, "layers": 2},
        {"kind": "imlisic", "spans": [7, 6], "mode": "optimal"}
      ],
      "snr_db": [6, 8, 10],
      "min_bits": 2000000, "min_errors": 200,
      "seed": 1, "order": 201, "reference": "auto"
    }

`estimators[].mode` is optional ("optimal" is assumed); every other
estimator field is required as shown.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import capacity as cap
from .chain import FtnConfig, chain_tap_vector
from .constellations import KINDS, build_constellation
from .errors import ConfigError
from .estimators import (
    EstimatorConfig,
    ImlisicConfig,
    MlisicConfig,
    SssgbkseConfig,
    SssseConfig,
)
from .harness import Scenario, run_scenario, write_records_csv
from .presets import preset, preset_names
from .pulse import sinc_taps

_ESTIMATOR_SCHEMAS = {
    "sssse": ("span",),
    "sssgbkse": ("span", "go_back"),
    "mlisic": ("span", "layers"),
    "imlisic": ("spans",),
}


def _estimator_from_dict(d: dict) -> EstimatorConfig:
    kind = d.get("kind")
    if kind not in _ESTIMATOR_SCHEMAS:
        raise ConfigError(
            f"estimator kind {kind!r} not one of {sorted(_ESTIMATOR_SCHEMAS)}"
        )
    required = _ESTIMATOR_SCHEMAS[kind]
    for key in required:
        if key not in d:
            raise ConfigError(f"estimator {kind!r} is missing field {key!r}")
    if kind == "sssse":
        return SssseConfig(span=int(d["span"]))
    if kind == "sssgbkse":
        return SssgbkseConfig(span=int(d["span"]), go_back=int(d["go_back"]))
    if kind == "mlisic":
        return MlisicConfig(span=int(d["span"]), layers=int(d["layers"]))
    return ImlisicConfig(
        spans=tuple(int(x) for x in d["spans"]),
        mode=str(d.get("mode", "optimal")),
    )


def _scenario_from_file(path: str) -> Scenario:
    try:
        with open(path) as f:
            doc = json.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read config file {path!r}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path!r} is not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise ConfigError(f"config file {path!r} must hold a JSON object")
    for key in ("name", "kind", "p_up", "q_down", "alpha", "estimators", "snr_db"):
        if key not in doc:
            raise ConfigError(f"config file {path!r} is missing field {key!r}")
    ests = doc["estimators"]
    if not isinstance(ests, list) or not ests:
        raise ConfigError("estimators must be a nonempty list")
    kw = dict(
        name=str(doc["name"]),
        kind=str(doc["kind"]),
        p_up=int(doc["p_up"]),
        q_down=int(doc["q_down"]),
        alpha=float(doc["alpha"]),
        estimators=tuple(_estimator_from_dict(e) for e in ests),
        snr_db=tuple(float(s) for s in doc["snr_db"]),
    )
    for key in ("min_bits", "min_errors", "seed", "order"):
        if key in doc:
            kw[key] = int(doc[key])
    if "reference" in doc:
        kw["reference"] = str(doc["reference"])
    return Scenario(**kw)


def _parse_tau(text: str) -> Fraction:
    try:
        tau = Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"tau {text!r} is not a fraction like 4/5") from e
    if not 0 < tau <= 1:
        raise ConfigError(f"tau {tau} outside (0, 1]")
    return tau


def _float_list(text: str, what: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as e:
        raise ConfigError(f"bad {what} list {text!r}: {e}") from e
    if not vals:
        raise ConfigError(f"{what} list {text!r} is empty")
    return vals


def _cmd_run(args) -> int:
    if bool(args.preset) == bool(args.config):
        raise ConfigError("run needs exactly one of --preset or --config")
    if args.preset:
        got = preset(args.preset)
        scenarios = got if isinstance(got, list) else [got]
    else:
        scenarios = [_scenario_from_file(args.config)]
    updates = {}
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.snr is not None:
        updates["snr_db"] = _float_list(args.snr, "snr")
    if args.min_bits is not None:
        updates["min_bits"] = args.min_bits
    if args.min_errors is not None:
        updates["min_errors"] = args.min_errors
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for s in scenarios:
        if updates:
            s = s.with_updates(**updates)
        records = run_scenario(s, threads=args.threads, full_chain=args.full_chain)
        path = out_dir / f"{s.name}.csv"
        write_records_csv(records, path)
        for r in records:
            print(
                f"{r.scenario} {r.estimator} snr={r.snr_db:g} dB "
                f"ber={r.ber:.3e} ({r.errors}/{r.bits}) [{r.seconds:.1f}s]"
            )
        print(f"wrote {path}")
    return 0


def _cmd_preset_list(args) -> int:
    for name in preset_names():
        got = preset(name)
        if isinstance(got, list):
            print(f"{name}: expands to {len(got)} scenarios")
        else:
            labels = ", ".join(c.label() for c in got.estimators)
            print(
                f"{name}: {got.kind} tau={got.p_up}/{got.q_down} "
                f"alpha={got.alpha} [{labels}]"
            )
    return 0


def _cmd_taps_dump(args) -> int:
    tau = _parse_tau(args.tau)
    if args.sinc:
        if args.span is None:
            raise ConfigError("--span is required with --sinc (no natural cutoff)")
        tv = sinc_taps(tau, args.span)
    else:
        fc = FtnConfig(
            p_up=tau.numerator, q_down=tau.denominator, alpha=args.alpha, order=args.order
        )
        tv = chain_tap_vector(fc, span=args.span)
    w = csv.writer(sys.stdout)
    w.writerow(["n", "tap"])
    for n, g in enumerate(tv.taps, start=1):
        w.writerow([n, f"{g:.12g}"])
    return 0


def _cmd_constellation_dump(args) -> int:
    c = build_constellation(args.kind)
    w = csv.writer(sys.stdout)
    w.writerow(["index", "re", "im", "label_bits"])
    for i, (p, lab) in enumerate(zip(c.points, c.labels)):
        w.writerow(
            [i, f"{p.real:.12g}", f"{p.imag:.12g}", format(int(lab), f"0{c.bits_per_symbol}b")]
        )
    return 0


def _cmd_capacity(args) -> int:
    taus = _float_list(args.taus, "taus")
    snrs = _float_list(args.snr_db, "snr")
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(out)
        w.writerow(["alpha", "tau", "snr_db", "ftn_bits_per_s", "nyquist_bits_per_s"])
        for snr in snrs:
            p_bar = 10.0 ** (snr / 10.0)
            for tau in taus:
                q = cap.srrc_query(alpha=args.alpha, tau=tau, p_bar=p_bar, n0=1.0)
                w.writerow(
                    [
                        f"{args.alpha:g}",
                        f"{tau:g}",
                        f"{snr:g}",
                        f"{cap.ftn_capacity(q):.9f}",
                        f"{cap.nyquist_capacity(q):.9f}",
                    ]
                )
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _cmd_complexity(args) -> int:
    if bool(args.preset) == bool(args.config):
        raise ConfigError("complexity needs exactly one of --preset or --config")
    if args.preset:
        got = preset(args.preset)
        scenarios = got if isinstance(got, list) else [got]
    else:
        scenarios = [_scenario_from_file(args.config)]
    from .harness import complexity_report

    w = csv.writer(sys.stdout)
    w.writerow(
        ["scenario", "estimator", "mults_per_sym", "adds_per_sym", "mults_measured", "adds_measured"]
    )
    for s in scenarios:
        for row in complexity_report(list(s.estimators)):
            w.writerow(
                [
                    s.name,
                    row["estimator"],
                    row["mults_per_sym"],
                    row["adds_per_sym"],
                    row["mults_measured"],
                    row["adds_measured"],
                ]
            )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ftnsic",
        description="Faster-than-Nyquist signaling simulator",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Monte Carlo BER runs; one CSV per scenario")
    run.add_argument("--preset", help="built-in scenario name (see preset-list)")
    run.add_argument("--config", help="JSON scenario file (see module help)")
    run.add_argument("--seed", type=int, help="override the scenario seed")
    run.add_argument("--snr", help="override the Es/N0 grid, comma-separated dB")
    run.add_argument("--min-bits", type=int, help="override the bit budget per point")
    run.add_argument("--min-errors", type=int, help="override the error target per point")
    run.add_argument(
        "--full-chain",
        action="store_true",
        help="simulate the oversampled filter pair instead of the symbol-rate model",
    )
    run.add_argument("--out", default=".", help="output directory (default: .)")
    run.add_argument("--threads", type=int, default=1, help="worker threads (default 1)")
    run.set_defaults(func=_cmd_run)

    pl = sub.add_parser("preset-list", help="list built-in scenarios")
    pl.set_defaults(func=_cmd_preset_list)

    td = sub.add_parser("taps-dump", help="print the ISI tap vector as CSV")
    td.add_argument("--tau", required=True, help="packing factor as a fraction, e.g. 4/5")
    td.add_argument("--alpha", type=float, default=0.3, help="SRRC rolloff (default 0.3)")
    td.add_argument("--span", type=int, default=None, help="tap count L (default: full)")
    td.add_argument("--order", type=int, default=201, help="SRRC filter order (default 201)")
    td.add_argument("--sinc", action="store_true", help="ideal sinc pulse instead of SRRC")
    td.set_defaults(func=_cmd_taps_dump)

    cd = sub.add_parser("constellation-dump", help="print points and labels as CSV")
    cd.add_argument("--kind", required=True, choices=list(KINDS))
    cd.set_defaults(func=_cmd_constellation_dump)

    ca = sub.add_parser("capacity", help="accelerated vs Nyquist capacity across tau")
    ca.add_argument("--alpha", type=float, required=True, help="SRRC rolloff")
    ca.add_argument(
        "--snr-db",
        required=True,
        help="comma-separated 10*log10(P*Ts/N0) grid in dB",
    )
    ca.add_argument(
        "--taus",
        default="0.5,0.55,0.6,0.65,0.7,0.75,0.8,0.85,0.9,0.95,1.0",
        help="comma-separated tau grid (default 0.5..1.0)",
    )
    ca.add_argument("--out", help="CSV file (default: stdout)")
    ca.set_defaults(func=_cmd_capacity)

    cx = sub.add_parser("complexity", help="per-symbol op counts, formula vs measured")
    cx.add_argument("--preset", help="built-in scenario name")
    cx.add_argument("--config", help="JSON scenario file")
    cx.set_defaults(func=_cmd_complexity)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"ftnsic: configuration error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # noqa: BLE001 - the contract maps any failure to 3
        print(f"ftnsic: runtime error: {type(e).__name__}: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
