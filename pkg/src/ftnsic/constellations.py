"""Constellation geometry, bit mapping, and hard decisions.

Geometries are loaded from a versioned JSON data file shipped with the
package (see ``data/constellations.json``).  Every constellation is
rescaled to unit average energy at load time, so transmit power is the
same across modulation orders.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np
from scipy.special import erfc

from .errors import ConfigError

KINDS = ("qpsk", "8psk", "16apsk", "32apsk", "64apsk", "128apsk", "256apsk")

_DATA_RESOURCE = "constellations.json"


@dataclass(frozen=True)
class Constellation:
    """Unit-energy constellation with a bijective bit labeling.

    Attributes:
        kind: one of KINDS.
        points: complex points, index order fixed by the data file
            (ring-major, angle-minor).  Decision ties resolve to the
            lowest index.
        labels: labels[i] is the integer value of the bit label of
            points[i], MSB first.
        bits_per_symbol: log2 of the constellation size.
        ring_radii: post-normalization radii, innermost first.
    """

    kind: str
    points: np.ndarray
    labels: np.ndarray
    bits_per_symbol: int
    ring_radii: tuple[float, ...]
    _label_to_index: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        m = len(self.points)
        if m != 2 ** self.bits_per_symbol:
            raise ConfigError(f"{self.kind}: {m} points for {self.bits_per_symbol} bits")
        if sorted(self.labels.tolist()) != list(range(m)):
            raise ConfigError(f"{self.kind}: labels are not a bijection")
        inv = np.empty(m, dtype=np.int64)
        inv[self.labels] = np.arange(m)
        object.__setattr__(self, "_label_to_index", inv)
        energy = float(np.mean(np.abs(self.points) ** 2))
        if abs(energy - 1.0) > 1e-12:
            raise ConfigError(f"{self.kind}: mean energy {energy!r} != 1")

    @property
    def size(self) -> int:
        return len(self.points)

    def min_distance(self) -> float:
        d = np.abs(self.points[:, None] - self.points[None, :])
        return float(np.min(d[d > 0]))


def _build_from_entry(kind: str, entry: dict) -> Constellation:
    bits = int(entry["bits"])
    ratios = [float(r) for r in entry["ring_ratios"]]
    pts = entry["points"]
    if len(pts) != 2 ** bits:
        raise ConfigError(f"{kind}: data file lists {len(pts)} points, expected {2 ** bits}")
    raw = np.array(
        [ratios[p["ring"]] * np.exp(1j * math.radians(p["angle_deg"])) for p in pts],
        dtype=np.complex128,
    )
    # Unit average energy by direct summation over the actual points.
    scale = math.sqrt(float(np.mean(np.abs(raw) ** 2)))
    labels = np.array([int(p["label"], 2) for p in pts], dtype=np.int64)
    return Constellation(
        kind=kind,
        points=raw / scale,
        labels=labels,
        bits_per_symbol=bits,
        ring_radii=tuple(r / scale for r in ratios),
    )


def load_constellation_file(path) -> dict[str, Constellation]:
    """Parse a geometry JSON file into Constellation objects."""
    with open(path) as f:
        doc = json.load(f)
    if doc.get("version") != 1:
        raise ConfigError(f"unsupported constellation file version {doc.get('version')!r}")
    return {k: _build_from_entry(k, v) for k, v in doc["constellations"].items()}


_cache: dict[str, Constellation] = {}


def build_constellation(kind: str) -> Constellation:
    """Return the packaged constellation for `kind` (cached)."""
    kind = kind.lower()
    if kind not in KINDS:
        raise ConfigError(f"unknown constellation kind {kind!r}; expected one of {KINDS}")
    if not _cache:
        with (resources.files(__package__) / "data" / _DATA_RESOURCE).open() as f:
            doc = json.load(f)
        for k, v in doc["constellations"].items():
            _cache[k] = _build_from_entry(k, v)
    return _cache[kind]


def indices_from_bits(bits: np.ndarray, c: Constellation) -> np.ndarray:
    """Point indices for a bit array (values 0/1, MSB-first per symbol)."""
    bits = np.asarray(bits)
    bps = c.bits_per_symbol
    if bits.size % bps:
        raise ConfigError(f"bit count {bits.size} not divisible by {bps}")
    weights = 1 << np.arange(bps - 1, -1, -1)
    return c._label_to_index[bits.reshape(-1, bps) @ weights]


def modulate(bits: np.ndarray, c: Constellation) -> np.ndarray:
    """Map a bit array (values 0/1, MSB-first per symbol) to points."""
    return c.points[indices_from_bits(bits, c)]


def deci_index(samples: np.ndarray, c: Constellation) -> np.ndarray:
    """Nearest-point index for each sample; ties go to the lowest index."""
    samples = np.atleast_1d(np.asarray(samples, dtype=np.complex128))
    # chunked so the (N, M) distance matrix stays small
    out = np.empty(samples.shape[0], dtype=np.int64)
    step = max(1, 1 << 18 >> max(c.bits_per_symbol - 2, 0))
    for i in range(0, samples.shape[0], step):
        block = samples[i:i + step]
        d2 = np.abs(block[:, None] - c.points[None, :]) ** 2
        out[i:i + step] = np.argmin(d2, axis=1)
    return out


def deci(samples: np.ndarray, c: Constellation) -> np.ndarray:
    """Hard decision: snap each sample to its nearest constellation point."""
    return c.points[deci_index(samples, c)]


def demap(symbols: np.ndarray, c: Constellation) -> np.ndarray:
    """Decided symbols (or arbitrary samples) back to bits, MSB first."""
    idx = deci_index(symbols, c)
    return demap_indices(idx, c)


def demap_indices(indices: np.ndarray, c: Constellation) -> np.ndarray:
    label_vals = c.labels[indices]
    bps = c.bits_per_symbol
    shifts = np.arange(bps - 1, -1, -1)
    return ((label_vals[:, None] >> shifts) & 1).astype(np.uint8).reshape(-1)


def qfunc(x):
    return 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))


def qpsk_ber_closed_form(eb_n0_db):
    """Gray-coded QPSK bit error rate on AWGN."""
    ebn0 = 10.0 ** (np.asarray(eb_n0_db, dtype=float) / 10.0)
    return qfunc(np.sqrt(2.0 * ebn0))


def awgn_symbol_ber(
    c: Constellation,
    es_n0_db: float,
    *,
    min_bits: int = 1_000_000,
    min_errors: int = 200,
    seed: int = 0,
) -> tuple[int, int]:
    """Monte Carlo BER of the ISI-free (Nyquist) symbol channel.

    Returns (bits, errors).  Deterministic for a given seed and budget;
    independent of how the caller schedules work.
    """
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0x5EF, int(es_n0_db * 4096) & 0x7FFFFFFF]))
    sigma2 = 10.0 ** (-es_n0_db / 10.0)
    bps = c.bits_per_symbol
    chunk = 1 << 15
    bits = errors = 0
    while bits < min_bits and errors < min_errors:
        tx_idx = rng.integers(0, c.size, size=chunk)
        noise = rng.normal(scale=math.sqrt(sigma2 / 2.0), size=(chunk, 2)) @ np.array([1.0, 1.0j])
        rx_idx = deci_index(c.points[tx_idx] + noise, c)
        errors += int(np.bitwise_count(c.labels[tx_idx] ^ c.labels[rx_idx]).sum())
        bits += chunk * bps
    return bits, errors


def theoretical_ber_reference(
    kind: str,
    es_n0_db_grid,
    *,
    mode: str = "auto",
    min_bits: int = 1_000_000,
    min_errors: int = 200,
    seed: int = 0,
) -> list[tuple[float, float, int, int]]:
    """ISI-free reference curve: (snr_db, ber, bits, errors) per grid point.

    mode "qfunc" uses the closed form (QPSK only); "nyquist-sim" runs the
    ideal symbol channel with the identical decision/demapping path;
    "auto" picks qfunc for QPSK and the simulation otherwise.  Closed-form
    points report bits = errors = 0.
    """
    c = build_constellation(kind)
    if mode == "auto":
        mode = "qfunc" if kind == "qpsk" else "nyquist-sim"
    out = []
    for snr in es_n0_db_grid:
        if mode == "qfunc":
            if kind != "qpsk":
                raise ConfigError("closed-form reference is only available for qpsk")
            ebn0 = snr - 10.0 * math.log10(c.bits_per_symbol)
            out.append((float(snr), float(qpsk_ber_closed_form(ebn0)), 0, 0))
        elif mode == "nyquist-sim":
            bits, errors = awgn_symbol_ber(
                c, float(snr), min_bits=min_bits, min_errors=min_errors, seed=seed
            )
            out.append((float(snr), errors / bits, bits, errors))
        else:
            raise ConfigError(f"unknown reference mode {mode!r}")
    return out
