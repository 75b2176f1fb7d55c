"""Transmit/receive chain for rationally packed symbol streams.

Symbols are spaced P chips apart on a Q-chips-per-symbol-period SRRC
grid, so the packing factor tau = P/Q <= 1 keeps every matched-filter
sampling instant on the chip grid.  P = Q is classical orthogonal
signaling.

SNR convention: `es_n0_db` is actual transmitted energy per symbol over
N0.  The transmit amplitude carries the sqrt(tau * Es) factor, which
keeps average transmit power independent of tau, and the chip-noise
variance is tau * Es * 10**(-es_n0_db/10) so that the tau = 1 chain
reproduces the textbook AWGN symbol channel exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.signal import fftconvolve

from .errors import ConfigError
from .pulse import SrrcSpec, TapVector, autocorrelation, full_span, isi_taps, srrc_impulse


@dataclass(frozen=True)
class FtnConfig:
    """Chain parameters: upsampling P, shaping grid Q, SRRC roll-off."""

    p_up: int
    q_down: int
    alpha: float
    order: int = 201
    es_n0_db: float = math.inf

    def __post_init__(self):
        if self.p_up < 1 or self.q_down < 1:
            raise ConfigError("P and Q must be positive")
        if self.p_up > self.q_down:
            raise ConfigError(
                f"P/Q = {self.p_up}/{self.q_down} > 1 would overlap beyond capacity"
            )
        SrrcSpec(alpha=self.alpha, order=self.order, sps=self.q_down)

    @property
    def tau(self) -> Fraction:
        """Packing factor, recorded gcd-reduced."""
        return Fraction(self.p_up, self.q_down)

    @property
    def srrc(self) -> SrrcSpec:
        return SrrcSpec(alpha=self.alpha, order=self.order, sps=self.q_down)

    @property
    def noise_variance_chip(self) -> float:
        """Complex chip-noise variance implied by es_n0_db."""
        if math.isinf(self.es_n0_db):
            return 0.0
        return float(self.tau) * 10.0 ** (-self.es_n0_db / 10.0)


@dataclass(frozen=True)
class ReceivedSequence:
    """Matched-filter output at symbol spacing, desired gain normalized
    to 1 so decisions compare directly against constellation points."""

    samples: np.ndarray
    noise_variance: float
    tau: Fraction

    @property
    def n_symbols(self) -> int:
        return len(self.samples)


def _pulse(cfg: FtnConfig) -> np.ndarray:
    return srrc_impulse(cfg.srrc)


def transmit(symbols: np.ndarray, cfg: FtnConfig) -> np.ndarray:
    """Upsample by P and shape; returns n*P + order - 1 chips."""
    symbols = np.asarray(symbols, dtype=np.complex128)
    if symbols.ndim != 1 or symbols.size == 0:
        raise ConfigError("transmit expects a non-empty 1-d symbol array")
    h = _pulse(cfg)
    up = np.zeros(symbols.size * cfg.p_up, dtype=np.complex128)
    up[:: cfg.p_up] = symbols
    return math.sqrt(float(cfg.tau)) * fftconvolve(up, h, mode="full")


def add_awgn(chips: np.ndarray, cfg: FtnConfig, rng: np.random.Generator) -> np.ndarray:
    """Add complex white noise at the chip rate (pre matched filter)."""
    sigma2 = cfg.noise_variance_chip
    if sigma2 == 0.0:
        return chips
    scale = math.sqrt(sigma2 / 2.0)
    noise = rng.normal(scale=scale, size=(len(chips), 2))
    return chips + noise[:, 0] + 1j * noise[:, 1]


def receive(chips: np.ndarray, cfg: FtnConfig) -> ReceivedSequence:
    """Matched filter, downsample at the symbol stride, normalize gain.

    The combined transmit+receive FIR delay is order - 1 chips; exactly
    the symbol count implied by the chip count is recovered.
    """
    chips = np.asarray(chips, dtype=np.complex128)
    n_frac = (len(chips) - cfg.order + 1) / cfg.p_up
    n = int(n_frac)
    if n_frac != n or n < 1:
        raise ConfigError(
            f"chip count {len(chips)} does not correspond to a whole symbol block"
        )
    h = _pulse(cfg)
    z = fftconvolve(chips, h, mode="full")
    y = z[cfg.order - 1 :: cfg.p_up][:n]
    g0 = float(np.dot(h, h))
    y = y / (math.sqrt(float(cfg.tau)) * g0)
    return ReceivedSequence(
        samples=y,
        noise_variance=cfg.noise_variance_chip / (float(cfg.tau) * g0),
        tau=cfg.tau,
    )


def chain_tap_vector(cfg: FtnConfig, span: int | None = None) -> TapVector:
    """Taps seen by the receiver for this chain; full span by default."""
    g = autocorrelation(_pulse(cfg))
    if span is None:
        span = full_span(len(g), cfg.tau, sps=cfg.q_down)
    return isi_taps(g, cfg.tau, span, sps=cfg.q_down)


def analytic_receive(
    symbols: np.ndarray,
    taps: TapVector,
    noise: np.ndarray | None = None,
) -> np.ndarray:
    """Symbol-rate model of the matched-filter output.

    y_k = sum over |k - n| < span of a_n * taps[|k - n|], with
    out-of-range symbols treated as zero, plus an optional precomputed
    noise sequence (see `colored_noise`).
    """
    symbols = np.asarray(symbols, dtype=np.complex128)
    kern = np.concatenate([taps.taps[::-1], taps.taps[1:]])
    # centered slice of the full convolution; numpy's own "same" mode
    # returns the wrong window when the kernel outgrows the signal
    y = np.convolve(symbols, kern, mode="full")[taps.span - 1 : taps.span - 1 + len(symbols)]
    if noise is not None:
        if len(noise) != len(y):
            raise ConfigError("noise length does not match the symbol count")
        y = y + noise
    return y


def colored_noise(n: int, cfg: FtnConfig, rng: np.random.Generator) -> np.ndarray:
    """Matched-filter noise at symbol spacing for the analytic path.

    Built the same way the full chain builds it - white chip noise
    through the receive filter, sampled at the symbol stride - so its
    autocovariance at lag m is noise_variance * taps[m] by construction.
    """
    sigma2 = cfg.noise_variance_chip
    if sigma2 == 0.0:
        return np.zeros(n, dtype=np.complex128)
    h = _pulse(cfg)
    chips = n * cfg.p_up + cfg.order - 1
    scale = math.sqrt(sigma2 / 2.0)
    white = rng.normal(scale=scale, size=(chips, 2))
    w = fftconvolve(white[:, 0] + 1j * white[:, 1], h, mode="full")
    w = w[cfg.order - 1 :: cfg.p_up][:n]
    g0 = float(np.dot(h, h))
    return w / (math.sqrt(float(cfg.tau)) * g0)
