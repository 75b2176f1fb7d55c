"""Square-root raised cosine shaping and ISI tap extraction.

The discrete pulse is sampled on a grid of `sps` chips per symbol
period, so a rational symbol-packing factor P/Q with sps = Q lands the
matched-filter output exactly on integer chip strides.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class SrrcSpec:
    """Root-raised-cosine FIR description.

    alpha: roll-off in (0, 1]; order: odd tap count; sps: chips per
    symbol period.
    """

    alpha: float
    order: int = 201
    sps: int = 10

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ConfigError(f"alpha {self.alpha} outside (0, 1]")
        if self.order % 2 == 0 or self.order < 3:
            raise ConfigError(f"order {self.order} must be odd and >= 3")
        if self.sps < 1:
            raise ConfigError(f"sps {self.sps} must be positive")


def srrc_time(t: float, alpha: float) -> float:
    """Un-normalized SRRC impulse value at time t (symbol periods).

    The two removable singularities (t = 0 and |t| = 1/(4 alpha)) use
    their analytic limits.
    """
    if t == 0.0:
        return 1.0 - alpha + 4.0 * alpha / math.pi
    if abs(abs(4.0 * alpha * t) - 1.0) < 1e-10:
        a = math.pi / (4.0 * alpha)
        return (alpha / math.sqrt(2.0)) * (
            (1.0 + 2.0 / math.pi) * math.sin(a) + (1.0 - 2.0 / math.pi) * math.cos(a)
        )
    num = math.sin(math.pi * t * (1.0 - alpha)) + 4.0 * alpha * t * math.cos(
        math.pi * t * (1.0 + alpha)
    )
    return num / (math.pi * t * (1.0 - (4.0 * alpha * t) ** 2))


def srrc_impulse(spec: SrrcSpec) -> np.ndarray:
    """Unit-energy SRRC FIR, symmetric about the center tap."""
    half = (spec.order - 1) // 2
    t = np.arange(-half, half + 1) / spec.sps
    h = np.array([srrc_time(ti, spec.alpha) for ti in t])
    return h / math.sqrt(float(np.sum(h * h)))


def autocorrelation(p: np.ndarray) -> np.ndarray:
    """Deterministic autocorrelation of a real FIR; length 2*len(p) - 1.

    For a unit-energy pulse the center lag equals 1.
    """
    p = np.asarray(p, dtype=float)
    return np.correlate(p, p, mode="full")


@dataclass(frozen=True)
class TapVector:
    """One-sided ISI taps at symbol spacing: taps[0] is the desired
    coefficient (1 after normalization), taps[n] multiplies the symbols
    n places away on either side."""

    taps: np.ndarray
    tau: Fraction
    span: int

    def __post_init__(self):
        if self.span != len(self.taps):
            raise ConfigError("span does not match tap count")
        if abs(self.taps[0] - 1.0) > 1e-9:
            raise ConfigError(f"center tap {self.taps[0]!r} != 1 after normalization")
        if self.span > 1 and np.max(np.abs(self.taps[1:])) > 1.0:
            raise ConfigError("side tap exceeds the desired coefficient")


def isi_taps(g: np.ndarray, tau: Fraction, span: int, *, sps: int) -> TapVector:
    """Sample the matched-filter autocorrelation at multiples of tau.

    g is a full autocorrelation sequence (odd length, peak centered).
    The stride sps * tau must be an integer number of chips.
    """
    tau = Fraction(tau)
    if not 0 < tau <= 1:
        raise ConfigError(f"tau {tau} outside (0, 1]")
    stride_frac = tau * sps
    if stride_frac.denominator != 1:
        raise ConfigError(f"sps {sps} times tau {tau} is not an integer chip stride")
    stride = int(stride_frac)
    g = np.asarray(g, dtype=float)
    if len(g) % 2 == 0:
        raise ConfigError("autocorrelation length must be odd")
    center = (len(g) - 1) // 2
    if span < 1:
        raise ConfigError("span must be >= 1")
    idx = center + stride * np.arange(span)
    if idx[-1] > len(g) - 1:
        raise ConfigError(
            f"span {span} at stride {stride} exceeds the autocorrelation extent"
        )
    taps = g[idx] / g[center]
    return TapVector(taps=taps, tau=tau, span=span)


def full_span(g_len: int, tau: Fraction, *, sps: int) -> int:
    """Largest span representable by a full autocorrelation of g_len taps."""
    stride = int(Fraction(tau) * sps)
    return (g_len - 1) // 2 // stride + 1


def sinc_taps(tau: Fraction, span: int) -> TapVector:
    """Ideal-sinc tap sequence (test mode): taps[n] = sinc(n * tau)."""
    tau = Fraction(tau)
    n = np.arange(span)
    taps = np.sinc(n * float(tau))
    return TapVector(taps=taps, tau=tau, span=span)


def chain_taps(alpha: float, tau: Fraction, span: int | None = None, *, order: int = 201, sps: int | None = None) -> TapVector:
    """Convenience: SRRC impulse -> autocorrelation -> taps in one step."""
    tau = Fraction(tau)
    if sps is None:
        sps = tau.denominator
    g = autocorrelation(srrc_impulse(SrrcSpec(alpha=alpha, order=order, sps=sps)))
    if span is None:
        span = full_span(len(g), tau, sps=sps)
    return isi_taps(g, tau, span, sps=sps)
