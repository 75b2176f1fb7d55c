"""Capacity of pulse-shaped transmission over the AWGN channel.

Three related figures, all of the form

    C = integral_0^W  log2(1 + (2 Pbar / N0) |P(f)|^2)  df

differing only in the one-sided bandwidth W: the Shannon capacity for a
caller-chosen W, the accelerated-signaling value with W = 1/(2 tau T_s),
and the Nyquist value with W = 1/(2 T_s).  Over the Nyquist band the
root-raised-cosine integrand is constant, so that one collapses to the
closed form (1/(2 T_s)) log2(1 + 2 Pbar T_s / N0).

The pulse spectrum enters analytically rather than via an FFT of the
truncated impulse response: for a unit-energy root-raised-cosine pulse
|P(f)|^2 is exactly the raised-cosine frequency response, flat at T_s
out to (1 - alpha)/(2 T_s) and rolling off to zero at
(1 + alpha)/(2 T_s).  This keeps truncation bias out of a figure that
has an exact expression.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from scipy.integrate import quad

from .errors import ConfigError, NumericsError

__all__ = [
    "CapacityQuery",
    "srrc_power_spectrum",
    "sinc_power_spectrum",
    "srrc_query",
    "sinc_query",
    "shannon_capacity",
    "ftn_capacity",
    "nyquist_capacity",
]

# Quadrature targets: the integrals are advertised at 1e-8 relative
# accuracy, and a query is rejected if its spectrum does not carry unit
# pulse energy to 1e-6.
_QUAD_EPSREL = 1e-8
_ENERGY_TOL = 1e-6


def srrc_power_spectrum(f: float, alpha: float, ts: float = 1.0) -> float:
    """|P(f)|^2 of the unit-energy root-raised-cosine pulse.

    Equals the raised-cosine frequency response: ts inside the flat
    region, a half-cosine taper across the rolloff band, zero beyond
    (1 + alpha)/(2 ts).  alpha = 0 degenerates to the sinc brick wall.
    """
    fa = abs(f)
    lo = (1.0 - alpha) / (2.0 * ts)
    hi = (1.0 + alpha) / (2.0 * ts)
    if fa <= lo:
        return ts
    if fa >= hi:
        return 0.0
    return 0.5 * ts * (1.0 + math.cos(math.pi * ts / alpha * (fa - lo)))


def sinc_power_spectrum(f: float, ts: float = 1.0) -> float:
    """|P(f)|^2 of the unit-energy sinc pulse: flat out to 1/(2 ts)."""
    return ts if abs(f) <= 1.0 / (2.0 * ts) else 0.0


@dataclass(frozen=True)
class CapacityQuery:
    """One capacity evaluation point.

    Attributes:
        spectrum: one-sided |P(f)|^2 in units of ts (unit pulse energy).
        p_bar: average transmit power, normalized.
        n0: one-sided noise power spectral density.
        ts: symbol period of the underlying Nyquist system.
        tau: acceleration factor in (0, 1].
        edges: frequencies where the integrand kinks, ascending; the
            last one bounds the spectrum support.
    """

    spectrum: Callable[[float], float]
    p_bar: float
    n0: float
    ts: float
    tau: float
    edges: tuple[float, ...]

    def __post_init__(self):
        if self.p_bar < 0:
            raise ConfigError(f"average power {self.p_bar} must be >= 0")
        if self.n0 <= 0 or self.ts <= 0:
            raise ConfigError("n0 and ts must be positive")
        if not 0.0 < self.tau <= 1.0:
            raise ConfigError(f"tau {self.tau} outside (0, 1]")
        if not self.edges or any(e <= 0 for e in self.edges):
            raise ConfigError("edges must be positive and nonempty")
        support = self.edges[-1]
        inner = [e for e in self.edges[:-1] if e < support]
        energy, _ = quad(self.spectrum, 0.0, support, points=inner or None)
        if abs(2.0 * energy - 1.0) > _ENERGY_TOL:
            raise ConfigError(
                f"spectrum carries energy {2.0 * energy!r}, expected 1 "
                f"(unit-energy pulse)"
            )


def srrc_query(
    alpha: float, tau: float, p_bar: float, n0: float, ts: float = 1.0
) -> CapacityQuery:
    """Query for the root-raised-cosine pulse at rolloff `alpha`."""
    if not 0.0 <= alpha <= 1.0:
        raise ConfigError(f"alpha {alpha} outside [0, 1]")
    lo = (1.0 - alpha) / (2.0 * ts)
    hi = (1.0 + alpha) / (2.0 * ts)
    edges = (hi,) if hi == lo else (lo, hi)
    return CapacityQuery(
        spectrum=lambda f: srrc_power_spectrum(f, alpha, ts),
        p_bar=p_bar,
        n0=n0,
        ts=ts,
        tau=tau,
        edges=edges,
    )


def sinc_query(tau: float, p_bar: float, n0: float, ts: float = 1.0) -> CapacityQuery:
    """Query for the ideal sinc pulse (brick-wall spectrum)."""
    return CapacityQuery(
        spectrum=lambda f: sinc_power_spectrum(f, ts),
        p_bar=p_bar,
        n0=n0,
        ts=ts,
        tau=tau,
        edges=(1.0 / (2.0 * ts),),
    )


def shannon_capacity(q: CapacityQuery, w: float) -> float:
    """Capacity in bits/s over the one-sided bandwidth [0, w]."""
    if w <= 0:
        raise ConfigError(f"bandwidth {w} must be positive")
    gain = 2.0 * q.p_bar / q.n0

    def integrand(f: float) -> float:
        return math.log2(1.0 + gain * q.spectrum(f))

    inner = [e for e in q.edges if 0.0 < e < w]
    value, abserr = quad(
        integrand, 0.0, w, points=inner or None, epsrel=_QUAD_EPSREL, limit=200
    )
    if abserr > max(1e-7 * abs(value), 1e-12):
        raise NumericsError(
            f"capacity quadrature error estimate {abserr!r} exceeds "
            f"tolerance at W={w!r}"
        )
    return value


def ftn_capacity(q: CapacityQuery) -> float:
    """Capacity honoring the accelerated bandwidth W = 1/(2 tau ts)."""
    return shannon_capacity(q, 1.0 / (2.0 * q.tau * q.ts))


def nyquist_capacity(q: CapacityQuery) -> float:
    """Closed-form capacity of the matching Nyquist-rate system.

    The integrand is the full-height plateau across [0, 1/(2 ts)], so
    the integral is exactly the plateau value times the bandwidth.
    """
    return math.log2(1.0 + 2.0 * q.p_bar * q.ts / q.n0) / (2.0 * q.ts)
