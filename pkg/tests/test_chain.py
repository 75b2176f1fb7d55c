"""Waveform chain against the tap-domain shortcut."""
from fractions import Fraction

import numpy as np
import pytest

from ftnsic.chain import (
    FtnConfig,
    analytic_receive,
    chain_tap_vector,
    colored_noise,
    receive,
    transmit,
)
from ftnsic.constellations import build_constellation, modulate
from ftnsic.errors import ConfigError
from conftest import MODERATE


def _random_symbols(n: int, kind: str, rng: np.random.Generator) -> np.ndarray:
    c = build_constellation(kind)
    bits = rng.integers(0, 2, n * c.bits_per_symbol)
    return modulate(bits, c)


@pytest.mark.parametrize("p_up,q_down", [(4, 5), (9, 10), (10, 10)])
def test_chain_matches_analytic_noiseless(p_up, q_down, rng):
    cfg = FtnConfig(p_up=p_up, q_down=q_down, alpha=0.4)
    sym = _random_symbols(400, "qpsk", rng)
    chips = transmit(sym, cfg)
    got = receive(chips, cfg).samples
    want = analytic_receive(sym, chain_tap_vector(cfg))
    assert np.max(np.abs(got - want)) < 1e-9


def test_receive_normalizes_center_tap(rng, moderate_chain):
    # a lone symbol must come back unchanged: G1 = 1 after scaling
    sym = np.array([1.0 + 1.0j]) / np.sqrt(2.0)
    out = receive(transmit(sym, moderate_chain), moderate_chain).samples
    assert abs(out[0] - sym[0]) < 1e-12


def test_receive_rejects_wrong_chip_count(moderate_chain):
    sym = np.ones(16, dtype=complex)
    chips = transmit(sym, moderate_chain)
    with pytest.raises(ConfigError):
        receive(chips[:-1], moderate_chain)


def test_noise_variance_follows_snr():
    for es in (0.0, 6.0, 13.0):
        cfg = FtnConfig(es_n0_db=es, **MODERATE)
        out = receive(transmit(np.ones(8, dtype=complex), cfg), cfg)
        assert abs(out.noise_variance - 10.0 ** (-es / 10.0)) < 1e-12


def test_colored_noise_autocovariance(moderate_chain):
    """Matched-filter noise: cov[m] = sigma^2 G_{m+1} on the symbol grid."""
    cfg = FtnConfig(es_n0_db=6.0, **MODERATE)
    rng = np.random.default_rng(99)
    n = 200_000
    z = colored_noise(n, cfg, rng)
    sigma2 = 10.0 ** (-6.0 / 10.0)
    taps = chain_tap_vector(cfg, span=4).taps
    for m in range(4):
        cov = np.mean(z[: n - m] * np.conj(z[m:])).real
        assert abs(cov - sigma2 * taps[m]) < 0.05 * sigma2, m


def test_colored_noise_components_balanced(moderate_chain):
    rng = np.random.default_rng(5)
    z = colored_noise(100_000, FtnConfig(es_n0_db=3.0, **MODERATE), rng)
    ratio = np.var(z.real) / np.var(z.imag)
    assert 0.95 < ratio < 1.05


def test_analytic_receive_noise_length_check(moderate_chain):
    tv = chain_tap_vector(moderate_chain, span=6)
    sym = np.ones(10, dtype=complex)
    with pytest.raises(ConfigError):
        analytic_receive(sym, tv, noise=np.zeros(9, dtype=complex))


def test_config_validation():
    with pytest.raises(ConfigError):
        FtnConfig(p_up=6, q_down=5, alpha=0.3)  # faster than tau = 1? no: >1
    with pytest.raises(ConfigError):
        FtnConfig(p_up=0, q_down=5, alpha=0.3)
    cfg = FtnConfig(p_up=4, q_down=5, alpha=0.3)
    assert cfg.tau == Fraction(4, 5)
    assert FtnConfig(p_up=8, q_down=10, alpha=0.3).tau == Fraction(4, 5)


def test_transmit_energy_scales_with_tau(moderate_chain, rng):
    # per-symbol transmit energy is tau: packing symbols closer in time
    # at fixed power shrinks the energy each one carries
    sym = _random_symbols(2000, "qpsk", rng)
    chips = transmit(sym, moderate_chain)
    energy = float(np.sum(np.abs(chips) ** 2)) / len(sym)
    assert abs(energy - float(moderate_chain.tau)) < 0.02
