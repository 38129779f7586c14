"""Beamsplitter and coincidence-filter tests, including the independent
construction of the expected coincidence state."""

import math

import numpy as np
import pytest

from pdclab.errors import ConfigError
from pdclab.fock import (
    creation_monomial,
    inner,
    mode_a,
    mode_a1,
    mode_a2,
    mode_b,
    occupation,
    states_allclose,
    superpose,
)
from pdclab.optics import coincidence_component, split_side_a
from pdclab.source import (
    SchmidtSpectrum,
    TruncatedSource,
    four_photon_state,
    truncated_source_state,
    two_photon_state,
)


def _random_spectrum(rng, d):
    raw = rng.exponential(size=d)
    raw /= raw.sum()
    return SchmidtSpectrum(tuple(float(w) for w in raw))


def test_single_photon_split():
    split = split_side_a(creation_monomial(2, [mode_a(0)]))
    s = 1.0 / math.sqrt(2.0)
    assert abs(split.amplitude(occupation({mode_a1(0): 1})) - s) < 1e-15
    assert abs(split.amplitude(occupation({mode_a2(0): 1})) - s) < 1e-15
    assert len(split) == 2


def test_two_photon_one_mode_split():
    # binomial amplitudes sqrt(C(2,k)/4): 1/2, 1/sqrt(2), 1/2
    start = superpose([(1.0 / math.sqrt(2.0), creation_monomial(1, [mode_a(0), mode_a(0)]))])
    assert abs(start.norm_sq() - 1.0) < 1e-15
    split = split_side_a(start)
    assert abs(split.amplitude(occupation({mode_a1(0): 2})) - 0.5) < 1e-15
    assert abs(split.amplitude(occupation({mode_a2(0): 2})) - 0.5) < 1e-15
    mixed = occupation({mode_a1(0): 1, mode_a2(0): 1})
    assert abs(split.amplitude(mixed) - 1.0 / math.sqrt(2.0)) < 1e-15


def test_split_preserves_norm():
    rng = np.random.default_rng(6)
    for _ in range(20):
        terms = []
        for _ in range(5):
            picks = []
            for _ in range(int(rng.integers(1, 4))):
                i = int(rng.integers(0, 3))
                picks.append(mode_a(i) if rng.random() < 0.6 else mode_b(i))
            terms.append((complex(rng.normal(), rng.normal()), creation_monomial(3, picks)))
        state = superpose(terms)
        assert abs(split_side_a(state).norm_sq() - state.norm_sq()) < 1e-12


def test_split_rejects_output_photons():
    with pytest.raises(ConfigError):
        split_side_a(creation_monomial(2, [mode_a1(0)]))


def test_coincidence_rejects_unsplit_input():
    with pytest.raises(ConfigError):
        coincidence_component(creation_monomial(2, [mode_a(0)]))


def test_coincidence_norm_bell():
    # 1 + sum w^2 at w = (1/2, 1/2)
    quad = four_photon_state(SchmidtSpectrum((0.5, 0.5)))
    coinc = coincidence_component(split_side_a(quad))
    assert abs(coinc.norm_sq() - 1.5) < 1e-12


def test_coincidence_norm_single_mode():
    # bunched diagonal only: 1 + 1
    quad = four_photon_state(SchmidtSpectrum((1.0,)))
    coinc = coincidence_component(split_side_a(quad))
    assert abs(coinc.norm_sq() - 2.0) < 1e-12


def test_pair_state_gives_no_coincidences():
    # one photon stays on side B, so both output ports cannot fire
    pair = two_photon_state(SchmidtSpectrum((0.5, 0.5)))
    coinc = coincidence_component(split_side_a(pair))
    assert len(coinc) == 0


def test_coincidence_chain_random():
    rng = np.random.default_rng(7)
    for _ in range(60):
        spectrum = _random_spectrum(rng, int(rng.integers(1, 7)))
        quad = four_photon_state(spectrum)
        coinc = coincidence_component(split_side_a(quad))
        target = 1.0 + spectrum.sum_sq
        assert abs(coinc.norm_sq() - target) < 1e-12
        assert abs(coinc.norm_sq() - 0.5 * inner(quad, quad).real) < 1e-12


def test_coincidence_matches_direct_construction():
    # independent construction: substituting a_i† -> (a1_i† + a2_i†)/sqrt(2)
    # into the double sum and keeping the one-photon-per-port terms leaves
    # sum_ij sqrt(w_i w_j) a1_i† a2_j† b_i† b_j† |vac>
    rng = np.random.default_rng(8)
    for _ in range(20):
        spectrum = _random_spectrum(rng, int(rng.integers(1, 6)))
        d = spectrum.dim
        live = [i for i, w in enumerate(spectrum.weights) if w > 0.0]
        terms = []
        for i in live:
            for j in live:
                coeff = math.sqrt(spectrum.weights[i] * spectrum.weights[j])
                mono = creation_monomial(d, [mode_a1(i), mode_a2(j), mode_b(i), mode_b(j)])
                terms.append((coeff, mono))
        oracle = superpose(terms)
        computed = coincidence_component(split_side_a(four_photon_state(spectrum)))
        assert states_allclose(computed, oracle, atol=1e-12)


def test_partition_reconstructs_split():
    quad = four_photon_state(SchmidtSpectrum((0.5, 0.5)))
    split = split_side_a(quad)
    from pdclab.fock import Port, filter_by_port_counts

    parts = []
    for n1 in range(3):
        n2 = 2 - n1
        parts.append((1.0, filter_by_port_counts(split, {Port.A1: n1, Port.A2: n2})))
    assert states_allclose(superpose(parts), split, atol=1e-12)


def test_truncated_source_coincidences_come_from_four_photon_sector():
    spectrum = SchmidtSpectrum((0.5, 0.5))
    eta = 0.01
    full = truncated_source_state(TruncatedSource(spectrum, pump_amplitude=eta))
    coinc_full = coincidence_component(split_side_a(full))
    quad_only = superpose([(eta / 2.0, four_photon_state(spectrum))])
    coinc_quad = coincidence_component(split_side_a(quad_only))
    assert states_allclose(coinc_full, coinc_quad, atol=1e-15)
    assert abs(coinc_full.norm_sq() - (eta / 2.0) ** 2 * 1.5) < 1e-18
