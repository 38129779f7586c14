"""The down-conversion state family.

Two half-wave plates parameterize the source: the first splits the pump
between two time bins, the second sets the polarization entanglement
produced in each bin. Together they select a four-mode Schmidt spectrum.
From a spectrum this module builds the two-photon state, the four-photon
(second-order) state and the truncated multi-order source emission.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from itertools import product

from .errors import ConfigError
from .fock import FockVector, creation_monomial, mode_a, mode_b, superpose

#: tolerance on the unit-sum constraint of a Schmidt spectrum
SPECTRUM_SUM_TOL = 1e-12

#: pump amplitudes above this are outside the perturbative regime
PUMP_WARN_LEVEL = 0.1


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Ordered nonnegative weights summing to one; the full entanglement
    content of the bipartite pure state family."""

    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.weights:
            raise ConfigError("spectrum needs at least one weight")
        for w in self.weights:
            if not math.isfinite(w) or w < 0.0 or w > 1.0 + SPECTRUM_SUM_TOL:
                raise ConfigError(f"weight {w} outside [0, 1]")
        total = sum(self.weights)
        if abs(total - 1.0) > SPECTRUM_SUM_TOL:
            raise ConfigError(f"weights sum to {total}, expected 1")

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def sum_sq(self) -> float:
        """Sum of squared weights: the purity of either marginal."""
        return sum(w * w for w in self.weights)

    @classmethod
    def uniform(cls, d: int) -> "SchmidtSpectrum":
        return cls(tuple(1.0 / d for _ in range(d)))


@dataclass(frozen=True)
class AnglePair:
    """Half-wave plate angles in radians (degrees only at the CLI boundary)."""

    theta1: float
    theta2: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.theta1) and math.isfinite(self.theta2)):
            raise ConfigError("angles must be finite")

    @classmethod
    def from_degrees(cls, theta1_deg: float, theta2_deg: float) -> "AnglePair":
        return cls(math.radians(theta1_deg), math.radians(theta2_deg))


def pump_amplitudes(theta1: float) -> tuple[float, float]:
    """Amplitudes of the two pump time bins after the first wave plate."""
    return (math.cos(2.0 * theta1), math.sin(2.0 * theta1))


def _basis_amplitudes(angles: AnglePair) -> tuple[float, float, float, float]:
    # basis order: (V,T1), (H,T1), (V,T2), (H,T2); the last carries the
    # minus sign of the second crystal pair
    c1, s1 = pump_amplitudes(angles.theta1)
    c2 = math.cos(2.0 * angles.theta2)
    s2 = math.sin(2.0 * angles.theta2)
    return (c1 * c2, c1 * s2, s1 * s2, -s1 * c2)


def schmidt_from_angles(angles: AnglePair) -> SchmidtSpectrum:
    """Four-mode spectrum selected by the wave-plate angles.

    Signs of the underlying amplitudes do not enter the weights; they are
    available separately through schmidt_signs_from_angles.
    """
    amps = _basis_amplitudes(angles)
    return SchmidtSpectrum(tuple(a * a for a in amps))


def schmidt_signs_from_angles(angles: AnglePair) -> tuple[int, int, int, int]:
    """Sign of each basis amplitude (+1 for zero amplitudes)."""
    return tuple(1 if a >= 0.0 else -1 for a in _basis_amplitudes(angles))


def _signs(spectrum: SchmidtSpectrum, phases) -> tuple[int, ...]:
    if phases is None:
        return tuple(1 for _ in spectrum.weights)
    phases = tuple(int(p) for p in phases)
    if len(phases) != spectrum.dim:
        raise ConfigError(
            f"phase list length {len(phases)} != spectrum dimension {spectrum.dim}"
        )
    if any(p not in (-1, 1) for p in phases):
        raise ConfigError("phases must be +1 or -1")
    return phases


def two_photon_state(spectrum: SchmidtSpectrum, phases=None) -> FockVector:
    """Normalized pair state: sum_i s_i sqrt(w_i) a_i† b_i† |vac>."""
    signs = _signs(spectrum, phases)
    d = spectrum.dim
    terms = [
        (s * math.sqrt(w), creation_monomial(d, [mode_a(i), mode_b(i)]))
        for i, (w, s) in enumerate(zip(spectrum.weights, signs))
        if w > 0.0
    ]
    return superpose(terms)


def four_photon_state(spectrum: SchmidtSpectrum, phases=None) -> FockVector:
    """Second-order state via the plain double sum:
    sum_ij s_i s_j sqrt(w_i w_j) a_i† a_j† b_i† b_j† |vac>."""
    signs = _signs(spectrum, phases)
    d = spectrum.dim
    live = [i for i, w in enumerate(spectrum.weights) if w > 0.0]
    terms = []
    for i, j in product(live, repeat=2):
        coeff = signs[i] * signs[j] * math.sqrt(
            spectrum.weights[i] * spectrum.weights[j]
        )
        mono = creation_monomial(d, [mode_a(i), mode_a(j), mode_b(i), mode_b(j)])
        terms.append((coeff, mono))
    return superpose(terms)


def four_photon_state_regrouped(spectrum: SchmidtSpectrum, phases=None) -> FockVector:
    """Same state, built from the bunching-grouped form: 2 sqrt(w_i w_j) for
    i < j plus the w_i a_i†² b_i†² diagonal. Kept as an independent
    construction so the two can be compared entry for entry."""
    signs = _signs(spectrum, phases)
    d = spectrum.dim
    live = [i for i, w in enumerate(spectrum.weights) if w > 0.0]
    terms = []
    for k, i in enumerate(live):
        for j in live[k + 1 :]:
            coeff = 2.0 * signs[i] * signs[j] * math.sqrt(
                spectrum.weights[i] * spectrum.weights[j]
            )
            mono = creation_monomial(d, [mode_a(i), mode_a(j), mode_b(i), mode_b(j)])
            terms.append((coeff, mono))
    for i in live:
        mono = creation_monomial(d, [mode_a(i), mode_a(i), mode_b(i), mode_b(i)])
        terms.append((spectrum.weights[i], mono))
    return superpose(terms)


def six_photon_state(spectrum: SchmidtSpectrum, phases=None) -> FockVector:
    """Third-order state, the triple-sum analogue of the double sum."""
    signs = _signs(spectrum, phases)
    d = spectrum.dim
    live = [i for i, w in enumerate(spectrum.weights) if w > 0.0]
    terms = []
    for i, j, k in product(live, repeat=3):
        coeff = signs[i] * signs[j] * signs[k] * math.sqrt(
            spectrum.weights[i] * spectrum.weights[j] * spectrum.weights[k]
        )
        mono = creation_monomial(
            d,
            [mode_a(i), mode_a(j), mode_a(k), mode_b(i), mode_b(j), mode_b(k)],
        )
        terms.append((coeff, mono))
    return superpose(terms)


@dataclass(frozen=True)
class TruncatedSource:
    """Source description: spectrum, pump amplitude and the photon-number
    order at which the emission series is truncated."""

    spectrum: SchmidtSpectrum
    pump_amplitude: float = 0.01
    truncation_order: int = 2
    phases: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if not 0.0 < self.pump_amplitude < 1.0:
            raise ConfigError(
                f"pump amplitude {self.pump_amplitude} outside (0, 1)"
            )
        if self.truncation_order not in (1, 2, 3):
            raise ConfigError(
                f"truncation order must be 1, 2 or 3, got {self.truncation_order}"
            )
        if self.pump_amplitude > PUMP_WARN_LEVEL:
            warnings.warn(
                f"pump amplitude {self.pump_amplitude} is outside the "
                f"perturbative regime (> {PUMP_WARN_LEVEL})",
                stacklevel=2,
            )


def truncated_source_state(source: TruncatedSource) -> FockVector:
    """Unnormalized emission: |vac> + sqrt(eta)|pair> + (eta/2!)|two pairs>
    (+ (eta^1.5/3!)|three pairs> at order 3)."""
    eta = source.pump_amplitude
    spectrum, phases = source.spectrum, source.phases
    terms = [
        (1.0, FockVector.vacuum(spectrum.dim)),
        (math.sqrt(eta), two_photon_state(spectrum, phases)),
    ]
    if source.truncation_order >= 2:
        terms.append((eta / 2.0, four_photon_state(spectrum, phases)))
    if source.truncation_order >= 3:
        terms.append((eta**1.5 / 6.0, six_photon_state(spectrum, phases)))
    return superpose(terms)
