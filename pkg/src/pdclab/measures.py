"""Entanglement measures for bipartite pure states.

Two independent routes to the same number: the marginal-purity formula
C = sqrt(2(1 - Tr rho1^2)), and the expectation of the two-copy
antisymmetric projector, C^2 = 4 Tr(P_minus rho1 x rho1). The package
leans on their agreement as a continuous self-check, together with the
identity tying the symmetric-projection expectation on two copies of the
pair state to the norm of the four-photon state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .fock import FockVector, Port, Side, inner
from .source import AnglePair, SchmidtSpectrum, four_photon_state, pump_amplitudes

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
EIGENVALUE_FLOOR = -1e-10
#: slack allowed on the norm of states handed to reduced_density
STATE_NORM_TOL = 1e-9


@dataclass(frozen=True)
class DensityMatrix:
    """Validated reduced density matrix with its internal-index labels."""

    matrix: np.ndarray
    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ConfigError(f"density matrix must be square, got shape {m.shape}")
        if len(self.labels) != m.shape[0]:
            raise ConfigError("label count does not match matrix dimension")
        if np.abs(m - m.conj().T).max() > HERMITICITY_TOL:
            raise ConfigError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > TRACE_TOL:
            raise ConfigError(f"trace {np.trace(m).real} != 1")
        if np.linalg.eigvalsh(m).min() < EIGENVALUE_FLOOR:
            raise ConfigError("density matrix has a significantly negative eigenvalue")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _pair_amplitudes(state: FockVector) -> np.ndarray:
    """Amplitude matrix C[i, j] of a one-photon-per-side state."""
    d = state.dim
    c = np.zeros((d, d), dtype=complex)
    for occ, amp in state.entries.items():
        if len(occ) != 2:
            raise ConfigError("state is not in the one-photon-per-side sector")
        (ma, na), (mb, nb) = occ
        ok = (
            na == 1
            and nb == 1
            and ma.side == Side.A
            and ma.port == Port.SOURCE
            and mb.side == Side.B
        )
        if not ok:
            raise ConfigError("state is not in the one-photon-per-side sector")
        c[ma.internal, mb.internal] = amp
    return c


def reduced_density(state: FockVector) -> DensityMatrix:
    """Partial trace over side B of a normalized pair state."""
    c = _pair_amplitudes(state)
    norm_sq = float(np.sum(np.abs(c) ** 2))
    if abs(norm_sq - 1.0) > STATE_NORM_TOL:
        raise ConfigError(f"state norm^2 {norm_sq} is not 1")
    rho = c @ c.conj().T
    rho /= np.trace(rho).real
    return DensityMatrix(matrix=rho, labels=tuple(range(state.dim)))


def purity(rho: DensityMatrix) -> float:
    """Tr rho^2, between 1/d and 1."""
    m = rho.matrix
    return float(np.real(np.trace(m @ m)))


def i_concurrence(state: FockVector) -> float:
    """sqrt(2 (1 - Tr rho1^2)) of a normalized bipartite pure state."""
    p = purity(reduced_density(state))
    return math.sqrt(max(0.0, 2.0 * (1.0 - p)))


def max_i_concurrence(d1: int, d2: int) -> float:
    """Largest attainable value on a d1 x d2 system: sqrt(2(M-1)/M)."""
    if d1 < 1 or d2 < 1:
        raise ConfigError("dimensions must be >= 1")
    m = min(d1, d2)
    return math.sqrt(2.0 * (m - 1) / m)


@dataclass(frozen=True)
class TwoCopyOperator:
    """Projector onto the exchange-symmetric subspace of two copies of one
    subsystem, as an explicit d^2 x d^2 matrix on the product basis."""

    p_plus: np.ndarray

    def __post_init__(self) -> None:
        p = self.p_plus
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise ConfigError(f"projector must be square, got shape {p.shape}")
        d = self.dim
        if d * d != p.shape[0]:
            raise ConfigError(f"projector size {p.shape[0]} is not a perfect square")
        if np.abs(p - p.conj().T).max() > HERMITICITY_TOL:
            raise ConfigError("projector is not Hermitian")
        if np.abs(p @ p - p).max() > 1e-10:
            raise ConfigError("projector is not idempotent")

    @property
    def dim(self) -> int:
        return int(round(math.sqrt(self.p_plus.shape[0])))

    @property
    def p_minus(self) -> np.ndarray:
        return np.eye(self.p_plus.shape[0]) - self.p_plus

    @property
    def a_hat(self) -> np.ndarray:
        """The concurrence observable, four times the antisymmetric projector."""
        return 4.0 * self.p_minus


def symmetric_projector(d: int) -> TwoCopyOperator:
    """Build the symmetric projector from its dyads: symmetrized |ij> pairs
    for i < j plus the diagonal |ii> terms. Rank d(d+1)/2."""
    if d < 1:
        raise ConfigError("dimension must be >= 1")
    p = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(i + 1, d):
            v = np.zeros(d * d)
            v[i * d + j] = 1.0
            v[j * d + i] = 1.0
            p += 0.5 * np.outer(v, v)
    for i in range(d):
        v = np.zeros(d * d)
        v[i * d + i] = 1.0
        p += np.outer(v, v)
    return TwoCopyOperator(p_plus=p)


def concurrence_via_projector(state: FockVector) -> float:
    """C from the two-copy observable: sqrt(4 Tr(P_minus rho1 x rho1))."""
    rho = reduced_density(state).matrix
    proj = symmetric_projector(rho.shape[0])
    val = np.real(np.trace(proj.p_minus @ np.kron(rho, rho)))
    return math.sqrt(max(0.0, 4.0 * val))


def pseudo_copy_identity(spectrum: SchmidtSpectrum) -> tuple[float, float]:
    """Both sides of the pseudo-copy relation.

    Left: the symmetric-projection expectation 4<P_plus> on two genuine
    copies of the pair state, contracted explicitly on the four-party
    amplitude tensor (copy modes relabeled as a second register). Right:
    the squared norm of the four-photon state from its Fock expansion.
    Both equal 2(1 + sum_i w_i^2).
    """
    d = spectrum.dim
    amp = np.sqrt(np.asarray(spectrum.weights))
    # tensor over (a, a', b, b'); b registers pinned to their partner labels
    t = np.zeros((d, d, d, d))
    for i in range(d):
        for j in range(d):
            t[i, j, i, j] = amp[i] * amp[j]
    v = t.reshape(d * d, d * d)
    p_plus = symmetric_projector(d).p_plus
    lhs = 4.0 * float(np.real(np.einsum("ab,ac,cb->", v.conj(), p_plus, v)))
    quad = four_photon_state(spectrum)
    rhs = float(inner(quad, quad).real)
    return lhs, rhs


def polarization_sub_concurrence(angles: AnglePair) -> float:
    """Concurrence left in the polarization labels once the time-bin label
    is traced out: 2 |(cos^2 2t1 - sin^2 2t1) cos 2t2 sin 2t2|."""
    c1, s1 = pump_amplitudes(angles.theta1)
    c2 = math.cos(2.0 * angles.theta2)
    s2 = math.sin(2.0 * angles.theta2)
    return abs(2.0 * (c1 * c1 - s1 * s1) * c2 * s2)
