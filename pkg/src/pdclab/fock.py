"""Sparse bosonic state vectors over labeled optical modes.

A state is a map from occupation configurations to complex amplitudes.
Modes are labeled by station side (A or B), output port (the undivided
source beam, or the two beamsplitter outputs A1/A2 on side A) and an
internal index running over the d-dimensional label space (polarization
and time-bin, in the intended experiment).

Every state handled here is a polynomial of creation operators acting on
vacuum followed by occupancy projections, so only creation, superposition,
inner products and port filtering are exposed; annihilation is never
needed. All operations are pure and return new vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Mapping, Sequence

from .errors import ConfigError, FockError

#: amplitudes below this magnitude are dropped when states are combined
PRUNE_TOL = 1e-15

#: defensive ceiling on the total photon number of any stored configuration
#: (two photons per down-conversion order, third order at most)
MAX_TOTAL_PHOTONS = 6


class Side(IntEnum):
    A = 0
    B = 1


class Port(IntEnum):
    SOURCE = 0
    A1 = 1
    A2 = 2


@dataclass(frozen=True, order=True)
class ModeId:
    """One bosonic mode: (side, port, internal index).

    Ordering is lexicographic in (side, port, internal), which fixes the
    canonical occupation layout used as dictionary keys.
    """

    side: Side
    port: Port
    internal: int

    def __post_init__(self) -> None:
        if self.internal < 0:
            raise ConfigError(f"internal mode index must be >= 0, got {self.internal}")
        if self.side == Side.B and self.port != Port.SOURCE:
            raise ConfigError("side-B modes exist only on the source port")


def mode_a(i: int) -> ModeId:
    """Side-A source mode with internal index i."""
    return ModeId(Side.A, Port.SOURCE, i)


def mode_b(i: int) -> ModeId:
    """Side-B mode with internal index i."""
    return ModeId(Side.B, Port.SOURCE, i)


def mode_a1(i: int) -> ModeId:
    """Side-A beamsplitter output port 1, internal index i."""
    return ModeId(Side.A, Port.A1, i)


def mode_a2(i: int) -> ModeId:
    """Side-A beamsplitter output port 2, internal index i."""
    return ModeId(Side.A, Port.A2, i)


#: canonical occupation key: ((mode, count), ...) sorted by mode, counts >= 1
Occupation = tuple[tuple[ModeId, int], ...]


def occupation(counts: Mapping[ModeId, int]) -> Occupation:
    """Build a canonical occupation key from a mode -> photon count map."""
    for mode, n in counts.items():
        if n < 0:
            raise ConfigError(f"negative photon count {n} on {mode}")
    return tuple(sorted((m, int(n)) for m, n in counts.items() if n > 0))


def total_photons(occ: Occupation) -> int:
    return sum(n for _, n in occ)


def side_a_port_counts(occ: Occupation) -> dict[Port, int]:
    """Photon totals per port, counting side-A modes only.

    Side-B occupancy is deliberately never constrained by port filters: the
    measurement scheme reads one side of the source and leaves the other
    undetected.
    """
    counts = {Port.SOURCE: 0, Port.A1: 0, Port.A2: 0}
    for mode, n in occ:
        if mode.side == Side.A:
            counts[mode.port] += n
    return counts


@dataclass(frozen=True)
class FockVector:
    """Sparse state vector: occupation -> complex amplitude, plus the
    internal dimension d shared by all its modes.

    Instances are treated as immutable; operations return new vectors.
    Unnormalized vectors are legal (the down-conversion expansion is used
    unnormalized by convention).
    """

    entries: dict[Occupation, complex] = field(default_factory=dict)
    dim: int = 1

    @classmethod
    def vacuum(cls, dim: int) -> "FockVector":
        if dim < 1:
            raise ConfigError(f"dimension must be >= 1, got {dim}")
        return cls(entries={(): 1.0 + 0.0j}, dim=dim)

    @classmethod
    def zero(cls, dim: int) -> "FockVector":
        return cls(entries={}, dim=dim)

    def norm_sq(self) -> float:
        return sum(abs(a) ** 2 for a in self.entries.values())

    def amplitude(self, occ: Occupation) -> complex:
        return self.entries.get(occ, 0.0 + 0.0j)

    def __len__(self) -> int:
        return len(self.entries)


def _check_mode(state: FockVector, mode: ModeId) -> None:
    if mode.internal >= state.dim:
        raise ConfigError(
            f"mode internal index {mode.internal} out of range for dimension {state.dim}"
        )


def apply_creation(state: FockVector, mode: ModeId, times: int = 1) -> FockVector:
    """Apply the creation operator for `mode` to every entry, `times` times.

    The amplitude picks up the bosonic factor sqrt((n+1)(n+2)...(n+times))
    where n is the prior count in that mode. Bijective on occupations, so
    the entry count never grows.
    """
    if times < 1:
        raise ConfigError(f"times must be >= 1, got {times}")
    _check_mode(state, mode)
    out: dict[Occupation, complex] = {}
    for occ, amp in state.entries.items():
        counts = dict(occ)
        n = counts.get(mode, 0)
        if total_photons(occ) + times > MAX_TOTAL_PHOTONS:
            raise FockError(
                f"creation would exceed the {MAX_TOTAL_PHOTONS}-photon ceiling"
            )
        factor = math.sqrt(math.prod(range(n + 1, n + times + 1)))
        counts[mode] = n + times
        out[occupation(counts)] = amp * factor
    return FockVector(entries=out, dim=state.dim)


def creation_monomial(dim: int, modes: Sequence[ModeId]) -> FockVector:
    """State obtained by applying the listed creation operators to vacuum."""
    state = FockVector.vacuum(dim)
    for mode in modes:
        state = apply_creation(state, mode)
    return state


def superpose(terms: Iterable[tuple[complex, FockVector]]) -> FockVector:
    """Entry-wise linear combination; amplitudes below PRUNE_TOL are dropped."""
    terms = list(terms)
    if not terms:
        raise ConfigError("superpose needs at least one term")
    dim = terms[0][1].dim
    acc: dict[Occupation, complex] = {}
    for coeff, vec in terms:
        if vec.dim != dim:
            raise ConfigError(f"mixed dimensions in superpose: {vec.dim} != {dim}")
        for occ, amp in vec.entries.items():
            acc[occ] = acc.get(occ, 0.0 + 0.0j) + coeff * amp
    pruned = {occ: a for occ, a in acc.items() if abs(a) >= PRUNE_TOL}
    return FockVector(entries=pruned, dim=dim)


def inner(x: FockVector, y: FockVector) -> complex:
    """Inner product <x|y> over the shared occupations."""
    if x.dim != y.dim:
        raise ConfigError(f"dimension mismatch in inner: {x.dim} != {y.dim}")
    if len(x.entries) > len(y.entries):
        return complex(inner(y, x).conjugate())
    total = 0.0 + 0.0j
    for occ, ax in x.entries.items():
        ay = y.entries.get(occ)
        if ay is not None:
            total += ax.conjugate() * ay
    return total


def filter_by_port_counts(
    state: FockVector, required: Mapping[Port, int]
) -> FockVector:
    """Keep exactly the entries whose side-A per-port photon totals match
    `required`; amplitudes are untouched (unrenormalized projection).

    Ports absent from `required` are unconstrained, as is all of side B.
    """
    kept: dict[Occupation, complex] = {}
    for occ, amp in state.entries.items():
        counts = side_a_port_counts(occ)
        if all(counts[port] == want for port, want in required.items()):
            kept[occ] = amp
    return FockVector(entries=kept, dim=state.dim)


def states_allclose(x: FockVector, y: FockVector, atol: float = 1e-12) -> bool:
    """Entry-wise comparison of two vectors within an absolute tolerance."""
    if x.dim != y.dim:
        return False
    for occ in set(x.entries) | set(y.entries):
        if abs(x.amplitude(occ) - y.amplitude(occ)) > atol:
            return False
    return True
