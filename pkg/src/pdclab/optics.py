"""Linear optics on the A station: the symmetric beamsplitter and the
coincidence filter behind it.

The splitter is mode-blind (it acts the same on every internal label) and
real symmetric, a† -> (a1† + a2†)/sqrt(2); all measured quantities are
magnitudes, so no relative phase convention is needed.
"""

from __future__ import annotations

import math
from itertools import product

from .errors import ConfigError
from .fock import (
    FockVector,
    Occupation,
    Port,
    Side,
    filter_by_port_counts,
    mode_a1,
    mode_a2,
    occupation,
)


def _branches(internal: int, n: int) -> list[tuple[dict, float]]:
    # one source mode with n photons -> sqrt(C(n,k)/2^n) on (A1:k, A2:n-k)
    out = []
    for k in range(n + 1):
        coeff = math.sqrt(math.comb(n, k) / 2.0**n)
        counts: dict = {}
        if k:
            counts[mode_a1(internal)] = k
        if n - k:
            counts[mode_a2(internal)] = n - k
        out.append((counts, coeff))
    return out


def split_side_a(state: FockVector) -> FockVector:
    """Send every side-A source photon through the symmetric beamsplitter,
    expanding multinomially with the correct bosonic factors. Norm is
    preserved; side B is untouched."""
    out: dict[Occupation, complex] = {}
    for occ, amp in state.entries.items():
        passive = {}
        to_split = []
        for mode, n in occ:
            if mode.side == Side.A and mode.port != Port.SOURCE:
                raise ConfigError(
                    "input already contains beamsplitter-output photons"
                )
            if mode.side == Side.A:
                to_split.append((mode.internal, n))
            else:
                passive[mode] = n
        per_mode = [_branches(i, n) for i, n in to_split]
        for combo in product(*per_mode):
            counts = dict(passive)
            coeff = 1.0
            for added, c in combo:
                counts.update(added)
                coeff *= c
            key = occupation(counts)
            out[key] = out.get(key, 0.0 + 0.0j) + amp * coeff
    return FockVector(entries=out, dim=state.dim)


def coincidence_component(state: FockVector) -> FockVector:
    """Component with exactly one photon in each beamsplitter output, the
    part that fires both detectors; side-B occupancy is unconstrained."""
    for occ, _ in state.entries.items():
        for mode, _n in occ:
            if mode.side == Side.A and mode.port == Port.SOURCE:
                raise ConfigError("state still has unsplit side-A photons")
    return filter_by_port_counts(state, {Port.A1: 1, Port.A2: 1})
