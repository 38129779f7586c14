"""From quantum state to detector statistics and back.

Forward direction: per-pulse click probabilities and Poisson-distributed
count records for a given source spectrum and detection setup. Backward
direction: the ratio statistic K = f*N12/(N1*N2) - 1, which estimates the
marginal purity, and the concurrence estimate C = sqrt(2 - 2K) with
first-order error propagation.

Counts are modeled as independent Poisson variates rather than per-pulse
Bernoulli trials; at per-pulse probabilities of ~1e-3 the difference is
far below every tolerance used here.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConfigError, EstimateError
from .fock import Port
from .source import SchmidtSpectrum

#: per-pulse probabilities above this break the rare-event counting model
PROBABILITY_WARN_LEVEL = 0.1

#: K this close to 1 makes the concurrence error bar blow up
K_SINGULARITY_TOL = 1e-9

#: default ratio required between coincidence window and the slower
#: time scales it must dwarf
DEFAULT_SEPARATION_FACTOR = 100.0


@dataclass(frozen=True)
class DetectionConfig:
    """Detection-side parameters of a counting run.

    Efficiencies fold coupling loss and detector quantum efficiency into a
    single number per output port. The default duration is calibrated so
    that a maximally entangled two-mode source accumulates roughly 278
    expected coincidences, putting the concurrence error bar near 0.09.
    """

    eta_a1: float = 0.2
    eta_a2: float = 0.2
    rep_rate_hz: float = 76e6
    pump_amplitude: float = 0.01
    duration_s: float = 2.44
    seed: int = 0

    def __post_init__(self) -> None:
        for name, value in (("eta_a1", self.eta_a1), ("eta_a2", self.eta_a2)):
            if not (math.isfinite(value) and 0.0 < value <= 1.0):
                raise ConfigError(f"{name} must be in (0, 1], got {value}")
        if not (math.isfinite(self.rep_rate_hz) and self.rep_rate_hz > 0.0):
            raise ConfigError(f"rep_rate_hz must be > 0, got {self.rep_rate_hz}")
        if not (math.isfinite(self.pump_amplitude) and 0.0 < self.pump_amplitude <= 1.0):
            raise ConfigError(
                f"pump_amplitude must be in (0, 1], got {self.pump_amplitude}"
            )
        if not (math.isfinite(self.duration_s) and self.duration_s > 0.0):
            raise ConfigError(f"duration_s must be > 0, got {self.duration_s}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int):
            raise ConfigError(f"seed must be an integer, got {self.seed!r}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


@dataclass(frozen=True)
class TimingBudget:
    """The four time scales of the experiment, in seconds. Defaults are the
    reference bench values: 1.68 ps pulse separation, 150 fs pump pulses,
    676 fs photon correlation time, 3 ns coincidence window."""

    delta_t_pulse_sep: float = 1.68e-12
    tau_pump: float = 150e-15
    tau_corr: float = 676e-15
    coincidence_window: float = 3e-9

    def __post_init__(self) -> None:
        for name in ("delta_t_pulse_sep", "tau_pump", "tau_corr", "coincidence_window"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ConfigError(f"{name} must be > 0, got {value}")


@dataclass(frozen=True)
class CountRecord:
    """Raw outcome of one integration: singles at each output port plus
    coincidences, with the duration and repetition rate needed to turn
    counts back into rates."""

    n_a1: int
    n_a2: int
    n_coinc: int
    duration_s: float
    rep_rate_hz: float

    def __post_init__(self) -> None:
        if min(self.n_a1, self.n_a2, self.n_coinc) < 0:
            raise ConfigError("counts must be nonnegative")
        if self.duration_s <= 0.0 or self.rep_rate_hz <= 0.0:
            raise ConfigError("duration and repetition rate must be > 0")


@dataclass(frozen=True)
class EstimateResult:
    """Purity and concurrence estimates with one-sigma Poisson error bars.
    k_hat is reported unclamped; c_hat is clamped into the representable
    range with the reason recorded in flags."""

    k_hat: float
    k_sigma: float
    c_hat: float
    c_sigma: float
    flags: tuple[str, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class TimingReport:
    """Pass/fail summary of the timing conditions, with the ratios that
    were checked."""

    pulse_separation_ok: bool
    correlation_ok: bool
    window_ok: bool
    sep_over_pulse: float
    sep_over_corr: float
    window_over_slow: float
    separation_factor: float

    @property
    def all_ok(self) -> bool:
        return self.pulse_separation_ok and self.correlation_ok and self.window_ok


def single_count_probability(cfg: DetectionConfig, which: Port) -> float:
    """Per-pulse click probability at one output port: eta_port * |eta| / 2."""
    if which == Port.A1:
        eta_port = cfg.eta_a1
    elif which == Port.A2:
        eta_port = cfg.eta_a2
    else:
        raise ConfigError(f"no detector on port {which!r}")
    return 0.5 * eta_port * cfg.pump_amplitude


def coincidence_probability(spectrum: SchmidtSpectrum, cfg: DetectionConfig) -> float:
    """Per-pulse probability of a click at both ports,
    P1 * P2 * (1 + sum_i w_i^2); always at least P1 * P2."""
    p1 = single_count_probability(cfg, Port.A1)
    p2 = single_count_probability(cfg, Port.A2)
    return p1 * p2 * (1.0 + spectrum.sum_sq)


def simulate_counts(spectrum: SchmidtSpectrum, cfg: DetectionConfig) -> CountRecord:
    """Draw one count record; deterministic for a fixed config (the RNG is
    seeded per call, never shared)."""
    p1 = single_count_probability(cfg, Port.A1)
    p2 = single_count_probability(cfg, Port.A2)
    p12 = coincidence_probability(spectrum, cfg)
    if max(p1, p2, p12) > PROBABILITY_WARN_LEVEL:
        warnings.warn(
            f"per-pulse probability {max(p1, p2, p12):.3g} is outside the "
            "rare-event regime; the Poisson model may be inaccurate",
            stacklevel=2,
        )
    pulses = cfg.rep_rate_hz * cfg.duration_s
    rng = np.random.default_rng(cfg.seed)
    n_a1 = int(rng.poisson(p1 * pulses))
    n_a2 = int(rng.poisson(p2 * pulses))
    n_coinc = int(rng.poisson(p12 * pulses))
    return CountRecord(
        n_a1=n_a1,
        n_a2=n_a2,
        n_coinc=n_coinc,
        duration_s=cfg.duration_s,
        rep_rate_hz=cfg.rep_rate_hz,
    )


def k_from_counts(record: CountRecord) -> float:
    """The purity estimator K = f*N12/(N1*N2) - 1 evaluated on raw counts
    (rates are counts over duration, so this is f*T*n12/(n1*n2) - 1)."""
    if record.n_a1 == 0 or record.n_a2 == 0:
        raise EstimateError("singles counts are zero; K is undefined")
    scale = record.rep_rate_hz * record.duration_s
    return scale * record.n_coinc / (record.n_a1 * record.n_a2) - 1.0


def concurrence_from_k(k: float) -> tuple[float, str | None]:
    """Invert C = sqrt(2 - 2K). Estimates pushed outside [0, 1] by noise
    are clamped (to sqrt(2) below zero, to 0 above one) and flagged."""
    if k < 0.0:
        return math.sqrt(2.0), "k_below_zero"
    if k > 1.0:
        return 0.0, "k_above_one"
    return math.sqrt(2.0 - 2.0 * k), None


def estimate_with_uncertainty(record: CountRecord) -> EstimateResult:
    """K and C with first-order Poisson error propagation.

    sigma_K = (K+1) sqrt(1/n12 + 1/n1 + 1/n2) treats the three counts as
    independent; sigma_C = sigma_K / sqrt(2 - 2K) is the propagated error
    of the inversion, reported as infinity when K is at its singular point.
    """
    if min(record.n_a1, record.n_a2, record.n_coinc) == 0:
        raise EstimateError("all three counts must be positive for an estimate")
    k_hat = k_from_counts(record)
    k_sigma = (k_hat + 1.0) * math.sqrt(
        1.0 / record.n_coinc + 1.0 / record.n_a1 + 1.0 / record.n_a2
    )
    c_hat, clamp_flag = concurrence_from_k(k_hat)
    flags = [] if clamp_flag is None else [clamp_flag]
    if k_hat >= 1.0 - K_SINGULARITY_TOL:
        c_sigma = math.inf
        flags.append("c_sigma_unbounded")
    else:
        c_sigma = k_sigma / math.sqrt(2.0 - 2.0 * k_hat)
    return EstimateResult(
        k_hat=k_hat,
        k_sigma=k_sigma,
        c_hat=c_hat,
        c_sigma=c_sigma,
        flags=tuple(flags),
    )


def refine_with_hidden_modes(
    spectrum: SchmidtSpectrum, splits: Sequence[Sequence[float]]
) -> SchmidtSpectrum:
    """Split each weight over unresolved extra modes: w_i -> {w_i * s_ik}.

    Each split must be a probability distribution. The refined spectrum has
    the same unit sum but a sum of squares no larger than before, strictly
    smaller whenever any split is nontrivial, so the simulated K drops
    below the nominal theory value.
    """
    if len(splits) != spectrum.dim:
        raise ConfigError(
            f"need one split per mode: got {len(splits)} for dimension {spectrum.dim}"
        )
    refined: list[float] = []
    for i, split in enumerate(splits):
        if not split:
            raise ConfigError(f"split {i} is empty")
        if any(s < 0.0 for s in split):
            raise ConfigError(f"split {i} has negative weights")
        total = sum(split)
        if abs(total - 1.0) > 1e-9:
            raise ConfigError(f"split {i} sums to {total}, expected 1")
        refined.extend(spectrum.weights[i] * s for s in split)
    norm = sum(refined)
    return SchmidtSpectrum(tuple(w / norm for w in refined))


def check_timing(
    budget: TimingBudget, separation_factor: float = DEFAULT_SEPARATION_FACTOR
) -> TimingReport:
    """Check that the pulse separation cleanly resolves the two time bins
    (separation above pulse width and correlation time) while staying far
    below the coincidence window, so both bins land in one window."""
    if separation_factor <= 0.0:
        raise ConfigError(f"separation_factor must be > 0, got {separation_factor}")
    slow = max(budget.tau_corr, budget.delta_t_pulse_sep)
    window_ratio = budget.coincidence_window / slow
    return TimingReport(
        pulse_separation_ok=budget.delta_t_pulse_sep > budget.tau_pump,
        correlation_ok=budget.delta_t_pulse_sep > budget.tau_corr,
        window_ok=window_ratio >= separation_factor,
        sep_over_pulse=budget.delta_t_pulse_sep / budget.tau_pump,
        sep_over_corr=budget.delta_t_pulse_sep / budget.tau_corr,
        window_over_slow=window_ratio,
        separation_factor=separation_factor,
    )
