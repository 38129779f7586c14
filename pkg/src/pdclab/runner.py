"""Sweep orchestration, identity-check suites, and tabular output.

A sweep walks a grid of waveplate angle pairs, computes the closed-form
theory columns for each pair, then runs the counting model with a per-row
seed so the whole table is reproducible and any single row can be
regenerated in isolation.

The identity suite cross-checks the closed forms against brute-force
Fock-space computation on randomly drawn spectra and states; it is the
programmatic form of the verification battery in the test suite.
"""

from __future__ import annotations

import itertools
import json
import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Any, Mapping, Sequence

import numpy as np

from .counting import (
    CountRecord,
    DetectionConfig,
    TimingBudget,
    coincidence_probability,
    concurrence_from_k,
    estimate_with_uncertainty,
    refine_with_hidden_modes,
    simulate_counts,
)
from .errors import ConfigError, EstimateError
from .fock import FockVector, creation_monomial, mode_a, mode_b, superpose
from .measures import (
    concurrence_via_projector,
    i_concurrence,
    polarization_sub_concurrence,
    pseudo_copy_identity,
)
from .optics import coincidence_component, split_side_a
from .source import AnglePair, SchmidtSpectrum, four_photon_state, schmidt_from_angles

#: column order of every emitted table
SWEEP_FIELDS = (
    "theta1_deg",
    "theta2_deg",
    "k_theory",
    "c_theory",
    "c12_theory",
    "n_a1",
    "n_a2",
    "n_coinc",
    "k_est",
    "k_sigma",
    "c_est",
    "c_sigma",
    "warn_flags",
)

SWEEP_CSV_HEADER = ",".join(SWEEP_FIELDS)

#: absolute tolerance for the brute-force identity suite
IDENTITY_TOL = 1e-10

_DEFAULT_THETA1 = (0.0, 7.5, 15.0, 22.5)
_DEFAULT_THETA2 = tuple(i * 2.5 for i in range(19))


@dataclass(frozen=True)
class SweepSpec:
    """Everything needed to run one sweep: the two angle lists (degrees),
    the detection and timing setups, optional hidden-mode splits applied
    to the simulated columns, and where/how to write the table."""

    theta1_deg: tuple[float, ...] = _DEFAULT_THETA1
    theta2_deg: tuple[float, ...] = _DEFAULT_THETA2
    detection: DetectionConfig = field(default_factory=DetectionConfig)
    timing: TimingBudget = field(default_factory=TimingBudget)
    hidden_splits: tuple[tuple[float, ...], ...] | None = None
    output_path: str | None = None
    format: str = "csv"

    def __post_init__(self) -> None:
        if not self.theta1_deg or not self.theta2_deg:
            raise ConfigError("angle lists must be nonempty")
        for name in ("theta1_deg", "theta2_deg"):
            for value in getattr(self, name):
                if not math.isfinite(value):
                    raise ConfigError(f"{name} contains non-finite value {value}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be 'csv' or 'json', got {self.format!r}")
        if self.hidden_splits is not None and len(self.hidden_splits) != 4:
            raise ConfigError(
                "hidden_splits needs one split per source mode "
                f"(4), got {len(self.hidden_splits)}"
            )


@dataclass(frozen=True)
class SweepRow:
    """One grid point: closed-form theory columns next to the simulated
    counts and the estimates recovered from them."""

    theta1_deg: float
    theta2_deg: float
    k_theory: float
    c_theory: float
    c12_theory: float
    n_a1: int
    n_a2: int
    n_coinc: int
    k_est: float
    k_sigma: float
    c_est: float
    c_sigma: float
    warn_flags: tuple[str, ...]


def theory_point(angles: AnglePair) -> tuple[float, float, float]:
    """Closed-form (K, C, polarization sub-concurrence) for one angle pair."""
    spectrum = schmidt_from_angles(angles)
    k_theory = spectrum.sum_sq
    c_theory, _ = concurrence_from_k(k_theory)
    c12_theory = polarization_sub_concurrence(angles)
    return k_theory, c_theory, c12_theory


def _simulate_row(
    spectrum: SchmidtSpectrum, cfg: DetectionConfig
) -> tuple[CountRecord, tuple[str, ...], float, float, float, float]:
    """Run the counting model once and fold warnings and estimate flags
    into a single flag tuple; zero-count rows get NaN estimates instead of
    aborting the sweep."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        record = simulate_counts(spectrum, cfg)
    flags = ["rare_event_violated"] if caught else []
    try:
        est = estimate_with_uncertainty(record)
    except EstimateError:
        flags.append("insufficient_counts")
        nan = float("nan")
        return record, tuple(flags), nan, nan, nan, nan
    flags.extend(est.flags)
    return record, tuple(flags), est.k_hat, est.k_sigma, est.c_hat, est.c_sigma


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """One row per (theta1, theta2) pair, in grid order.

    Theory columns always describe the nominal four-mode spectrum; hidden
    splits, when present, reshape only the spectrum fed to the counting
    model. Row index i uses seed base+i, so rows are independent and a
    serial run matches any parallel evaluation order.
    """
    rows: list[SweepRow] = []
    grid = itertools.product(spec.theta1_deg, spec.theta2_deg)
    for index, (t1, t2) in enumerate(grid):
        angles = AnglePair.from_degrees(t1, t2)
        k_theory, c_theory, c12_theory = theory_point(angles)
        sim_spectrum = schmidt_from_angles(angles)
        if spec.hidden_splits is not None:
            sim_spectrum = refine_with_hidden_modes(sim_spectrum, spec.hidden_splits)
        cfg = replace(spec.detection, seed=spec.detection.seed + index)
        record, flags, k_est, k_sigma, c_est, c_sigma = _simulate_row(sim_spectrum, cfg)
        rows.append(
            SweepRow(
                theta1_deg=t1,
                theta2_deg=t2,
                k_theory=k_theory,
                c_theory=c_theory,
                c12_theory=c12_theory,
                n_a1=record.n_a1,
                n_a2=record.n_a2,
                n_coinc=record.n_coinc,
                k_est=k_est,
                k_sigma=k_sigma,
                c_est=c_est,
                c_sigma=c_sigma,
                warn_flags=flags,
            )
        )
    return rows


@dataclass(frozen=True)
class IdentityCheck:
    """Outcome of one brute-force identity family."""

    name: str
    trials: int
    max_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


@dataclass(frozen=True)
class IdentityReport:
    """All identity families from one suite run, with enough metadata to
    reproduce it."""

    max_d: int
    trials: int
    seed: int
    checks: tuple[IdentityCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def as_text(self) -> str:
        lines = [f"identity suite: max_d={self.max_d} trials={self.trials} seed={self.seed}"]
        for check in self.checks:
            status = "pass" if check.passed else "FAIL"
            lines.append(
                f"  {check.name}: max_deviation={check.max_deviation:.3e} "
                f"tolerance={check.tolerance:.1e} [{status}]"
            )
        lines.append(f"overall: {'pass' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def as_json(self) -> str:
        payload = {
            "max_d": self.max_d,
            "trials": self.trials,
            "seed": self.seed,
            "checks": [
                {
                    "name": check.name,
                    "trials": check.trials,
                    "max_deviation": check.max_deviation,
                    "tolerance": check.tolerance,
                    "passed": check.passed,
                }
                for check in self.checks
            ],
            "passed": self.passed,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _random_spectrum(rng: np.random.Generator, dim: int) -> SchmidtSpectrum:
    """Uniformly positioned random probability vector (exponential trick)."""
    raw = rng.exponential(size=dim)
    raw /= raw.sum()
    return SchmidtSpectrum(tuple(float(w) for w in raw))


def _random_pair_state(rng: np.random.Generator, dim: int) -> FockVector:
    """Normalized random complex state with one photon on each side,
    arbitrary (non-Schmidt-aligned) amplitudes."""
    coeffs = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    coeffs /= np.linalg.norm(coeffs)
    terms = []
    for i in range(dim):
        for j in range(dim):
            basis = creation_monomial(dim, [mode_a(i), mode_b(j)])
            terms.append((complex(coeffs[i, j]), basis))
    return superpose(terms)


def run_identity_suite(max_d: int = 6, trials: int = 1000, seed: int = 0) -> IdentityReport:
    """Stress the three load-bearing identities on random inputs.

    1. pseudo_copy: the projector-route overlap of two source-state
       copies, the Fock-space norm of the four-photon term, and the closed
       form 2*(1 + sum w_i^2) must agree pairwise.
    2. projector_vs_purity: the two concurrence routes must agree on
       arbitrary complex pair states.
    3. coincidence_chain: the closed-form coincidence probability must
       match the pipeline route (build four-photon term, split one side,
       keep the coincidence part) at unit efficiency.
    """
    if not 1 <= max_d <= 8:
        raise ConfigError(f"max_d must be in [1, 8], got {max_d}")
    if trials < 0:
        raise ConfigError(f"trials must be >= 0, got {trials}")
    if trials == 0:
        return IdentityReport(max_d=max_d, trials=0, seed=seed, checks=())
    rng = np.random.default_rng(seed)
    dev_pseudo = 0.0
    dev_projector = 0.0
    dev_chain = 0.0
    unit_cfg = DetectionConfig(eta_a1=1.0, eta_a2=1.0, pump_amplitude=0.5)
    for _ in range(trials):
        dim = int(rng.integers(1, max_d + 1))
        spectrum = _random_spectrum(rng, dim)
        closed = 2.0 * (1.0 + spectrum.sum_sq)
        lhs, rhs = pseudo_copy_identity(spectrum)
        dev_pseudo = max(
            dev_pseudo, abs(lhs - rhs), abs(lhs - closed), abs(rhs - closed)
        )

        pair_dim = int(rng.integers(2, max_d + 1)) if max_d >= 2 else 1
        state = _random_pair_state(rng, pair_dim)
        dev_projector = max(
            dev_projector,
            abs(i_concurrence(state) - concurrence_via_projector(state)),
        )

        quad = four_photon_state(spectrum)
        pipeline_norm = coincidence_component(split_side_a(quad)).norm_sq()
        p_closed = coincidence_probability(spectrum, unit_cfg)
        p_pipeline = (
            0.25
            * unit_cfg.eta_a1
            * unit_cfg.eta_a2
            * unit_cfg.pump_amplitude**2
            * pipeline_norm
        )
        dev_chain = max(dev_chain, abs(p_closed - p_pipeline))
    checks = (
        IdentityCheck("pseudo_copy", trials, dev_pseudo, IDENTITY_TOL),
        IdentityCheck("projector_vs_purity", trials, dev_projector, IDENTITY_TOL),
        IdentityCheck("coincidence_chain", trials, dev_chain, IDENTITY_TOL),
    )
    return IdentityReport(max_d=max_d, trials=trials, seed=seed, checks=checks)


def _format_value(name: str, value: Any) -> str:
    if name == "warn_flags":
        return ";".join(value)
    if name in ("n_a1", "n_a2", "n_coinc"):
        return str(int(value))
    if name in ("theta1_deg", "theta2_deg"):
        return f"{value:.9g}"
    return f"{value:.9g}"


def format_rows(rows: Sequence[SweepRow], fmt: str) -> str:
    """Render rows as a CSV table (9-significant-digit floats) or a JSON
    array of objects with the same field names."""
    if fmt == "csv":
        lines = [SWEEP_CSV_HEADER]
        for row in rows:
            lines.append(
                ",".join(_format_value(name, getattr(row, name)) for name in SWEEP_FIELDS)
            )
        return "\n".join(lines) + "\n"
    if fmt == "json":
        payload = []
        for row in rows:
            obj: dict[str, Any] = {}
            for name in SWEEP_FIELDS:
                value = getattr(row, name)
                if name == "warn_flags":
                    obj[name] = list(value)
                elif isinstance(value, float) and not math.isfinite(value):
                    obj[name] = None
                else:
                    obj[name] = value
            payload.append(obj)
        return json.dumps(payload, indent=2) + "\n"
    raise ConfigError(f"format must be 'csv' or 'json', got {fmt!r}")


def emit(rows: Sequence[SweepRow], fmt: str, path: str) -> None:
    """Write the rendered table to path with plain LF line endings."""
    text = format_rows(rows, fmt)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


_DETECTION_KEYS = frozenset(
    ("eta_a1", "eta_a2", "rep_rate_hz", "pump_amplitude", "duration_s", "seed")
)
_TIMING_KEYS = frozenset(
    ("delta_t_pulse_sep", "tau_pump", "tau_corr", "coincidence_window")
)
_SPEC_KEYS = frozenset(
    (
        "theta1_deg",
        "theta2_deg",
        "detection",
        "timing",
        "hidden_splits",
        "output_path",
        "format",
    )
)


def _reject_unknown(data: Mapping[str, Any], allowed: frozenset[str], where: str) -> None:
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"unknown {where} keys: {', '.join(unknown)}")


def sweep_spec_from_dict(data: Mapping[str, Any]) -> SweepSpec:
    """Build a SweepSpec from a parsed config mapping, rejecting unknown
    keys at every level so typos fail fast instead of silently using a
    default."""
    if not isinstance(data, Mapping):
        raise ConfigError(f"config root must be an object, got {type(data).__name__}")
    _reject_unknown(data, _SPEC_KEYS, "config")
    kwargs: dict[str, Any] = {}
    if "theta1_deg" in data:
        kwargs["theta1_deg"] = _angle_tuple(data["theta1_deg"], "theta1_deg")
    if "theta2_deg" in data:
        kwargs["theta2_deg"] = _angle_tuple(data["theta2_deg"], "theta2_deg")
    if "detection" in data:
        det = data["detection"]
        if not isinstance(det, Mapping):
            raise ConfigError("detection must be an object")
        _reject_unknown(det, _DETECTION_KEYS, "detection")
        kwargs["detection"] = DetectionConfig(**det)
    if "timing" in data:
        tim = data["timing"]
        if not isinstance(tim, Mapping):
            raise ConfigError("timing must be an object")
        _reject_unknown(tim, _TIMING_KEYS, "timing")
        kwargs["timing"] = TimingBudget(**tim)
    if "hidden_splits" in data and data["hidden_splits"] is not None:
        splits = data["hidden_splits"]
        if not isinstance(splits, Sequence) or isinstance(splits, (str, bytes)):
            raise ConfigError("hidden_splits must be a list of lists")
        kwargs["hidden_splits"] = tuple(
            tuple(float(s) for s in split) for split in splits
        )
    if "output_path" in data and data["output_path"] is not None:
        kwargs["output_path"] = str(data["output_path"])
    if "format" in data:
        kwargs["format"] = str(data["format"])
    try:
        return SweepSpec(**kwargs)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def _angle_tuple(value: Any, name: str) -> tuple[float, ...]:
    if not isinstance(value, Sequence) or isinstance(value, (str, bytes)):
        raise ConfigError(f"{name} must be a list of numbers")
    try:
        return tuple(float(v) for v in value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name} must be a list of numbers: {exc}") from exc


def load_sweep_spec(path: str) -> SweepSpec:
    """Read a JSON config file into a SweepSpec; malformed JSON and
    unknown keys are configuration errors."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return sweep_spec_from_dict(data)
