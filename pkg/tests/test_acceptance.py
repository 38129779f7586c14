"""Acceptance gate: the ten load-bearing guarantees of the package, one
test per criterion, each printing a single pass/fail line (run with
``pytest -s`` to see them).

Every expected number here is either trivial arithmetic, a value frozen
from an independent oracle computation, or a closed form re-derived
inline; none is read back from the implementation under test.
"""

import itertools
import json
import math
import os
import subprocess
import sys
import time
from dataclasses import replace

import numpy as np

from pdclab.counting import (
    DetectionConfig,
    TimingBudget,
    check_timing,
    coincidence_probability,
    refine_with_hidden_modes,
    simulate_counts,
    estimate_with_uncertainty,
    k_from_counts,
)
from pdclab.fock import inner
from pdclab.measures import (
    concurrence_via_projector,
    i_concurrence,
    max_i_concurrence,
    pseudo_copy_identity,
    purity,
    reduced_density,
)
from pdclab.optics import coincidence_component, split_side_a
from pdclab.runner import SweepSpec, run_sweep, theory_point
from pdclab.source import (
    AnglePair,
    SchmidtSpectrum,
    four_photon_state,
    schmidt_from_angles,
    two_photon_state,
)

BELL = SchmidtSpectrum((0.5, 0.5))


def _report(number, label, body):
    try:
        body()
    except AssertionError:
        print(f"[criterion {number:2d}] {label}: FAIL")
        raise
    print(f"[criterion {number:2d}] {label}: PASS")


def _random_spectrum(rng, d):
    raw = rng.exponential(size=d)
    raw /= raw.sum()
    return SchmidtSpectrum(tuple(float(w) for w in raw))


def _random_pair_state(rng, d):
    from pdclab.fock import creation_monomial, mode_a, mode_b, superpose

    coeffs = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    coeffs /= np.linalg.norm(coeffs)
    terms = []
    for i in range(d):
        for j in range(d):
            terms.append((complex(coeffs[i, j]), creation_monomial(d, [mode_a(i), mode_b(j)])))
    return superpose(terms)


def test_criterion_01_two_copy_overlap_identity():
    def body():
        start = time.perf_counter()
        rng = np.random.default_rng(101)
        for _ in range(1000):
            spectrum = _random_spectrum(rng, int(rng.integers(1, 7)))
            lhs, rhs = pseudo_copy_identity(spectrum)
            closed = 2.0 * (1.0 + spectrum.sum_sq)
            assert abs(lhs - rhs) < 1e-10
            assert abs(lhs - closed) < 1e-10
            assert abs(rhs - closed) < 1e-10
        assert time.perf_counter() - start < 10.0

    _report(1, "two-copy overlap = four-photon norm = closed form", body)


def test_criterion_02_concurrence_routes_agree():
    def body():
        start = time.perf_counter()
        rng = np.random.default_rng(102)
        for _ in range(1000):
            state = _random_pair_state(rng, int(rng.integers(2, 7)))
            assert abs(i_concurrence(state) - concurrence_via_projector(state)) < 1e-10
        assert time.perf_counter() - start < 10.0

    _report(2, "marginal-purity and projector concurrence agree", body)


def test_criterion_03_beamsplitter_chain():
    def body():
        rng = np.random.default_rng(103)
        for _ in range(300):
            spectrum = _random_spectrum(rng, int(rng.integers(1, 7)))
            quad = four_photon_state(spectrum)
            norm_sq = coincidence_component(split_side_a(quad)).norm_sq()
            assert abs(norm_sq - (1.0 + spectrum.sum_sq)) < 1e-12
            assert abs(norm_sq - 0.5 * inner(quad, quad).real) < 1e-12
        bell_norm = coincidence_component(
            split_side_a(four_photon_state(BELL))
        ).norm_sq()
        assert abs(bell_norm - 1.5) < 1e-12

    _report(3, "split-and-filter norm = 1 + spectral overlap", body)


def test_criterion_04_point_values():
    def body():
        maximal = two_photon_state(schmidt_from_angles(AnglePair.from_degrees(0.0, 22.5)))
        assert i_concurrence(maximal) == 1.0
        uniform = two_photon_state(schmidt_from_angles(AnglePair.from_degrees(22.5, 22.5)))
        assert abs(i_concurrence(uniform) - math.sqrt(6.0) / 2.0) < 1e-12
        assert abs(max_i_concurrence(4, 4) - math.sqrt(1.5)) < 1e-12

    _report(4, "benchmark point values", body)


def test_criterion_05_closed_form_purity_grid():
    def body():
        start = time.perf_counter()
        grid = [0.5 * i for i in range(181)]
        for t1, t2 in itertools.product(grid, grid):
            r1 = math.radians(2.0 * t1)
            r2 = math.radians(2.0 * t2)
            closed = (math.cos(r1) ** 4 + math.sin(r1) ** 4) * (
                math.cos(r2) ** 4 + math.sin(r2) ** 4
            )
            angles = AnglePair.from_degrees(t1, t2)
            via_fock = purity(reduced_density(two_photon_state(schmidt_from_angles(angles))))
            assert abs(closed - via_fock) < 1e-12
        assert time.perf_counter() - start < 5.0

    _report(5, "closed-form purity on the 181x181 angle grid", body)


def test_criterion_06_dominance_and_equality_lines():
    def body():
        rows = run_sweep(SweepSpec())
        assert len(rows) == 76
        for row in rows:
            assert row.c_theory >= row.c12_theory - 1e-12
            if row.theta1_deg == 0.0:
                # effectively two-dimensional content: C collapses onto the
                # polarization sub-concurrence |sin 4*theta2|
                target = abs(math.sin(math.radians(4.0 * row.theta2_deg)))
                assert abs(row.c_theory - row.c12_theory) <= 1e-12
                assert abs(row.c_theory - target) <= 1e-12
            else:
                assert row.c_theory - row.c12_theory > 1e-6
        # the other equality line, not on the default grid
        for t2 in (0.0, 10.0, 22.5, 30.0, 45.0):
            _, c, c12 = theory_point(AnglePair.from_degrees(45.0, t2))
            assert abs(c - c12) <= 1e-12

    _report(6, "concurrence dominates sub-concurrence; equality only at "
               "vanishing first-waveplate mixing", body)


def test_criterion_07_error_bar_calibration():
    def body():
        start = time.perf_counter()
        cfg = DetectionConfig()
        pulses = cfg.rep_rate_hz * cfg.duration_s
        expected_coinc = coincidence_probability(BELL, cfg) * pulses
        assert abs(expected_coinc - 278.16) < 1e-6
        expected_single = 0.001 * pulses

        # analytic error bar at the operating point
        k_sigma = 1.5 * math.sqrt(1.0 / expected_coinc + 2.0 / expected_single)
        c_sigma_analytic = k_sigma / math.sqrt(2.0 - 2.0 * 0.5)
        assert 0.06 <= c_sigma_analytic <= 0.12

        c_estimates, c_sigmas, covered = [], [], 0
        for seed in range(1000):
            record = simulate_counts(BELL, replace(cfg, seed=seed))
            est = estimate_with_uncertainty(record)
            c_estimates.append(est.c_hat)
            c_sigmas.append(est.c_sigma)
            if abs(est.c_hat - 1.0) <= 3.0 * est.c_sigma:
                covered += 1
        in_band = sum(1 for s in c_sigmas if 0.06 <= s <= 0.12)
        assert in_band >= 950
        assert 0.06 <= float(np.mean(c_sigmas)) <= 0.12
        ratio = float(np.std(c_estimates)) / float(np.mean(c_sigmas))
        assert 0.8 <= ratio <= 1.2
        assert covered >= 990
        assert time.perf_counter() - start < 60.0

    _report(7, "error-bar scale and coverage at the calibrated rates", body)


def test_criterion_08_hidden_mode_monotonicity():
    def body():
        nominal = schmidt_from_angles(AnglePair.from_degrees(22.5, 22.5))
        k_nominal = nominal.sum_sq
        assert abs(k_nominal - 0.25) < 1e-12
        rng = np.random.default_rng(108)
        cfg = DetectionConfig()
        for _ in range(20):
            splits = []
            for _ in range(4):
                w = float(rng.uniform(0.15, 0.85))
                splits.append((w, 1.0 - w))
            refined = refine_with_hidden_modes(nominal, splits)
            assert refined.sum_sq < k_nominal
            ks = [
                k_from_counts(simulate_counts(refined, replace(cfg, seed=seed)))
                for seed in range(100)
            ]
            assert float(np.mean(ks)) < k_nominal

    _report(8, "unresolved extra modes strictly lower the estimated purity", body)


def test_criterion_09_timing_budget():
    def body():
        reference = check_timing(TimingBudget())
        assert reference.all_ok

        wide_pump = check_timing(TimingBudget(tau_pump=2e-12))
        assert not wide_pump.pulse_separation_ok
        assert wide_pump.correlation_ok and wide_pump.window_ok

        slow_corr = check_timing(TimingBudget(tau_corr=2e-12))
        assert not slow_corr.correlation_ok
        assert slow_corr.pulse_separation_ok and slow_corr.window_ok

        short_window = check_timing(TimingBudget(coincidence_window=1.68e-11))
        assert not short_window.window_ok
        assert short_window.pulse_separation_ok and short_window.correlation_ok

    _report(9, "timing budget passes at reference values, fails each "
               "singly-violated variant", body)


def test_criterion_10_byte_identical_reruns(tmp_path):
    def body():
        env = dict(os.environ)
        env.pop("PDC_LAB_SEED", None)

        def run(args):
            return subprocess.run(
                [sys.executable, "-m", "pdclab", *args],
                capture_output=True,
                env=env,
            )

        sweep_args = [
            "sweep", "--theta1-deg", "0,22.5", "--theta2-deg", "0,11.25,22.5",
            "--seed", "3",
        ]
        first = run(sweep_args)
        second = run(sweep_args)
        assert first.returncode == 0 and second.returncode == 0
        assert first.stdout == second.stdout
        assert len(first.stdout) > 0

        out_a = tmp_path / "a.csv"
        out_b = tmp_path / "b.csv"
        assert run(sweep_args + ["--out", str(out_a)]).returncode == 0
        assert run(sweep_args + ["--out", str(out_b)]).returncode == 0
        assert out_a.read_bytes() == out_b.read_bytes()

        id_args = ["identities", "--max-d", "4", "--trials", "100", "--seed", "1"]
        first_id = run(id_args)
        second_id = run(id_args)
        assert first_id.returncode == 0 and second_id.returncode == 0
        assert first_id.stdout == second_id.stdout
        payload = json.loads(run(id_args + ["--format", "json"]).stdout)
        assert payload["passed"] is True

    _report(10, "seeded table and report runs are byte-identical", body)
