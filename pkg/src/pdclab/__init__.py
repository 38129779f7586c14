"""pdclab: entanglement of down-conversion photon pairs from one-sided
two-photon coincidence counting.

The library covers the full chain from source model to estimate:

- ``fock``      sparse bosonic state vectors over labeled modes
- ``source``    the wave-plate-parameterized down-conversion state family
- ``optics``    symmetric beamsplitter and coincidence filtering
- ``measures``  marginal purity, concurrence, two-copy projector routes
- ``counting``  click probabilities, Poisson counting, estimators
- ``runner``    angle sweeps, identity suites, CSV/JSON emission
- ``figures``   optional matplotlib rendering of sweep tables
- ``cli``       the ``pdclab`` command

Every closed form used by the fast paths is cross-checked against
brute-force Fock-space computation in the identity suite and the tests.
"""

from .counting import (
    CountRecord,
    DetectionConfig,
    EstimateResult,
    TimingBudget,
    TimingReport,
    check_timing,
    coincidence_probability,
    concurrence_from_k,
    estimate_with_uncertainty,
    k_from_counts,
    refine_with_hidden_modes,
    simulate_counts,
    single_count_probability,
)
from .errors import ConfigError, EstimateError, FockError, PdclabError
from .fock import (
    FockVector,
    ModeId,
    Occupation,
    Port,
    Side,
    apply_creation,
    creation_monomial,
    filter_by_port_counts,
    inner,
    mode_a,
    mode_a1,
    mode_a2,
    mode_b,
    occupation,
    states_allclose,
    superpose,
)
from .measures import (
    DensityMatrix,
    TwoCopyOperator,
    concurrence_via_projector,
    i_concurrence,
    max_i_concurrence,
    polarization_sub_concurrence,
    pseudo_copy_identity,
    purity,
    reduced_density,
    symmetric_projector,
)
from .optics import coincidence_component, split_side_a
from .runner import (
    IdentityCheck,
    IdentityReport,
    SweepRow,
    SweepSpec,
    emit,
    format_rows,
    load_sweep_spec,
    run_identity_suite,
    run_sweep,
    sweep_spec_from_dict,
    theory_point,
)
from .source import (
    AnglePair,
    SchmidtSpectrum,
    TruncatedSource,
    four_photon_state,
    four_photon_state_regrouped,
    pump_amplitudes,
    schmidt_from_angles,
    schmidt_signs_from_angles,
    six_photon_state,
    truncated_source_state,
    two_photon_state,
)

__version__ = "0.1.0"

__all__ = [
    "AnglePair",
    "ConfigError",
    "CountRecord",
    "DensityMatrix",
    "DetectionConfig",
    "EstimateError",
    "EstimateResult",
    "FockError",
    "FockVector",
    "IdentityCheck",
    "IdentityReport",
    "ModeId",
    "Occupation",
    "PdclabError",
    "Port",
    "SchmidtSpectrum",
    "Side",
    "SweepRow",
    "SweepSpec",
    "TimingBudget",
    "TimingReport",
    "TruncatedSource",
    "TwoCopyOperator",
    "apply_creation",
    "check_timing",
    "coincidence_component",
    "coincidence_probability",
    "concurrence_from_k",
    "concurrence_via_projector",
    "creation_monomial",
    "emit",
    "estimate_with_uncertainty",
    "filter_by_port_counts",
    "format_rows",
    "four_photon_state",
    "four_photon_state_regrouped",
    "i_concurrence",
    "inner",
    "k_from_counts",
    "load_sweep_spec",
    "max_i_concurrence",
    "mode_a",
    "mode_a1",
    "mode_a2",
    "mode_b",
    "occupation",
    "polarization_sub_concurrence",
    "pseudo_copy_identity",
    "pump_amplitudes",
    "purity",
    "reduced_density",
    "refine_with_hidden_modes",
    "run_identity_suite",
    "run_sweep",
    "schmidt_from_angles",
    "schmidt_signs_from_angles",
    "simulate_counts",
    "single_count_probability",
    "six_photon_state",
    "split_side_a",
    "states_allclose",
    "superpose",
    "sweep_spec_from_dict",
    "symmetric_projector",
    "theory_point",
    "truncated_source_state",
    "two_photon_state",
    "__version__",
]
