"""Workbench for single-photon field dynamics on k-space mode grids.

Builds invariant one-photon mode amplitudes, synthesizes the positive-frequency
potential and fields they generate, and verifies the conservation laws the
construction promises: norm, continuity, helicity, gauge and boost invariance,
dielectric media, and emitter/detector lifecycles on a 1D line.
"""

__version__ = "0.1.0"

from .relativity import (
    METRIC,
    FourVector,
    PolarizationBasis,
    FaradayMatrix,
    minkowski_dot,
    lower_index,
    boost_z,
    polarization_basis,
    polarization_bases,
    faraday_from_fields,
    faraday_invariant,
)
from .modes import (
    KGrid,
    ModeAmplitudes,
    measure_weight,
    measure_weights,
    norm,
    normalize,
    gaussian_packet,
    integrated_four_current,
    boost_amplitudes,
    gauge_shift,
    evolve,
    restricted,
)
from .fields import (
    SpatialGrid,
    FieldSnapshot,
    dual_grid,
    synthesize,
    maxwell_residual,
    lagrangian_density,
    conjugate_momentum,
)
from .current import (
    CurrentField,
    number_density,
    current_density,
    helicity_density,
    photon_current,
    position_norm,
    continuity_residual,
)
from .medium import (
    MediumSpec,
    VACUUM,
    SourceEvent,
    constitutive,
    current_in_medium,
    density_rescale,
    source_field,
    green_response_1d,
    lifecycle_1d,
    LifecycleReport,
)
from .fock import (
    LadderPair,
    ladder_pair,
    basis_state,
    n_photon_state,
    commutator_expectation,
)
from .config import (
    ConfigError,
    ScenarioConfig,
    parse_config,
    default_verify_config,
)
from .units import UnitSystem, unit_system
from .verify import CheckResult, VerificationReport, run_verify, write_verify_report
from .scenarios import ScenarioOutcome, run_scenario

__all__ = [
    "__version__",
    "METRIC",
    "FourVector",
    "PolarizationBasis",
    "FaradayMatrix",
    "minkowski_dot",
    "lower_index",
    "boost_z",
    "polarization_basis",
    "polarization_bases",
    "faraday_from_fields",
    "faraday_invariant",
    "KGrid",
    "ModeAmplitudes",
    "measure_weight",
    "measure_weights",
    "norm",
    "normalize",
    "gaussian_packet",
    "integrated_four_current",
    "boost_amplitudes",
    "gauge_shift",
    "evolve",
    "restricted",
    "SpatialGrid",
    "FieldSnapshot",
    "dual_grid",
    "synthesize",
    "maxwell_residual",
    "lagrangian_density",
    "conjugate_momentum",
    "CurrentField",
    "number_density",
    "current_density",
    "helicity_density",
    "photon_current",
    "position_norm",
    "continuity_residual",
    "MediumSpec",
    "VACUUM",
    "SourceEvent",
    "constitutive",
    "current_in_medium",
    "density_rescale",
    "source_field",
    "green_response_1d",
    "lifecycle_1d",
    "LifecycleReport",
    "LadderPair",
    "ladder_pair",
    "basis_state",
    "n_photon_state",
    "commutator_expectation",
    "ConfigError",
    "ScenarioConfig",
    "parse_config",
    "default_verify_config",
    "UnitSystem",
    "unit_system",
    "CheckResult",
    "VerificationReport",
    "run_verify",
    "write_verify_report",
    "ScenarioOutcome",
    "run_scenario",
]
