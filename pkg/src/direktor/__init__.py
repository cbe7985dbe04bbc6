"""direktor: design and simulate nonreciprocal linear photonic networks.

Networks mix coherent quadratic couplings with engineered collective
dissipators; balancing the two makes any of the stock interactions
one-way.  The package compiles such networks to Langevin drift form,
computes frequency-resolved scattering and noise, solves the matching
conditions analytically or numerically, ships the standard devices
(isolator, circulator, phase-preserving and phase-sensitive amplifiers,
waveguide-mediated dissipation), and cross-validates everything against
a truncated-Fock-space Lindblad integrator.
"""

from .errors import (
    AsymmetricSqueezing,
    ConfigError,
    DanglingIndex,
    DimensionMismatch,
    DirektorError,
    DuplicatePort,
    EliminationNotSupported,
    IndexOutOfRange,
    InfeasibleCooperativity,
    NetworkValidationError,
    NoPortOnMode,
    NonHermitianCoupling,
    NotConverged,
    NotFactorizable,
    NullDissipator,
    SingularAtFrequency,
    StepSizeUnderflow,
    TruncationLeak,
    UnstableDuringSearch,
    UnstableNetwork,
    WeakDampingWarning,
    ZeroGain,
)
from .network import (
    CoherentCoupling,
    CollectiveDissipator,
    LinearNetwork,
    Mode,
    Port,
    build_network,
    gauge_transform,
)
from .langevin import (
    ChannelInfo,
    DriftSystem,
    ReducedCouplings,
    ScatteringResult,
    StabilityReport,
    adiabatic_eliminate,
    diffusion_matrix,
    drift_matrix,
    first_moments,
    quadrature_map,
    reduced_coupling_constants,
    scattering_matrix,
    second_moments,
    stability,
)
from .noise import (
    NoiseReport,
    added_noise,
    noise_report,
    output_occupancy,
    output_spectrum,
)
from .matching import (
    IsolationMetrics,
    MatchSolution,
    ObjectiveTerm,
    analytic_match,
    impedance_conditions,
    isolation,
    numeric_match,
)
from .devices import (
    DpaAux,
    DpaReduced,
    IsolatorReduced,
    IsolatorThreeMode,
    NdpaReduced,
    NdpaThreeMode,
    ReferenceCurves,
    WaveguidePair,
    dpa_zero_frequency_amplitude_gain,
    fit_induced_couplings,
    induced_couplings,
    make_device,
    reference_curves,
    waveguide_scattering,
)
from .fock import (
    DirectionalityReport,
    FockTrajectory,
    HilbertSpec,
    OperatorExpr,
    appendix_directionality_check,
    coherent_state,
    doubled_basis_operators,
    evolve,
    expectation,
    fock_state,
    lindblad_rhs,
    network_operators,
    validate_density_matrix,
)
from .config import NetworkConfig, parse_config, serialize_config

__version__ = "0.1.0"
