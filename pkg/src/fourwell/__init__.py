"""Four-well microstructure energetics on the periodic unit square.

The package prices phase arrangements of a four-variant material by a
weighted sum of interfacial perimeter and relaxed elastic misfit, generates
the classical low-energy candidates (laminates, crossing twins, self-similar
branching) alongside adversarial ones, and extracts the twin profiles any
low-energy state must approximately follow.
"""

from .energy import (
    DEFAULT_DIAG,
    EnergyBreakdown,
    ResidualDecomposition,
    SymStrainField,
    compute_residuals,
    elastic_energy_pointwise,
    full_multiplier_energy,
    interpolation_gap,
    relaxed_elastic_energy,
    strain_from_displacement,
    surface_energy,
    total_energy,
)
from .fields import (
    Grid,
    ModifiedIndicators,
    PhaseField,
    ScalarField,
    VectorField,
    finite_difference,
    from_modified,
    read_phase_field,
    shear_resample,
    to_modified,
    total_variation,
    volume_fractions,
    write_pgm,
    write_phase_field,
)
from .microstructures import (
    BranchingParams,
    ZigzagPotential,
    branching_bound,
    gen_branching,
    gen_constant,
    gen_counterexample,
    gen_crossing_twin,
    gen_laminate,
    gen_random_partition,
    plan_branching,
    staircase_shifts,
)
from .model import ADMISSIBLE_TUPLES, MaterialParams, WellSet, eta, make_wells
from .rigidity import (
    InnerProfile,
    OuterProfile,
    RigidityReport,
    characteristic_residual,
    extract_inner,
    extract_outer,
    incompatibility_defect,
    rigidity_report,
    uncorrelatedness_gap,
    wave_decompose,
)
from .spectral import (
    SpectralField,
    curl_neg_sobolev,
    forward,
    helmholtz_potential,
    inv_gradient,
    inverse,
    leray_project,
    neg_sobolev_norm,
    permode_elastic_oracle,
    spectral_derivative,
)

__version__ = "0.1.0"

__all__ = [
    "ADMISSIBLE_TUPLES",
    "BranchingParams",
    "DEFAULT_DIAG",
    "EnergyBreakdown",
    "Grid",
    "InnerProfile",
    "MaterialParams",
    "ModifiedIndicators",
    "OuterProfile",
    "PhaseField",
    "ResidualDecomposition",
    "RigidityReport",
    "ScalarField",
    "SpectralField",
    "SymStrainField",
    "VectorField",
    "WellSet",
    "ZigzagPotential",
    "branching_bound",
    "characteristic_residual",
    "compute_residuals",
    "curl_neg_sobolev",
    "elastic_energy_pointwise",
    "eta",
    "extract_inner",
    "extract_outer",
    "finite_difference",
    "forward",
    "from_modified",
    "full_multiplier_energy",
    "gen_branching",
    "gen_constant",
    "gen_counterexample",
    "gen_crossing_twin",
    "gen_laminate",
    "gen_random_partition",
    "helmholtz_potential",
    "incompatibility_defect",
    "interpolation_gap",
    "inv_gradient",
    "inverse",
    "leray_project",
    "make_wells",
    "neg_sobolev_norm",
    "permode_elastic_oracle",
    "plan_branching",
    "read_phase_field",
    "relaxed_elastic_energy",
    "rigidity_report",
    "shear_resample",
    "spectral_derivative",
    "staircase_shifts",
    "strain_from_displacement",
    "surface_energy",
    "to_modified",
    "total_energy",
    "total_variation",
    "uncorrelatedness_gap",
    "volume_fractions",
    "wave_decompose",
    "write_pgm",
    "write_phase_field",
]
