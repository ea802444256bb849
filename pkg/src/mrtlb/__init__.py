"""Fourth-order MRT lattice Boltzmann models for diagonal-anisotropic diffusion with a linear source."""

from .errors import (
    ConfigurationError,
    DegenerateNorm,
    DegenerateSource,
    DivergenceDetected,
    InfeasibleCorrection,
    InfeasibleParameters,
    NumericalFailure,
    SingularMatrix,
)
from .lattice import Family, LatticeSpec, RelaxationSet, WeightSet, build_lattice, collision_matrix
from .params import (
    Discretization,
    ModelParams,
    PDEParams,
    axis_lattice_closed_form,
    isotropic_closed_form,
    solve_model,
    synthesize,
    tilde_to_s,
)

__version__ = "0.1.0"
