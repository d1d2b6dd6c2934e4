"""Point systems on the unit sphere: generation, discrepancy, interpolation.

The package builds and scores well-separated spherical node sets.  Quality
is measured by kernel discrepancies (closed forms and truncated
reciprocal-symbol Legendre series), nodes come from greedy kernel-sum
minimization or k-nearest-neighbor Riesz descent, and the interpolation
module fits kernel interpolants with fast leave-one-out cross-validation.
"""

from .errors import (
    CapabilityError,
    ConditioningError,
    ConfigurationError,
    DomainError,
    PointSetFormatError,
    PointSetValidationError,
    SingularKernelError,
)
from .legendre import (
    N_EXACT_MAX,
    PolynomialCoefficients,
    harmonic_dimension,
    legendre_derivative_eval,
    legendre_eval,
    legendre_norm,
    rodrigues_coefficients,
)
from .kernels import (
    FAMILIES,
    KernelSpec,
    SymbolSequence,
    is_singular_at_coincidence,
    kernel_derivative,
    kernel_eval,
    kernel_series_eval,
    kernel_uniform_mean,
    parse_kernel,
    symbol_squared,
)
from .discrepancy import (
    DiscrepancyReport,
    PointSet,
    WeightedMeasure,
    energy,
    mean_pair_discrepancy,
    measure_inner_product,
    min_generalized_discrepancy,
    rms_discrepancy,
    series_generalized_discrepancy,
    signed_discrepancy,
)
from .pointgen import (
    CandidateGrid,
    RefineParams,
    candidate_grid,
    greedy_generate,
    greedy_initial,
    greedy_next,
    knn_indices,
    random_unit_points,
    riesz_refine,
)
from .interpolation import (
    InterpolantModel,
    SweepReport,
    epsilon_sweep,
    fit_interpolant,
    franke_eval,
    interpolant_eval,
    loocv_errors_fast,
    loocv_errors_slow,
    monomial_basis,
)
from .sphio import (
    cartesian_to_spherical,
    read_pointset,
    spherical_to_cartesian,
    write_pointset,
)
from .tables import run_table1, run_table2

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
