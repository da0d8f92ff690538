"""ccslab: common-cause-system analysis for discrete finite quantum systems."""

__version__ = "0.1.0"

from .core import (
    CCSLabError,
    CommutationClass,
    CorrelationClass,
    DEFAULT_TOL,
    DensityState,
    DimensionMismatchError,
    EventPair,
    NotACCSError,
    Partition,
    PreconditionError,
    ProjectionEvent,
    PureState,
    Tolerance,
    ValidationError,
    ZeroProbabilityError,
    commutation_class,
    complement,
    conditional_correlation,
    conditional_expectation,
    conditional_probability,
    conditional_state,
    correlation,
    correlation_class,
    check_lemma_wcomm,
    is_ccs,
    is_deterministic_ccs,
    probability,
    satisfies_ltp,
)
from .classify import CCSReport, Determinism, ProductStatus, certify_triviality, classify
from .families import (
    Family,
    FamilyParams,
    TrivialityLevel,
    associated_state,
    expected_table_row,
    generate,
)
from .sampling import SamplerConfig, SamplingMethod
from .solver import LTPSolution, plot_data, quadratic_residual, solve_state_params, uv_coefficients
from .twoqubit import (
    canonical_events,
    concurrence_squared,
    conditional_probs_canonical,
    correlation_determinant,
    ltp_check_2x2,
    nonproduct_from_product,
    perfect_correlation_pure,
    perfect_correlation_state,
    productness_determinant,
    screening_determinant,
    separability_determinant,
)

__all__ = [name for name in dir() if not name.startswith("_")]
