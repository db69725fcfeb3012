"""Local-KMS thermal two-point functions of the free Klein-Gordon field.

The package evaluates the regular part W(q, z) of a locally thermal
two-point function, checks detailed balance and the equation-of-motion
constraints, and classifies inverse-temperature fields as global KMS,
hot bang or cold bang.
"""

from .beta_classifier import (
    Verdict,
    VerdictKind,
    classify_affine,
    classify_field,
    maximal_region,
    temperature,
)
from .constraint_checks import (
    ResidualReport,
    beta_box,
    beta_jacobian,
    constraint1_residual,
    constraint2_residual,
    kms_detailed_balance,
    w_pde_residuals,
)
from .fields import AffineBetaField, DomainError, StateSpec, antisymmetric_from_entries, evaluate_beta
from .minkowski import (
    ETA,
    Box,
    ConeKind,
    ConeRegion,
    LorentzBoost,
    boost_from_velocity,
    boost_to_rest,
    cone_contains,
    is_future_timelike,
    mink_dot,
    point_split,
    shell_lift,
    split_point,
)
from .quadrature import QuadratureError
from .sampling import SplitMix64, default_shell_samples
from .shell_tensor import (
    NullFormDecomposition,
    massive_null_test,
    massless_null_decompose,
    shell_quadratic,
    sym_antisym_split,
)
from .thermal_wightman import (
    DEFAULT_QUADRATURE,
    QuadratureConfig,
    bose,
    coincidence_limit,
    fourier_weights,
    full_two_point_spacelike_massless,
    regular_part,
    regular_part_closed_massless,
    regular_part_with_error,
)

__version__ = "0.1.0"
