"""Fixed-point metric extensions and Arens-Eells linearization certificates.

The package certifies, at desk scale and in exact rational arithmetic,
that a non-expansive semigroup action with bounded orbits extends by a
fixed point and embeds equivariantly and isometrically into a normed
space of formal linear combinations.
"""

from .action import (
    GeneratorMap,
    OrbitResult,
    OrbitStatus,
    SemigroupAction,
    adjoin_identity,
    apply_word,
    check_non_expansive,
    check_remark2_transfer,
    find_fixed_points,
    materialize_closure,
    orbit,
)
from .arens_eells import (
    FormalCombination,
    LipschitzPotential,
    NormResult,
    PointedSpace,
    SignedMass,
    TransportPlan,
    ae_norm,
    apply_action,
    embed,
    mass_norm,
    reduce,
    verify_dual_certificate,
)
from .errors import (
    AelinError,
    InternalDefect,
    OrbitBudgetExceeded,
    PreconditionError,
    StructuralError,
)
from .extension import (
    ConstantExtension,
    ExtendedSpace,
    SupdistExtension,
    build_fixed_point_extension,
    check_diam_bound,
    extend_action,
    extend_bounded_const,
    validate_extension,
)
from .hausdorff import check_group_identification, hausdorff_dist
from .linearize import (
    Certificate,
    LinearizationBundle,
    LinearizeConfig,
    bundle_doc,
    certify,
    linearize,
    parse_bundle,
)
from .metric import (
    FiniteMetricSpace,
    ImplicitMetricSpace,
    PointId,
    ValidationReport,
    Violation,
    diam,
    supdist,
    validate_metric,
)
from .scalars import EXACT, Mode, Scalar, float_mode

__version__ = "0.1.0"
