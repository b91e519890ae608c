"""metricgeo: finite metric spaces, rough-angle conditions, and self-contracted curves.

The toolkit verifies checkable metric-geometry conditions on finite
spaces (SRA, angular total boundedness and its geodesic variant,
self-contractedness, doubling), searches for extremal subsets, and
generates the benchmark spaces these conditions are famous for: Laakso
graphs, broom trees, the Heisenberg-group axis, and integer-lattice word
metrics with stable-norm estimation.
"""

from .core import (
    AngleValue,
    DoublingEstimate,
    FiniteMetricSpace,
    SeparatedSubset,
    ValidationReport,
    comparison_angle,
    comparison_angle_matrix,
    doubling_estimate,
    max_separated_subset,
    random_metric_space,
    snowflake_transform,
    validate_metric,
)
from .sra import (
    AngleBoundReport,
    DoublingThreshold,
    RamseyCertificate,
    SraParameter,
    SraReport,
    SraSubsetResult,
    SraViolation,
    check_triple_sra,
    compute_sra_free_bound,
    doubling_threshold,
    max_sra_subset,
    ramsey_upper_bound,
    sra_angle_bound,
    verify_sra_set,
)
from .graphs import GeodesicSet, WeightedGraph, path_graph, star_graph
from .atb import (
    AngleSeparationWitness,
    AtbParameters,
    AtbStarResult,
    LrbEstimate,
    atb_star_check,
    calemma_fuzz,
    compute_beta,
    lrb_constant_estimate,
    max_angle_separated,
)
from .curves import (
    DescentSpec,
    DiscreteCurve,
    LengthReport,
    QuasiConvexReport,
    SelfContractedReport,
    curve_length,
    extract_sra_from_curve,
    gradient_descent_trajectory,
    is_self_contracted,
    quasi_convexity_sample,
)
from .generators import (
    BroomTree,
    LaaksoGraph,
    StableNormEstimate,
    WordMetricBall,
    broom_tree,
    cayley_ball,
    heisenberg_axis,
    heisenberg_axis_curve,
    laakso_graph,
    laakso_pair_distance,
    laakso_points_space,
    laakso_sra_points,
    normed_sample,
    normed_space_from_points,
    stable_norm_estimate,
    word_ball_space,
)
from .errors import (
    DegenerateTripleError,
    MalformedInputError,
    MetricGeoError,
    ParameterError,
    SearchCapError,
    StepSizeError,
)

__version__ = "0.1.0"
