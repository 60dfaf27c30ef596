"""Gromov-Hausdorff distances between finite metric spaces."""

from .admissible import AdmissibleMetric, glue_from_correspondence, midpoint_space, sample_admissible
from .correspondences import (
    Correspondence,
    GHResult,
    distortion,
    enumerate_correspondences,
    gh_exact,
    gh_exact_oracle,
    gh_lower_bound,
    nearest_point_correspondence,
)
from .embed_linf import SupNormPointSet, align_upper_bound, kuratowski_embed, supnorm_hausdorff
from .generators import generate_space
from .maps import (
    PointMap,
    correspondence_to_map,
    covering_radius,
    edwards_dE,
    hat_dGH,
    is_eps_isometry,
    map_distortion,
    min_distortion_map,
)
from .metric_core import (
    FiniteMetricSpace,
    PointSubset,
    hausdorff_distance,
    is_eps_net,
    point_set_distance,
    scale_space,
    validate_space,
)

__version__ = "0.1.0"
