"""Two-view camera motion estimation.

A numpy/scipy library for recovering relative rotation and translation
direction from matched 2D points: a consistent two-step estimator (noise
variance estimation, bias-eliminated spectral initialization, one-step
Gauss-Newton on the rotation group and the unit sphere), the matching
constrained Cramer-Rao bound, a synthetic-scene generator, and a Monte
Carlo benchmark harness.
"""

from .bench import (
    MetricSeries,
    RunConfig,
    TrialRecord,
    emit_report,
    ingest_correspondences,
    mse_bias_metrics,
    run_monte_carlo,
    write_correspondences,
)
from .correspondences import Correspondence, CorrespondenceSet
from .crb import (
    CrbReport,
    GroundTruthScene,
    constrained_crb,
    constraint_nullspace,
    fisher_information,
    measurement_jacobian_xi,
)
from .estimator import (
    DesignMatrices,
    EstimatorConfig,
    PoseEstimate,
    RansacConfig,
    bias_eliminated_spectrum,
    build_design,
    consistent_initial_pose,
    epipolar_cost,
    estimate_motion,
    estimate_noise_variance,
    gn_refine,
    gn_system,
    k_closed_form,
    ml_objective,
    ml_residual,
    pure_rotation_statistic,
    ransac_prefilter,
)
from .geometry import (
    PoseHypothesis,
    SphereChart,
    chart_point,
    decompose_essential,
    essential_from_pose,
    exp_so3,
    forward_measurement,
    hat,
    select_by_cheirality,
    sphere_chart,
    triangulate_depths,
)
from .synth import (
    CameraIntrinsics,
    NoiseSpec,
    SimConfig,
    SimScene,
    coplanarity_statistic,
    generate_scene,
    make_correspondences,
    pixels_to_normalized,
)

__all__ = [
    "CameraIntrinsics",
    "Correspondence",
    "CorrespondenceSet",
    "CrbReport",
    "DesignMatrices",
    "EstimatorConfig",
    "GroundTruthScene",
    "MetricSeries",
    "NoiseSpec",
    "PoseEstimate",
    "PoseHypothesis",
    "RansacConfig",
    "RunConfig",
    "SimConfig",
    "SimScene",
    "SphereChart",
    "TrialRecord",
    "bias_eliminated_spectrum",
    "build_design",
    "chart_point",
    "consistent_initial_pose",
    "constrained_crb",
    "constraint_nullspace",
    "coplanarity_statistic",
    "decompose_essential",
    "emit_report",
    "epipolar_cost",
    "essential_from_pose",
    "estimate_motion",
    "estimate_noise_variance",
    "exp_so3",
    "fisher_information",
    "forward_measurement",
    "generate_scene",
    "gn_refine",
    "gn_system",
    "hat",
    "ingest_correspondences",
    "k_closed_form",
    "make_correspondences",
    "measurement_jacobian_xi",
    "ml_objective",
    "ml_residual",
    "mse_bias_metrics",
    "pixels_to_normalized",
    "pure_rotation_statistic",
    "ransac_prefilter",
    "run_monte_carlo",
    "select_by_cheirality",
    "sphere_chart",
    "triangulate_depths",
    "write_correspondences",
]
