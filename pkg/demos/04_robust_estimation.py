"""Outlier robustness: RANSAC prefilter plus a truncated kernel.

Plants uniform outliers among the correspondences and compares the plain
estimator against the robust configuration (9-point spectral RANSAC
prefilter, truncated least-squares kernel in the refinement step).
"""

import numpy as np

from twoview import (
    EstimatorConfig,
    NoiseSpec,
    SimConfig,
    estimate_motion,
    generate_scene,
    make_correspondences,
)

plain = EstimatorConfig()
robust = EstimatorConfig(enable_prefilter=True)

print(f"{'outliers':>9} {'plain MSE_R':>12} {'robust MSE_R':>13} {'inliers kept':>13}")
for rate in (0.0, 0.04, 0.08):
    errs_plain, errs_robust, kept = [], [], []
    for seed in range(30):
        scene = generate_scene(SimConfig(point_count=1000, seed=seed))
        spec = NoiseSpec(kind="iid_gaussian", sigma_px=1.0, outlier_rate=rate)
        cset, truth = make_correspondences(scene, spec, seed=1000 + seed)
        est_p = estimate_motion(cset, plain)
        est_r = estimate_motion(cset, robust)
        errs_plain.append(np.sum((est_p.rotation - truth.rotation) ** 2))
        errs_robust.append(np.sum((est_r.rotation - truth.rotation) ** 2))
        kept.append(est_r.inlier_mask.mean())
    print(
        f"{rate:>9.0%} {np.mean(errs_plain):>12.2e} {np.mean(errs_robust):>13.2e} "
        f"{np.mean(kept):>13.1%}"
    )

print()
print("without the prefilter a few percent of outliers dominate the error;")
print("with it the accuracy degrades only mildly")
