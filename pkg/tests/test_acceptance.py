"""Acceptance suite: the headline statistical claims at their stated tolerances.

Each criterion prints one PASS/FAIL line (run with -s to see them). The
suite is self-contained: synthetic data only, no network, no datasets.
"""

import math
import time

import numpy as np
import pytest

from twoview.bench import RunConfig, render_report, run_monte_carlo
from twoview.correspondences import CorrespondenceSet
from twoview.crb import constrained_crb
from twoview.errors import EstimationError
from twoview.estimator import (
    EstimatorConfig,
    build_design,
    estimate_motion,
    estimate_noise_variance,
    gn_system,
    _residuals_all,
)
from twoview.geometry import (
    chart_point,
    decompose_essential,
    essential_from_pose,
    exp_so3,
    hat,
    select_by_cheirality,
    sphere_chart,
)
from twoview.synth import NoiseSpec, SimConfig, generate_scene, make_correspondences

from conftest import make_pair_data, random_bearing, random_view_rotation

F_PX = 800.0
BASE_SIM = SimConfig()  # translation [5 5 5] cm, Euler ZYX 20/20/20 deg, f=800, 640x480, depths 1-5 m


def report(criterion, ok, detail):
    marker = "PASS" if ok else "FAIL"
    print(f"[{marker}] criterion {criterion}: {detail}")
    assert ok, f"criterion {criterion}: {detail}"


def loglog_slope(xs, ys):
    return float(np.polyfit(np.log10(xs), np.log10(ys), 1)[0])


def test_criterion_1_noise_variance_consistency():
    sizes = (500, 5000, 50000)
    sigma2_true = (1.0 / F_PX) ** 2
    medians, mses = [], []
    for m in sizes:
        errs = []
        for seed in range(100):
            scene = generate_scene(SimConfig(point_count=m, seed=seed))
            cset, _ = make_correspondences(
                scene, NoiseSpec(kind="iid_gaussian", sigma_px=1.0), seed=10_000 + seed
            )
            s2 = estimate_noise_variance(build_design(cset))
            errs.append(s2 - sigma2_true)
        errs = np.array(errs)
        medians.append(float(np.median(np.abs(errs))) / sigma2_true)
        mses.append(float(np.mean(errs**2)))
    slope = loglog_slope(sizes, mses)
    ok = all(a > b for a, b in zip(medians, medians[1:])) and abs(slope + 1.0) <= 0.3
    report(1, ok, f"median rel errors {medians}, MSE log-log slope {slope:.3f} (want -1 +- 0.3)")


def test_criterion_2_first_step_consistency():
    cfg = RunConfig(
        experiment="consistency_sweep",
        sim=SimConfig(noise=NoiseSpec(kind="iid_gaussian", sigma_px=1.0)),
        sweep_values=(100, 1000, 10000),
        trials=500,
        estimator=EstimatorConfig(gn_iterations=0),
        base_seed=101,
    )
    series = run_monte_carlo(cfg)
    ms = [s.sweep_value for s in series]
    slope_R = loglog_slope(ms, [s.mse_rotation for s in series])
    slope_t = loglog_slope(ms, [s.mse_bearing for s in series])
    ok = abs(slope_R + 1.0) <= 0.2 and abs(slope_t + 1.0) <= 0.2
    report(2, ok, f"initial-estimator slopes R {slope_R:.3f}, t {slope_t:.3f} (want -1 +- 0.2)")


def test_criterion_3_asymptotic_efficiency():
    ratios = {}
    ok = True
    for sigma_px in (0.25, 0.5, 1.0, 2.0):
        cfg = RunConfig(
            experiment="single_estimate",
            sim=SimConfig(
                point_count=1000, noise=NoiseSpec(kind="iid_gaussian", sigma_px=sigma_px)
            ),
            trials=1000,
            base_seed=202,
        )
        s = run_monte_carlo(cfg)[0]
        r_R = s.mse_rotation / s.crb_rotation
        r_t = s.mse_bearing / s.crb_bearing
        ratios[sigma_px] = (round(r_R, 3), round(r_t, 3))
        ok = ok and 0.8 <= r_R <= 1.3 and 0.8 <= r_t <= 1.3
    report(3, ok, f"MSE/CRB ratios by sigma_px {ratios} (want within [0.8, 1.3])")


def test_criterion_4_single_gn_step_suffices():
    cfg = RunConfig(
        experiment="gn_count_sweep",
        sim=SimConfig(point_count=1000, noise=NoiseSpec(kind="iid_gaussian", sigma_px=1.0)),
        sweep_values=(0, 1, 5),
        trials=500,
        base_seed=303,
    )
    series = {int(s.sweep_value): s for s in run_monte_carlo(cfg)}
    improve_R = series[1].mse_rotation < series[0].mse_rotation
    improve_t = series[1].mse_bearing < series[0].mse_bearing
    drift_R = abs(series[5].mse_rotation - series[1].mse_rotation) / series[1].mse_rotation
    drift_t = abs(series[5].mse_bearing - series[1].mse_bearing) / series[1].mse_bearing
    ok = improve_R and improve_t and drift_R < 0.10 and drift_t < 0.10
    report(
        4,
        ok,
        f"one step improves (R {improve_R}, t {improve_t}); extra-step drift "
        f"R {drift_R:.3%}, t {drift_t:.3%} (want < 10%)",
    )


def test_criterion_5_eigenvector_ablation():
    def mse_R_at(rank, m, trials):
        cfg = RunConfig(
            experiment="eigenvector_ablation",
            sim=SimConfig(point_count=m, noise=NoiseSpec(kind="iid_gaussian", sigma_px=1.0)),
            sweep_values=(rank,),
            trials=trials,
            base_seed=404,
        )
        return run_monte_carlo(cfg)[0].mse_rotation

    base = mse_R_at(0, 1000, 200)
    second = mse_R_at(1, 1000, 200)
    third = mse_R_at(2, 1000, 200)
    second_10k = mse_R_at(1, 10000, 200)
    third_10k = mse_R_at(2, 10000, 200)
    factor_ok = second >= 10 * base and third >= 10 * base
    trend_ok = second_10k >= 0.5 * second and third_10k >= 0.5 * third
    ok = factor_ok and trend_ok
    report(
        5,
        ok,
        f"MSE_R: best {base:.2e}, 2nd {second:.2e}, 3rd {third:.2e} (want >= 10x); "
        f"at m=10000: 2nd {second_10k:.2e}, 3rd {third_10k:.2e} (no decreasing trend)",
    )


def test_criterion_6_translation_length_behavior():
    cfg = RunConfig(
        experiment="translation_sweep",
        sim=SimConfig(point_count=1000, noise=NoiseSpec(kind="iid_gaussian", sigma_px=0.5)),
        sweep_values=(0.01, 0.02, 0.04, 0.08, 0.16),
        trials=50,
        base_seed=505,
    )
    series = run_monte_carlo(cfg)
    crb_R = [s.crb_rotation for s in series]
    crb_t = [s.crb_bearing for s in series]
    stats = [s.pure_rotation_stat for s in series]
    spread = max(crb_R) / min(crb_R) - 1.0
    ok = (
        spread < 0.10
        and all(a > b for a, b in zip(crb_t, crb_t[1:]))
        and all(a < b for a, b in zip(stats, stats[1:]))
    )
    report(
        6,
        ok,
        f"CRB_R spread {spread:.2%} (want < 10%); CRB_t decreasing {crb_t}; "
        f"statistic increasing {[round(v, 5) for v in stats]}",
    )


def test_criterion_7_non_iid_noise():
    cfg = RunConfig(
        experiment="noniid_check",
        sim=SimConfig(noise=NoiseSpec(kind="per_point_uniform_sigma", sigma_range_px=(0.5, 1.5))),
        sweep_values=(1000, 10000),
        trials=300,
        base_seed=606,
    )
    series = {int(s.sweep_value): s for s in run_monte_carlo(cfg)}
    consistent = (
        series[10000].mse_rotation < series[1000].mse_rotation
        and series[10000].mse_bearing < series[1000].mse_bearing
    )
    ratio_R = series[10000].mse_rotation / series[10000].crb_rotation
    ratio_t = series[10000].mse_bearing / series[10000].crb_bearing
    ok = consistent and ratio_R > 1.3 and ratio_t > 1.3
    report(
        7,
        ok,
        f"MSE decreases with m: {consistent}; efficiency lost at m=10000: "
        f"ratio_R {ratio_R:.3f}, ratio_t {ratio_t:.3f} (want > 1.3)",
    )


def test_criterion_8_outlier_robustness():
    cfg = RunConfig(
        experiment="outlier_sweep",
        sim=SimConfig(point_count=1000, noise=NoiseSpec(kind="iid_gaussian", sigma_px=1.0)),
        sweep_values=(0.0, 0.04, 0.08),
        trials=200,
        estimator=EstimatorConfig(enable_prefilter=True),
        base_seed=707,
    )
    series = {round(s.sweep_value, 2): s for s in run_monte_carlo(cfg)}
    factor = series[0.08].mse_rotation / series[0.0].mse_rotation
    ok = factor <= 5.0
    report(
        8,
        ok,
        f"MSE_R at 8% outliers / 0% = {factor:.2f} (want <= 5); "
        f"MSE_R values { {k: f'{v.mse_rotation:.2e}' for k, v in series.items()} }",
    )


class TestCriterion9PropertySuites:
    """Property checks runnable offline, aggregated as criterion 9."""

    def test_jacobian_finite_difference_agreement(self):
        worst = 0.0
        for seed in range(25):
            rng = np.random.default_rng(seed)
            R = random_view_rotation(rng)
            t = random_bearing(rng)
            y, z, _ = make_pair_data(rng, 6, R, t, sigma=1.0 / F_PX)
            cset = CorrespondenceSet(y, z)
            chart = sphere_chart(t)
            J, _ = gn_system(R, chart, cset)

            def stacked_u(params):
                Rp = R @ exp_so3(params[:3])
                tp = chart_point(chart, params[3], params[4])
                res, *_ = _residuals_all(Rp, tp, cset)
                return (cset.z - res).reshape(-1)

            step = 1e-6
            cols = [
                (stacked_u(step * np.eye(5)[j]) - stacked_u(-step * np.eye(5)[j])) / (2 * step)
                for j in range(5)
            ]
            J_fd = np.column_stack(cols)
            worst = max(worst, np.abs(J - J_fd).max() / max(np.abs(J_fd).max(), 1.0))
        report("9a", worst < 1e-5, f"Jacobian vs central differences: worst rel {worst:.2e}")

    def test_essential_round_trip(self):
        worst = 0.0
        for seed in range(200):
            rng = np.random.default_rng(seed)
            R = random_view_rotation(rng)
            t = random_bearing(rng)
            y, z, _ = make_pair_data(rng, 15, R, t)
            win = select_by_cheirality(
                decompose_essential(essential_from_pose(R, t)), CorrespondenceSet(y, z)
            )
            worst = max(worst, np.abs(win.rotation - R).max(), np.abs(win.bearing - t).max())
        report("9b", worst <= 1e-8, f"essential decompose/cheirality round trip: worst {worst:.2e}")

    def test_noise_free_exact_recovery(self):
        worst = 0.0
        for seed in range(20):
            rng = np.random.default_rng(seed)
            R = random_view_rotation(rng)
            t = random_bearing(rng)
            y, z, _ = make_pair_data(rng, 50, R, t)
            est = estimate_motion(CorrespondenceSet(y, z))
            worst = max(worst, np.abs(est.rotation - R).max(), np.abs(est.bearing - t).max())
        report("9c", worst <= 1e-6, f"noise-free pipeline recovery: worst {worst:.2e}")

    def test_chart_and_exponential_invariants(self):
        rng = np.random.default_rng(0)
        worst_chart = worst_rot = 0.0
        for _ in range(2000):
            t = random_bearing(rng)
            if abs(t[2]) > 1.0 - 1e-6:
                continue
            back = chart_point(sphere_chart(t), 0.0, 0.0)
            worst_chart = max(worst_chart, float(np.abs(back - t).max()))
            s = rng.uniform(-3, 3, 3)
            Rm = exp_so3(s)
            worst_rot = max(
                worst_rot,
                float(np.abs(Rm.T @ Rm - np.eye(3)).max()),
                abs(float(np.linalg.det(Rm)) - 1.0),
            )
            assert np.abs(hat(s).T + hat(s)).max() == 0.0
        ok = worst_chart <= 1e-12 and worst_rot <= 1e-9
        report("9d", ok, f"chart identity worst {worst_chart:.2e}; exp SO(3) worst {worst_rot:.2e}")

    def test_deterministic_rerun_byte_identical(self):
        cfg = RunConfig(
            experiment="consistency_sweep",
            sim=SimConfig(noise=NoiseSpec(kind="iid_gaussian", sigma_px=1.0)),
            sweep_values=(100, 200),
            trials=5,
            base_seed=808,
            output_format="json",
        )
        a = render_report(run_monte_carlo(cfg), cfg)
        b = render_report(run_monte_carlo(cfg), cfg)
        report("9e", a == b, f"bench rerun byte-identical: {a == b}")

    def test_runtime_scales_linearly(self):
        def mean_runtime(m, trials=30):
            times = []
            for seed in range(trials):
                scene = generate_scene(SimConfig(point_count=m, seed=900 + seed))
                cset, _ = make_correspondences(
                    scene, NoiseSpec(kind="iid_gaussian", sigma_px=1.0), seed=seed
                )
                start = time.perf_counter_ns()
                estimate_motion(cset)
                times.append((time.perf_counter_ns() - start) / 1000.0)
            return float(np.median(times))

        mean_runtime(1000, trials=3)  # warm the caches before timing
        t1k = mean_runtime(1000)
        t10k = mean_runtime(10000)
        ok = t10k <= 15.0 * t1k
        report("9f", ok, f"median runtime m=1000: {t1k:.0f} us, m=10000: {t10k:.0f} us (want <= 15x)")
