mod support;

use bootagg::{
    simulate_pipeline_coverage, simulate_range_coverage, simulate_region_inference,
    PipelineScenario, PlotFrame64, RenderSpec, Rgb, ScalarDistribution, SeededRng,
};
use support::{beta_quantile_bisect, binomial_pmf_direct};

fn normal() -> ScalarDistribution {
    ScalarDistribution::normal(0.0, 1.0).unwrap()
}

/// Probability that the one-sided Jeffreys bound does not exceed `p`,
/// with the bounds found by bisection on the quadrature CDF.
fn exact_validity_oracle(n: u32, p: f64, alpha: f64) -> f64 {
    (0..=n)
        .filter(|&z| {
            let lower = if z == 0 {
                0.0
            } else {
                beta_quantile_bisect(alpha, z as f64 + 0.5, (n - z) as f64 + 0.5)
            };
            lower <= p
        })
        .map(|z| binomial_pmf_direct(n, p, z))
        .sum()
}

#[test]
fn continuous_range_coverage_is_exact() {
    let r = simulate_range_coverage(&normal(), 39, 10_000, &SeededRng::new(1)).unwrap();
    assert!((0.94..=0.96).contains(&r.estimate), "{r}");
    assert!((r.estimate - 0.95).abs() <= 4.5 * r.mc_std_error);
    assert_eq!(r.theoretical, 0.95);
    assert_eq!(r.estimate, r.hits as f64 / r.trials as f64);
}

#[test]
fn point_mass_is_always_covered() {
    let dist = ScalarDistribution::discrete(vec![3.0], vec![1.0]).unwrap();
    let r = simulate_range_coverage(&dist, 2, 500, &SeededRng::new(2)).unwrap();
    assert_eq!(r.estimate, 1.0);
}

#[test]
fn ties_only_raise_coverage() {
    let dist = ScalarDistribution::discrete(vec![0.0, 1.0, 2.0], vec![0.6, 0.3, 0.1]).unwrap();
    let r = simulate_range_coverage(&dist, 9, 10_000, &SeededRng::new(3)).unwrap();
    assert!(r.estimate >= 0.8 - 3.0 * r.mc_std_error, "{r}");
}

#[test]
fn standard_error_shrinks_with_trials() {
    let dist = ScalarDistribution::uniform(0.0, 1.0).unwrap();
    let small = simulate_range_coverage(&dist, 5, 4_000, &SeededRng::new(4)).unwrap();
    let large = simulate_range_coverage(&dist, 5, 16_000, &SeededRng::new(4)).unwrap();
    let ratio = large.mc_std_error / small.mc_std_error;
    assert!((ratio - 0.5).abs() < 0.05, "ratio {ratio}");
}

#[test]
fn continuous_runs_stay_within_band() {
    let dist = ScalarDistribution::exponential(2.0).unwrap();
    let inside = (0..200)
        .filter(|&seed| {
            let r = simulate_range_coverage(&dist, 9, 2_000, &SeededRng::new(seed)).unwrap();
            (r.estimate - r.theoretical).abs() <= 4.5 * r.mc_std_error
        })
        .count();
    assert!(inside >= 198, "{inside}/200");
}

#[test]
fn range_rejects_bad_arguments() {
    assert!(simulate_range_coverage(&normal(), 1, 10, &SeededRng::new(0)).is_err());
    assert!(simulate_range_coverage(&normal(), 5, 0, &SeededRng::new(0)).is_err());
}

fn scenario(n: usize, trials: usize, width: u32) -> PipelineScenario {
    PipelineScenario {
        generator: normal(),
        dataset_rows: 30,
        n,
        trials,
        frame: PlotFrame64::new((-1.5, 1.5), (-1.0, 1.0), width, 150, Rgb::WHITE).unwrap(),
        spec: RenderSpec::point_estimate("value"),
    }
}

#[test]
fn pipeline_coverage_tracks_the_scalar_bound() {
    let r = simulate_pipeline_coverage(&scenario(39, 1_000, 300), &SeededRng::new(5)).unwrap();
    assert!((0.92..=0.98).contains(&r.pixel.estimate), "{}", r.pixel);
    assert!(r.pixel.hits >= r.statistic.hits);
}

#[test]
fn pipeline_with_two_images() {
    let r = simulate_pipeline_coverage(&scenario(2, 1_000, 3000), &SeededRng::new(6)).unwrap();
    assert!((r.pixel.estimate - 1.0 / 3.0).abs() <= 0.05, "{}", r.pixel);
}

#[test]
fn collapsed_frame_covers_everything() {
    let mut s = scenario(5, 200, 300);
    s.frame = PlotFrame64::new((-1000.0, 1000.0), (-1.0, 1.0), 3, 5, Rgb::WHITE).unwrap();
    s.spec = RenderSpec::point_estimate("value").with_mark_size(1);
    let r = simulate_pipeline_coverage(&s, &SeededRng::new(7)).unwrap();
    assert_eq!(r.pixel.estimate, 1.0);
}

#[test]
fn pipeline_is_reproducible() {
    let s = scenario(9, 50, 300);
    let a = simulate_pipeline_coverage(&s, &SeededRng::new(8)).unwrap();
    let b = simulate_pipeline_coverage(&s, &SeededRng::new(8)).unwrap();
    assert_eq!(a, b);
    let mut bad = s.clone();
    bad.spec = RenderSpec::bar_chart("value", &["a"]);
    assert!(simulate_pipeline_coverage(&bad, &SeededRng::new(8)).is_err());
}

#[test]
fn region_bound_above_support_is_always_valid() {
    let dist = ScalarDistribution::uniform(0.0, 1.0).unwrap();
    let r = simulate_region_inference(&dist, 39, 2.0, 0.05, 500, &SeededRng::new(9)).unwrap();
    assert_eq!(r.true_p, 1.0);
    assert_eq!(r.validity, 1.0);
    assert_eq!(r.all_empty_trials, 500);
}

#[test]
fn region_validity_matches_exact_binomial() {
    let dist = normal();
    let threshold = dist.quantile(0.98).unwrap();
    let r =
        simulate_region_inference(&dist, 39, threshold, 0.05, 2_000, &SeededRng::new(10)).unwrap();
    assert!((r.true_p - 0.98).abs() < 1e-12);
    let oracle = exact_validity_oracle(39, 0.98, 0.05);
    assert!(
        (r.exact_validity - oracle).abs() < 1e-9,
        "{} vs {oracle}",
        r.exact_validity
    );
    assert!(r.validity >= 0.95 - 3.0 * r.mc_std_error, "{:?}", r);
    let se = (oracle * (1.0 - oracle) / 2_000.0).sqrt();
    assert!((r.validity - oracle).abs() <= 4.0 * se);
}

#[test]
fn region_with_one_image() {
    let dist = normal();
    let r = simulate_region_inference(&dist, 1, 0.5, 0.05, 1_000, &SeededRng::new(11)).unwrap();
    let q = beta_quantile_bisect(0.05, 1.5, 0.5);
    assert!(q > 0.0 && q < 1.0);
    assert!((r.lower_all_empty - q).abs() < 1e-9);
    let oracle = exact_validity_oracle(1, r.true_p, 0.05);
    assert!((r.exact_validity - oracle).abs() < 1e-9);
}

#[test]
fn marks_outside_the_frame_count_as_misses() {
    let mut s = scenario(9, 40, 300);
    s.frame = PlotFrame64::new((5.0, 6.0), (-1.0, 1.0), 300, 150, Rgb::WHITE).unwrap();
    let r = simulate_pipeline_coverage(&s, &SeededRng::new(3)).unwrap();
    assert_eq!(r.pixel.hits, 0);
    assert!(r.statistic.hits > 0);
}
