//! Monte Carlo checks of the coverage guarantees, both on plain scalars and
//! through the full resample → render → aggregate pipeline.

use std::fmt;

use rand::Rng;
use rand_distr::weighted::WeightedIndex;
use rand_distr::{Distribution, Exp, Normal, Uniform};
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal as NormalLaw};

use crate::aggregation::{observed_interval, Axis, ImageStack};
use crate::coverage::{implied_coverage_value, jeffreys_interval, CoverageSpec};
use crate::error::{AggregationError, HarnessError};
use crate::raster::{
    point_statistic, BuiltinRenderer, PlotFrame, RenderKind, RenderSpec, Renderer,
};
use crate::resampling::{bootstrap_resample, Dataset, SeededRng};
use crate::special::ln_gamma;

#[derive(Debug, Clone, PartialEq)]
pub enum ScalarDistribution {
    Normal { mu: f64, sigma: f64 },
    Uniform { a: f64, b: f64 },
    Exponential { rate: f64 },
    Discrete { values: Vec<f64>, probs: Vec<f64> },
}

impl ScalarDistribution {
    pub fn normal(mu: f64, sigma: f64) -> Result<Self, HarnessError> {
        if !(sigma > 0.0 && sigma.is_finite() && mu.is_finite()) {
            return Err(domain(format!(
                "normal needs finite mu and sigma > 0, got {mu}, {sigma}"
            )));
        }
        Ok(Self::Normal { mu, sigma })
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self, HarnessError> {
        if !(a < b && a.is_finite() && b.is_finite()) {
            return Err(domain(format!("uniform needs finite a < b, got {a}, {b}")));
        }
        Ok(Self::Uniform { a, b })
    }

    pub fn exponential(rate: f64) -> Result<Self, HarnessError> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(domain(format!("exponential needs rate > 0, got {rate}")));
        }
        Ok(Self::Exponential { rate })
    }

    /// Probabilities must be non-negative and sum to 1 (within 1e-9).
    pub fn discrete(values: Vec<f64>, probs: Vec<f64>) -> Result<Self, HarnessError> {
        let total: f64 = probs.iter().sum();
        if values.is_empty()
            || values.len() != probs.len()
            || probs.iter().any(|p| p.is_nan() || *p < 0.0)
            || (total - 1.0).abs() > 1e-9
            || values.iter().any(|v| !v.is_finite())
        {
            return Err(domain(
                "discrete law needs matching values and probabilities summing to 1".into(),
            ));
        }
        Ok(Self::Discrete { values, probs })
    }

    pub fn mean(&self) -> f64 {
        match self {
            Self::Normal { mu, .. } => *mu,
            Self::Uniform { a, b } => 0.5 * (a + b),
            Self::Exponential { rate } => 1.0 / rate,
            Self::Discrete { values, probs } => values.iter().zip(probs).map(|(v, p)| v * p).sum(),
        }
    }

    pub fn std_dev(&self) -> f64 {
        match self {
            Self::Normal { sigma, .. } => *sigma,
            Self::Uniform { a, b } => (b - a) / 12f64.sqrt(),
            Self::Exponential { rate } => 1.0 / rate,
            Self::Discrete { values, probs } => {
                let m = self.mean();
                values
                    .iter()
                    .zip(probs)
                    .map(|(v, p)| p * (v - m) * (v - m))
                    .sum::<f64>()
                    .sqrt()
            }
        }
    }

    /// Draws `count` values.
    pub fn sample_n<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Vec<f64> {
        match self {
            Self::Normal { mu, sigma } => {
                let d = Normal::new(*mu, *sigma).expect("validated");
                (0..count).map(|_| d.sample(rng)).collect()
            }
            Self::Uniform { a, b } => {
                let d = Uniform::new_inclusive(*a, *b).expect("validated");
                (0..count).map(|_| d.sample(rng)).collect()
            }
            Self::Exponential { rate } => {
                let d = Exp::new(*rate).expect("validated");
                (0..count).map(|_| d.sample(rng)).collect()
            }
            Self::Discrete { values, probs } => {
                let d = WeightedIndex::new(probs).expect("validated");
                (0..count).map(|_| values[d.sample(rng)]).collect()
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Self::Normal { mu, sigma } => NormalLaw::new(*mu, *sigma).expect("validated").cdf(x),
            Self::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            Self::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            Self::Discrete { values, probs } => values
                .iter()
                .zip(probs)
                .filter(|(v, _)| **v <= x)
                .map(|(_, p)| p)
                .sum::<f64>()
                .min(1.0),
        }
    }

    /// Smallest `x` with `cdf(x) >= p`, for `p` in `(0, 1)`.
    pub fn quantile(&self, p: f64) -> Result<f64, HarnessError> {
        if !(p > 0.0 && p < 1.0) {
            return Err(domain(format!(
                "quantile level must lie in (0, 1), got {p}"
            )));
        }
        Ok(match self {
            Self::Normal { mu, sigma } => NormalLaw::new(*mu, *sigma)
                .expect("validated")
                .inverse_cdf(p),
            Self::Uniform { a, b } => a + p * (b - a),
            Self::Exponential { rate } => -(-p).ln_1p() / rate,
            Self::Discrete { values, .. } => {
                let mut sorted = values.clone();
                sorted.sort_by(f64::total_cmp);
                sorted
                    .into_iter()
                    .find(|&v| self.cdf(v) >= p)
                    .unwrap_or(f64::INFINITY)
            }
        })
    }
}

fn domain(msg: String) -> HarnessError {
    HarnessError::Domain(msg)
}

/// Outcome of a coverage simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageReport {
    pub n: u64,
    pub trials: u64,
    pub hits: u64,
    pub estimate: f64,
    pub theoretical: f64,
    pub mc_std_error: f64,
}

impl CoverageReport {
    fn new(n: u64, trials: u64, hits: u64) -> Self {
        let estimate = hits as f64 / trials as f64;
        Self {
            n,
            trials,
            hits,
            estimate,
            theoretical: implied_coverage_value(n).unwrap_or(0.0),
            mc_std_error: (estimate * (1.0 - estimate) / trials as f64).sqrt(),
        }
    }

    /// `name=value` lines.
    pub fn key_values(&self, prefix: &str) -> Vec<String> {
        vec![
            format!("{prefix}n={}", self.n),
            format!("{prefix}trials={}", self.trials),
            format!("{prefix}hits={}", self.hits),
            format!("{prefix}estimate={:.6}", self.estimate),
            format!("{prefix}theoretical={:.6}", self.theoretical),
            format!("{prefix}mc_std_error={:.6}", self.mc_std_error),
        ]
    }
}

impl fmt::Display for CoverageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>6} {:>8} {:>8} {:>10} {:>12} {:>10}",
            "n", "trials", "hits", "estimate", "theoretical", "mc_se"
        )?;
        write!(
            f,
            "{:>6} {:>8} {:>8} {:>10.4} {:>12.4} {:>10.4}",
            self.n, self.trials, self.hits, self.estimate, self.theoretical, self.mc_std_error
        )
    }
}

fn check_trials(n: usize, min_n: usize, trials: usize) -> Result<(), HarnessError> {
    if n < min_n {
        return Err(domain(format!("n must be at least {min_n}, got {n}")));
    }
    if trials == 0 {
        return Err(domain("trials must be at least 1".into()));
    }
    Ok(())
}

/// Does the closed range of `n` draws contain a fresh draw? Repeated over
/// `trials` independent trials; trial `t` uses stream `t` of `rng`.
pub fn simulate_range_coverage(
    dist: &ScalarDistribution,
    n: usize,
    trials: usize,
    rng: &SeededRng,
) -> Result<CoverageReport, HarnessError> {
    check_trials(n, 2, trials)?;
    let hits = (0..trials)
        .into_par_iter()
        .filter(|&t| {
            let mut r = rng.stream(t as u64);
            let draws = dist.sample_n(&mut r, n + 1);
            let (sample, fresh) = draws.split_at(n);
            let lo = sample.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = sample.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            lo <= fresh[0] && fresh[0] <= hi
        })
        .count();
    Ok(CoverageReport::new(n as u64, trials as u64, hits as u64))
}

/// Settings for the image-level coverage simulation.
#[derive(Debug, Clone)]
pub struct PipelineScenario {
    /// Law of the synthetic data rows.
    pub generator: ScalarDistribution,
    pub dataset_rows: usize,
    pub n: usize,
    pub trials: usize,
    pub frame: PlotFrame<f64>,
    /// Must be a point-estimate spec.
    pub spec: RenderSpec,
}

/// Pixel-level coverage next to the coverage of the same statistics before
/// rasterization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineCoverage {
    pub pixel: CoverageReport,
    pub statistic: CoverageReport,
}

/// Per trial: synthesize a dataset, render `n` bootstrap replicates, read the
/// observed mark interval off the stack, then take replicate `n` as the fresh
/// draw and check the column its mark is centered on lies inside.
///
/// A fresh mark centered outside the frame, or a stack with every mark
/// outside it, counts as a miss.
pub fn simulate_pipeline_coverage(
    scenario: &PipelineScenario,
    rng: &SeededRng,
) -> Result<PipelineCoverage, HarnessError> {
    let PipelineScenario {
        generator,
        dataset_rows,
        n,
        trials,
        frame,
        spec,
    } = scenario;
    check_trials(*n, 2, *trials)?;
    let RenderKind::PointEstimate { column, .. } = &spec.kind else {
        return Err(domain(
            "pipeline coverage needs a point-estimate spec".into(),
        ));
    };
    if *dataset_rows == 0 {
        return Err(domain("dataset_rows must be at least 1".into()));
    }
    let renderer = BuiltinRenderer::new(*frame, spec.clone());
    let radius = spec.mark_size.saturating_sub(1);

    let outcomes = (0..*trials)
        .into_par_iter()
        .map(|t| -> Result<(bool, bool), HarnessError> {
            let trial = rng.child(t as u64);
            let values = generator.sample_n(&mut trial.stream(0), *dataset_rows);
            let data = Dataset::from_column(column, &values);
            let replicates = trial.child(1);

            let mut images = Vec::with_capacity(*n);
            let mut stats = Vec::with_capacity(*n);
            for i in 0..*n {
                let resample = bootstrap_resample(&data, &replicates, i as u64)?;
                stats.push(point_statistic(&resample, spec)?);
                images.push(renderer.render(&resample, &data, i)?);
            }
            let stack = ImageStack::new(images)?;
            let interval = match observed_interval(&stack, Axis::Horizontal, frame.background(), 0)
            {
                Ok((lo, hi)) => {
                    Some((i64::from(lo + radius), i64::from(hi.saturating_sub(radius))))
                }
                Err(AggregationError::AllBackground) => None,
                Err(e) => return Err(e.into()),
            };

            let fresh = bootstrap_resample(&data, &replicates, *n as u64)?;
            let fresh_stat = point_statistic(&fresh, spec)?;
            let fresh_c = frame.x_to_column(fresh_stat);
            let on_frame = (0..i64::from(frame.width())).contains(&fresh_c);

            let s_lo = stats.iter().copied().fold(f64::INFINITY, f64::min);
            let s_hi = stats.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            Ok((
                on_frame && interval.is_some_and(|(lo, hi)| lo <= fresh_c && fresh_c <= hi),
                s_lo <= fresh_stat && fresh_stat <= s_hi,
            ))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let pixel_hits = outcomes.iter().filter(|o| o.0).count() as u64;
    let stat_hits = outcomes.iter().filter(|o| o.1).count() as u64;
    Ok(PipelineCoverage {
        pixel: CoverageReport::new(*n as u64, *trials as u64, pixel_hits),
        statistic: CoverageReport::new(*n as u64, *trials as u64, stat_hits),
    })
}

/// Summary of the predetermined-region simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionInferenceReport {
    pub n: u64,
    pub trials: u64,
    pub alpha: f64,
    pub threshold: f64,
    /// Probability that a statistic stays out of the region `(threshold, ∞)`.
    pub true_p: f64,
    /// Trials in which no statistic entered the region.
    pub all_empty_trials: u64,
    /// Jeffreys lower bound when all `n` stay out.
    pub lower_all_empty: f64,
    /// Trials whose lower bound did not exceed `true_p`.
    pub valid: u64,
    pub validity: f64,
    pub mc_std_error: f64,
    /// Probability of a valid bound, summed exactly over the Binomial law.
    pub exact_validity: f64,
}

impl RegionInferenceReport {
    pub fn key_values(&self) -> Vec<String> {
        vec![
            format!("n={}", self.n),
            format!("trials={}", self.trials),
            format!("alpha={}", self.alpha),
            format!("threshold={:.6}", self.threshold),
            format!("true_p={:.6}", self.true_p),
            format!("all_empty_trials={}", self.all_empty_trials),
            format!("jeffreys_lower_all_empty={:.6}", self.lower_all_empty),
            format!("valid={}", self.valid),
            format!("validity={:.6}", self.validity),
            format!("mc_std_error={:.6}", self.mc_std_error),
            format!("exact_validity={:.6}", self.exact_validity),
        ]
    }
}

/// Binomial(n, p) mass at `z`.
pub fn binomial_pmf(n: u64, p: f64, z: u64) -> f64 {
    if p <= 0.0 {
        return if z == 0 { 1.0 } else { 0.0 };
    }
    if p >= 1.0 {
        return if z == n { 1.0 } else { 0.0 };
    }
    let (nf, zf) = (n as f64, z as f64);
    let ln_choose = ln_gamma(nf + 1.0) - ln_gamma(zf + 1.0) - ln_gamma(nf - zf + 1.0);
    (ln_choose + zf * p.ln() + (nf - zf) * (-p).ln_1p()).exp()
}

/// The region is `statistic > threshold`. Per trial, draw `n` statistics,
/// count the ones that stay out (`Z`), form the Jeffreys bound and check it
/// does not exceed the true probability of staying out.
pub fn simulate_region_inference(
    dist: &ScalarDistribution,
    n: usize,
    threshold: f64,
    alpha: f64,
    trials: usize,
    rng: &SeededRng,
) -> Result<RegionInferenceReport, HarnessError> {
    check_trials(n, 1, trials)?;
    let spec = CoverageSpec::new(n as u64, alpha)?;
    let lowers = (0..=n as u64)
        .map(|z| jeffreys_interval(z, spec).map(|r| r.jeffreys_lower))
        .collect::<Result<Vec<f64>, _>>()?;
    let true_p = dist.cdf(threshold);

    let counts: Vec<usize> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let draws = dist.sample_n(&mut rng.stream(t as u64), n);
            draws.iter().filter(|&&v| v <= threshold).count()
        })
        .collect();
    let valid = counts.iter().filter(|&&z| lowers[z] <= true_p).count() as u64;
    let all_empty = counts.iter().filter(|&&z| z == n).count() as u64;
    let validity = valid as f64 / trials as f64;
    let exact_validity = (0..=n as u64)
        .filter(|&z| lowers[z as usize] <= true_p)
        .map(|z| binomial_pmf(n as u64, true_p, z))
        .sum::<f64>()
        .min(1.0);

    Ok(RegionInferenceReport {
        n: n as u64,
        trials: trials as u64,
        alpha,
        threshold,
        true_p,
        all_empty_trials: all_empty,
        lower_all_empty: lowers[n],
        valid,
        validity,
        mc_std_error: (validity * (1.0 - validity) / trials as f64).sqrt(),
        exact_validity,
    })
}
