//! Sample-size arithmetic for the range of `n` images and Jeffreys bounds
//! for regions chosen before looking at the data.
//!
//! The range of `n` exchangeable continuous draws contains a fresh draw with
//! probability `(n-1)/(n+1)`; with ties the probability can only grow. For a
//! predetermined region, the count `Z` of images that leave the region empty
//! is Binomial, and the Jeffreys posterior `Beta(Z + 1/2, n - Z + 1/2)` gives
//! a one-sided lower bound on the probability of staying out of the region.

use num_rational::Ratio;

use crate::error::CoverageError;
use crate::scalar::Scalar;
use crate::special::{beta_quantile, BetaParams};

/// Number of images together with the significance level for Jeffreys bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageSpec<T> {
    n: u64,
    alpha: T,
}

impl<T: Scalar> CoverageSpec<T> {
    pub fn new(n: u64, alpha: T) -> Result<Self, CoverageError> {
        check_n(n)?;
        if !(alpha > T::zero() && alpha < T::one()) {
            return Err(CoverageError::Domain(format!(
                "alpha must lie in (0, 1), got {}",
                alpha
            )));
        }
        Ok(Self { n, alpha })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionInferenceResult<T> {
    /// Images whose region was empty.
    pub z: u64,
    pub n: u64,
    /// Lower end of the one-sided interval `[lower, 1]`.
    pub jeffreys_lower: T,
    /// Posterior mean of the probability that the region stays empty.
    pub jeffreys_mean: T,
}

fn check_n(n: u64) -> Result<(), CoverageError> {
    if n == 0 {
        return Err(CoverageError::Domain(
            "number of images must be at least 1".into(),
        ));
    }
    Ok(())
}

/// Coverage `(n-1)/(n+1)` of the range of `n` images, as an exact ratio.
pub fn implied_coverage(n: u64) -> Result<Ratio<u64>, CoverageError> {
    check_n(n)?;
    Ok(Ratio::new(n - 1, n + 1))
}

/// [`implied_coverage`] rounded into a float.
pub fn implied_coverage_value<T: Scalar>(n: u64) -> Result<T, CoverageError> {
    let r = implied_coverage(n)?;
    Ok(T::lit(*r.numer() as f64) / T::lit(*r.denom() as f64))
}

/// Smallest `n` whose implied coverage reaches `c`, i.e. `ceil((c+1)/(1-c))`.
///
/// `c` usually arrives as a rounded decimal (0.9 is not representable), so a
/// quotient within a few ulps of an integer is taken to be that integer.
pub fn required_n<T: Scalar>(c: T) -> Result<u64, CoverageError> {
    if !(c >= T::zero() && c < T::one()) {
        return Err(CoverageError::Domain(format!(
            "coverage must lie in [0, 1), got {}",
            c
        )));
    }
    let c = c.as_f64();
    let bound = (1.0 + c) / (1.0 - c);
    if !bound.is_finite() || bound >= u64::MAX as f64 {
        return Err(CoverageError::Domain(format!(
            "coverage {} needs an unrepresentable number of images",
            c
        )));
    }
    let nearest = bound.round();
    let n = if (bound - nearest).abs() <= 64.0 * f64::EPSILON * nearest.max(1.0) {
        nearest
    } else {
        bound.ceil()
    };
    Ok((n as u64).max(1))
}

/// Posterior mean `(n + 1/2)/(n + 1)` when none of `n` images enter the region.
pub fn jeffreys_mean<T: Scalar>(n: u64) -> Result<T, CoverageError> {
    check_n(n)?;
    let n = T::lit(n as f64);
    Ok((n + T::lit(0.5)) / (n + T::one()))
}

/// One-sided Jeffreys interval `[lower, 1]` for the probability that the
/// region is empty, given `z` empty-region images out of `spec.n`.
///
/// For `z = n` the lower end is the `alpha` quantile of `Beta(n + 1/2, 1/2)`.
/// At `z = 0` the lower end is pinned to 0, the usual boundary convention
/// for Jeffreys intervals.
pub fn jeffreys_interval<T: Scalar>(
    z: u64,
    spec: CoverageSpec<T>,
) -> Result<RegionInferenceResult<T>, CoverageError> {
    let n = spec.n;
    if z > n {
        return Err(CoverageError::Domain(format!(
            "observed count {} exceeds number of images {}",
            z, n
        )));
    }
    let half = T::lit(0.5);
    let zf = T::lit(z as f64);
    let nf = T::lit(n as f64);
    let posterior = BetaParams::new(zf + half, nf - zf + half)?;
    let jeffreys_lower = if z == 0 {
        T::zero()
    } else {
        beta_quantile(spec.alpha, posterior)?
    };
    Ok(RegionInferenceResult {
        z,
        n,
        jeffreys_lower,
        jeffreys_mean: (zf + half) / (nf + T::one()),
    })
}
