//! Glue for in-process rendering of a replicate sequence.

use rayon::prelude::*;

use crate::aggregation::{quantize, transform_aggregate, ImageStack, TransformParams};
use crate::error::{AggregationError, RasterError};
use crate::raster::{RasterImage, Renderer};
use crate::resampling::Dataset;
use crate::scalar::Scalar;

/// Renders `resamples` in order on a pool of `parallelism` threads.
pub fn render_builtin_stack<R: Renderer>(
    renderer: &R,
    resamples: &[Dataset],
    full: &Dataset,
    parallelism: usize,
) -> Result<ImageStack, AggregationError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| RasterError::Spec(format!("cannot start render pool: {e}")))?;
    let images = pool.install(|| {
        resamples
            .par_iter()
            .enumerate()
            .map(|(i, r)| renderer.render(r, full, i))
            .collect::<Result<Vec<_>, _>>()
    })?;
    ImageStack::new(images)
}

/// Aggregates and quantizes back to an 8-bit image.
pub fn aggregate_to_image<T: Scalar>(
    stack: &ImageStack,
    params: &TransformParams<T>,
) -> Result<RasterImage, AggregationError> {
    Ok(quantize(&transform_aggregate(stack, params)?))
}
