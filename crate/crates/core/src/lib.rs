//! Uncertainty visualization by bootstrap image aggregation.
//!
//! Resample a dataset, draw one complete chart per resample, and average the
//! charts pixel by pixel. The spread of marks in the aggregate is the
//! sampling uncertainty of whatever the chart shows; with `n` images the
//! visible range of a varying point covers a fresh draw with probability
//! `(n-1)/(n+1)`.
//!
//! The numeric kernels are generic over [`Scalar`] (`f32`/`f64`); the aliases
//! below fix the common double-precision instantiations.

pub mod aggregation;
pub mod coverage;
pub mod error;
pub mod harness;
pub mod pipeline;
pub mod protocol;
pub mod raster;
pub mod resampling;
pub mod scalar;
pub mod special;

pub use aggregation::{
    aggregate_png_files, column_envelope, mean_aggregate, observed_interval, quantize,
    region_occupancy, transform_aggregate, transform_frequencies, transform_scalar, AggregateImage,
    Axis, ChannelFrequencyTable, ImageStack, PngFileStack, RegionMask, TieBreak, TransformParams,
};
pub use coverage::{
    implied_coverage, implied_coverage_value, jeffreys_interval, jeffreys_mean, required_n,
    CoverageSpec, RegionInferenceResult,
};
pub use error::{
    AggregationError, CoverageError, DataError, HarnessError, ProtocolError, RasterError,
    SpecialError,
};
pub use harness::{
    simulate_pipeline_coverage, simulate_range_coverage, simulate_region_inference, CoverageReport,
    PipelineCoverage, PipelineScenario, RegionInferenceReport, ScalarDistribution,
};
pub use protocol::{invoke_renderer, render_stack, render_stack_from, RendererCommand, StackError};
pub use raster::{
    data_to_pixel, BuiltinRenderer, PlotFrame, PointStatistic, RasterImage, RenderKind, RenderSpec,
    Renderer, Rgb,
};
pub use resampling::{
    bootstrap_resample, load_dataset, resample_stream, Cell, DataFormat, Dataset, SeededRng,
};
pub use scalar::Scalar;
pub use special::{beta_quantile, reg_inc_beta, BetaParams};

pub type BetaParams64 = BetaParams<f64>;
pub type BetaParams32 = BetaParams<f32>;
pub type TransformParams64 = TransformParams<f64>;
pub type TransformParams32 = TransformParams<f32>;
pub type AggregateImage64 = AggregateImage<f64>;
pub type AggregateImage32 = AggregateImage<f32>;
pub type CoverageSpec64 = CoverageSpec<f64>;
pub type RegionInference64 = RegionInferenceResult<f64>;
pub type PlotFrame64 = PlotFrame<f64>;
pub type BuiltinRenderer64 = BuiltinRenderer<f64>;
