//! One-shot (fully parallel) black-box optimization toolkit.
//!
//! * [`sequence`] builds raw space-filling designs in `[0, 1)^d`.
//! * [`reshaping`] reshapes them: recentering, Cauchy tails, opposition,
//!   rescaling, conversion to `R^d`.
//! * [`method`] composes both into named sampler pipelines.
//! * [`metrics`] measures samples and checks dispersion bounds numerically.
//! * [`benchmark`] runs the artificial one-shot benchmarks and builds win tables.

pub mod benchmark;
pub mod error;
pub mod method;
pub mod metrics;
pub mod reshaping;
pub mod rng;
pub mod sequence;

pub use error::{Error, Result};
pub use method::{parse_method_spec, Sample, SamplerSpec};
pub use reshaping::{Distribution, Lambda, Opposition, RealSample, ReshapeSpec, Target};
pub use rng::RngSeed;
pub use sequence::{BaseSequenceKind, SequenceKind, UnitSample};
