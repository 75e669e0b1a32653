//! Channel statistics for D-band indoor multipath measurements.
//!
//! The crate covers the full measurement-to-model pipeline:
//!
//! 1. [`measurement`]: canonical per-path records, CSV ingestion with
//!    line-accurate diagnostics, link grouping, summary counts.
//! 2. [`normalize`]: free-space path-loss power normalization and per-link
//!    excess-delay re-basing.
//! 3. [`dist`] / [`fit`] / [`gof`]: ten parametric families in
//!    loc/scale/shape form, maximum-likelihood fitting, and
//!    Kolmogorov-Smirnov plus Q-Q scoring of the candidates.
//! 4. [`pathcount`]: number-of-paths statistics over distance bins.
//! 5. [`synthesis`] / [`presets`]: channel-statistics bundles and
//!    tap-delay-line PDP/CIR generation, with ready-made parameter tables
//!    for the four measured sites.
//!
//! Everything randomized is seed-deterministic ([`rng`]), and the numeric
//! building blocks ([`special`], [`optim`]) are self-contained.

pub mod dist;
pub mod error;
pub mod fit;
pub mod fixtures;
pub mod gof;
pub mod measurement;
pub mod normalize;
pub mod numfmt;
pub mod optim;
pub mod pathcount;
pub mod presets;
pub mod report;
pub mod rng;
pub mod special;
pub mod synthesis;

pub use dist::{DistributionSpec, Family};
pub use error::{Error, Result};
pub use fit::{fit_mle, FitOptions};
pub use gof::GofReport;
pub use measurement::{LinkGroup, MeasurementSet, PathRecord, Scenario, SummaryCounts};
pub use normalize::{NormalizedPath, SPEED_OF_LIGHT};
pub use pathcount::NopBin;
pub use rng::Xoshiro256PlusPlus;
pub use synthesis::{ChannelStatistics, CirBin, NopBinSamples, PdpRealization, Tap};
