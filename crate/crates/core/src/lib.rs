//! Diagnostics for cointegration rank tests when the number of series is
//! comparable to the sample length.
//!
//! Squared sample canonical correlations between differences and lagged
//! levels are compared with the Wachter limit, and the likelihood-ratio and
//! Pillai–Bartlett trace statistics are rescaled by `2p²`.

pub mod canon;
pub mod dist;
pub mod error;
pub mod mc;
pub mod qq;
pub mod quad;
pub mod stats;

pub use canon::{analyze, CanonicalSpectrum, DeterministicSpec, MomentMatrices, TimeSeriesPanel};
pub use dist::{AspectRatio, WachterParams};
pub use error::{Error, Result};
pub use mc::{run_mc, run_mc_with_threads, DgpSpec, McConfig, McSummary};
pub use qq::{attach_envelope, build_qq, render, QQPlotSeries};
pub use stats::{build_report, Center, CenterStatus, LrValue, TestReport};
