//! Daily economic-sentiment signals from social-media dumps, and MIDAS-AR
//! nowcasting of monthly macroeconomic targets against an AR(1) benchmark.
//!
//! The pipeline runs in stages, each a module:
//!
//! - [`corpus`]: stream-parse NDJSON dumps, rebuild comment trees, keyword filters.
//! - [`classifier`]: ternary UP/DOWN/NEUTRAL labels from a dictionary or a prompt,
//!   and macro-F1 scoring.
//! - [`gateway`]: cached, bounded-concurrency client for a chat-completion endpoint.
//! - [`signals`]: daily sums, comment voting, threshold re-labeling, MA smoothing,
//!   the specification grid and the re-classification audit.
//! - [`midas`]: exponential Almon weights, profiled NLS MIDAS-AR fits, AIC lag
//!   selection and recursive out-of-sample nowcasts.
//! - [`evaluate`]: RMSFE/MAFE/CRPS, Diebold-Mariano (Harvey), fluctuation test,
//!   cumulative loss differentials, principal components and correlations.
//! - [`synth`]: seeded synthetic corpora with a planted latent signal.
//! - [`cli`]: config-driven orchestration of all stages.

pub mod calendar;
pub mod classifier;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod evaluate;
pub mod gateway;
pub mod io;
pub mod midas;
pub mod rng;
pub mod signals;
pub mod synth;

pub use error::{Error, Result};
