//! Analyst-report sentiment and next-day stock performance.
//!
//! The crate covers the whole offline pipeline: corpus ingestion and text
//! cleaning, market data stores, per-stock daily metrics (industrial excess
//! return, abnormal volume, Garman–Klass range), rank-based report labeling,
//! lexicon and external sentiment scores, pooled OLS and mean-difference
//! tests, synthetic data with planted effects, and table rendering.

#![allow(clippy::needless_range_loop)]

pub mod corpus;
pub mod econometrics;
pub mod error;
mod io;
pub mod labeling;
pub mod market;
pub mod metrics;
pub mod pipeline;
pub mod report;
pub mod sentiment;
pub mod synthkit;

pub use error::{Error, ErrorKind, Result, RowError};
