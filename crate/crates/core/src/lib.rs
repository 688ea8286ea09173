//! Distance factors of international research collaboration.
//!
//! The crate takes a bibliographic corpus (papers with affiliation links),
//! attributes affiliations to countries, and derives per-country profiles,
//! twelve country-pair distances plus three dummies, the Jaccard degree of
//! international collaboration (DIC), collaboration-network centralities,
//! annual trend statistics, and OLS / zero-inflated beta regressions of DIC
//! on the distances.
//!
//! Modules follow the data flow:
//! [`ingest`] → [`profiles`] → [`distances`] / [`network`] → [`trends`] and
//! [`inference`] (on top of [`numopt`]). [`pipeline`] wires the stages to
//! files, and [`synth`] generates data with known parameters.

// `!(a > b)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod distances;
pub mod error;
pub mod fmt;
pub mod inference;
pub mod ingest;
pub mod network;
pub mod numopt;
pub mod pipeline;
pub mod profiles;
pub mod synth;
pub mod trends;

pub use error::{Error, Result};
