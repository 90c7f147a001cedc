//! Certification of preparation contextuality from prepare-and-measure
//! statistics, robust to a declared number of unknown measurements in the
//! tomographically complete set.
//!
//! The exact pipeline (rational arithmetic end to end) lives in [`numerics`],
//! [`geometry`], [`scenario`], and [`assignment`]; the float pipeline for
//! irrational ideal statistics lives in [`inequality`] and [`quantum`].
//! [`models`] constructs and audits explicit finite ontological models, and
//! [`harness`] provides the randomized constructors the verification suites
//! drive everything with.

pub mod assignment;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod inequality;
pub mod models;
pub mod numerics;
pub mod quantum;
pub mod report;
pub mod scenario;

pub use error::{Error, Result};
