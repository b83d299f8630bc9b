//! Command-line harness for the `vertop-core` checks.

pub mod config;
pub mod expr;
pub mod ope;
pub mod report;
