//! Command-line front end for the hedging library: run configuration with
//! file/flag layering, pipeline execution per mode, artifact writing with a
//! checksum manifest, and the bundled benchmark reproduction.

pub mod config;
pub mod error;
pub mod runner;
