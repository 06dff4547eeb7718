//! File formats, persistence, HTTP API and command line for lexibridge.

pub use lexibridge_core as core;

pub mod api;
pub mod cli;
pub mod export;
pub mod prior;
pub mod report;
pub mod store;
pub mod users;
pub mod wndb;
