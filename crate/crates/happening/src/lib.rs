//! Self-hosted team activity tracker.
//!
//! Builds on `happening-core` with everything that touches the outside world:
//! the append-only event log, the HTTP API, import/export and the `happening`
//! command line.

pub mod api;
pub mod cli;
pub mod clock;
pub mod config;
pub mod demo;
pub mod store;
pub mod transfer;
