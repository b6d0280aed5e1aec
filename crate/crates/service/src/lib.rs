//! HTTP API and command-line front end for the proof workbench.

pub mod api;
pub mod cli;
pub mod engine;
pub mod store;
