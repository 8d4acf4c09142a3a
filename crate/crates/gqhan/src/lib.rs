//! Dataset preparation, experiment commands and file formats for the
//! Grover-inspired quantum hard attention network. The numerics live in
//! [`gqhan_core`].

pub mod commands;
pub mod config;
pub mod data;
pub mod error;
pub mod manifest;
pub mod svg;

pub use error::{Error, Result};
