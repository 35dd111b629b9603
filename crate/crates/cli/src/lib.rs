//! Batch front-end for the witness library: named state families, parameter
//! grids, figure presets, oracle verification and sampling runs.

pub mod config;
pub mod family;
pub mod grid;
pub mod preset;
pub mod run;
pub mod verify;
