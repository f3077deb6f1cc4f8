//! Spectral and observability toolkit for the 2-D viscoelastic wave
//! equation with memory on the unit square `(0,π)²`.

pub mod cli;
pub mod gap_analysis;
pub mod ingham;
pub mod modes;
pub mod observability;
pub mod spectrum;
