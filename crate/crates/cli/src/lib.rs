//! Support code for the `mxnh` binary.

pub mod format;
