//! File formats, JSON reports, multi-threaded drivers and the verification
//! battery for [`oddcyc_core`]. The `oddcyc` binary is a thin layer over
//! this crate.

pub mod battery;
pub mod drive;
pub mod format;
pub mod report;

pub use oddcyc_core as core;
