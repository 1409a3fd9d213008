//! File formats, parallel sampling and the command-line front end for
//! `weylhull-core`.
//!
//! Indices are 1-based everywhere in this crate's JSON and CLI surface and
//! 0-based in the core API. Rationals travel as strings `"p/q"`.

pub mod cli;
pub mod format;
pub mod parallel;
