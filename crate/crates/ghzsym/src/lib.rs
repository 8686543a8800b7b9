//! Command-line tool, file formats and verification harness built on
//! [`ghzsym_core`].
//!
//! - [`constexpr`]: constant expressions such as `sqrt3/4` for parameters.
//! - [`facet`]: the text format for Bell expressions.
//! - [`output`]: number formatting, metadata blocks, CSV and JSON.
//! - [`verify`]: the numbered acceptance criteria.
//! - [`cli`]: argument parsing and command dispatch.

pub mod cli;
pub mod constexpr;
pub mod facet;
pub mod output;
pub mod verify;
