//! Declaration language, file formats and command-line front end for
//! `supersymp-core`.

pub mod commands;
pub mod cover;
pub mod dsl;
pub mod paper;
pub mod report;
