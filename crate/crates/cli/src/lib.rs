//! The `htk` command line: canonical files, the verbs over them and the acceptance suites.

pub mod commands;
pub mod format;
pub mod suites;
