//! Front end for `dselim`: a small problem-file language, subcommands for
//! each procedure, and text or JSON reports.

pub mod parse;
pub mod report;
pub mod run;
