//! IO companion to the `e756` core: JSON file formats, table dumps, and
//! the verification suites behind the command line tool.

pub mod dumps;
pub mod json;
pub mod suites;
