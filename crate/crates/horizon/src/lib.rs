//! File formats, the example corpus, threaded scans and the command-line
//! front end for `euler-horizon-core`.

pub mod commands;
pub mod corpus;
pub mod report;
pub mod scan;
pub mod zeros;
