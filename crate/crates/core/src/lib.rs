//! Approximation algorithms for minimum-cost k-connected spanning subgraphs
//! and, more generally, for covering symmetric crossing supermodular biset
//! functions, with exhaustive checkers for small instances.

pub mod bisets;
pub mod cli;
pub mod covers;
pub mod exact;
pub mod functions;
pub mod generate;
pub mod instance;
pub mod lp;
pub mod verify;
