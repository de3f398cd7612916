//! Reconfiguration of odd matchings.

pub mod graph;
pub mod matching;
pub mod search;
pub mod reductions;
pub mod connectivity;
pub mod oracles;
pub mod verify;
pub mod cli;
