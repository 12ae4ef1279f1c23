//! Maker strategies and the graph routines they share.

use thiserror::Error;

pub mod connectivity;
pub mod greedy_pm;
pub mod hamconn;
pub mod hnf;
pub mod hs;
pub mod hvs;
pub mod lemma10;
pub mod partition;
pub mod paths;
pub mod pm;
pub mod posa;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MakerError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}
