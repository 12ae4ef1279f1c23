//! Biased (1:b) Maker-Breaker games on the edges of `K_n`.

pub mod board;
pub mod boxgame;
pub mod breaker;
pub mod degree_game;
pub mod engine;
pub mod graph;
pub mod harness;
pub mod maker;
pub mod monitors;
pub mod oracle;
pub mod transcript;

pub use board::{BoardError, Edge, GameState, Player};
pub use engine::{play, GameResult, GoalKind, Outcome, PlayOptions};
