//! Verification engines that do not depend on the normalizer.

pub mod address;
pub mod closure;
pub mod enumerate;
pub mod game;
pub mod random;

pub use address::PointAddress;
pub use closure::{closure_equivalent, ClosureError, ClosureVerdict};
pub use game::{
    ef_winner, enumerate_moves, EfSolver, GameConfig, GameError, GamePosition, Side, Winner,
};
pub use random::{gen_random, GenConfig};
