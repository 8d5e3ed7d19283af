//! Exact analysis of game ladders `(N, T, f)`.
//!
//! A game ladder assigns every player one of `j` ordered position types and
//! measures the resulting profile with an output function `f`. This crate
//! computes the influence relation between players, counts how often each
//! player is pivotal over all ordered allocations of positions, exercises the
//! swap-based correspondence between pivot sets, and simulates the
//! challenge/swap ladder process.

pub mod builtin;
pub mod config;
pub mod error;
pub mod game;
pub mod generate;
pub mod influence;
pub mod injection;
pub mod io;
pub mod pivot;
pub mod sim;
pub mod verify;

pub use error::{LadderError, Result};
pub use game::{GameLadder, Orientation, OutputLevels, Profile, Representation};
pub use config::Config;
