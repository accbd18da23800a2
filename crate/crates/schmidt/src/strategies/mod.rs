//! Constructive strategies for both players and seeded adversaries.

pub mod adversary;
pub mod alice;
pub mod bob;
