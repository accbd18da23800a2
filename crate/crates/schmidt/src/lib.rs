//! Exact-arithmetic toolkit for Schmidt games on the real line.

pub mod arith;
pub mod farey;
pub mod game;
pub mod strategies;
pub mod tess;
pub mod dims;
pub mod dioph;
