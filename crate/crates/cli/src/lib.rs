//! Orchestration of the prove/learn pipeline behind the `lgp` binary.

pub mod commands;
pub mod config;
pub mod looping;
pub mod prove;
pub mod select;
