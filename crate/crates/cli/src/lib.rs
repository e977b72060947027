//! Subcommands of the `monofk` verifier. Each takes a validated config and
//! returns a [`report::Report`].

pub mod commands;
pub mod config;
pub mod report;
