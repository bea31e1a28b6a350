//! Learn symbolic abstractions of robot skills, compile them into GR(1)
//! specifications, synthesize controllers, and repair unrealizable tasks.
//!
//! Pipeline: [`abstraction`] learns symbols and skills from transition
//! data, [`encoder`] turns them into a [`logic::Gr1Spec`], [`synthesis`]
//! solves the game, and [`repair_enum`] / [`repair_synth`] propose new or
//! modified skills when the task is unrealizable. [`runtime`] executes
//! strategies and checks traces.

pub mod abstraction;
pub mod bdd;
pub mod config;
pub mod encoder;
pub mod logic;
pub mod repair_enum;
pub mod repair_synth;
pub mod runtime;
pub mod specformat;
pub mod synthesis;
pub mod worlds;

mod error;

pub use error::{Error, Result};
