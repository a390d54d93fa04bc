pub mod catalog;
pub mod cli;
pub mod classify;
pub mod config;
pub mod error;
pub mod exact_linear;
pub mod group_engine;
pub mod io;
pub mod root_datum;

pub use error::{Error, Result};
