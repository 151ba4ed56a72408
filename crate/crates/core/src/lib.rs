#![no_std]

extern crate alloc;

pub mod charpoly;
pub mod ellipse;
pub mod error;
pub mod locc;
pub mod measures;
mod optim;
pub mod roof;
pub mod state;
pub mod swap;

pub use error::{Error, Result};
