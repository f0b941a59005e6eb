#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod coxeter;
pub mod decomp;
pub mod dynkin;
pub mod error;
pub mod involution;
pub mod matgrp;
pub mod ring;
pub mod sample;
pub mod suite;

pub use error::{Error, Result};
