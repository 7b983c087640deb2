//! Online optimization with switching costs and untrusted predictions.
//!
//! The crate is `no_std` (with `alloc`). It provides decision spaces and
//! instances ([`model`]), the online algorithms FtP, AOS and AOBD
//! ([`algorithms`]), exact hindsight optima ([`offline`]), LP certificates
//! for the competitive bounds ([`bounds`]), adversarial lower-bound games
//! ([`adversarial`]), a unit-commitment benchmark ([`microgrid`]) and seeded
//! instance generators ([`random`]).

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod adversarial;
pub mod algorithms;
pub mod bounds;
pub mod error;
pub mod model;
pub mod lp;
pub mod microgrid;
pub mod offline;
pub mod random;

pub use error::{Error, LpStatus, Result};
