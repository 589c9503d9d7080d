//! Kinematic singularity identification for serial manipulators through
//! exterior products of joint twists, plus a rotor-based distance from a
//! configuration to a singularity.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, the command
//! line front end and parallel sweeps live in the `ga-singular` crate.

#![no_std]

extern crate alloc;

pub mod error;
pub mod ga;
pub mod kinematics;
pub mod singularity;
pub mod distance;
pub mod handling;

pub use error::{Error, Result};
