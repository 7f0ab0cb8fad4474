//! Exact and numeric tools for Borcherds products on Enriques period domains.

pub mod cli;
pub mod embed;
pub mod error;
pub mod kummer;
pub mod lattice;
pub mod phi;
pub mod qseries;
pub mod resultant;
pub mod theta;
pub mod verify;

pub use error::{Error, Result};
