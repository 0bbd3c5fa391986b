//! Framed curves in space forms: adapted and osculating frames, finite-type
//! detection, flag coordinates, envelopes of tangent hyperplane families and
//! the classification of their singularities.

pub mod classify;
pub mod cli;
pub mod curve;
pub mod envelope;
pub mod error;
pub mod flags;
pub mod frames;
pub mod jets;
pub mod poly;
pub mod scalar;
pub mod spaceform;
pub mod verify;

pub use error::{Error, Result};
