//! Motif significance profiles and graphlet degree vectors of dynamic
//! networks, with clustering and pixel-oriented matrix views.

pub mod cluster;
pub mod error;
pub mod graphlet;
pub mod matrix;
pub mod metrics;
pub mod null_model;
pub mod render;
pub mod synth;
pub mod temporal;
pub mod triad;

pub use error::{Error, Result};
