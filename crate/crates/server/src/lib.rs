//! Analysis cache, HTTP/JSON API and command line for dynamic-network census
//! views.

pub mod api;
pub mod cache;
pub mod cli;
pub mod jobs;
pub mod pipeline;
