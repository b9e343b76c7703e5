//! Trace categories of finitely presented strict 2-categories.

pub mod computad;
pub mod morita;
pub mod error;
pub mod oracle;
pub mod paracyclic;
pub mod shadows;
pub mod bihh;
pub mod cli;
pub mod present;
pub mod report;
pub mod twocat;

pub use error::{Error, Result};
