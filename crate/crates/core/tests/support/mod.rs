//! Helpers shared by the integration tests and the acceptance suite.
#![allow(dead_code)]

pub mod checks;
pub mod gen;
pub mod oracle;
