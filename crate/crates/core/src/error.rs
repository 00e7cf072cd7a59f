//! Crate-wide error type.
//!
//! Variants are grouped by how a front end should report them: `Input`
//! for malformed or precondition-violating data, `Math` for an honest
//! negative answer (no decomposition exists, a certificate fails), and
//! `Budget` for blown resource limits.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input or violated precondition.
    #[error("input error: {0}")]
    Input(String),
    /// A mathematically meaningful failure: the requested structure does
    /// not exist or a certificate does not validate.
    #[error("{0}")]
    Math(String),
    /// A configured resource budget was exceeded.
    #[error("budget exceeded: {0}")]
    Budget(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
    pub fn math(msg: impl Into<String>) -> Self {
        Error::Math(msg.into())
    }
    pub fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
