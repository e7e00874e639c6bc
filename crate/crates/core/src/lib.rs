//! Exact combinatorics for moduli of Higgs bundles over an elliptic curve.

pub mod abvar;
pub mod cayley;
pub mod error;
pub mod hitchin;
pub mod involution;
pub mod linalg;
pub mod moduli;
pub mod oracle;
pub mod realform;
pub mod rootdata;
pub mod serial;

pub use error::{Error, Result};
