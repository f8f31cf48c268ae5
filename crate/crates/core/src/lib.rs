pub mod ckks;
pub mod cost;
pub mod error;
pub mod hdft;
pub mod oracle;
pub mod poly;
pub mod selftest;
pub mod serial;
pub mod zq;

pub use error::{Error, Result};
