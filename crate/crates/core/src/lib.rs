pub mod an_scheme;
pub mod channel;
pub mod corr;
pub mod error;
pub mod numerics;
pub mod rate;
pub mod wishart;

pub use error::{Error, Result};
