pub mod error;
pub mod inclusion;
pub mod kernels;
pub mod operator;
pub mod oracles;
pub mod window;

pub use error::{Error, Result};
