pub mod capacities;
pub mod channels;
pub mod cli;
pub mod embeddings;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod mixed_norms;
pub mod optimize;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
