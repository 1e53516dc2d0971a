//! Certified computations with finite rings given by structure constants.

pub mod catalog;
pub mod error;
pub mod fitting;
pub mod fixtures;
pub mod linalg;
pub mod modules;
pub mod restopo;
pub mod ring;
pub mod settings;
pub mod subrings;
pub mod towers;

pub use error::{Error, Result};
pub use settings::Settings;
