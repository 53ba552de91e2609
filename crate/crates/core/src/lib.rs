//! Codensity liftings of finite coalgebras: bisimilarity as a greatest
//! fixpoint, compositionality checks for structure modalities, and codensity
//! games.

pub mod behavior;
pub mod codensity;
pub mod compose;
pub mod error;
pub mod fibers;
pub mod fixpoint;
pub mod games;
pub mod gen;
pub mod io;
pub mod modality;
pub mod oracle;
pub mod selftest;
pub mod transport;
pub mod verdict;

pub use error::{Error, Result};
