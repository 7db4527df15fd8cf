//! Loci and envelopes of parabolas attached to Poncelet triangle families.
pub mod conics;
pub mod error;
pub mod experiments;
pub mod fit;
pub mod geom;
pub mod poncelet;
pub mod triangle;
pub mod triconics;
pub use error::{GeomError, Result};
