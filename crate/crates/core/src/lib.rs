//! Ghost-ring calculus for Lie, L∞ and A∞ type structures over `Q`.

pub mod error;
pub mod ghost_ring;
pub mod graded;
pub mod cochain;
pub mod derivations;
pub mod linalg;
pub mod linf;
pub mod named;
pub mod random;
pub mod rational;

pub use error::{Error, Result};
