//! Numerics for Bernstein and Paley-Wiener spaces.
//!
//! Bandlimited functions are stored by their samples on a shifted lattice and
//! evaluated by sinc series. Around that sit discrete Hilbert transforms and
//! BMO norms on sequences, band-limiting and half-line projections of bounded
//! symbols, the `T_α` synthesis map with its Clark-measure norm, and truncated
//! Hankel operators with boundedness and compactness diagnostics.

pub mod bandlimited;
pub mod discrete_hardy;
pub mod dual_map;
pub mod error;
pub mod hankel;
pub mod io;
pub mod numerics;
pub mod projection;
pub mod suite;

pub use error::{Error, Result};
pub use num_complex::Complex64;
