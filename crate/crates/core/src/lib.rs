//! Endomorphism-ring invariants of supersingular elliptic curves over F_p.

pub mod arith;
pub mod cheb_bounds;
pub mod cli;
pub mod error;
pub mod hilbert;
pub mod isogeny_graph;
pub mod qj_solver;
pub mod quad_class;
pub mod quaternion;
pub mod ss_curves;

pub use error::{Error, Result};
