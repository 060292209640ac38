//! Exact computations for higher-rank DT/PT wall-crossing on quivers with
//! potential.

pub mod adhm;
pub mod error;
pub mod fm;
pub mod lp;
pub mod matrix;
pub mod potential;
pub mod quiver;
pub mod rational;
pub mod representation;
pub mod series;
pub mod sod;
pub mod stability;
pub mod weights;
pub mod zonotope;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use rational::Rational;
