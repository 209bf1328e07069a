//! Explicit self-similar solutions, fractional operators on periodic grids,
//! a regularized evolution solver and numerical checks of the functional
//! inequalities for the nonlocal porous medium equation
//! `u_t = div(|u| grad^(alpha-1)(|u|^(m-2) u))`.

pub mod barenblatt;
pub mod error;
pub mod evolve;
pub mod fit;
pub mod fracops;
pub mod inequalities;
pub mod quad;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
