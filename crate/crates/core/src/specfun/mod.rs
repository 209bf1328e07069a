//! Special functions behind the closed-form profile formulas.

mod bessel;
mod gamma;
mod hyp2f1;
mod weber;

pub use bessel::bessel_j;
pub use gamma::{gamma_fn, is_nonpositive_integer, ln_gamma, pochhammer, rgamma};
pub use hyp2f1::{hyp2f1, hyp2f1_dz, Hyp2F1Params};
pub use weber::{
    convergent_parameter_sets, default_cutoff, weber_schafheitlin_closed, weber_schafheitlin_quad, WSParams, WsQuadrature,
};
