//! Numerical kernels: dense LP, dense SDP, symmetric eigensolver and small
//! complex matrices.

pub mod cmat;
pub mod eig;
mod ipm;
pub mod lp;
mod mat;
pub mod sdp;

pub use cmat::{c, inner, CMat, C64};
pub use eig::{eig_sym, SymEig};
pub use lp::{lp_solve, LinearProgram, LpSolution, LpStatus, Sense};
pub use mat::Mat;
pub use sdp::{sdp_solve, SdpConstraint, SdpSolution, SemidefiniteProgram};

/// `x` rounded to `digits` significant decimal digits. Non-finite values
/// pass through.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 || digits == 0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}
