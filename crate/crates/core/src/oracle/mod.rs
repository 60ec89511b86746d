//! Independent numerical ground truth for the closed-form geometry.
//!
//! Each oracle recomputes a quantity along a route that shares nothing with
//! the analytic path beyond the edge lengths: coordinates and vector
//! geometry, the Cayley–Menger determinant, and finite differences of the
//! coordinate solid angle.

mod cayley_menger;
mod embed;
mod fd;
mod sweep;

use thiserror::Error;

use crate::metric::{GeometryError, TetGeometry};
use crate::scalar::Real;

pub use cayley_menger::{cayley_menger_volume, conformal_lengths, CayleyMenger};
pub use embed::{embed_tetrahedron, heron_lengths, EmbeddedTet, Vec3};
pub use fd::{fd_face_angle_check, fd_solid_angle_gradient, FdEstimate, FdScheme};
pub use sweep::{random_tet, run_checks, CheckReport, SweepConfig, SAMPLE_Q_FLOOR};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("degenerate tetrahedron: {0}")]
    Degenerate(String),
    #[error("finite-difference probes leave the valid domain even at relative step {floor:e}")]
    ProbeDegenerate { floor: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Largest `|Σ_m r_m ∂α_a/∂r_m|` over the four vertices, using the analytic
/// gradient.
pub fn schlafli_residual<T: Real>(r: [T; 4]) -> Result<T, OracleError> {
    let g = TetGeometry::new(r)?;
    Ok((0..4).map(|a| g.schlafli_residual(a).abs()).fold(T::zero(), T::max))
}

/// Largest `|∂α_i/∂r_j − ∂α_j/∂r_i|` over vertex pairs, both sides analytic.
pub fn hessian_symmetry_defect<T: Real>(r: [T; 4]) -> Result<T, OracleError> {
    let g = TetGeometry::new(r)?;
    let mut worst = T::zero();
    for i in 0..4 {
        for j in i + 1..4 {
            worst = worst.max((g.gradient[i][j] - g.gradient[j][i]).abs());
        }
    }
    Ok(worst)
}
