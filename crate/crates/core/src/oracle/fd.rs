//! Central finite differences with one Richardson level.

use crate::scalar::Real;

use super::embed::{heron_lengths, EmbeddedTet};
use super::OracleError;

/// Five-point central differences at relative step `h` and `h/2`, combined
/// by Richardson extrapolation. Steps that leave the valid domain shrink by
/// 10x down to `floor`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdScheme {
    pub h: f64,
    pub floor: f64,
}

impl Default for FdScheme {
    fn default() -> Self {
        Self { h: 1e-5, floor: 1e-9 }
    }
}

/// A derivative estimate and the magnitude of the Richardson correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdEstimate<T> {
    pub value: T,
    pub error: T,
}

impl FdScheme {
    /// d/dx of `f` at `x`; `f` returns `None` outside its domain.
    pub fn derivative<T: Real>(&self, f: impl Fn(T) -> Option<T>, x: T) -> Result<FdEstimate<T>, OracleError> {
        let mut rel = self.h;
        while rel >= self.floor {
            let h = T::lit(rel) * x.abs().max(T::min_positive_value());
            if let (Some(coarse), Some(fine)) = (five_point(&f, x, h), five_point(&f, x, h / T::lit(2.0))) {
                let value = (T::lit(16.0) * fine - coarse) / T::lit(15.0);
                return Ok(FdEstimate { value, error: (fine - coarse).abs() });
            }
            rel /= 10.0;
        }
        Err(OracleError::ProbeDegenerate { floor: self.floor })
    }
}

fn five_point<T: Real>(f: &impl Fn(T) -> Option<T>, x: T, h: T) -> Option<T> {
    let two = T::lit(2.0);
    let (fp2, fp1, fm1, fm2) = (f(x + two * h)?, f(x + h)?, f(x - h)?, f(x - two * h)?);
    Some((fm2 - fp2 + T::lit(8.0) * (fp1 - fm1)) / (T::lit(12.0) * h))
}

/// Finite-difference gradient of the solid angle at local vertex `vertex`
/// with respect to all four radii, differentiating the coordinate solid
/// angle.
pub fn fd_solid_angle_gradient<T: Real>(r: [T; 4], vertex: usize, scheme: &FdScheme) -> Result<[T; 4], OracleError> {
    let mut out = [T::zero(); 4];
    for (m, slot) in out.iter_mut().enumerate() {
        let f = |x: T| {
            let mut probe = r;
            probe[m] = x;
            EmbeddedTet::new(probe).ok().map(|e| e.solid_angle(vertex))
        };
        *slot = scheme.derivative(f, r[m])?.value;
    }
    Ok(out)
}

/// Face angle at `i` from the three side lengths only.
fn angle_from_lengths<T: Real>(ri: T, rj: T, rk: T) -> Option<T> {
    if !(ri > T::zero() && rj > T::zero() && rk > T::zero()) {
        return None;
    }
    let (a, b, c) = (ri + rj, ri + rk, rj + rk);
    Some((T::lit(4.0) * heron_lengths(a, b, c)).atan2(a * a + b * b - c * c))
}

/// `|r_j ∂γ_ijk/∂r_j − r_ijk/ℓ_ij|`: the planar relation between face-angle
/// derivatives and incircle radii, with the derivative taken numerically.
pub fn fd_face_angle_check<T: Real>(ri: T, rj: T, rk: T) -> Result<T, OracleError> {
    let scheme = FdScheme::default();
    let d = scheme.derivative(|x| angle_from_lengths(ri, x, rk), rj)?.value;
    let (a, b, c) = (ri + rj, ri + rk, rj + rk);
    let inradius = T::lit(2.0) * heron_lengths(a, b, c) / (a + b + c);
    Ok((d * rj - inradius / a).abs())
}
