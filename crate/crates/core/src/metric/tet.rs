//! Euclidean geometry of a single conformal tetrahedron.
//!
//! Every function takes the four vertex radii; the edge `{a, b}` has length
//! `r_a + r_b`. Local vertex labels are `0..4`, and a face is named by the
//! local vertex opposite to it.
//!
//! Bundled quantities ([`TetGeometry`]) are evaluated on radii rescaled to
//! geometric mean 1 and mapped back by homogeneity, so conditioning does not
//! depend on the overall scale of the radii.

use crate::scalar::Real;

use super::GeometryError;

/// Floor on the nondegeneracy quadratic of radii normalized to geometric
/// mean 1.
pub const DEFAULT_Q_MIN: f64 = 1e-12;

/// A face angle with the cosine and sine it was computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceAngle<T> {
    pub angle: T,
    pub cos: T,
    pub sin: T,
}

fn check_positive<T: Real>(rs: &[T]) -> Result<(), GeometryError> {
    match rs.iter().find(|r| !(**r > T::zero()) || !r.is_finite()) {
        Some(r) => Err(GeometryError::NonPositiveRadius { value: r.as_f64() }),
        None => Ok(()),
    }
}

/// Angle at vertex `i` of the triangle with radii `(ri, rj, rk)`.
pub fn face_angle<T: Real>(ri: T, rj: T, rk: T) -> Result<FaceAngle<T>, GeometryError> {
    check_positive(&[ri, rj, rk])?;
    let denom = (ri + rj) * (ri + rk);
    let cos = (ri * ri + ri * rj + ri * rk - rj * rk) / denom;
    let sin = T::lit(2.0) * (ri * rj * rk * (ri + rj + rk)).sqrt() / denom;
    Ok(FaceAngle { angle: sin.atan2(cos), cos, sin })
}

/// Heron's formula for the triangle with sides `ri + rj`, `ri + rk`, `rj + rk`.
pub fn face_area<T: Real>(ri: T, rj: T, rk: T) -> Result<T, GeometryError> {
    check_positive(&[ri, rj, rk])?;
    Ok((ri * rj * rk * (ri + rj + rk)).sqrt())
}

pub fn face_perimeter<T: Real>(ri: T, rj: T, rk: T) -> Result<T, GeometryError> {
    check_positive(&[ri, rj, rk])?;
    Ok(T::lit(2.0) * (ri + rj + rk))
}

pub fn face_inradius<T: Real>(ri: T, rj: T, rk: T) -> Result<T, GeometryError> {
    check_positive(&[ri, rj, rk])?;
    Ok((ri * rj * rk / (ri + rj + rk)).sqrt())
}

/// Descartes/Soddy quadratic `(Σ 1/r)² − 2 Σ 1/r²`. Its sign decides whether
/// the four radii form a Euclidean tetrahedron.
pub fn nondegeneracy_q<T: Real>(r: [T; 4]) -> Result<T, GeometryError> {
    check_positive(&r)?;
    Ok(raw_q(r))
}

fn raw_q<T: Real>(r: [T; 4]) -> T {
    let inv = r.map(|x| x.recip());
    let s: T = inv.iter().copied().sum();
    let s2: T = inv.iter().map(|&x| x * x).sum();
    s * s - T::lit(2.0) * s2
}

/// Geometric mean of the radii; the rescaling factor used internally.
fn geometric_mean<T: Real>(r: [T; 4]) -> T {
    (r[0] * r[1] * r[2] * r[3]).sqrt().sqrt()
}

fn normalize<T: Real>(r: [T; 4]) -> ([T; 4], T) {
    let g = geometric_mean(r);
    (r.map(|x| x / g), g)
}

/// Q of the radii rescaled to geometric mean 1. This is the quantity compared
/// against the degeneracy floor.
pub fn normalized_q<T: Real>(r: [T; 4]) -> Result<T, GeometryError> {
    check_positive(&r)?;
    Ok(raw_q(normalize(r).0))
}

fn require_nondegenerate<T: Real>(r: [T; 4], q_min: T) -> Result<([T; 4], T, T), GeometryError> {
    check_positive(&r)?;
    let (s, g) = normalize(r);
    let q = raw_q(s);
    if !(q > q_min) {
        return Err(GeometryError::Degenerate { q: q.as_f64() });
    }
    Ok((s, g, q))
}

/// Volume `(1/3) r_i r_j r_k r_l √Q`. Errors when `Q` is negative beyond
/// round-off; `Q = 0` gives a zero volume.
pub fn tet_volume<T: Real>(r: [T; 4]) -> Result<T, GeometryError> {
    check_positive(&r)?;
    let (s, g) = normalize(r);
    let q = raw_q(s);
    let scale: T = s.iter().map(|x| x.recip()).sum::<T>().powi(2);
    if q < -(T::epsilon() * T::lit(64.0) * scale) {
        return Err(GeometryError::Degenerate { q: q.as_f64() });
    }
    let q = q.max(T::zero());
    Ok(s[0] * s[1] * s[2] * s[3] * q.sqrt() / T::lit(3.0) * g.powi(3))
}

/// Radius `2/√Q` of the sphere tangent to all six edges.
pub fn midsphere_radius<T: Real>(r: [T; 4]) -> Result<T, GeometryError> {
    let (_, g, q) = require_nondegenerate(r, T::lit(DEFAULT_Q_MIN))?;
    Ok(T::lit(2.0) / q.sqrt() * g)
}

/// Dihedral angle along edge `{i, j}` from the face angles at `i`: the two
/// adjacent to the edge (`γ_ijk`, `γ_ijl`) and the opposite one (`γ_ikl`).
///
/// Cosines within the slack of `±1` are clamped; the sine comes from the
/// Gram determinant of the three unit edge directions at `i`.
pub fn dihedral_angle<T: Real>(g_ijk: T, g_ijl: T, g_ikl: T) -> Result<T, GeometryError> {
    let slack = T::lit(T::ANGLE_SLACK);
    let two_pi = T::TAU();
    if g_ijk + g_ijl + g_ikl > two_pi + slack {
        return Err(GeometryError::SphericalInequality { cos: f64::NAN });
    }
    let (c1, c2, c3) = (g_ijk.cos(), g_ijl.cos(), g_ikl.cos());
    let (s1, s2) = (g_ijk.sin(), g_ijl.sin());
    let denom = s1 * s2;
    if !(denom > T::zero()) {
        return Err(GeometryError::SphericalInequality { cos: f64::NAN });
    }
    let cos = (c3 - c1 * c2) / denom;
    if cos.abs() > T::one() + slack {
        return Err(GeometryError::SphericalInequality { cos: cos.as_f64() });
    }
    let cos = cos.max(-T::one()).min(T::one());
    let gram = T::one() - c1 * c1 - c2 * c2 - c3 * c3 + T::lit(2.0) * c1 * c2 * c3;
    let sin = gram.max(T::zero()).sqrt() / denom;
    Ok(sin.atan2(cos))
}

/// Solid angle at local vertex `vertex`.
pub fn solid_angle<T: Real>(r: [T; 4], vertex: usize) -> Result<T, GeometryError> {
    Ok(TetGeometry::new(r)?.solid[vertex])
}

/// Signed height of the midsphere centre over the face opposite `opposite`,
/// positive when the centre lies on the same side as the tetrahedron.
pub fn signed_height<T: Real>(r: [T; 4], opposite: usize) -> Result<T, GeometryError> {
    let (s, g, q) = require_nondegenerate(r, T::lit(DEFAULT_Q_MIN))?;
    Ok(height_normalized(s, q, opposite) * g)
}

fn height_normalized<T: Real>(s: [T; 4], q: T, opposite: usize) -> T {
    let face = others(opposite);
    let inr = (s[face[0]] * s[face[1]] * s[face[2]] / (s[face[0]] + s[face[1]] + s[face[2]])).sqrt();
    let mid = T::lit(2.0) / q.sqrt();
    let bracket = face.iter().map(|&x| s[x].recip()).sum::<T>() - s[opposite].recip();
    mid * inr / T::lit(2.0) * bracket
}

/// Signed area of the piece of the dual surface to edge `{a, b}` inside the
/// tetrahedron: two right triangles with legs the face inradii and the signed
/// heights of the midsphere centre.
pub fn dual_area<T: Real>(r: [T; 4], a: usize, b: usize) -> Result<T, GeometryError> {
    Ok(TetGeometry::new(r)?.dual_areas[a][b])
}

/// The three local labels other than `v`, increasing.
pub(crate) fn others(v: usize) -> [usize; 3] {
    match v {
        0 => [1, 2, 3],
        1 => [0, 2, 3],
        2 => [0, 1, 3],
        _ => [0, 1, 2],
    }
}

/// The two local labels other than `a` and `b`, increasing.
pub(crate) fn complement(a: usize, b: usize) -> [usize; 2] {
    let mut out = [0; 2];
    let mut n = 0;
    for v in 0..4 {
        if v != a && v != b {
            out[n] = v;
            n += 1;
        }
    }
    out
}

/// `∂α_i/∂r_i` on normalized radii.
fn d_alpha_self<T: Real>(s: [T; 4], q: T, vol: T, i: usize) -> T {
    let [j, k, l] = others(i);
    let (ri, rj, rk, rl) = (s[i], s[j], s[k], s[l]);
    let two = T::lit(2.0);
    let p = |a: T, b: T, c: T| two * (a + b + c);
    let coef = -T::lit(8.0) * (rj * rk * rl).powi(2) / (T::lit(3.0) * p(ri, rj, rk) * p(ri, rj, rl) * p(ri, rk, rl) * vol);
    let inv = |x: T| x.recip();
    let bracket = (two / ri + inv(rj) + inv(rk) + inv(rl))
        + rj / ri * (inv(ri) + inv(rk) + inv(rl))
        + rk / ri * (inv(ri) + inv(rj) + inv(rl))
        + rl / ri * (inv(ri) + inv(rj) + inv(rk))
        + (two * ri + rj + rk + rl) * q;
    coef * bracket
}

/// `∂α_i/∂r_j` for `j ≠ i` on normalized radii.
fn d_alpha_other<T: Real>(s: [T; 4], vol: T, i: usize, j: usize) -> T {
    let [k, l] = complement(i, j);
    let (ri, rj, rk, rl) = (s[i], s[j], s[k], s[l]);
    let two = T::lit(2.0);
    let p_ijk = two * (ri + rj + rk);
    let p_ijl = two * (ri + rj + rl);
    let coef = T::lit(4.0) * ri * rj * (rk * rl).powi(2) / (T::lit(3.0) * p_ijk * p_ijl * vol);
    let inv = |x: T| x.recip();
    let diff = inv(rk) - inv(rl);
    let bracket = inv(ri) * (inv(rj) + inv(rk) + inv(rl)) + inv(rj) * (inv(ri) + inv(rk) + inv(rl)) - diff * diff;
    coef * bracket
}

/// Every per-tetrahedron quantity of a conformal tetrahedron.
///
/// Pair-indexed arrays are symmetric unless noted, with zero diagonals. Face
/// arrays are indexed by the local vertex opposite the face.
#[derive(Debug, Clone, PartialEq)]
pub struct TetGeometry<T> {
    pub radii: [T; 4],
    pub lengths: [[T; 4]; 4],
    /// `face_angles[a][d]`: angle at `a` in the face opposite `d`.
    pub face_angles: [[T; 4]; 4],
    pub face_areas: [T; 4],
    pub face_perimeters: [T; 4],
    pub face_inradii: [T; 4],
    /// Nondegeneracy quadratic of the raw radii (units length⁻²).
    pub q: T,
    pub volume: T,
    pub midsphere_radius: T,
    pub dihedral: [[T; 4]; 4],
    pub solid: [T; 4],
    /// Signed height of the midsphere centre over the face opposite `d`.
    pub heights: [T; 4],
    pub dual_areas: [[T; 4]; 4],
    /// `gradient[a][m] = ∂α_a/∂r_m` (not symmetric as stored, but
    /// `gradient[a][b] == gradient[b][a]` up to round-off).
    pub gradient: [[T; 4]; 4],
    /// `omega[a][b] = r_b ∂α_a/∂r_b`; `r_a omega[a][b] = r_b omega[b][a]`.
    pub omega: [[T; 4]; 4],
}

pub fn tet_geometry<T: Real>(r: [T; 4]) -> Result<TetGeometry<T>, GeometryError> {
    TetGeometry::new(r)
}

impl<T: Real> TetGeometry<T> {
    pub fn new(r: [T; 4]) -> Result<Self, GeometryError> {
        Self::with_floor(r, T::lit(DEFAULT_Q_MIN))
    }

    /// Builds the bundle, treating normalized `Q <= q_min` as degenerate.
    pub fn with_floor(r: [T; 4], q_min: T) -> Result<Self, GeometryError> {
        let (s, g, q) = require_nondegenerate(r, q_min)?;
        let zero = T::zero();
        let two = T::lit(2.0);
        let half = T::lit(0.5);

        let mut lengths = [[zero; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                if a != b {
                    lengths[a][b] = s[a] + s[b];
                }
            }
        }

        let mut face_areas = [zero; 4];
        let mut face_perimeters = [zero; 4];
        let mut face_inradii = [zero; 4];
        let mut face_angles = [[zero; 4]; 4];
        for d in 0..4 {
            let [a, b, c] = others(d);
            let (ra, rb, rc) = (s[a], s[b], s[c]);
            face_areas[d] = (ra * rb * rc * (ra + rb + rc)).sqrt();
            face_perimeters[d] = two * (ra + rb + rc);
            face_inradii[d] = (ra * rb * rc / (ra + rb + rc)).sqrt();
            face_angles[a][d] = face_angle(ra, rb, rc)?.angle;
            face_angles[b][d] = face_angle(rb, ra, rc)?.angle;
            face_angles[c][d] = face_angle(rc, ra, rb)?.angle;
        }

        let volume = s[0] * s[1] * s[2] * s[3] * q.sqrt() / T::lit(3.0);
        let midsphere = two / q.sqrt();

        let mut dihedral = [[zero; 4]; 4];
        for a in 0..4 {
            for b in a + 1..4 {
                let [c, d] = complement(a, b);
                let beta = dihedral_angle(face_angles[a][d], face_angles[a][c], face_angles[a][b])?;
                dihedral[a][b] = beta;
                dihedral[b][a] = beta;
            }
        }
        let solid = std::array::from_fn(|a| {
            (0..4).filter(|&b| b != a).map(|b| dihedral[a][b]).sum::<T>() - T::PI()
        });

        let heights = std::array::from_fn(|d| height_normalized(s, q, d));
        let mut dual_areas = [[zero; 4]; 4];
        for a in 0..4 {
            for b in a + 1..4 {
                let [c, d] = complement(a, b);
                let area = half * heights[d] * face_inradii[d] + half * heights[c] * face_inradii[c];
                dual_areas[a][b] = area;
                dual_areas[b][a] = area;
            }
        }

        let mut gradient = [[zero; 4]; 4];
        let mut omega = [[zero; 4]; 4];
        for a in 0..4 {
            for m in 0..4 {
                gradient[a][m] = if a == m { d_alpha_self(s, q, volume, a) } else { d_alpha_other(s, volume, a, m) };
                if a != m {
                    omega[a][m] = gradient[a][m] * s[m];
                }
            }
        }

        // back to the caller's scale
        let g2 = g * g;
        Ok(Self {
            radii: r,
            lengths: lengths.map(|row| row.map(|x| x * g)),
            face_angles,
            face_areas: face_areas.map(|x| x * g2),
            face_perimeters: face_perimeters.map(|x| x * g),
            face_inradii: face_inradii.map(|x| x * g),
            q: q / g2,
            volume: volume * g2 * g,
            midsphere_radius: midsphere * g,
            dihedral,
            solid,
            heights: heights.map(|x| x * g),
            dual_areas: dual_areas.map(|row| row.map(|x| x * g2)),
            gradient: gradient.map(|row| row.map(|x| x / g)),
            omega,
        })
    }

    /// Schläfli residual `Σ_m r_m ∂α_a/∂r_m` for vertex `a`.
    pub fn schlafli_residual(&self, a: usize) -> T {
        (0..4).map(|m| self.radii[m] * self.gradient[a][m]).sum()
    }
}
