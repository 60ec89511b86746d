//! Explicit coordinates for a single conformal tetrahedron, and the
//! quantities recomputed from them by plain vector geometry.
//!
//! Only the six edge lengths `r_a + r_b` are taken from the radii; nothing
//! here reuses the closed-form face-angle, dihedral or height formulas.

use crate::scalar::Real;

use super::OracleError;

pub type Vec3<T> = [T; 3];

fn sub<T: Real>(a: Vec3<T>, b: Vec3<T>) -> Vec3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn add<T: Real>(a: Vec3<T>, b: Vec3<T>) -> Vec3<T> {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale<T: Real>(a: Vec3<T>, s: T) -> Vec3<T> {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn dot<T: Real>(a: Vec3<T>, b: Vec3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross<T: Real>(a: Vec3<T>, b: Vec3<T>) -> Vec3<T> {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn norm<T: Real>(a: Vec3<T>) -> T {
    dot(a, a).sqrt()
}

fn unit<T: Real>(a: Vec3<T>) -> Vec3<T> {
    scale(a, norm(a).recip())
}

/// Triangle area from side lengths (Kahan's rearrangement of Heron).
pub fn heron_lengths<T: Real>(a: T, b: T, c: T) -> T {
    let mut s = [a, b, c];
    s.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    let [a, b, c] = s;
    let p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    p.max(T::zero()).sqrt() / T::lit(4.0)
}

/// A conformal tetrahedron placed with vertex 0 at the origin, vertex 1 on
/// the positive x-axis, vertex 2 in the upper xy-plane and vertex 3 above it.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedTet<T> {
    pub radii: [T; 4],
    pub points: [Vec3<T>; 4],
}

pub fn embed_tetrahedron<T: Real>(r: [T; 4]) -> Result<[Vec3<T>; 4], OracleError> {
    Ok(EmbeddedTet::new(r)?.points)
}

impl<T: Real> EmbeddedTet<T> {
    pub fn new(r: [T; 4]) -> Result<Self, OracleError> {
        if r.iter().any(|x| !(*x > T::zero())) {
            return Err(OracleError::Degenerate("non-positive radius".into()));
        }
        let d = |a: usize, b: usize| r[a] + r[b];
        let two = T::lit(2.0);
        let d01 = d(0, 1);
        let x2 = (d01 * d01 + d(0, 2).powi(2) - d(1, 2).powi(2)) / (two * d01);
        let y2 = two * heron_lengths(d01, d(0, 2), d(1, 2)) / d01;
        let x3 = (d01 * d01 + d(0, 3).powi(2) - d(1, 3).powi(2)) / (two * d01);
        let y3 = (d(0, 2).powi(2) + d(0, 3).powi(2) - d(2, 3).powi(2) - two * x2 * x3) / (two * y2);
        let z3sq = d(0, 3).powi(2) - x3 * x3 - y3 * y3;
        if !(z3sq > T::zero()) || !(y2 > T::zero()) {
            return Err(OracleError::Degenerate(format!("flat embedding (z² = {:e})", z3sq.as_f64())));
        }
        let zero = T::zero();
        Ok(Self { radii: r, points: [[zero; 3], [d01, zero, zero], [x2, y2, zero], [x3, y3, z3sq.sqrt()]] })
    }

    fn rest(v: usize) -> [usize; 3] {
        crate::metric::others(v)
    }

    /// Solid angle at vertex `a` (Van Oosterom–Strackee).
    pub fn solid_angle(&self, a: usize) -> T {
        let [b, c, d] = Self::rest(a);
        let p = &self.points;
        let (u, v, w) = (sub(p[b], p[a]), sub(p[c], p[a]), sub(p[d], p[a]));
        let (nu, nv, nw) = (norm(u), norm(v), norm(w));
        let num = dot(u, cross(v, w)).abs();
        let den = nu * nv * nw + dot(u, v) * nw + dot(u, w) * nv + dot(v, w) * nu;
        T::lit(2.0) * num.atan2(den)
    }

    /// Centre of the sphere tangent to all six edges: the point whose power
    /// with respect to vertex `i` is `r_i²` for every `i`.
    pub fn midsphere_center(&self) -> Vec3<T> {
        let p = &self.points;
        let r = &self.radii;
        let rhs: [T; 3] = std::array::from_fn(|i| (dot(p[i + 1], p[i + 1]) - r[i + 1] * r[i + 1] + r[0] * r[0]) / T::lit(2.0));
        let (a, b, c) = (p[1], p[2], p[3]);
        let det = dot(a, cross(b, c));
        // Cramer's rule on the rows a, b, c
        let col = |k: usize| -> T {
            let mut rows = [a, b, c];
            for (row, val) in rows.iter_mut().zip(rhs) {
                row[k] = val;
            }
            dot(rows[0], cross(rows[1], rows[2])) / det
        };
        [col(0), col(1), col(2)]
    }

    pub fn midsphere_radius(&self) -> T {
        let c = self.midsphere_center();
        (dot(c, c) - self.radii[0] * self.radii[0]).sqrt()
    }

    /// Signed distance from the midsphere centre to the face opposite `d`,
    /// positive on the side of vertex `d`.
    pub fn signed_height(&self, d: usize) -> T {
        let [a, b, c] = Self::rest(d);
        let p = &self.points;
        let mut n = unit(cross(sub(p[b], p[a]), sub(p[c], p[a])));
        if dot(n, sub(p[d], p[a])) < T::zero() {
            n = scale(n, -T::one());
        }
        dot(n, sub(self.midsphere_center(), p[a]))
    }

    /// Incentre of the face opposite `d`.
    pub fn incenter(&self, d: usize) -> Vec3<T> {
        let [a, b, c] = Self::rest(d);
        let p = &self.points;
        let len = |x: usize, y: usize| norm(sub(p[x], p[y]));
        let (wa, wb, wc) = (len(b, c), len(a, c), len(a, b));
        scale(add(add(scale(p[a], wa), scale(p[b], wb)), scale(p[c], wc)), (wa + wb + wc).recip())
    }

    /// Signed area of the quadrilateral cut from the tetrahedron by the plane
    /// through the midsphere centre perpendicular to edge `{a, b}`: tangency
    /// point, incentre of one face, centre, incentre of the other face.
    pub fn dual_area(&self, a: usize, b: usize) -> T {
        let [c, d] = crate::metric::complement(a, b);
        let p = &self.points;
        let t = add(p[a], scale(unit(sub(p[b], p[a])), self.radii[a]));
        let i_abc = sub(self.incenter(d), t);
        let i_abd = sub(self.incenter(c), t);
        let ctr = sub(self.midsphere_center(), t);
        let n = unit(cross(i_abc, i_abd));
        T::lit(0.5) * dot(n, add(cross(i_abc, ctr), cross(ctr, i_abd)))
    }

    pub fn volume(&self) -> T {
        let p = &self.points;
        dot(sub(p[1], p[0]), cross(sub(p[2], p[0]), sub(p[3], p[0]))).abs() / T::lit(6.0)
    }

    pub fn distance(&self, a: usize, b: usize) -> T {
        norm(sub(self.points[a], self.points[b]))
    }
}
