//! Sphere-packing (conformal) metrics and the geometry they induce.

mod radii_io;
mod tet;

use thiserror::Error;

use crate::complex::Complex;
use crate::scalar::Real;

pub use radii_io::{read_radii, write_radii_json, write_radii_lines, RadiiError};
pub use tet::{
    dihedral_angle, dual_area, face_angle, face_area, face_inradius, face_perimeter, midsphere_radius,
    nondegeneracy_q, normalized_q, signed_height, solid_angle, tet_geometry, tet_volume, FaceAngle, TetGeometry,
    DEFAULT_Q_MIN,
};
#[allow(unused_imports)]
pub(crate) use tet::{complement, others};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("radius must be positive and finite, got {value}")]
    NonPositiveRadius { value: f64 },
    #[error("degenerate tetrahedron (normalized Q = {q:e})")]
    Degenerate { q: f64 },
    #[error("face angles violate the spherical triangle inequality (cos = {cos})")]
    SphericalInequality { cos: f64 },
    #[error("no radius for vertex index {0}")]
    MissingVertex(usize),
}

/// A positive radius per vertex, in the dense vertex order of a [`Complex`].
#[derive(Debug, Clone, PartialEq)]
pub struct MetricStructure<T> {
    radii: Vec<T>,
}

impl<T: Real> MetricStructure<T> {
    pub fn new(radii: Vec<T>) -> Result<Self, GeometryError> {
        if let Some(bad) = radii.iter().find(|r| !(**r > T::zero()) || !r.is_finite()) {
            return Err(GeometryError::NonPositiveRadius { value: bad.as_f64() });
        }
        Ok(Self { radii })
    }

    pub fn ones(n: usize) -> Self {
        Self { radii: vec![T::one(); n] }
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn radii(&self) -> &[T] {
        &self.radii
    }

    pub fn into_radii(self) -> Vec<T> {
        self.radii
    }

    pub fn radius(&self, v: usize) -> Result<T, GeometryError> {
        self.radii.get(v).copied().ok_or(GeometryError::MissingVertex(v))
    }

    /// `ℓ_ij = r_i + r_j` for dense vertex indices.
    pub fn edge_length(&self, i: usize, j: usize) -> Result<T, GeometryError> {
        Ok(self.radius(i)? + self.radius(j)?)
    }

    /// Radii of tet `t` of `c`, in the tet's sorted vertex order.
    pub fn tet_radii(&self, c: &Complex, t: usize) -> [T; 4] {
        c.tets()[t].map(|v| self.radii[v])
    }

    pub fn total(&self) -> T {
        self.radii.iter().copied().sum()
    }

    pub fn scaled(&self, lambda: T) -> Self {
        Self { radii: self.radii.iter().map(|&r| r * lambda).collect() }
    }

    /// Smallest `r_i / Σ r_j`, and the dense vertex attaining it.
    pub fn min_ratio(&self) -> (T, usize) {
        let total = self.total();
        self.radii
            .iter()
            .enumerate()
            .map(|(i, &r)| (r / total, i))
            .fold((T::infinity(), 0), |acc, x| if x.0 < acc.0 { x } else { acc })
    }
}

pub fn edge_length<T: Real>(m: &MetricStructure<T>, i: usize, j: usize) -> Result<T, GeometryError> {
    m.edge_length(i, j)
}
