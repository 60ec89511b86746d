//! Seeded oracle-vs-analytic sweep over random tetrahedra.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::metric::{normalized_q, TetGeometry};

use super::cayley_menger::{cayley_menger_volume, conformal_lengths};
use super::embed::EmbeddedTet;
use super::fd::{fd_face_angle_check, fd_solid_angle_gradient, FdScheme};
use super::{hessian_symmetry_defect, OracleError};

/// Draws with normalized `Q` at or below this are resampled.
pub const SAMPLE_Q_FLOOR: f64 = 1e-3;

const LOG_LO: f64 = -1.0;
const LOG_HI: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub samples: usize,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { samples: 1000, seed: 0 }
    }
}

/// Radii log-uniform in `[0.1, 10]`, resampled until normalized `Q` exceeds
/// [`SAMPLE_Q_FLOOR`].
pub fn random_tet<R: Rng + ?Sized>(rng: &mut R) -> [f64; 4] {
    loop {
        let r: [f64; 4] = std::array::from_fn(|_| 10f64.powf(rng.random_range(LOG_LO..=LOG_HI)));
        if normalized_q(r).is_ok_and(|q| q > SAMPLE_Q_FLOOR) {
            return r;
        }
    }
}

/// One line of the `check` report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub test: String,
    pub samples: usize,
    pub max_defect: f64,
    pub threshold: f64,
    pub pass: bool,
}

struct Check {
    name: &'static str,
    threshold: f64,
    defect: fn([f64; 4]) -> Result<f64, OracleError>,
}

const CHECKS: &[Check] = &[
    Check { name: "fd_solid_angle_gradient", threshold: 1e-6, defect: gradient_defect },
    Check { name: "schlafli_residual", threshold: 1e-10, defect: schlafli_defect },
    Check { name: "hessian_symmetry", threshold: 1e-9, defect: hessian_symmetry_defect },
    Check { name: "fd_hessian_symmetry", threshold: 1e-6, defect: fd_symmetry_defect },
    Check { name: "cayley_menger_volume", threshold: 1e-10, defect: volume_defect },
    Check { name: "volume_partition", threshold: 1e-10, defect: partition_defect },
    Check { name: "coordinate_solid_angle", threshold: 1e-10, defect: solid_angle_defect },
    Check { name: "coordinate_midsphere", threshold: 1e-10, defect: midsphere_defect },
    Check { name: "coordinate_heights", threshold: 1e-9, defect: height_defect },
    Check { name: "coordinate_dual_area", threshold: 1e-9, defect: dual_area_defect },
    Check { name: "fd_face_angle", threshold: 1e-9, defect: face_angle_defect },
];

/// Runs every check on the same `samples` tetrahedra drawn from `seed`.
/// Samples are drawn sequentially, checks run in parallel; the report does
/// not depend on the thread count.
pub fn run_checks(config: &SweepConfig) -> Vec<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let tets: Vec<[f64; 4]> = (0..config.samples).map(|_| random_tet(&mut rng)).collect();
    CHECKS
        .iter()
        .map(|check| {
            let max_defect = tets
                .par_iter()
                // an oracle failure on a sampled tet counts as an infinite defect
                .map(|&r| (check.defect)(r).unwrap_or(f64::INFINITY))
                .reduce(|| 0.0, f64::max);
            CheckReport {
                test: check.name.to_string(),
                samples: tets.len(),
                max_defect,
                threshold: check.threshold,
                pass: max_defect <= check.threshold,
            }
        })
        .collect()
}

fn max_abs(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Largest component error, relative to the largest finite-difference
/// component of the same gradient.
fn gradient_defect(r: [f64; 4]) -> Result<f64, OracleError> {
    let g = TetGeometry::new(r)?;
    let mut worst = 0.0f64;
    for a in 0..4 {
        let fd = fd_solid_angle_gradient(r, a, &FdScheme::default())?;
        let scale = max_abs(fd);
        worst = worst.max(max_abs((0..4).map(|m| g.gradient[a][m] - fd[m])) / scale);
    }
    Ok(worst)
}

/// Mixed-partial symmetry of the finite-difference gradients alone, relative
/// to the largest component. The analytic off-diagonal formula is symmetric
/// in its two labels as written, so this is the check with content.
fn fd_symmetry_defect(r: [f64; 4]) -> Result<f64, OracleError> {
    let fd: Vec<[f64; 4]> = (0..4).map(|a| fd_solid_angle_gradient(r, a, &FdScheme::default())).collect::<Result<_, _>>()?;
    let scale = max_abs(fd.iter().flatten().copied());
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in i + 1..4 {
            worst = worst.max((fd[i][j] - fd[j][i]).abs());
        }
    }
    Ok(worst / scale)
}

/// `|Σ_m r_m ∂α/∂r_m|` divided by `Σ_m |r_m ∂α/∂r_m|`.
fn schlafli_defect(r: [f64; 4]) -> Result<f64, OracleError> {
    let g = TetGeometry::new(r)?;
    Ok((0..4)
        .map(|a| g.schlafli_residual(a).abs() / (0..4).map(|m| (r[m] * g.gradient[a][m]).abs()).sum::<f64>())
        .fold(0.0, f64::max))
}

fn volume_defect(r: [f64; 4]) -> Result<f64, OracleError> {
    let g = TetGeometry::new(r)?;
    let cm = cayley_menger_volume(conformal_lengths(r))
        .volume
        .ok_or_else(|| OracleError::Degenerate("non-positive Cayley–Menger determinant".into()))?;
    Ok((g.volume - cm).abs() / cm)
}

/// Cones from the midsphere centre over the four faces fill the tetrahedron.
fn partition_defect(r: [f64; 4]) -> Result<f64, OracleError> {
    let g = TetGeometry::new(r)?;
    let cones: f64 = (0..4).map(|d| g.face_areas[d] * g.heights[d] / 3.0).sum();
    Ok((cones - g.volume).abs() / g.volume)
}

fn solid_angle_defect(r: [f64; 4]) -> Result<f64, OracleError> {
    let g = TetGeometry::new(r)?;
    let e = EmbeddedTet::new(r)?;
    Ok(max_abs((0..4).map(|a| g.solid[a] - e.solid_angle(a))))
}

fn midsphere_defect(r: [f64; 4]) -> Result<f64, OracleError> {
    let g = TetGeometry::new(r)?;
    let e = EmbeddedTet::new(r)?;
    Ok((g.midsphere_radius - e.midsphere_radius()).abs() / g.midsphere_radius)
}

/// Heights relative to the midsphere radius.
fn height_defect(r: [f64; 4]) -> Result<f64, OracleError> {
    let g = TetGeometry::new(r)?;
    let e = EmbeddedTet::new(r)?;
    Ok(max_abs((0..4).map(|d| g.heights[d] - e.signed_height(d))) / g.midsphere_radius)
}

/// Dual areas relative to the largest dual area of the tet.
fn dual_area_defect(r: [f64; 4]) -> Result<f64, OracleError> {
    let g = TetGeometry::new(r)?;
    let e = EmbeddedTet::new(r)?;
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let scale = max_abs(pairs.iter().map(|&(a, b)| g.dual_areas[a][b]));
    Ok(max_abs(pairs.iter().map(|&(a, b)| g.dual_areas[a][b] - e.dual_area(a, b))) / scale)
}

/// Face-angle relation on the face opposite each vertex.
fn face_angle_defect(r: [f64; 4]) -> Result<f64, OracleError> {
    let mut worst = 0.0f64;
    for [i, j, k] in [[0, 1, 2], [1, 2, 3], [2, 3, 0], [3, 0, 1]] {
        worst = worst.max(fd_face_angle_check(r[i], r[j], r[k])?);
    }
    Ok(worst)
}
