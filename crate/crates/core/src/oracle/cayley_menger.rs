//! Tetrahedron volume from the six edge lengths via the Cayley–Menger
//! determinant.

use crate::scalar::Real;

/// Result of a Cayley–Menger evaluation. `determinant` is the 5×5 bordered
/// determinant (`288 V²` for an embeddable tetrahedron); `volume` is `None`
/// when it is not positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CayleyMenger<T> {
    pub determinant: T,
    pub volume: Option<T>,
}

/// Lengths are ordered `(ℓ01, ℓ02, ℓ03, ℓ12, ℓ13, ℓ23)`.
pub fn cayley_menger_volume<T: Real>(lengths: [T; 6]) -> CayleyMenger<T> {
    // rescale to unit mean length; the determinant is homogeneous of degree 6
    let mean = lengths.iter().copied().sum::<T>() / T::lit(6.0);
    let l = lengths.map(|x| x / mean);
    let [d01, d02, d03, d12, d13, d23] = l.map(|x| x * x);
    let zero = T::zero();
    let one = T::one();
    let mut m = [
        [zero, one, one, one, one],
        [one, zero, d01, d02, d03],
        [one, d01, zero, d12, d13],
        [one, d02, d12, zero, d23],
        [one, d03, d13, d23, zero],
    ];
    let det = determinant(&mut m) * mean.powi(6);
    let volume = (det > zero).then(|| (det / T::lit(288.0)).sqrt());
    CayleyMenger { determinant: det, volume }
}

/// Lengths `r_a + r_b` in the order expected by [`cayley_menger_volume`].
pub fn conformal_lengths<T: Real>(r: [T; 4]) -> [T; 6] {
    [r[0] + r[1], r[0] + r[2], r[0] + r[3], r[1] + r[2], r[1] + r[3], r[2] + r[3]]
}

/// Gaussian elimination with partial pivoting; destroys `m`.
fn determinant<T: Real, const N: usize>(m: &mut [[T; N]; N]) -> T {
    let mut det = T::one();
    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap_or(std::cmp::Ordering::Equal))
            .unwrap_or(col);
        if m[pivot][col] == T::zero() {
            return T::zero();
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det = det * m[col][col];
        for row in col + 1..N {
            let factor = m[row][col] / m[col][col];
            for k in col..N {
                m[row][k] = m[row][k] - factor * m[col][k];
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn regular_tetrahedron() {
        let cm = cayley_menger_volume([2.0; 6]);
        assert_relative_eq!(cm.volume.unwrap(), 2.0 * 2f64.sqrt() / 3.0, max_relative = 1e-13);
    }

    #[test]
    fn conformal_lengths_order() {
        assert_eq!(conformal_lengths([1.0, 2.0, 3.0, 6.0]), [3.0, 4.0, 7.0, 5.0, 8.0, 9.0]);
    }

    #[test]
    fn unit_corner() {
        let s = 2f64.sqrt();
        let cm = cayley_menger_volume([1.0, 1.0, 1.0, s, s, s]);
        assert_relative_eq!(cm.volume.unwrap(), 1.0 / 6.0, max_relative = 1e-13);
    }

    #[test]
    fn non_embeddable_lengths_signal() {
        let cm = cayley_menger_volume([1.0, 1.0, 1.0, 1.0, 1.0, 2.0]);
        assert!(cm.determinant <= 0.0);
        assert!(cm.volume.is_none());
    }

    #[test]
    fn small_determinant() {
        let mut m = [[2.0, 1.0], [4.0, 3.0]];
        assert_relative_eq!(determinant(&mut m), 2.0);
    }
}
