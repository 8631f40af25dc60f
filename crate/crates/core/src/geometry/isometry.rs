use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{CurvatureSpace, Sign, SurfacePoint, TangentVec};
use crate::error::{Error, Result};
use crate::linalg::{Mat3, Vec3};
use crate::scalar::constraint_tol;
use crate::Scalar;

/// Largest boost rapidity drawn by [`random_isometry`].
pub const MAX_RAPIDITY: f64 = 3.0;
/// Largest translation component drawn by [`random_isometry`] on the plane.
pub const MAX_TRANSLATION: f64 = 3.0;

/// Orientation-preserving isometry acting linearly on ambient coordinates:
/// `SO(3)` on the sphere, the identity component of `SO(2,1)` on the
/// hyperboloid, and planar rigid motions `[[R, t], [0, 1]]` on the plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Isometry<T> {
    matrix: Mat3<T>,
    sigma: Sign,
}

impl<T: Scalar> Isometry<T> {
    pub fn new(space: &CurvatureSpace<T>, matrix: Mat3<T>) -> Result<Self> {
        let defect = defect(space.sign(), &matrix);
        if !(defect <= constraint_tol::<T>() * T::lit(16.0)) || !(matrix.det() > T::zero()) {
            return Err(Error::ConstraintViolation(format!(
                "matrix is not an orientation preserving isometry (defect {defect:e})"
            )));
        }
        if space.sign() == Sign::Negative && matrix.0[2][2] <= T::zero() {
            return Err(Error::ConstraintViolation(
                "isometry swaps hyperboloid sheets".into(),
            ));
        }
        Ok(Isometry {
            matrix,
            sigma: space.sign(),
        })
    }

    pub fn identity(space: &CurvatureSpace<T>) -> Self {
        Isometry {
            matrix: Mat3::identity(),
            sigma: space.sign(),
        }
    }

    pub fn matrix(&self) -> &Mat3<T> {
        &self.matrix
    }

    /// `max |g^T K g - K|` (or the rigid-motion analogue on the plane).
    pub fn defect(&self) -> T {
        defect(self.sigma, &self.matrix)
    }

    pub fn apply(&self, q: &SurfacePoint<T>) -> SurfacePoint<T> {
        SurfacePoint(self.matrix.mul_vec(&q.0))
    }

    /// Tangent lift `g_* v = g v`.
    pub fn apply_tangent(&self, v: &TangentVec<T>) -> TangentVec<T> {
        TangentVec {
            base: self.apply(&v.base),
            vec: self.apply_vec(&v.vec),
        }
    }

    /// Linear part acting on a velocity.
    pub fn apply_vec(&self, v: &Vec3<T>) -> Vec3<T> {
        self.matrix.mul_vec(v)
    }

    pub fn compose(&self, other: &Self) -> Self {
        Isometry {
            matrix: self.matrix.mul_mat(&other.matrix),
            sigma: self.sigma,
        }
    }
}

fn defect<T: Scalar>(sigma: Sign, g: &Mat3<T>) -> T {
    match sigma {
        Sign::Zero => {
            let m = &g.0;
            let rot = Mat3([
                [m[0][0], m[0][1], T::zero()],
                [m[1][0], m[1][1], T::zero()],
                [T::zero(), T::zero(), T::one()],
            ]);
            let ortho = rot
                .transpose()
                .mul_mat(&rot)
                .max_abs_diff(&Mat3::identity());
            let last_row = m[2][0]
                .abs()
                .max(m[2][1].abs())
                .max((m[2][2] - T::one()).abs());
            ortho.max(last_row)
        }
        _ => {
            let s = T::from_i8(sigma.as_i8()).unwrap();
            let k = Mat3::diag(T::one(), T::one(), s);
            g.transpose().mul_mat(&k).mul_mat(g).max_abs_diff(&k)
        }
    }
}

/// Reproducible pseudo-random isometry.
///
/// Sphere: Haar-uniform rotation from a normalised Gaussian quaternion.
/// Hyperboloid: `Rz(a) B(b) Rz(c)` with rapidity `b` uniform in `[0, 3]`.
/// Plane: rotation followed by a translation with components in `[-3, 3]`.
pub fn random_isometry<T: Scalar>(space: &CurvatureSpace<T>, seed: u64) -> Isometry<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_isometry_with(space, &mut rng)
}

pub fn random_isometry_with<T: Scalar, R: Rng + ?Sized>(
    space: &CurvatureSpace<T>,
    rng: &mut R,
) -> Isometry<T> {
    let m: [[f64; 3]; 3] = match space.sign() {
        Sign::Positive => {
            let mut q: [f64; 4] = [0.0; 4];
            loop {
                for c in q.iter_mut() {
                    *c = rng.sample(StandardNormal);
                }
                let n = q.iter().map(|c| c * c).sum::<f64>().sqrt();
                if n > 1e-6 {
                    q.iter_mut().for_each(|c| *c /= n);
                    break;
                }
            }
            let [w, x, y, z] = q;
            [
                [
                    1.0 - 2.0 * (y * y + z * z),
                    2.0 * (x * y - w * z),
                    2.0 * (x * z + w * y),
                ],
                [
                    2.0 * (x * y + w * z),
                    1.0 - 2.0 * (x * x + z * z),
                    2.0 * (y * z - w * x),
                ],
                [
                    2.0 * (x * z - w * y),
                    2.0 * (y * z + w * x),
                    1.0 - 2.0 * (x * x + y * y),
                ],
            ]
        }
        Sign::Negative => {
            let a = rng.gen_range(0.0..std::f64::consts::TAU);
            let b = rng.gen_range(0.0..=MAX_RAPIDITY);
            let c = rng.gen_range(0.0..std::f64::consts::TAU);
            (Mat3::rot_z(a) * Mat3::boost_xz(b) * Mat3::rot_z(c)).0
        }
        Sign::Zero => {
            let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let tx = rng.gen_range(-MAX_TRANSLATION..=MAX_TRANSLATION);
            let ty = rng.gen_range(-MAX_TRANSLATION..=MAX_TRANSLATION);
            let (s, c) = a.sin_cos();
            [[c, -s, tx], [s, c, ty], [0.0, 0.0, 1.0]]
        }
    };
    Isometry {
        matrix: Mat3(m.map(|row| row.map(T::lit))),
        sigma: space.sign(),
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn identity_fixes_points() {
        let s = CurvatureSpace::new(-2.0).unwrap();
        let q = s.embed(0.4, 1.0).unwrap();
        assert_eq!(Isometry::identity(&s).apply(&q), q);
    }

    #[test]
    fn half_turn_about_z() {
        let s = CurvatureSpace::new(1.0).unwrap();
        let g = Isometry::new(&s, Mat3::rot_z(PI)).unwrap();
        let q = s.point(Vec3::new(1.0, 0.0, 0.0)).unwrap();
        assert!((g.apply(&q).0 - Vec3::new(-1.0, 0.0, 0.0)).max_abs() < 1e-15);
    }

    #[test]
    fn boost_moves_vertex() {
        let s = CurvatureSpace::new(-1.0).unwrap();
        let g = Isometry::new(&s, Mat3::boost_xz(1.0)).unwrap();
        let p = g.apply(&s.pole());
        assert!((p.0 - Vec3::new(1.0_f64.sinh(), 0.0, 1.0_f64.cosh())).max_abs() < 1e-15);
        assert!((s.norm_sq(&p.0) + 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_isometries() {
        let s = CurvatureSpace::new(1.0).unwrap();
        assert!(Isometry::new(&s, Mat3::diag(1.0, 1.0, -1.0)).is_err());
        assert!(Isometry::new(&s, Mat3::boost_xz(0.5)).is_err());
        let h = CurvatureSpace::new(-1.0).unwrap();
        assert!(Isometry::new(&h, Mat3::rot_x(0.5)).is_err());
        assert!(Isometry::new(&h, Mat3::diag(-1.0, 1.0, -1.0)).is_err());
    }

    #[test]
    fn random_isometries_are_valid_and_deterministic() {
        for k in [1.0, -1.0, 0.0, 3.0, -0.2] {
            let s = CurvatureSpace::new(k).unwrap();
            for seed in 0..200 {
                let g = random_isometry(&s, seed);
                assert!(g.defect() < 1e-12, "k={k} seed={seed}");
                assert!(g.matrix().det() > 0.0);
                assert!(Isometry::new(&s, *g.matrix()).is_ok());
            }
            assert_eq!(random_isometry(&s, 42), random_isometry(&s, 42));
        }
    }

    #[test]
    fn rotations_are_uniform_enough() {
        let s = CurvatureSpace::new(1.0).unwrap();
        let mut sum = Vec3::zero();
        for seed in 0..1000 {
            sum += random_isometry(&s, seed).apply(&s.pole()).0;
        }
        assert!(sum.scale(1.0 / 1000.0).norm() < 0.1);
    }
}
