use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CurvatureSpace, Isometry, SurfacePoint, TangentVec};
use crate::linalg::Vec3;
use crate::Scalar;

/// Masses, positions and velocities of both particles at time `t`.
///
/// Positions and velocities are stored as raw ambient vectors; construct via
/// [`TwoBodyState::new`] to validate them against a space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoBodyState<T> {
    pub mu: [T; 2],
    pub q: [Vec3<T>; 2],
    pub v: [Vec3<T>; 2],
    pub t: T,
}

impl<T: Scalar> TwoBodyState<T> {
    pub fn new(
        space: &CurvatureSpace<T>,
        mu1: T,
        v1: TangentVec<T>,
        mu2: T,
        v2: TangentVec<T>,
    ) -> Result<Self> {
        let s = TwoBodyState {
            mu: [mu1, mu2],
            q: [v1.base().coords(), v2.base().coords()],
            v: [v1.vec(), v2.vec()],
            t: T::zero(),
        };
        s.validate(space)?;
        Ok(s)
    }

    /// Both particles at rest.
    pub fn at_rest(
        space: &CurvatureSpace<T>,
        mu1: T,
        q1: SurfacePoint<T>,
        mu2: T,
        q2: SurfacePoint<T>,
    ) -> Result<Self> {
        let z = Vec3::zero();
        Self::new(
            space,
            mu1,
            space.tangent(q1, z)?,
            mu2,
            space.tangent(q2, z)?,
        )
    }

    /// Checks masses, surface membership, tangency, and that the
    /// configuration is neither a collision nor antipodal.
    pub fn validate(&self, space: &CurvatureSpace<T>) -> Result<()> {
        if !self.mu.iter().all(|&m| m > T::zero() && m.is_finite()) {
            return Err(Error::Domain("masses must be positive".into()));
        }
        for j in 0..2 {
            let p = space.point(self.q[j])?;
            space.tangent(p, self.v[j])?;
        }
        space.unit_tangent_toward(&self.point(0), &self.point(1))?;
        Ok(())
    }

    pub fn point(&self, j: usize) -> SurfacePoint<T> {
        SurfacePoint(self.q[j])
    }

    pub fn velocity(&self, j: usize) -> TangentVec<T> {
        TangentVec {
            base: self.point(j),
            vec: self.v[j],
        }
    }

    pub fn separation(&self, space: &CurvatureSpace<T>) -> T {
        space.distance(&self.point(0), &self.point(1))
    }

    /// `g` applied to positions, `g_*` to velocities.
    pub fn transformed(&self, g: &Isometry<T>) -> Self {
        TwoBodyState {
            mu: self.mu,
            q: self.q.map(|q| g.apply(&SurfacePoint(q)).coords()),
            v: self.v.map(|v| g.apply_vec(&v)),
            t: self.t,
        }
    }

    /// Random valid state: masses in `[0.5, 3)`, points within `spread` of the
    /// pole, velocity components of size `speed`.
    pub fn random<R: Rng + ?Sized>(
        space: &CurvatureSpace<T>,
        rng: &mut R,
        spread: T,
        speed: T,
    ) -> Self {
        loop {
            let mu = [
                T::lit(rng.gen_range(0.5..3.0)),
                T::lit(rng.gen_range(0.5..3.0)),
            ];
            let q1 = space.random_point(rng, spread);
            let q2 = space.random_point(rng, spread);
            let v1 = space.random_tangent(rng, &q1, speed);
            let v2 = space.random_tangent(rng, &q2, speed);
            let s = TwoBodyState {
                mu,
                q: [q1.0, q2.0],
                v: [v1.vec, v2.vec],
                t: T::zero(),
            };
            if s.validate(space).is_ok() && s.separation(space) > T::lit(1e-3) * spread {
                return s;
            }
        }
    }
}
