//! Embedded models of the constant-curvature surface.
//!
//! For `kappa > 0` the surface is the sphere `<q, q>_{+1} = 1/kappa`; for
//! `kappa < 0` it is the upper sheet (`q3 > 0`) of the hyperboloid
//! `<q, q>_{-1} = 1/kappa`, carrying the metric induced by the Minkowski form;
//! for `kappa = 0` it is the plane `q3 = 1` with the Euclidean metric on the
//! first two coordinates. All three are handled as explicit branches so that
//! curvature sweeps pass through zero without taking limits.

mod isometry;

pub use isometry::{
    random_isometry, random_isometry_with, Isometry, MAX_RAPIDITY, MAX_TRANSLATION,
};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Vec3;
use crate::scalar::constraint_tol;
use crate::Scalar;

/// Sign of the curvature, selecting the bilinear form `diag(1, 1, sigma)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

/// A surface of constant Gaussian curvature `kappa`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSpace<T> {
    kappa: T,
    sigma: Sign,
}

/// A point of the surface, in ambient coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SurfacePoint<T>(pub(crate) Vec3<T>);

impl<T: Scalar> SurfacePoint<T> {
    pub fn coords(&self) -> Vec3<T> {
        self.0
    }
}

/// A tangent vector together with its base point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentVec<T> {
    pub(crate) base: SurfacePoint<T>,
    pub(crate) vec: Vec3<T>,
}

impl<T: Scalar> TangentVec<T> {
    pub fn base(&self) -> SurfacePoint<T> {
        self.base
    }

    pub fn vec(&self) -> Vec3<T> {
        self.vec
    }
}

impl<T: Scalar> CurvatureSpace<T> {
    pub fn new(kappa: T) -> Result<Self> {
        if !kappa.is_finite() {
            return Err(Error::Domain(format!(
                "curvature must be finite, got {kappa}"
            )));
        }
        let sigma = if kappa > T::zero() {
            Sign::Positive
        } else if kappa < T::zero() {
            Sign::Negative
        } else {
            Sign::Zero
        };
        Ok(CurvatureSpace { kappa, sigma })
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }

    pub fn sign(&self) -> Sign {
        self.sigma
    }

    pub fn sigma(&self) -> i8 {
        self.sigma.as_i8()
    }

    /// `sqrt(|kappa|)`, the inverse model radius (zero on the plane).
    pub fn sqrt_abs(&self) -> T {
        self.kappa.abs().sqrt()
    }

    /// Model radius `1/sqrt(|kappa|)`; `None` on the plane.
    pub fn radius(&self) -> Option<T> {
        match self.sigma {
            Sign::Zero => None,
            _ => Some(T::one() / self.sqrt_abs()),
        }
    }

    /// Characteristic length used to make tolerances dimensionless.
    pub(crate) fn length_scale(&self) -> T {
        self.radius().unwrap_or_else(T::one)
    }

    /// Diameter `pi/sqrt(kappa)` of the sphere; `None` for `kappa <= 0`.
    pub fn max_distance(&self) -> Option<T> {
        match self.sigma {
            Sign::Positive => Some(T::PI() / self.sqrt_abs()),
            _ => None,
        }
    }

    /// `u1 v1 + u2 v2 + sigma u3 v3`; the Euclidean form on the first two
    /// components on the plane.
    pub fn bilinear(&self, u: &Vec3<T>, v: &Vec3<T>) -> T {
        let planar = u[0] * v[0] + u[1] * v[1];
        match self.sigma {
            Sign::Positive => planar + u[2] * v[2],
            Sign::Negative => planar - u[2] * v[2],
            Sign::Zero => planar,
        }
    }

    pub fn norm_sq(&self, u: &Vec3<T>) -> T {
        self.bilinear(u, u)
    }

    /// Multiplication by `K_sigma = diag(1, 1, sigma)`.
    pub fn k_sigma(&self, u: &Vec3<T>) -> Vec3<T> {
        let s = T::from_i8(self.sigma()).unwrap();
        Vec3::new(u[0], u[1], s * u[2])
    }

    /// Scaled deviation of `coords` from the surface.
    pub fn point_residual(&self, coords: &Vec3<T>) -> T {
        match self.sigma {
            Sign::Zero => (coords[2] - T::one()).abs(),
            _ => (self.kappa * self.norm_sq(coords) - T::one()).abs(),
        }
    }

    /// Validate ambient coordinates as a point of the surface.
    pub fn point(&self, coords: Vec3<T>) -> Result<SurfacePoint<T>> {
        if !coords.is_finite() {
            return Err(Error::ConstraintViolation("non-finite coordinates".into()));
        }
        let res = self.point_residual(&coords);
        if res > constraint_tol() {
            return Err(Error::ConstraintViolation(format!(
                "point {:?} is off the surface (residual {res:e})",
                coords.to_f64()
            )));
        }
        if self.sigma == Sign::Negative && coords[2] <= T::zero() {
            return Err(Error::ConstraintViolation(
                "point on the lower sheet".into(),
            ));
        }
        Ok(SurfacePoint(coords))
    }

    /// Validate `vec` as a tangent vector at `base`.
    pub fn tangent(&self, base: SurfacePoint<T>, vec: Vec3<T>) -> Result<TangentVec<T>> {
        let res = self.tangency_residual(&base.0, &vec);
        if !vec.is_finite() || res > constraint_tol::<T>() * (T::one() + vec.max_abs()) {
            return Err(Error::ConstraintViolation(format!(
                "vector {:?} is not tangent at {:?}",
                vec.to_f64(),
                base.0.to_f64()
            )));
        }
        Ok(TangentVec { base, vec })
    }

    pub(crate) fn tangency_residual(&self, q: &Vec3<T>, v: &Vec3<T>) -> T {
        match self.sigma {
            Sign::Zero => v[2].abs(),
            _ => (self.sqrt_abs() * self.bilinear(q, v)).abs(),
        }
    }

    /// The distinguished point `(0, 0, 1/sqrt|kappa|)`: north pole, hyperboloid
    /// vertex, or the origin of the plane.
    pub fn pole(&self) -> SurfacePoint<T> {
        SurfacePoint(Vec3::new(T::zero(), T::zero(), self.length_scale()))
    }

    /// Polar parametrisation about the pole, with `theta` the polar angle
    /// (sphere) or rapidity (hyperboloid).
    pub fn embed(&self, theta: T, phi: T) -> Result<SurfacePoint<T>> {
        let r = match self.sigma {
            Sign::Zero => return Err(Error::Domain("polar embedding needs kappa != 0".into())),
            _ => self.length_scale(),
        };
        if !(theta.is_finite() && phi.is_finite()) || theta < T::zero() {
            return Err(Error::Domain(format!("theta = {theta} out of range")));
        }
        let (sp, cp) = phi.sin_cos();
        match self.sigma {
            Sign::Positive => {
                if theta > T::PI() {
                    return Err(Error::Domain(format!("theta = {theta} exceeds pi")));
                }
                let (st, ct) = theta.sin_cos();
                Ok(SurfacePoint(Vec3::new(cp * st, sp * st, ct).scale(r)))
            }
            _ => {
                let (st, ct) = (theta.sinh(), theta.cosh());
                Ok(SurfacePoint(Vec3::new(cp * st, sp * st, ct).scale(r)))
            }
        }
    }

    /// Point of the plane branch from its Cartesian coordinates.
    pub fn plane_point(&self, x: T, y: T) -> Result<SurfacePoint<T>> {
        if self.sigma != Sign::Zero {
            return Err(Error::Domain("plane_point needs kappa = 0".into()));
        }
        Ok(SurfacePoint(Vec3::new(x, y, T::one())))
    }

    /// Riemannian distance.
    ///
    /// Evaluated through `atan2` on the sphere and through the chord on the
    /// hyperboloid near coincidence, which agree with the `arccos`/`arccosh`
    /// forms but keep full relative accuracy for nearby points.
    pub fn distance(&self, q1: &SurfacePoint<T>, q2: &SurfacePoint<T>) -> T {
        let (a, b) = (&q1.0, &q2.0);
        match self.sigma {
            Sign::Zero => {
                let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
                dx.hypot(dy)
            }
            Sign::Positive => {
                let k = self.sqrt_abs();
                a.cross(b).norm().atan2(a.dot(b)) / k
            }
            Sign::Negative => {
                let k = self.sqrt_abs();
                let c = self.kappa * self.bilinear(a, b);
                if c >= T::two() {
                    c.acosh() / k
                } else {
                    let d = *b - *a;
                    let dd = self.norm_sq(&d).max(T::zero());
                    T::two() * (k * dd.sqrt() * T::half()).asinh() / k
                }
            }
        }
    }

    /// Unit tangent at `q1` pointing along the shortest geodesic to `q2`.
    pub fn unit_tangent_toward(
        &self,
        q1: &SurfacePoint<T>,
        q2: &SurfacePoint<T>,
    ) -> Result<TangentVec<T>> {
        let r = self.distance(q1, q2);
        let scale = self.length_scale();
        if !(r > T::tol(1e-12, 64.0) * scale) {
            return Err(Error::DegenerateConfiguration("coincident points".into()));
        }
        if let Some(diam) = self.max_distance() {
            if r > diam - antipodal_tol(diam) {
                return Err(Error::DegenerateConfiguration("antipodal points".into()));
            }
        }
        let d = q2.0 - q1.0;
        let u = match self.sigma {
            Sign::Zero => Vec3::new(d[0], d[1], T::zero()),
            // q2 - kappa<q1,q2> q1, rewritten to avoid cancellation for nearby points
            _ => d + q1.0.scale(self.kappa * self.norm_sq(&d) * T::half()),
        };
        let n = self.norm_sq(&u).sqrt();
        if !(n > T::zero()) {
            return Err(Error::DegenerateConfiguration(
                "no tangent direction".into(),
            ));
        }
        let mut u = u.scale(T::one() / n);
        if self.sigma != Sign::Zero {
            // remove rounding-level normal component
            u -= q1.0.scale(self.kappa * self.bilinear(&q1.0, &u));
        }
        Ok(TangentVec { base: *q1, vec: u })
    }

    /// Point at arc length `d` along the geodesic leaving `u.base()` with unit
    /// velocity `u`. Negative `d` travels backwards.
    pub fn geodesic_point(&self, u: &TangentVec<T>, d: T) -> SurfacePoint<T> {
        let q = u.base.0;
        let k = self.sqrt_abs();
        let p = match self.sigma {
            Sign::Zero => q + u.vec.scale(d),
            Sign::Positive => {
                let (s, c) = (k * d).sin_cos();
                q.scale(c) + u.vec.scale(s / k)
            }
            Sign::Negative => q.scale((k * d).cosh()) + u.vec.scale((k * d).sinh() / k),
        };
        SurfacePoint(p)
    }

    /// Signed arc-length coordinate of `q` along the geodesic through
    /// `u.base()` in direction `u`. Exact for points on that geodesic.
    pub fn arc_coordinate(&self, u: &TangentVec<T>, q: &SurfacePoint<T>) -> T {
        let k = self.sqrt_abs();
        let along = self.bilinear(&q.0, &u.vec);
        match self.sigma {
            Sign::Zero => along - self.bilinear(&u.base.0, &u.vec),
            Sign::Positive => (k * along).atan2(self.kappa * self.bilinear(&q.0, &u.base.0)) / k,
            Sign::Negative => (k * along).asinh() / k,
        }
    }

    /// Pull ambient coordinates back onto the surface.
    pub fn project_point(&self, q: Vec3<T>) -> Vec3<T> {
        match self.sigma {
            Sign::Zero => Vec3::new(q[0], q[1], T::one()),
            Sign::Positive => q.scale(T::one() / (self.kappa * self.norm_sq(&q)).sqrt()),
            Sign::Negative => {
                let mut p = q.scale(T::one() / (self.kappa * self.norm_sq(&q)).abs().sqrt());
                if p[2] < T::zero() {
                    p = -p;
                }
                p
            }
        }
    }

    /// Remove the sigma-normal component of `v` at the surface point `q`.
    pub fn project_tangent(&self, q: &Vec3<T>, v: Vec3<T>) -> Vec3<T> {
        match self.sigma {
            Sign::Zero => Vec3::new(v[0], v[1], T::zero()),
            _ => v - q.scale(self.kappa * self.bilinear(q, &v)),
        }
    }

    /// Point drawn around the pole: uniform direction, distance uniform in
    /// `[0, spread)` (capped below the antipode on the sphere).
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R, spread: T) -> SurfacePoint<T> {
        let phi = T::lit(rng.gen_range(0.0..std::f64::consts::TAU));
        let mut d = spread * T::lit(rng.gen::<f64>());
        if let Some(diam) = self.max_distance() {
            d = d.min(diam * T::lit(0.999));
        }
        let dir = TangentVec {
            base: self.pole(),
            vec: Vec3::new(phi.cos(), phi.sin(), T::zero()),
        };
        self.geodesic_point(&dir, d)
    }

    /// Tangent vector at `q` with components drawn uniformly from `[-scale, scale)`.
    pub fn random_tangent<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        q: &SurfacePoint<T>,
        scale: T,
    ) -> TangentVec<T> {
        let raw = Vec3::from_f64([
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ])
        .scale(scale);
        TangentVec {
            base: *q,
            vec: self.project_tangent(&q.0, raw),
        }
    }
}

/// Band below the antipodal distance treated as degenerate.
pub(crate) fn antipodal_tol<T: Scalar>(diameter: T) -> T {
    T::tol(1e-8, 64.0) * diameter
}
