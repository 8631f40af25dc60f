//! Two bodies on a surface of constant Gaussian curvature.
//!
//! The crate models the sphere, the plane and the hyperbolic plane as quadrics
//! in `R^3` and provides:
//!
//! - [`geometry`]: the sigma-bilinear form, distances, geodesics, and the
//!   isometry group action;
//! - [`barycenter`]: the three inequivalent centre-of-mass rules (lever,
//!   collision, steady rotation) plus the variational minimiser, and the
//!   curvature sweep comparing them;
//! - [`dynamics`]: potentials, forces, the momentum map and energy, and a
//!   projected Runge-Kutta integrator;
//! - [`scenarios`]: collision from rest, steady rotations and hyperbolic
//!   relative equilibria, each verified dynamically.
//!
//! Everything is generic over the float type ([`Scalar`]); the `*64`
//! aliases below fix it to `f64`.
//!
//! ```
//! use curved2b::{barycenter::center_of_mass, ComRule, Space64};
//!
//! let s = Space64::new(1.0)?;
//! let q1 = s.embed(0.3, 0.0)?;
//! let q2 = s.embed(0.9, std::f64::consts::PI)?;
//! let lever = center_of_mass(&s, ComRule::Lever, 1.0, &q1, 2.0, &q2, None)?;
//! let collision = center_of_mass(&s, ComRule::Collision, 1.0, &q1, 2.0, &q2, None)?;
//! assert!((collision.r1 - 0.8).abs() < 1e-12);
//! assert!(s.distance(&lever.center, &collision.center) > 1e-3);
//! # Ok::<(), curved2b::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod barycenter;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod roots;
pub mod scalar;
pub mod scenarios;

pub use barycenter::{Branch, ComResult, ComRule};
pub use dynamics::{MomentumVector, Potential, TwoBodyState};

pub use error::{Error, Result};
pub use geometry::{CurvatureSpace, Isometry, Sign, SurfacePoint, TangentVec};
pub use linalg::{Mat3, Vec3};
pub use scalar::Scalar;

pub type Space64 = CurvatureSpace<f64>;
pub type Space32 = CurvatureSpace<f32>;
pub type Point64 = SurfacePoint<f64>;
pub type Tangent64 = TangentVec<f64>;
pub type Isometry64 = Isometry<f64>;

pub type State64 = TwoBodyState<f64>;
pub type State32 = TwoBodyState<f32>;
pub type Potential64 = Potential<f64>;
pub type ComResult64 = ComResult<f64>;
