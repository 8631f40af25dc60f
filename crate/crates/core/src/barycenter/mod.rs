//! Centre of mass of two particles on a constant-curvature surface.
//!
//! Four constructions are provided. All of them place the centre on the
//! shortest geodesic joining the masses and return the midpoint for equal
//! masses, but for distinct masses and `kappa != 0` they disagree:
//!
//! | rule | relation between `r1`, `r2` |
//! |------|------------------------------|
//! | [`ComRule::Lever`] | `mu1 s(k r1) = mu2 s(k r2)` |
//! | [`ComRule::Collision`] | `mu1 r1 = mu2 r2` |
//! | [`ComRule::Rotation`] | `mu1 s(2k r1) = mu2 s(2k r2)` |
//! | [`ComRule::Variational`] | `mu1 r1 = mu2 r2` |
//!
//! where `k = sqrt|kappa|` and `s` is `sin` for `kappa > 0`, `sinh` for
//! `kappa < 0`. At `kappa = 0` every rule reduces to `mu1 r1 = mu2 r2`.

mod split;
mod sweep;

pub use split::{
    is_right_angle, partner_distances, rotation_branch, rule_residual, split_distance,
    RIGHT_ANGLE_TOL,
};
pub use sweep::{fmt_sci, sweep_figure2, sweep_rows, write_sweep_csv, SweepRow, SWEEP_CSV_HEADER};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CurvatureSpace, Sign, SurfacePoint};
use crate::roots::find_root;
use crate::Scalar;

use split::check_masses;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComRule {
    /// Ray through `mu1 q1 + mu2 q2` meets the surface (relativistic lever rule).
    Lever,
    /// Collision point of two particles released from rest.
    Collision,
    /// Centre of a steady rotation at constant separation.
    Rotation,
    /// Minimiser of `mu1 d(q1, q)^2 + mu2 d(q2, q)^2`.
    Variational,
}

impl ComRule {
    pub const ALL: [ComRule; 4] = [
        ComRule::Lever,
        ComRule::Collision,
        ComRule::Rotation,
        ComRule::Variational,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ComRule::Lever => "lever",
            ComRule::Collision => "collision",
            ComRule::Rotation => "rotation",
            ComRule::Variational => "variational",
        }
    }
}

impl std::str::FromStr for ComRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lever" => Ok(ComRule::Lever),
            "collision" => Ok(ComRule::Collision),
            "rotation" => Ok(ComRule::Rotation),
            "variational" => Ok(ComRule::Variational),
            _ => Err(Error::Domain(format!("unknown rule {s:?}"))),
        }
    }
}

/// Steady-rotation branch on the sphere: total arc between the masses below
/// (acute) or above (obtuse) a quarter great circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Acute,
    Obtuse,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Acute => "acute",
            Branch::Obtuse => "obtuse",
        }
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "acute" => Ok(Branch::Acute),
            "obtuse" => Ok(Branch::Obtuse),
            _ => Err(Error::Domain(format!("unknown branch {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComResult<T> {
    pub center: SurfacePoint<T>,
    pub r1: T,
    pub r2: T,
    pub rule: ComRule,
    pub branch: Option<Branch>,
}

/// Lever rule: the intersection of the ray `s (mu1 q1 + mu2 q2)`
/// with the surface. On the plane this is the Euclidean barycentre.
pub fn lever_com<T: Scalar>(
    space: &CurvatureSpace<T>,
    mu1: T,
    q1: &SurfacePoint<T>,
    mu2: T,
    q2: &SurfacePoint<T>,
) -> Result<ComResult<T>> {
    check_masses(mu1, mu2)?;
    // rejects coincident and antipodal pairs
    space.unit_tangent_toward(q1, q2)?;
    let m = q1.coords().scale(mu1) + q2.coords().scale(mu2);
    let s = match space.sign() {
        Sign::Zero => T::one() / (mu1 + mu2),
        _ => T::one() / (space.kappa() * space.norm_sq(&m)).sqrt(),
    };
    let center = SurfacePoint(m.scale(s));
    let r = space.distance(q1, q2);
    let (r1, r2) = split_distance(space, ComRule::Lever, mu1, mu2, r)?;
    Ok(ComResult {
        center,
        r1,
        r2,
        rule: ComRule::Lever,
        branch: None,
    })
}

/// Collision point of particles released from rest: `mu1 r1 = mu2 r2` for
/// every curvature.
pub fn collision_com<T: Scalar>(
    space: &CurvatureSpace<T>,
    mu1: T,
    q1: &SurfacePoint<T>,
    mu2: T,
    q2: &SurfacePoint<T>,
) -> Result<ComResult<T>> {
    check_masses(mu1, mu2)?;
    let u = space.unit_tangent_toward(q1, q2)?;
    let r = space.distance(q1, q2);
    let (r1, r2) = split_distance(space, ComRule::Collision, mu1, mu2, r)?;
    Ok(ComResult {
        center: space.geodesic_point(&u, r1),
        r1,
        r2,
        rule: ComRule::Collision,
        branch: None,
    })
}

/// Centre of steady rotation.
///
/// For fixed positions the split is unique, so the branch on the sphere is
/// determined by the separation. `branch`, when given, is checked against it.
pub fn rotation_com<T: Scalar>(
    space: &CurvatureSpace<T>,
    mu1: T,
    q1: &SurfacePoint<T>,
    mu2: T,
    q2: &SurfacePoint<T>,
    branch: Option<Branch>,
) -> Result<ComResult<T>> {
    check_masses(mu1, mu2)?;
    if space.sign() != Sign::Positive && branch == Some(Branch::Obtuse) {
        return Err(Error::BranchUnavailable(
            "obtuse branch exists only for kappa > 0".into(),
        ));
    }
    let u = space.unit_tangent_toward(q1, q2)?;
    let r = space.distance(q1, q2);
    let (r1, r2) = split_distance(space, ComRule::Rotation, mu1, mu2, r)?;
    let actual = rotation_branch(space, r);
    if let (Some(want), Some(have)) = (branch, actual) {
        if want != have {
            return Err(Error::BranchUnavailable(format!(
                "separation {r} admits only the {} branch",
                have.name()
            )));
        }
    }
    Ok(ComResult {
        center: space.geodesic_point(&u, r1),
        r1,
        r2,
        rule: ComRule::Rotation,
        branch: actual,
    })
}

/// Minimiser of `F(q) = mu1 d(q1, q)^2 + mu2 d(q2, q)^2`. Distances along the
/// joining geodesic are additive, so the minimiser is the collision point.
pub fn variational_com<T: Scalar>(
    space: &CurvatureSpace<T>,
    mu1: T,
    q1: &SurfacePoint<T>,
    mu2: T,
    q2: &SurfacePoint<T>,
) -> Result<ComResult<T>> {
    let c = collision_com(space, mu1, q1, mu2, q2)?;
    Ok(ComResult {
        rule: ComRule::Variational,
        ..c
    })
}

/// `F(q) = mu1 d(q1, q)^2 + mu2 d(q2, q)^2`.
pub fn variational_objective<T: Scalar>(
    space: &CurvatureSpace<T>,
    mu1: T,
    q1: &SurfacePoint<T>,
    mu2: T,
    q2: &SurfacePoint<T>,
    q: &SurfacePoint<T>,
) -> T {
    let (d1, d2) = (space.distance(q1, q), space.distance(q2, q));
    mu1 * d1 * d1 + mu2 * d2 * d2
}

/// Minimises `F` numerically along the joining geodesic, evaluating it only
/// through [`CurvatureSpace::distance`]: golden-section search down to a
/// narrow bracket, then a root of the central-difference slope.
pub fn variational_com_numeric<T: Scalar>(
    space: &CurvatureSpace<T>,
    mu1: T,
    q1: &SurfacePoint<T>,
    mu2: T,
    q2: &SurfacePoint<T>,
) -> Result<ComResult<T>> {
    check_masses(mu1, mu2)?;
    let u = space.unit_tangent_toward(q1, q2)?;
    let r = space.distance(q1, q2);
    let f = |t: T| variational_objective(space, mu1, q1, mu2, q2, &space.geodesic_point(&u, t));

    let inv_phi = T::lit((5f64.sqrt() - 1.0) / 2.0);
    let (mut a, mut b) = (T::zero(), r);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > T::lit(1e-3) * r {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let h = T::lit(1e-4) * r;
    let slope = |t: T| (f(t + h) - f(t - h)) / (T::two() * h);
    let t = find_root(slope, a, b).unwrap_or((a + b) * T::half());
    let center = space.geodesic_point(&u, t);
    Ok(ComResult {
        center,
        r1: space.distance(q1, &center),
        r2: space.distance(q2, &center),
        rule: ComRule::Variational,
        branch: None,
    })
}

/// Dispatch on `rule`. `branch` only affects [`ComRule::Rotation`].
pub fn center_of_mass<T: Scalar>(
    space: &CurvatureSpace<T>,
    rule: ComRule,
    mu1: T,
    q1: &SurfacePoint<T>,
    mu2: T,
    q2: &SurfacePoint<T>,
    branch: Option<Branch>,
) -> Result<ComResult<T>> {
    match rule {
        ComRule::Lever => lever_com(space, mu1, q1, mu2, q2),
        ComRule::Collision => collision_com(space, mu1, q1, mu2, q2),
        ComRule::Rotation => rotation_com(space, mu1, q1, mu2, q2, branch),
        ComRule::Variational => variational_com(space, mu1, q1, mu2, q2),
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;

    fn space(k: f64) -> CurvatureSpace<f64> {
        CurvatureSpace::new(k).unwrap()
    }

    /// Masses on a meridian through the pole at distances a and b on either side.
    fn pair(s: &CurvatureSpace<f64>, a: f64, b: f64) -> (SurfacePoint<f64>, SurfacePoint<f64>) {
        match s.sign() {
            Sign::Zero => (
                s.plane_point(-a, 0.0).unwrap(),
                s.plane_point(b, 0.0).unwrap(),
            ),
            _ => {
                let k = s.sqrt_abs();
                (
                    s.embed(a * k, -FRAC_PI_2).unwrap(),
                    s.embed(b * k, FRAC_PI_2).unwrap(),
                )
            }
        }
    }

    #[test]
    fn equal_masses_give_midpoint() {
        for k in [1.0, -1.0, 0.0, 2.0] {
            let s = space(k);
            let (q1, q2) = pair(&s, 0.2, 0.6);
            for rule in ComRule::ALL {
                let c = center_of_mass(&s, rule, 3.0, &q1, 3.0, &q2, None).unwrap();
                assert_eq!(c.r1, c.r2, "{rule:?} k={k}");
                assert!((s.distance(&c.center, &q1) - 0.4).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lever_ray_satisfies_sine_relation() {
        // pole is the lever centre when mu1 sin(r1) = mu2 sin(r2)
        let s = space(1.0);
        let r1: f64 = 1.0;
        let r2 = (r1.sin() / 2.0).asin();
        let (q1, q2) = pair(&s, r1, r2);
        let c = lever_com(&s, 1.0, &q1, 2.0, &q2).unwrap();
        assert!((c.center.0 - s.pole().0).max_abs() < 1e-13);
        assert!((c.r1 - r1).abs() < 1e-12 && (c.r2 - r2).abs() < 1e-12);
        assert!((r2 - 0.4344).abs() < 5e-4);

        let h = space(-1.0);
        let r2 = (1.0_f64.sinh() / 2.0).asinh();
        let (q1, q2) = pair(&h, 1.0, r2);
        let c = lever_com(&h, 1.0, &q1, 2.0, &q2).unwrap();
        assert!((c.center.0 - h.pole().0).max_abs() < 1e-13);
        assert!((r2 - 0.5582).abs() < 1e-4);
    }

    #[test]
    fn lever_on_plane_is_euclidean_barycentre() {
        let s = space(0.0);
        let q1 = s.plane_point(1.0, 2.0).unwrap();
        let q2 = s.plane_point(4.0, -1.0).unwrap();
        let c = lever_com(&s, 1.0, &q1, 2.0, &q2).unwrap();
        assert!((c.center.0 - crate::Vec3::new(3.0, 0.0, 1.0)).max_abs() < 1e-15);
    }

    #[test]
    fn collision_examples() {
        let s = space(1.0);
        let (q1, q2) = pair(&s, 0.75, 0.75);
        let c = collision_com(&s, 1.0, &q1, 2.0, &q2).unwrap();
        assert!((c.r1 - 1.0).abs() < 1e-15 && (c.r2 - 0.5).abs() < 1e-15);
        assert!((s.distance(&c.center, &q1) - 1.0).abs() < 1e-13);
        let h = space(-1.0);
        let (q1, q2) = pair(&h, 1.0, 1.0);
        let c = collision_com(&h, 3.0, &q1, 1.0, &q2).unwrap();
        assert!((c.r1 - 0.5).abs() < 1e-15 && (c.r2 - 1.5).abs() < 1e-15);
    }

    #[test]
    fn rotation_right_angle() {
        let s = space(1.0);
        let (q1, q2) = pair(&s, FRAC_PI_2 / 2.0, FRAC_PI_2 / 2.0);
        assert_eq!(
            rotation_com(&s, 1.0, &q1, 2.0, &q2, None),
            Err(Error::RightAngleUndefined)
        );
        let c = rotation_com(&s, 1.0, &q1, 1.0, &q2, None).unwrap();
        assert_eq!(c.r1, c.r2);
        assert!((c.r1 - FRAC_PI_2 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn rotation_branches() {
        let s = space(1.0);
        let (q1, q2) = pair(&s, 0.6, 0.6);
        let c = rotation_com(&s, 1.0, &q1, 2.0, &q2, Some(Branch::Acute)).unwrap();
        assert_eq!(c.branch, Some(Branch::Acute));
        assert!(matches!(
            rotation_com(&s, 1.0, &q1, 2.0, &q2, Some(Branch::Obtuse)),
            Err(Error::BranchUnavailable(_))
        ));
        let (q1, q2) = pair(&s, 1.1, 1.1);
        let c = rotation_com(&s, 1.0, &q1, 2.0, &q2, Some(Branch::Obtuse)).unwrap();
        assert_eq!(c.branch, Some(Branch::Obtuse));
        assert!((c.r1 + c.r2 - 2.2).abs() < 1e-12);
        assert!(rule_residual(&s, ComRule::Rotation, 1.0, 2.0, c.r1, c.r2).abs() < 1e-12);

        let h = space(-1.0);
        let (q1, q2) = pair(&h, 1.0, 1.0);
        assert!(matches!(
            rotation_com(&h, 1.0, &q1, 2.0, &q2, Some(Branch::Obtuse)),
            Err(Error::BranchUnavailable(_))
        ));
    }

    #[test]
    fn rotation_on_plane_equals_collision() {
        let s = space(0.0);
        let q1 = s.plane_point(0.3, -1.0).unwrap();
        let q2 = s.plane_point(2.0, 0.5).unwrap();
        let a = rotation_com(&s, 1.0, &q1, 2.5, &q2, None).unwrap();
        let b = collision_com(&s, 1.0, &q1, 2.5, &q2).unwrap();
        assert_eq!(a.center, b.center);
        assert_eq!((a.r1, a.r2), (b.r1, b.r2));
    }

    #[test]
    fn variational_numeric_matches_closed_form() {
        let h = space(-1.0);
        let (q1, q2) = pair(&h, 0.75, 0.75);
        let n = variational_com_numeric(&h, 1.0, &q1, 2.0, &q2).unwrap();
        assert!((n.r1 - 1.0).abs() < 1e-8);
        let c = collision_com(&h, 1.0, &q1, 2.0, &q2).unwrap();
        assert!(h.distance(&n.center, &c.center) < 1e-8);
    }

    #[test]
    fn variational_minimum_is_on_the_geodesic() {
        // moving the minimiser off the geodesic increases F
        let s = space(1.0);
        let (q1, q2) = pair(&s, 0.9, 0.4);
        let c = variational_com(&s, 1.0, &q1, 2.0, &q2).unwrap();
        let f0 = variational_objective(&s, 1.0, &q1, 2.0, &q2, &c.center);
        let normal = crate::Vec3::new(1.0, 0.0, 0.0);
        let side = s.tangent(c.center, normal).unwrap();
        for d in [-1e-3, 1e-3, 0.1] {
            let p = s.geodesic_point(&side, d);
            assert!(variational_objective(&s, 1.0, &q1, 2.0, &q2, &p) > f0);
        }
    }

    #[test]
    fn degenerate_inputs() {
        let s = space(1.0);
        let q = s.embed(0.3, 0.1).unwrap();
        for rule in ComRule::ALL {
            assert!(matches!(
                center_of_mass(&s, rule, 1.0, &q, 2.0, &q, None),
                Err(Error::DegenerateConfiguration(_))
            ));
        }
        let south = s.point(crate::Vec3::new(0.0, 0.0, -1.0)).unwrap();
        assert!(lever_com(&s, 1.0, &s.pole(), 2.0, &south).is_err());
        assert!(lever_com(&s, -1.0, &s.pole(), 2.0, &q).is_err());
    }
}
