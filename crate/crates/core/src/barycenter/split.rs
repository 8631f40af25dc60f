//! Splitting a distance `r = r1 + r2` according to each centre-of-mass rule,
//! and the inverse problem of finding `r2` from `r1`.

use crate::error::{Error, Result};
use crate::geometry::{CurvatureSpace, Sign};
use crate::roots::{find_root, roots_on_pieces};
use crate::Scalar;

use super::{Branch, ComRule};

/// Width of the window around `pi/(2 sqrt(kappa))` treated as a right angle,
/// in units of the model radius.
pub const RIGHT_ANGLE_TOL: f64 = 1e-12;

pub(crate) fn check_masses<T: Scalar>(mu1: T, mu2: T) -> Result<()> {
    if !(mu1 > T::zero() && mu2 > T::zero() && mu1.is_finite() && mu2.is_finite()) {
        return Err(Error::Domain(format!(
            "masses must be positive, got {mu1} and {mu2}"
        )));
    }
    Ok(())
}

/// `sin` on the sphere, `sinh` on the hyperboloid, identity on the plane:
/// the function `s` in `mu1 s(a r1) = mu2 s(a r2)`.
fn curved_sine<T: Scalar>(sign: Sign, x: T) -> T {
    match sign {
        Sign::Positive => x.sin(),
        Sign::Negative => x.sinh(),
        Sign::Zero => x,
    }
}

/// Residual `mu1 s(c k r1) - mu2 s(c k r2)` of the relation defining `rule`,
/// with `c = 1` for the lever rule and `c = 2` for steady rotation.
pub fn rule_residual<T: Scalar>(
    space: &CurvatureSpace<T>,
    rule: ComRule,
    mu1: T,
    mu2: T,
    r1: T,
    r2: T,
) -> T {
    let k = space.sqrt_abs();
    let sign = space.sign();
    match (rule, sign) {
        (ComRule::Collision | ComRule::Variational, _) | (_, Sign::Zero) => mu1 * r1 - mu2 * r2,
        (ComRule::Lever, _) => mu1 * curved_sine(sign, k * r1) - mu2 * curved_sine(sign, k * r2),
        (ComRule::Rotation, _) => {
            let a = T::two() * k;
            mu1 * curved_sine(sign, a * r1) - mu2 * curved_sine(sign, a * r2)
        }
    }
}

/// True when `r` is within the right-angle window on the sphere.
pub fn is_right_angle<T: Scalar>(space: &CurvatureSpace<T>, r: T) -> bool {
    match space.max_distance() {
        Some(diam) => {
            (r - diam * T::half()).abs() < T::tol(RIGHT_ANGLE_TOL, 16.0) * space.length_scale()
        }
        None => false,
    }
}

/// Branch of a steady rotation whose masses are `r` apart: acute below a
/// quarter great circle, obtuse above; `None` off the sphere.
pub fn rotation_branch<T: Scalar>(space: &CurvatureSpace<T>, r: T) -> Option<Branch> {
    let diam = space.max_distance()?;
    if is_right_angle(space, r) {
        None
    } else if r < diam * T::half() {
        Some(Branch::Acute)
    } else {
        Some(Branch::Obtuse)
    }
}

/// The unique `(r1, r2)` with `r1 + r2 = r` satisfying the relation of `rule`.
///
/// Equal masses always split at the midpoint, including the right-angled
/// configuration where steady rotation is otherwise undefined.
pub fn split_distance<T: Scalar>(
    space: &CurvatureSpace<T>,
    rule: ComRule,
    mu1: T,
    mu2: T,
    r: T,
) -> Result<(T, T)> {
    check_masses(mu1, mu2)?;
    if !(r > T::zero() && r.is_finite()) {
        return Err(Error::Domain(format!("distance must be positive, got {r}")));
    }
    if let Some(diam) = space.max_distance() {
        if r >= diam {
            return Err(Error::Domain(format!(
                "distance {r} reaches the antipode at {diam}"
            )));
        }
    }
    if mu1 == mu2 {
        let h = r * T::half();
        return Ok((h, r - h));
    }
    let linear =
        matches!(rule, ComRule::Collision | ComRule::Variational) || space.sign() == Sign::Zero;
    if linear {
        let r1 = r * mu2 / (mu1 + mu2);
        return Ok((r1, r - r1));
    }
    if rule == ComRule::Rotation && is_right_angle(space, r) {
        return Err(Error::RightAngleUndefined);
    }
    // one sign change on [0, r] for both curved relations
    let r1 = find_root(
        |x| rule_residual(space, rule, mu1, mu2, x, r - x),
        T::zero(),
        r,
    )?;
    Ok((r1, r - r1))
}

/// Every `r2` in `(0, D)` solving the relation of `rule` for the given `r1`,
/// where `D` is the sphere diameter (unbounded otherwise). Roots are found on
/// the pieces where the relation is monotone in `r2`.
pub fn partner_distances<T: Scalar>(
    space: &CurvatureSpace<T>,
    rule: ComRule,
    mu1: T,
    mu2: T,
    r1: T,
) -> Result<Vec<T>> {
    check_masses(mu1, mu2)?;
    if !(r1 > T::zero() && r1.is_finite()) {
        return Err(Error::Domain(format!("r1 must be positive, got {r1}")));
    }
    let linear =
        matches!(rule, ComRule::Collision | ComRule::Variational) || space.sign() == Sign::Zero;
    if linear {
        return Ok(vec![mu1 * r1 / mu2]);
    }
    let f = |r2: T| -rule_residual(space, rule, mu1, mu2, r1, r2);
    let k = space.sqrt_abs();
    let breaks: Vec<T> = match space.sign() {
        Sign::Positive => {
            let diam = T::PI() / k;
            let fractions: &[f64] = if rule == ComRule::Lever {
                &[0.0, 0.5, 1.0]
            } else {
                &[0.0, 0.25, 0.75, 1.0]
            };
            fractions.iter().map(|&c| diam * T::lit(c)).collect()
        }
        _ => {
            // monotone increasing; grow the bracket until it holds the root
            let mut hi = r1.max(T::one() / k);
            let mut guard = 0;
            while f(hi) < T::zero() && guard < 200 {
                hi = hi * T::two();
                guard += 1;
            }
            vec![T::zero(), hi]
        }
    };
    let end = *breaks.last().unwrap();
    let eps = T::tol(1e-12, 64.0) * end;
    let roots = roots_on_pieces(f, &breaks)?;
    Ok(roots
        .into_iter()
        .filter(|&x| x > eps && (space.sign() != Sign::Positive || x < end - eps))
        .collect())
}
