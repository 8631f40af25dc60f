//! Dynamical characterisations of the centre of mass: collision from rest and
//! steady rotation (elliptic about the pole, or hyperbolic along a geodesic).

use serde::{Deserialize, Serialize};

use crate::barycenter::{collision_com, rotation_branch, split_distance, Branch, ComRule};
use crate::dynamics::{
    energy, integrate, integrate_until, momentum_map, IntegratorOptions, Potential, Trajectory,
    TwoBodyState,
};
use crate::error::{Error, Result};
use crate::geometry::{CurvatureSpace, Sign, SurfacePoint, TangentVec};
use crate::linalg::{Mat3, Vec3};
use crate::Scalar;

mod fit;

pub use fit::{polyfit, polyval};

/// Default number of trailing samples used to extrapolate the collision.
pub const FIT_WINDOW: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollisionReport<T> {
    pub collision_point: SurfacePoint<T>,
    pub t_collision: T,
    pub predicted_point: SurfacePoint<T>,
    pub mismatch: T,
    #[serde(rename = "max_J_drift")]
    pub max_j_drift: T,
    pub min_r_reached: T,
    pub max_transverse: T,
    pub steps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquilibriumKind {
    Elliptic,
    Hyperbolic,
}

/// Parameters of a relative equilibrium in normal position.
///
/// `alpha_j = k r_j` is the scaled distance of mass `j` from the rotation
/// centre: the pole for elliptic motion, the geodesic `y = 0` for
/// hyperbolic motion. Mass 1 sits at `y < 0`, mass 2 at `y > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumSpec<T> {
    pub alpha1: T,
    pub alpha2: T,
    pub omega: T,
    pub kind: EquilibriumKind,
    pub branch: Option<Branch>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport<T> {
    pub t_end: T,
    pub max_dist_dev: T,
    /// Largest change in the distance from either mass to the moving centre.
    pub max_center_dev: T,
    #[serde(rename = "max_J_drift")]
    pub max_j_drift: T,
    #[serde(rename = "max_E_drift")]
    pub max_e_drift: T,
    pub steps: usize,
}

fn s_c<T: Scalar>(space: &CurvatureSpace<T>, a: T) -> (T, T) {
    match space.sign() {
        Sign::Negative => (a.sinh(), a.cosh()),
        _ => a.sin_cos(),
    }
}

fn rel_drift<T: Scalar>(x: T, x0: T) -> T {
    (x - x0).abs() / (x0.abs() + T::one())
}

fn vec_drift<T: Scalar>(x: &Vec3<T>, x0: &Vec3<T>) -> T {
    (*x - *x0).max_abs() / (x0.max_abs() + T::one())
}

/// Both masses at rest, `r` apart, placed symmetrically about the pole on
/// the `x = 0` meridian (on the `y = 0` axis for the plane).
pub fn setup_collision<T: Scalar>(
    space: &CurvatureSpace<T>,
    mu1: T,
    mu2: T,
    r: T,
    _pot: &Potential<T>,
) -> Result<TwoBodyState<T>> {
    if !(r > T::zero() && Potential::in_domain(space, r)) {
        return Err(Error::Domain(format!(
            "separation {r} outside the potential's domain"
        )));
    }
    let (q1, q2) = match space.sign() {
        Sign::Zero => {
            let h = r * T::half();
            (
                Vec3::new(-h, T::zero(), T::one()),
                Vec3::new(h, T::zero(), T::one()),
            )
        }
        _ => {
            let big_r = T::one() / space.sqrt_abs();
            let (s, c) = s_c(space, space.sqrt_abs() * r * T::half());
            (
                Vec3::new(T::zero(), -s, c).scale(big_r),
                Vec3::new(T::zero(), s, c).scale(big_r),
            )
        }
    };
    TwoBodyState::at_rest(space, mu1, space.point(q1)?, mu2, space.point(q2)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CollisionOptions<T> {
    /// Stop once the separation drops below this.
    pub r_stop: T,
    pub fit_window: usize,
    pub tol: T,
    /// Give up (with `NoCollision`) if no collision happens before this time.
    pub t_max: T,
}

impl<T: Scalar> CollisionOptions<T> {
    pub fn new(r_stop: T) -> Self {
        CollisionOptions {
            r_stop,
            fit_window: FIT_WINDOW,
            tol: T::tol(1e-10, 64.0),
            t_max: T::lit(100.0),
        }
    }
}

/// Integrate a rest state until the masses are `r_stop` apart, then
/// extrapolate where they meet.
pub fn run_collision<T: Scalar>(
    space: &CurvatureSpace<T>,
    pot: &Potential<T>,
    state: &TwoBodyState<T>,
    r_stop: T,
    fit_window: usize,
) -> Result<CollisionReport<T>> {
    let opts = CollisionOptions {
        fit_window,
        ..CollisionOptions::new(r_stop)
    };
    run_collision_with(space, pot, state, &opts)
}

pub fn run_collision_with<T: Scalar>(
    space: &CurvatureSpace<T>,
    pot: &Potential<T>,
    state: &TwoBodyState<T>,
    opts: &CollisionOptions<T>,
) -> Result<CollisionReport<T>> {
    state.validate(space)?;
    if state.v.iter().any(|v| v.max_abs() != T::zero()) {
        return Err(Error::Domain("collision run must start from rest".into()));
    }
    let r0 = state.separation(space);
    if !(opts.r_stop > T::zero() && opts.r_stop < r0) {
        return Err(Error::Domain(format!("r_stop must lie in (0, {r0})")));
    }
    if opts.fit_window < 3 {
        return Err(Error::Domain("fit window needs at least 3 samples".into()));
    }
    let (q1, q2) = (state.point(0), state.point(1));
    let predicted = collision_com(space, state.mu[0], &q1, state.mu[1], &q2)?;
    let u = space.unit_tangent_toward(&q1, &q2)?;
    let normal = {
        let n = q1.coords().cross(&q2.coords());
        n.scale(T::one() / n.norm())
    };

    let mut prev_r = r0;
    let mut receding = false;
    let int_opts = IntegratorOptions {
        record: true,
        ..IntegratorOptions::with_tol(opts.tol)
    };
    let traj = integrate_until(space, pot, state, state.t + opts.t_max, &int_opts, |s| {
        let r = s.separation(space);
        if r > prev_r {
            receding = true;
        }
        prev_r = r;
        receding || r < opts.r_stop
    })?;
    let last = traj.last();
    let min_r = traj
        .samples
        .iter()
        .map(|s| s.state.separation(space))
        .fold(T::infinity(), T::min);
    if receding || !traj.stopped {
        return Err(Error::NoCollision(min_r.to_f64().unwrap_or(f64::NAN)));
    }

    let j0 = traj.samples[0].momentum;
    let mut max_j = T::zero();
    let mut max_transverse = T::zero();
    for s in &traj.samples {
        max_j = max_j.max(vec_drift(&s.momentum, &j0));
        for q in &s.state.q {
            max_transverse = max_transverse.max(normal.dot(q).abs());
        }
    }

    let window = &traj.samples[traj.samples.len().saturating_sub(opts.fit_window)..];
    let t_ref = last.t;
    let t_scale = (t_ref - window[0].t).max(T::min_positive_value());
    let ts: Vec<T> = window.iter().map(|s| (s.t - t_ref) / t_scale).collect();
    let s1: Vec<T> = window
        .iter()
        .map(|s| space.arc_coordinate(&u, &s.state.point(0)))
        .collect();
    let s2: Vec<T> = window
        .iter()
        .map(|s| space.arc_coordinate(&u, &s.state.point(1)))
        .collect();
    let (tau, s_star) = intersect_fits(&ts, &s1, &s2)?;
    let collision_point = space.geodesic_point(&u, s_star);
    Ok(CollisionReport {
        collision_point,
        t_collision: t_ref + tau * t_scale,
        predicted_point: predicted.center,
        mismatch: space.distance(&collision_point, &predicted.center),
        max_j_drift: max_j,
        min_r_reached: min_r,
        max_transverse,
        steps: traj.accepted,
    })
}

/// Earliest forward crossing of quadratic fits to `s1(t)` and `s2(t)`,
/// falling back to linear fits when the quadratics do not meet ahead.
fn intersect_fits<T: Scalar>(ts: &[T], s1: &[T], s2: &[T]) -> Result<(T, T)> {
    for degree in [2, 1] {
        let c1 = polyfit(ts, s1, degree)?;
        let c2 = polyfit(ts, s2, degree)?;
        let d: Vec<T> = c2.iter().zip(&c1).map(|(a, b)| *a - *b).collect();
        if let Some(tau) = fit::first_root_ahead(&d) {
            let s = (polyval(&c1, tau) + polyval(&c2, tau)) * T::half();
            return Ok((tau, s));
        }
    }
    Err(Error::NoCollision(f64::NAN))
}

/// Rotation parameters for masses `r` apart.
///
/// The balance of the centripetal force gives
/// `omega^2 = V'(r) / (mu1 R s(a1) c(a1))` with `R = 1/k`, which equals the
/// same expression for mass 2 exactly when the steady-rotation relation holds.
fn equilibrium_spec<T: Scalar>(
    space: &CurvatureSpace<T>,
    mu1: T,
    mu2: T,
    r: T,
    pot: &Potential<T>,
    kind: EquilibriumKind,
    branch: Option<Branch>,
) -> Result<EquilibriumSpec<T>> {
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
    if space.sign() != Sign::Positive && branch == Some(Branch::Obtuse) {
        return Err(Error::BranchUnavailable(
            "obtuse branch exists only for kappa > 0".into(),
        ));
    }
    let k = space.sqrt_abs();
    let (alpha1, alpha2) = (k * r1, k * r2);
    let (s1, c1) = s_c(space, alpha1);
    let dv = pot.derivative(space, mu1, mu2, r);
    let w2 = dv * k / (mu1 * s1 * c1);
    if !(w2 > T::zero() && w2.is_finite()) {
        return Err(Error::NoBalance(format!("omega^2 = {w2} for V'(r) = {dv}")));
    }
    Ok(EquilibriumSpec {
        alpha1,
        alpha2,
        omega: w2.sqrt(),
        kind,
        branch: actual,
    })
}

/// State at `t = 0` of the rigid motion described by `spec`. The relation
/// between the angles is not checked, so this also builds configurations
/// that are not equilibria.
pub fn equilibrium_state<T: Scalar>(
    space: &CurvatureSpace<T>,
    mu1: T,
    mu2: T,
    spec: &EquilibriumSpec<T>,
) -> Result<TwoBodyState<T>> {
    if space.sign() == Sign::Zero {
        return Err(Error::Domain("steady rotation needs kappa != 0".into()));
    }
    let big_r = T::one() / space.sqrt_abs();
    let (s1, c1) = s_c(space, spec.alpha1);
    let (s2, c2) = s_c(space, spec.alpha2);
    let q1 = space.point(Vec3::new(T::zero(), -s1, c1).scale(big_r))?;
    let q2 = space.point(Vec3::new(T::zero(), s2, c2).scale(big_r))?;
    let gen = generator(spec);
    let v1 = space.tangent(q1, gen.mul_vec(&q1.coords()))?;
    let v2 = space.tangent(q2, gen.mul_vec(&q2.coords()))?;
    TwoBodyState::new(space, mu1, v1, mu2, v2)
}

/// `omega` times the infinitesimal generator of the one-parameter group.
fn generator<T: Scalar>(spec: &EquilibriumSpec<T>) -> Mat3<T> {
    let (z, w) = (T::zero(), spec.omega);
    match spec.kind {
        EquilibriumKind::Elliptic => Mat3([[z, -w, z], [w, z, z], [z, z, z]]),
        EquilibriumKind::Hyperbolic => Mat3([[z, z, w], [z, z, z], [w, z, z]]),
    }
}

/// Group element `exp(t * generator)`.
pub fn rigid_motion<T: Scalar>(spec: &EquilibriumSpec<T>, t: T) -> Mat3<T> {
    match spec.kind {
        EquilibriumKind::Elliptic => Mat3::rot_z(spec.omega * t),
        EquilibriumKind::Hyperbolic => Mat3::boost_xz(spec.omega * t),
    }
}

/// Second time derivative of `q` under the rigid motion.
pub fn ansatz_acceleration<T: Scalar>(spec: &EquilibriumSpec<T>, q: &Vec3<T>) -> Vec3<T> {
    let g = generator(spec);
    g.mul_vec(&g.mul_vec(q))
}

/// Moving rotation centre: the pole, or `R (sinh wt, 0, cosh wt)`.
pub fn comoving_point<T: Scalar>(
    space: &CurvatureSpace<T>,
    spec: &EquilibriumSpec<T>,
    t: T,
) -> SurfacePoint<T> {
    SurfacePoint(rigid_motion(spec, t).mul_vec(&space.pole().coords()))
}

/// Steady rotation about the pole with masses `r` apart.
pub fn make_equilibrium<T: Scalar>(
    space: &CurvatureSpace<T>,
    mu1: T,
    mu2: T,
    r: T,
    pot: &Potential<T>,
    branch: Option<Branch>,
) -> Result<(TwoBodyState<T>, EquilibriumSpec<T>)> {
    if space.sign() == Sign::Zero {
        return Err(Error::Domain("steady rotation needs kappa != 0".into()));
    }
    let spec = equilibrium_spec(space, mu1, mu2, r, pot, EquilibriumKind::Elliptic, branch)?;
    Ok((equilibrium_state(space, mu1, mu2, &spec)?, spec))
}

/// Relative equilibrium under hyperbolic boosts, translating along the
/// geodesic `y = 0`.
pub fn make_hyperbolic_re<T: Scalar>(
    space: &CurvatureSpace<T>,
    mu1: T,
    mu2: T,
    r: T,
    pot: &Potential<T>,
) -> Result<(TwoBodyState<T>, EquilibriumSpec<T>)> {
    if space.sign() != Sign::Negative {
        return Err(Error::WrongSign);
    }
    let spec = equilibrium_spec(space, mu1, mu2, r, pot, EquilibriumKind::Hyperbolic, None)?;
    Ok((equilibrium_state(space, mu1, mu2, &spec)?, spec))
}

/// Worst deviation of the true accelerations from the rigid-motion ansatz.
pub fn equilibrium_residual<T: Scalar>(
    space: &CurvatureSpace<T>,
    pot: &Potential<T>,
    state: &TwoBodyState<T>,
    spec: &EquilibriumSpec<T>,
) -> Result<T> {
    let (a1, a2) = crate::dynamics::acceleration(space, pot, state)?;
    let e1 = (a1 - ansatz_acceleration(spec, &state.q[0])).max_abs();
    let e2 = (a2 - ansatz_acceleration(spec, &state.q[1])).max_abs();
    Ok(e1.max(e2))
}

/// `state` carried rigidly by the one-parameter group of `spec` to time `t`.
pub fn rigidly_moved<T: Scalar>(
    state: &TwoBodyState<T>,
    spec: &EquilibriumSpec<T>,
    t: T,
) -> TwoBodyState<T> {
    let g = rigid_motion(spec, t);
    TwoBodyState {
        mu: state.mu,
        q: state.q.map(|q| g.mul_vec(&q)),
        v: state.v.map(|v| g.mul_vec(&v)),
        t: state.t + t,
    }
}

/// Largest change of any momentum component while `state` is moved rigidly
/// through one period, sampled at `n` equally spaced times.
pub fn rigid_momentum_variation<T: Scalar>(
    space: &CurvatureSpace<T>,
    state: &TwoBodyState<T>,
    spec: &EquilibriumSpec<T>,
    n: usize,
) -> T {
    let period = T::TAU() / spec.omega;
    let j0 = momentum_map(space, state).0;
    (1..=n)
        .map(|i| {
            let t = period * T::from_usize(i).unwrap() / T::from_usize(n).unwrap();
            (momentum_map(space, &rigidly_moved(state, spec, t)).0 - j0).max_abs()
        })
        .fold(T::zero(), T::max)
}

/// Integrate an equilibrium for `n_periods` of `2 pi / omega`.
pub fn run_equilibrium<T: Scalar>(
    space: &CurvatureSpace<T>,
    pot: &Potential<T>,
    state: &TwoBodyState<T>,
    spec: &EquilibriumSpec<T>,
    n_periods: T,
) -> Result<EquilibriumReport<T>> {
    let t_end = n_periods * T::TAU() / spec.omega;
    run_equilibrium_for(
        space,
        pot,
        state,
        spec,
        t_end,
        &IntegratorOptions::default(),
    )
}

pub fn run_equilibrium_for<T: Scalar>(
    space: &CurvatureSpace<T>,
    pot: &Potential<T>,
    state: &TwoBodyState<T>,
    spec: &EquilibriumSpec<T>,
    duration: T,
    opts: &IntegratorOptions<T>,
) -> Result<EquilibriumReport<T>> {
    state.validate(space)?;
    let traj = integrate(space, pot, state, state.t + duration, opts)?;
    Ok(equilibrium_report(space, pot, &traj, spec))
}

/// Drift statistics of a trajectory that started at a relative equilibrium
/// in normal position.
pub fn equilibrium_report<T: Scalar>(
    space: &CurvatureSpace<T>,
    pot: &Potential<T>,
    traj: &Trajectory<T>,
    spec: &EquilibriumSpec<T>,
) -> EquilibriumReport<T> {
    let first = &traj.samples[0];
    let r0 = first.state.separation(space);
    let center0 = comoving_point(space, spec, T::zero());
    let d0 = [0, 1].map(|j| space.distance(&center0, &first.state.point(j)));
    let e0 = energy(space, pot, &first.state);
    let mut rep = EquilibriumReport {
        t_end: traj.last().t,
        max_dist_dev: T::zero(),
        max_center_dev: T::zero(),
        max_j_drift: T::zero(),
        max_e_drift: T::zero(),
        steps: traj.accepted,
    };
    for s in &traj.samples {
        rep.max_dist_dev = rep.max_dist_dev.max((s.state.separation(space) - r0).abs());
        let c = comoving_point(space, spec, s.t - first.t);
        for j in 0..2 {
            let dj = space.distance(&c, &s.state.point(j));
            rep.max_center_dev = rep.max_center_dev.max((dj - d0[j]).abs());
        }
        rep.max_j_drift = rep.max_j_drift.max(vec_drift(&s.momentum, &first.momentum));
        rep.max_e_drift = rep.max_e_drift.max(rel_drift(s.energy, e0));
    }
    rep
}

/// Unit tangent along the initial geodesic of a collision setup, used as the
/// origin of arc-length coordinates.
pub fn collision_axis<T: Scalar>(
    space: &CurvatureSpace<T>,
    state: &TwoBodyState<T>,
) -> Result<TangentVec<T>> {
    space.unit_tangent_toward(&state.point(0), &state.point(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(k: f64) -> CurvatureSpace<f64> {
        CurvatureSpace::new(k).unwrap()
    }

    #[test]
    fn collision_setup_is_symmetric_and_at_rest() {
        let s = sp(1.0);
        let st = setup_collision(&s, 1.0, 2.0, 1.0, &Potential::default()).unwrap();
        assert!((st.separation(&s) - 1.0).abs() < 1e-15);
        assert!(momentum_map(&s, &st).0.max_abs() < 1e-14);
        let h = sp(-1.0);
        let st = setup_collision(&h, 1.0, 2.0, 2.0, &Potential::default()).unwrap();
        assert_eq!(st.q[0].x(), 0.0);
        assert!(st.q[0].y() < 0.0 && st.q[1].y() > 0.0);
        let p = sp(0.0);
        let st = setup_collision(&p, 1.0, 2.0, 3.0, &Potential::default()).unwrap();
        assert_eq!(st.q, [Vec3::new(-1.5, 0.0, 1.0), Vec3::new(1.5, 0.0, 1.0)]);
        assert!(setup_collision(&s, 1.0, 2.0, 4.0, &Potential::default()).is_err());
    }

    #[test]
    fn equal_mass_equilibrium_frequency() {
        let s = sp(1.0);
        let pot = Potential::default();
        let (st, spec) = make_equilibrium(&s, 1.0, 1.0, 1.0, &pot, None).unwrap();
        assert_eq!((spec.alpha1, spec.alpha2), (0.5, 0.5));
        let w2 = 2.0 * pot.derivative(&s, 1.0, 1.0, 1.0) / 1f64.sin();
        assert!((spec.omega * spec.omega - w2).abs() < 1e-13 * w2);
        assert!(equilibrium_residual(&s, &pot, &st, &spec).unwrap() < 1e-10);
    }

    #[test]
    fn residual_vanishes_for_all_kinds() {
        let pot = Potential::default();
        for (k, r) in [
            (1.0, 1.2),
            (1.0, 2.2),
            (-1.0, 1.3),
            (0.25, 0.9),
            (-3.0, 0.4),
        ] {
            let s = sp(k);
            let (st, spec) = make_equilibrium(&s, 1.0, 2.0, r, &pot, None).unwrap();
            assert!(
                equilibrium_residual(&s, &pot, &st, &spec).unwrap() < 1e-10,
                "k={k} r={r}"
            );
            if k < 0.0 {
                let (st, spec) = make_hyperbolic_re(&s, 1.0, 2.0, r, &pot).unwrap();
                assert!(equilibrium_residual(&s, &pot, &st, &spec).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn equilibrium_errors() {
        let pot = Potential::default();
        let s = sp(1.0);
        assert_eq!(
            make_equilibrium(&s, 1.0, 2.0, std::f64::consts::FRAC_PI_2, &pot, None).unwrap_err(),
            Error::RightAngleUndefined
        );
        assert!(matches!(
            make_equilibrium(&s, 1.0, 2.0, 1.2, &pot, Some(Branch::Obtuse)),
            Err(Error::BranchUnavailable(_))
        ));
        assert_eq!(
            make_hyperbolic_re(&s, 1.0, 2.0, 1.0, &pot).unwrap_err(),
            Error::WrongSign
        );
        assert_eq!(
            make_hyperbolic_re(&sp(0.0), 1.0, 2.0, 1.0, &pot).unwrap_err(),
            Error::WrongSign
        );
        assert!(make_equilibrium(&sp(0.0), 1.0, 2.0, 1.0, &pot, None).is_err());
        let repulsive = Potential::custom(|r: f64| 1.0 / r, |r: f64| -1.0 / (r * r));
        assert!(matches!(
            make_equilibrium(&s, 1.0, 2.0, 1.0, &repulsive, None),
            Err(Error::NoBalance(_))
        ));
    }

    #[test]
    fn hyperbolic_comoving_point_is_on_a_geodesic() {
        let s = sp(-1.0);
        let (_, spec) = make_hyperbolic_re(&s, 1.0, 1.0, 1.0, &Potential::default()).unwrap();
        assert_eq!(spec.alpha1, spec.alpha2);
        let a = comoving_point(&s, &spec, 0.0);
        let b = comoving_point(&s, &spec, 1.0);
        assert!((s.distance(&a, &b) - spec.omega).abs() < 1e-12);
    }

    #[test]
    fn rigid_rotation_keeps_momentum_only_at_equilibrium() {
        let s = sp(1.0);
        let (st, spec) = make_equilibrium(&s, 1.0, 2.0, 1.2, &Potential::default(), None).unwrap();
        assert!(rigid_momentum_variation(&s, &st, &spec, 16) < 1e-13);
        let bad = EquilibriumSpec {
            alpha2: spec.alpha2 + 0.1,
            ..spec
        };
        let st = equilibrium_state(&s, 1.0, 2.0, &bad).unwrap();
        assert!(rigid_momentum_variation(&s, &st, &bad, 16) > 1e-3);
    }

    #[test]
    fn reports_use_fixed_field_names() {
        let s = sp(1.0);
        let pot = Potential::default();
        let st = setup_collision(&s, 1.0, 2.0, 1.0, &pot).unwrap();
        let rep = run_collision(&s, &pot, &st, 1e-2, FIT_WINDOW).unwrap();
        let v = serde_json::to_value(rep).unwrap();
        for key in [
            "collision_point",
            "t_collision",
            "mismatch",
            "max_J_drift",
            "min_r_reached",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        let (st, spec) = make_equilibrium(&s, 1.0, 2.0, 1.2, &pot, None).unwrap();
        let rep = run_equilibrium(&s, &pot, &st, &spec, 0.25).unwrap();
        let v = serde_json::to_value(rep).unwrap();
        for key in ["max_dist_dev", "max_J_drift", "max_E_drift"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        let back: EquilibriumReport<f64> = serde_json::from_value(v).unwrap();
        assert_eq!(back, rep);
    }
}
