//! Classical fourth-order Runge-Kutta on the ambient first-order system,
//! followed by projection onto the surface and its tangent bundle.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::barycenter::fmt_sci;
use crate::error::{Error, Result};
use crate::geometry::{CurvatureSpace, Sign};
use crate::linalg::Vec3;
use crate::Scalar;

use super::{energy, momentum_map, raw_acceleration, Potential, TwoBodyState};

pub const TRAJECTORY_CSV_HEADER: [&str; 17] = [
    "t", "x1", "y1", "z1", "x2", "y2", "z2", "vx1", "vy1", "vz1", "vx2", "vy2", "vz2", "J1", "J2",
    "J3", "E",
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorOptions<T> {
    /// Local error tolerance for step-halving control.
    pub tol: T,
    /// Fixed step size; disables error control when set.
    pub fixed_dt: Option<T>,
    /// First trial step; defaults to `t_end / 100`.
    pub dt_init: Option<T>,
    pub dt_max: Option<T>,
    /// Keep every accepted step (otherwise only the endpoints).
    pub record: bool,
}

impl<T: Scalar> Default for IntegratorOptions<T> {
    fn default() -> Self {
        IntegratorOptions {
            tol: T::tol(1e-10, 64.0),
            fixed_dt: None,
            dt_init: None,
            dt_max: None,
            record: true,
        }
    }
}

impl<T: Scalar> IntegratorOptions<T> {
    pub fn with_tol(tol: T) -> Self {
        IntegratorOptions {
            tol,
            ..Default::default()
        }
    }

    pub fn fixed(dt: T) -> Self {
        IntegratorOptions {
            fixed_dt: Some(dt),
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample<T> {
    pub t: T,
    pub state: TwoBodyState<T>,
    pub momentum: Vec3<T>,
    pub energy: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<T> {
    pub samples: Vec<Sample<T>>,
    /// True when the stop predicate ended the run before `t_end`.
    pub stopped: bool,
    pub accepted: usize,
    pub rejected: usize,
}

impl<T: Scalar> Trajectory<T> {
    pub fn last(&self) -> &Sample<T> {
        self.samples
            .last()
            .expect("trajectory holds the initial sample")
    }

    pub fn final_state(&self) -> TwoBodyState<T> {
        self.last().state
    }
}

type Phase<T> = ([Vec3<T>; 2], [Vec3<T>; 2]);

fn rhs<T: Scalar>(
    space: &CurvatureSpace<T>,
    pot: &Potential<T>,
    mu: [T; 2],
    y: &Phase<T>,
) -> Result<Phase<T>> {
    Ok((y.1, raw_acceleration(space, pot, mu, &y.0, &y.1)?))
}

fn axpy<T: Scalar>(y: &Phase<T>, h: T, k: &Phase<T>) -> Phase<T> {
    (
        [y.0[0] + k.0[0].scale(h), y.0[1] + k.0[1].scale(h)],
        [y.1[0] + k.1[0].scale(h), y.1[1] + k.1[1].scale(h)],
    )
}

fn rk4<T: Scalar>(
    space: &CurvatureSpace<T>,
    pot: &Potential<T>,
    mu: [T; 2],
    y: &Phase<T>,
    dt: T,
) -> Result<Phase<T>> {
    let half = dt * T::half();
    let k1 = rhs(space, pot, mu, y)?;
    let k2 = rhs(space, pot, mu, &axpy(y, half, &k1))?;
    let k3 = rhs(space, pot, mu, &axpy(y, half, &k2))?;
    let k4 = rhs(space, pot, mu, &axpy(y, dt, &k3))?;
    let six = T::lit(6.0);
    let mut out = *y;
    for j in 0..2 {
        out.0[j] +=
            (k1.0[j] + k2.0[j].scale(T::two()) + k3.0[j].scale(T::two()) + k4.0[j]).scale(dt / six);
        out.1[j] +=
            (k1.1[j] + k2.1[j].scale(T::two()) + k3.1[j].scale(T::two()) + k4.1[j]).scale(dt / six);
    }
    Ok(out)
}

fn project<T: Scalar>(space: &CurvatureSpace<T>, y: &Phase<T>) -> Phase<T> {
    let mut out = *y;
    for j in 0..2 {
        out.0[j] = space.project_point(y.0[j]);
        out.1[j] = space.project_tangent(&out.0[j], y.1[j]);
    }
    out
}

/// Difference between two phase points measured with the sigma-form, so that
/// step acceptance is unchanged by isometries.
fn error_norm<T: Scalar>(space: &CurvatureSpace<T>, a: &Phase<T>, b: &Phase<T>) -> T {
    let scale = match space.sign() {
        Sign::Zero => T::one(),
        _ => space.sqrt_abs(),
    };
    let mut err = T::zero();
    for j in 0..2 {
        let dq = a.0[j] - b.0[j];
        let eq = space.norm_sq(&dq).abs().sqrt() * scale;
        let dv = space.project_tangent(&a.0[j], a.1[j] - b.1[j]);
        let speed = space.norm_sq(&a.1[j]).abs().sqrt();
        let ev = space.norm_sq(&dv).abs().sqrt() / (T::one() + speed);
        err = err.max(eq).max(ev);
    }
    err
}

fn sample<T: Scalar>(
    space: &CurvatureSpace<T>,
    pot: &Potential<T>,
    s: TwoBodyState<T>,
) -> Sample<T> {
    Sample {
        t: s.t,
        state: s,
        momentum: momentum_map(space, &s).0,
        energy: energy(space, pot, &s),
    }
}

/// One fixed RK4 step of size `dt` followed by projection.
pub fn step<T: Scalar>(
    space: &CurvatureSpace<T>,
    pot: &Potential<T>,
    state: &TwoBodyState<T>,
    dt: T,
) -> Result<TwoBodyState<T>> {
    if !(dt > T::zero()) {
        return Err(Error::Domain(format!(
            "step size must be positive, got {dt}"
        )));
    }
    let y = project(space, &rk4(space, pot, state.mu, &(state.q, state.v), dt)?);
    Ok(TwoBodyState {
        mu: state.mu,
        q: y.0,
        v: y.1,
        t: state.t + dt,
    })
}

pub fn integrate<T: Scalar>(
    space: &CurvatureSpace<T>,
    pot: &Potential<T>,
    state: &TwoBodyState<T>,
    t_end: T,
    opts: &IntegratorOptions<T>,
) -> Result<Trajectory<T>> {
    integrate_until(space, pot, state, t_end, opts, |_| false)
}

/// Integrate from `state.t` to `t_end`, ending early after the first accepted
/// step for which `stop` returns true.
///
/// With error control, each step is compared against two half steps; the
/// half-step result, corrected by the Richardson term, is accepted when the
/// difference is below `opts.tol`.
pub fn integrate_until<T: Scalar, F: FnMut(&TwoBodyState<T>) -> bool>(
    space: &CurvatureSpace<T>,
    pot: &Potential<T>,
    state: &TwoBodyState<T>,
    t_end: T,
    opts: &IntegratorOptions<T>,
    mut stop: F,
) -> Result<Trajectory<T>> {
    let t0 = state.t;
    let span = t_end - t0;
    if !(span > T::zero()) {
        return Err(Error::Domain(format!("t_end {t_end} must exceed t0 {t0}")));
    }
    let mut traj = Trajectory {
        samples: vec![sample(space, pot, *state)],
        stopped: false,
        accepted: 0,
        rejected: 0,
    };
    if stop(state) {
        traj.stopped = true;
        return Ok(traj);
    }
    let mut cur = *state;
    let push = |traj: &mut Trajectory<T>, s: TwoBodyState<T>, force: bool| {
        if opts.record || force {
            traj.samples.push(sample(space, pot, s));
        }
    };

    if let Some(h) = opts.fixed_dt {
        if !(h > T::zero()) {
            return Err(Error::Domain(format!(
                "fixed step must be positive, got {h}"
            )));
        }
        let n = (span / h).ceil().to_usize().unwrap_or(1).max(1);
        let dt = span / T::from_usize(n).unwrap();
        for i in 0..n {
            cur = step(space, pot, &cur, dt)?;
            cur.t = t0 + dt * T::from_usize(i + 1).unwrap();
            traj.accepted += 1;
            let halt = stop(&cur);
            push(&mut traj, cur, i + 1 == n || halt);
            if halt {
                traj.stopped = true;
                break;
            }
        }
        return Ok(traj);
    }

    let tol = opts.tol;
    let dt_min = T::lit(1e-12) * span;
    let dt_max = opts.dt_max.unwrap_or(span);
    let mut dt = opts.dt_init.unwrap_or(span / T::lit(100.0)).min(dt_max);
    let fifteen = T::lit(15.0);
    let safety = T::lit(0.9);
    let fifth = T::lit(0.2);
    loop {
        let remaining = t_end - cur.t;
        if remaining <= T::zero() {
            break;
        }
        let last = dt >= remaining;
        let h = if last { remaining } else { dt };
        let y = (cur.q, cur.v);
        let trial = rk4(space, pot, cur.mu, &y, h).and_then(|full| {
            let mid = rk4(space, pot, cur.mu, &y, h * T::half())?;
            let fine = rk4(space, pot, cur.mu, &mid, h * T::half())?;
            Ok((full, fine))
        });
        let (err, next) = match trial {
            Ok((full, fine)) => {
                let err = error_norm(space, &fine, &full);
                let mut extrap = fine;
                for j in 0..2 {
                    extrap.0[j] += (fine.0[j] - full.0[j]).scale(T::one() / fifteen);
                    extrap.1[j] += (fine.1[j] - full.1[j]).scale(T::one() / fifteen);
                }
                (err, Some(project(space, &extrap)))
            }
            // a stage left the potential's domain; retry smaller
            Err(Error::Domain(_)) => (T::infinity(), None),
            Err(e) => return Err(e),
        };
        match next {
            Some(y) if err <= tol && err.is_finite() => {
                cur = TwoBodyState {
                    mu: cur.mu,
                    q: y.0,
                    v: y.1,
                    t: if last { t_end } else { cur.t + h },
                };
                traj.accepted += 1;
                let r = cur.separation(space);
                if !Potential::in_domain(space, r) {
                    return Err(Error::Domain(format!(
                        "separation {r} left the domain at t = {}",
                        cur.t
                    )));
                }
                let halt = stop(&cur);
                push(&mut traj, cur, last || halt);
                if halt {
                    traj.stopped = true;
                    break;
                }
                let grow = if err > T::zero() {
                    (safety * (tol / err).powf(fifth)).min(T::two())
                } else {
                    T::two()
                };
                dt = (h * grow).min(dt_max);
            }
            _ => {
                traj.rejected += 1;
                let shrink = if err.is_finite() && err > T::zero() {
                    (safety * (tol / err).powf(fifth)).max(fifth)
                } else {
                    T::lit(0.25)
                };
                dt = h * shrink;
                if dt < dt_min {
                    return Err(Error::StepFailure {
                        t: cur.t.to_f64().unwrap_or(f64::NAN),
                        dt: dt.to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
        }
    }
    Ok(traj)
}

pub fn write_trajectory_csv<T: Scalar, W: Write>(traj: &Trajectory<T>, out: W) -> Result<()> {
    let io = |e: csv::Error| Error::Domain(format!("csv output failed: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRAJECTORY_CSV_HEADER).map_err(io)?;
    for s in &traj.samples {
        let st = &s.state;
        let mut rec = Vec::with_capacity(17);
        rec.push(fmt_sci(s.t));
        for v in [st.q[0], st.q[1], st.v[0], st.v[1], s.momentum] {
            rec.extend(v.0.iter().map(|&c| fmt_sci(c)));
        }
        rec.push(fmt_sci(s.energy));
        w.write_record(&rec).map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::Domain(format!("csv output failed: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn equator_runner(k: f64) -> (CurvatureSpace<f64>, TwoBodyState<f64>) {
        let s = CurvatureSpace::new(k).unwrap();
        let r = 1.0 / s.sqrt_abs();
        let q1 = s.point(Vec3::new(r, 0.0, 0.0)).unwrap();
        let st = TwoBodyState::new(
            &s,
            1.0,
            s.tangent(q1, Vec3::new(0.0, 1.0, 0.0)).unwrap(),
            1.0,
            s.tangent(s.pole(), Vec3::zero()).unwrap(),
        )
        .unwrap();
        (s, st)
    }

    #[test]
    fn great_circle_period() {
        let (s, st) = equator_runner(1.0);
        let traj = integrate(
            &s,
            &Potential::free(),
            &st,
            2.0 * PI,
            &IntegratorOptions::default(),
        )
        .unwrap();
        let end = traj.final_state();
        assert!((end.t - 2.0 * PI).abs() < 1e-15);
        assert!((end.q[0] - st.q[0]).max_abs() < 1e-8);
    }

    #[test]
    fn fixed_step_lands_on_t_end() {
        let (s, st) = equator_runner(4.0);
        let traj = integrate(
            &s,
            &Potential::free(),
            &st,
            1.0,
            &IntegratorOptions::fixed(0.03),
        )
        .unwrap();
        assert_eq!(traj.accepted, 34);
        assert_eq!(traj.final_state().t, 1.0);
    }

    #[test]
    fn stop_predicate_ends_run() {
        let (s, st) = equator_runner(1.0);
        let traj = integrate_until(
            &s,
            &Potential::free(),
            &st,
            10.0,
            &IntegratorOptions::default(),
            |x| x.t > 1.0,
        )
        .unwrap();
        assert!(traj.stopped);
        assert!(traj.final_state().t > 1.0 && traj.final_state().t < 10.0);
    }

    #[test]
    fn rejects_bad_spans() {
        let (s, st) = equator_runner(1.0);
        assert!(integrate(
            &s,
            &Potential::free(),
            &st,
            0.0,
            &IntegratorOptions::default()
        )
        .is_err());
        assert!(step(&s, &Potential::free(), &st, -0.1).is_err());
    }

    #[test]
    fn csv_has_one_row_per_sample() {
        let (s, st) = equator_runner(1.0);
        let traj = integrate(
            &s,
            &Potential::free(),
            &st,
            0.5,
            &IntegratorOptions::fixed(0.1),
        )
        .unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&traj, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,x1,y1,z1,x2,y2,z2,vx1,vy1,vz1,vx2,vy2,vz2,J1,J2,J3,E\n"));
        assert_eq!(text.lines().count(), 1 + traj.samples.len());
    }
}
