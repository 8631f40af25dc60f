//! Lagrangian two-body mechanics on the embedded surface.
//!
//! The equations of motion are written in ambient coordinates: each particle
//! accelerates by `f_j / mu_j` along the surface plus the constraint term
//! `-kappa <v_j, v_j>_sigma q_j`, which keeps `<q, q>_sigma` constant to
//! second order. The integrator additionally projects back onto the surface
//! after every step.

mod integrator;
mod momentum;
mod potential;
mod state;

pub use integrator::{
    integrate, integrate_until, step, write_trajectory_csv, IntegratorOptions, Sample, Trajectory,
    TRAJECTORY_CSV_HEADER,
};
pub use momentum::{lie_basis, linear_momentum, momentum_map, momentum_pairing, MomentumVector};
pub use potential::Potential;
pub use state::TwoBodyState;

use crate::error::{Error, Result};
use crate::geometry::{CurvatureSpace, Sign, SurfacePoint, TangentVec};
use crate::linalg::Vec3;
use crate::Scalar;

/// Forces on both particles: `V'(r)` times the unit tangent toward the other.
pub fn force<T: Scalar>(
    space: &CurvatureSpace<T>,
    pot: &Potential<T>,
    state: &TwoBodyState<T>,
) -> Result<(TangentVec<T>, TangentVec<T>)> {
    let (f1, f2) = raw_forces(space, pot, state.mu, &state.q)?;
    Ok((
        TangentVec {
            base: state.point(0),
            vec: f1,
        },
        TangentVec {
            base: state.point(1),
            vec: f2,
        },
    ))
}

fn raw_forces<T: Scalar>(
    space: &CurvatureSpace<T>,
    pot: &Potential<T>,
    mu: [T; 2],
    q: &[Vec3<T>; 2],
) -> Result<(Vec3<T>, Vec3<T>)> {
    let (p1, p2) = (SurfacePoint(q[0]), SurfacePoint(q[1]));
    let r = space.distance(&p1, &p2);
    if !Potential::in_domain(space, r) {
        return Err(Error::Domain(format!(
            "separation {r} outside the potential's domain"
        )));
    }
    let dv = pot.derivative(space, mu[0], mu[1], r);
    let u12 = space
        .unit_tangent_toward(&p1, &p2)
        .map_err(|e| Error::Domain(e.to_string()))?;
    let u21 = space
        .unit_tangent_toward(&p2, &p1)
        .map_err(|e| Error::Domain(e.to_string()))?;
    Ok((u12.vec.scale(dv), u21.vec.scale(dv)))
}

/// Ambient accelerations `a_j = f_j / mu_j - kappa <v_j, v_j>_sigma q_j`.
pub fn acceleration<T: Scalar>(
    space: &CurvatureSpace<T>,
    pot: &Potential<T>,
    state: &TwoBodyState<T>,
) -> Result<(Vec3<T>, Vec3<T>)> {
    let a = raw_acceleration(space, pot, state.mu, &state.q, &state.v)?;
    Ok((a[0], a[1]))
}

pub(crate) fn raw_acceleration<T: Scalar>(
    space: &CurvatureSpace<T>,
    pot: &Potential<T>,
    mu: [T; 2],
    q: &[Vec3<T>; 2],
    v: &[Vec3<T>; 2],
) -> Result<[Vec3<T>; 2]> {
    let (f1, f2) = raw_forces(space, pot, mu, q)?;
    let f = [f1, f2];
    let mut out = [Vec3::zero(); 2];
    for j in 0..2 {
        out[j] = f[j].scale(T::one() / mu[j]);
        if space.sign() != Sign::Zero {
            out[j] -= q[j].scale(space.kappa() * space.norm_sq(&v[j]));
        }
    }
    Ok(out)
}

pub fn kinetic_energy<T: Scalar>(space: &CurvatureSpace<T>, state: &TwoBodyState<T>) -> T {
    (0..2).fold(T::zero(), |acc, j| {
        acc + state.mu[j] * space.norm_sq(&state.v[j]) * T::half()
    })
}

/// Total energy `T + V(r)`.
pub fn energy<T: Scalar>(
    space: &CurvatureSpace<T>,
    pot: &Potential<T>,
    state: &TwoBodyState<T>,
) -> T {
    let r = state.separation(space);
    kinetic_energy(space, state) + pot.value(space, state.mu[0], state.mu[1], r)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn rest_state_accelerates_along_force() {
        let s = CurvatureSpace::<f64>::new(1.0).unwrap();
        let st = TwoBodyState::at_rest(
            &s,
            1.0,
            s.embed(0.5, -FRAC_PI_2).unwrap(),
            2.0,
            s.embed(0.5, FRAC_PI_2).unwrap(),
        )
        .unwrap();
        let pot = Potential::default();
        let (f1, f2) = force(&s, &pot, &st).unwrap();
        let (a1, a2) = acceleration(&s, &pot, &st).unwrap();
        assert!((a1 - f1.vec).max_abs() < 1e-15);
        assert!((a2 - f2.vec.scale(0.5)).max_abs() < 1e-15);
        assert!((s.norm_sq(&f1.vec) - s.norm_sq(&f2.vec)).abs() < 1e-13);
    }

    #[test]
    fn quarter_circle_force_magnitude() {
        let s = CurvatureSpace::<f64>::new(1.0).unwrap();
        let st = TwoBodyState::at_rest(
            &s,
            1.0,
            s.pole(),
            1.0,
            s.point(Vec3::new(1.0, 0.0, 0.0)).unwrap(),
        )
        .unwrap();
        let (f1, _) = force(&s, &Potential::default(), &st).unwrap();
        assert!((f1.vec.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn free_particle_on_equator() {
        let s = CurvatureSpace::<f64>::new(1.0).unwrap();
        let q1 = s.point(Vec3::new(1.0, 0.0, 0.0)).unwrap();
        let q2 = s.pole();
        let st = TwoBodyState::new(
            &s,
            1.0,
            s.tangent(q1, Vec3::new(0.0, 2.0, 0.0)).unwrap(),
            1.0,
            s.tangent(q2, Vec3::zero()).unwrap(),
        )
        .unwrap();
        let (a1, _) = acceleration(&s, &Potential::free(), &st).unwrap();
        assert!((a1 - Vec3::new(-4.0, 0.0, 0.0)).max_abs() < 1e-15);
    }

    #[test]
    fn constraint_second_derivative_vanishes() {
        for k in [1.0f64, -1.0, 0.0, 2.3, -0.4] {
            let s = CurvatureSpace::new(k).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..50 {
                let st = TwoBodyState::random(&s, &mut rng, 1.0, 1.0);
                let (a1, a2) = acceleration(&s, &Potential::default(), &st).unwrap();
                for (j, a) in [a1, a2].iter().enumerate() {
                    let dd = if k == 0.0 {
                        a.z()
                    } else {
                        2.0 * s.norm_sq(&st.v[j]) + 2.0 * s.bilinear(&st.q[j], a)
                    };
                    assert!(dd.abs() < 1e-12 * (1.0 + a.max_abs()), "k={k}: {dd}");
                }
            }
        }
    }

    #[test]
    fn energy_examples() {
        let s = CurvatureSpace::<f64>::new(1.0).unwrap();
        let pot = Potential::default();
        let st = TwoBodyState::at_rest(
            &s,
            1.0,
            s.embed(0.2, 0.0).unwrap(),
            2.0,
            s.embed(0.9, 0.0).unwrap(),
        )
        .unwrap();
        assert!((energy(&s, &pot, &st) - pot.value(&s, 1.0, 2.0, 0.7)).abs() < 1e-14);

        let q1 = s.point(Vec3::new(1.0, 0.0, 0.0)).unwrap();
        let st = TwoBodyState::new(
            &s,
            2.0,
            s.tangent(q1, Vec3::new(0.0, 1.0, 0.0)).unwrap(),
            1.0,
            s.tangent(s.pole(), Vec3::zero()).unwrap(),
        )
        .unwrap();
        assert_eq!(energy(&s, &Potential::free(), &st), 1.0);
    }

    #[test]
    fn out_of_domain_is_an_error() {
        let s = CurvatureSpace::<f64>::new(1.0).unwrap();
        let st = TwoBodyState {
            mu: [1.0, 1.0],
            q: [s.pole().coords(), s.pole().coords()],
            v: [Vec3::zero(); 2],
            t: 0.0,
        };
        assert!(matches!(
            force(&s, &Potential::default(), &st),
            Err(Error::Domain(_))
        ));
    }
}
