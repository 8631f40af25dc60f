//! Momentum map of the diagonal isometry action.

use serde::{Deserialize, Serialize};

use crate::geometry::{CurvatureSpace, Sign};
use crate::linalg::{Mat3, Vec3};
use crate::Scalar;

use super::TwoBodyState;

/// Components of the momentum in the ordered Lie algebra basis
/// `xi_1, xi_2, xi_3`, with the dual identified through the Euclidean product.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MomentumVector<T>(pub Vec3<T>);

/// Sign used by the momentum formulas; the plane uses the sphere's
/// conventions applied to the `q3 = 1` embedding.
fn momentum_sigma<T: Scalar>(space: &CurvatureSpace<T>) -> T {
    match space.sign() {
        Sign::Negative => -T::one(),
        _ => T::one(),
    }
}

/// The basis `xi_1, xi_2, xi_3` of `so(3)` (`sigma = 1`) or `so(2,1)`
/// (`sigma = -1`).
pub fn lie_basis<T: Scalar>(sigma: T) -> [Mat3<T>; 3] {
    let (z, o) = (T::zero(), T::one());
    [
        Mat3([[z, z, z], [z, z, -sigma], [z, o, z]]),
        Mat3([[z, z, sigma], [z, z, z], [-o, z, z]]),
        Mat3([[z, -o, z], [o, z, z], [z, z, z]]),
    ]
}

/// `J = mu1 (K q1) x (K v1) + mu2 (K q2) x (K v2)`.
///
/// On the plane this is evaluated with `K = I` on `(x, y, 1)`, giving
/// `(-p_y, p_x, L_z)`: the linear momentum rotated by a quarter turn, and the
/// angular momentum about the origin.
pub fn momentum_map<T: Scalar>(
    space: &CurvatureSpace<T>,
    state: &TwoBodyState<T>,
) -> MomentumVector<T> {
    let s = momentum_sigma(space);
    let k = |u: &Vec3<T>| Vec3::new(u[0], u[1], s * u[2]);
    let mut j = Vec3::zero();
    for i in 0..2 {
        j += k(&state.q[i]).cross(&k(&state.v[i])).scale(state.mu[i]);
    }
    MomentumVector(j)
}

/// `<J, xi> = mu1 <xi q1, v1>_sigma + mu2 <xi q2, v2>_sigma` evaluated from
/// the matrix `sum a_j xi_j`, independently of [`momentum_map`].
pub fn momentum_pairing<T: Scalar>(
    space: &CurvatureSpace<T>,
    state: &TwoBodyState<T>,
    xi: &Vec3<T>,
) -> T {
    let s = momentum_sigma(space);
    let basis = lie_basis(s);
    let mut m = [[T::zero(); 3]; 3];
    for (a, b) in xi.0.iter().zip(basis.iter()) {
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] = m[r][c] + *a * b.0[r][c];
            }
        }
    }
    let m = Mat3(m);
    let form = |u: &Vec3<T>, v: &Vec3<T>| u[0] * v[0] + u[1] * v[1] + s * u[2] * v[2];
    (0..2).fold(T::zero(), |acc, i| {
        acc + state.mu[i] * form(&m.mul_vec(&state.q[i]), &state.v[i])
    })
}

/// `mu1 v1 + mu2 v2`, the conserved linear momentum on the plane.
pub fn linear_momentum<T: Scalar>(state: &TwoBodyState<T>) -> Vec3<T> {
    state.v[0].scale(state.mu[0]) + state.v[1].scale(state.mu[1])
}
