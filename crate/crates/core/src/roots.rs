//! Bracketed scalar root finding: bisection safeguarding a secant step.

use crate::error::{Error, Result};
use crate::Scalar;

/// Absolute tolerance on the root location.
pub const ROOT_TOL: f64 = 1e-13;
pub const MAX_ITER: usize = 200;

#[derive(Clone, Copy, Debug)]
pub struct Bracket<T> {
    pub xtol: T,
    pub max_iter: usize,
}

impl<T: Scalar> Default for Bracket<T> {
    fn default() -> Self {
        Bracket {
            xtol: T::tol(ROOT_TOL, 4.0),
            max_iter: MAX_ITER,
        }
    }
}

impl<T: Scalar> Bracket<T> {
    /// Root of `f` in `[a, b]`; `f(a)` and `f(b)` must not share a sign.
    ///
    /// Each iteration proposes the secant point through the two most recent
    /// iterates. The proposal is rejected in favour of the midpoint when it
    /// falls outside the bracket or when the bracket failed to halve over the
    /// previous step.
    pub fn solve<F: FnMut(T) -> T>(&self, mut f: F, a: T, b: T) -> Result<T> {
        let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
        let mut flo = f(lo);
        let mut fhi = f(hi);
        if flo == T::zero() {
            return Ok(lo);
        }
        if fhi == T::zero() {
            return Ok(hi);
        }
        if !(flo.is_finite() && fhi.is_finite()) || flo.signum() == fhi.signum() {
            return Err(Error::NoSignChange {
                a: lo.to_f64().unwrap_or(f64::NAN),
                b: hi.to_f64().unwrap_or(f64::NAN),
            });
        }
        // two most recent iterates for the secant
        let (mut x0, mut f0, mut x1, mut f1) = (lo, flo, hi, fhi);
        let mut width = hi - lo;
        let tol = self.xtol.max(T::epsilon() * lo.abs().max(hi.abs()));
        for _ in 0..self.max_iter {
            if hi - lo <= tol {
                return Ok(if flo.abs() < fhi.abs() { lo } else { hi });
            }
            let mid = (lo + hi) * T::half();
            let secant = if f1 != f0 {
                x1 - f1 * (x1 - x0) / (f1 - f0)
            } else {
                mid
            };
            let shrunk = (hi - lo) <= width * T::half();
            let x = if secant > lo && secant < hi && secant.is_finite() && shrunk {
                secant
            } else {
                mid
            };
            width = hi - lo;
            let fx = f(x);
            if fx == T::zero() {
                return Ok(x);
            }
            if fx.signum() == flo.signum() {
                lo = x;
                flo = fx;
            } else {
                hi = x;
                fhi = fx;
            }
            x0 = x1;
            f0 = f1;
            x1 = x;
            f1 = fx;
        }
        if hi - lo <= tol * T::lit(16.0) {
            return Ok((lo + hi) * T::half());
        }
        Err(Error::MaxIterations(self.max_iter))
    }
}

/// [`Bracket::solve`] with default tolerances.
pub fn find_root<T: Scalar, F: FnMut(T) -> T>(f: F, a: T, b: T) -> Result<T> {
    Bracket::default().solve(f, a, b)
}

/// All roots of `f` on `[a, b]` given points splitting it into pieces on which
/// `f` is monotone. Pieces without a sign change contribute nothing.
pub fn roots_on_pieces<T: Scalar, F: FnMut(T) -> T>(mut f: F, breaks: &[T]) -> Result<Vec<T>> {
    let mut out: Vec<T> = Vec::new();
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let (fa, fb) = (f(a), f(b));
        if fa.signum() == fb.signum() && fa != T::zero() && fb != T::zero() {
            continue;
        }
        let x = Bracket::default().solve(&mut f, a, b)?;
        // a root on a shared break point is reported once
        if out
            .last()
            .is_none_or(|&p| (x - p).abs() > T::tol(1e-12, 16.0))
        {
            out.push(x);
        }
    }
    Ok(out)
}
