use crate::error::{Error, Result};
use crate::Scalar;

/// Least-squares polynomial coefficients, lowest degree first.
pub fn polyfit<T: Scalar>(x: &[T], y: &[T], degree: usize) -> Result<Vec<T>> {
    let n = degree + 1;
    if x.len() != y.len() || x.len() < n {
        return Err(Error::Domain(format!(
            "need at least {n} points for degree {degree}"
        )));
    }
    // normal equations, solved by Gaussian elimination with partial pivoting
    let mut a = vec![vec![T::zero(); n + 1]; n];
    for (&xi, &yi) in x.iter().zip(y) {
        let mut p = vec![T::one(); 2 * n];
        for k in 1..2 * n {
            p[k] = p[k - 1] * xi;
        }
        for r in 0..n {
            for c in 0..n {
                a[r][c] = a[r][c] + p[r + c];
            }
            a[r][n] = a[r][n] + p[r] * yi;
        }
    }
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, piv);
        if a[col][col] == T::zero() {
            return Err(Error::DegenerateConfiguration("singular fit".into()));
        }
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..=n {
                a[r][c] = a[r][c] - f * a[col][c];
            }
        }
    }
    let mut coef = vec![T::zero(); n];
    for r in (0..n).rev() {
        let mut acc = a[r][n];
        for c in r + 1..n {
            acc = acc - a[r][c] * coef[c];
        }
        coef[r] = acc / a[r][r];
    }
    Ok(coef)
}

pub fn polyval<T: Scalar>(coef: &[T], x: T) -> T {
    coef.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
}

/// Smallest root `>= 0` of a linear or quadratic polynomial.
pub(super) fn first_root_ahead<T: Scalar>(c: &[T]) -> Option<T> {
    let linear = |c0: T, c1: T| {
        let t = -c0 / c1;
        (t.is_finite() && t >= T::zero()).then_some(t)
    };
    match c {
        [c0, c1] => linear(*c0, *c1),
        [c0, c1, c2] if *c2 == T::zero() => linear(*c0, *c1),
        [c0, c1, c2] => {
            let disc = *c1 * *c1 - T::lit(4.0) * *c2 * *c0;
            if disc < T::zero() {
                return None;
            }
            // stable quadratic roots
            let q = -T::half() * (*c1 + c1.signum() * disc.sqrt());
            let roots = [q / *c2, *c0 / q];
            roots
                .into_iter()
                .filter(|t| t.is_finite() && *t >= T::zero())
                .fold(None, |best: Option<T>, t| {
                    Some(best.map_or(t, |b| b.min(t)))
                })
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_exact_quadratic() {
        let x: Vec<f64> = (0..10).map(|i| -1.0 + 0.1 * i as f64).collect();
        let y: Vec<f64> = x.iter().map(|t| 0.3 - 2.0 * t + 0.7 * t * t).collect();
        let c = polyfit(&x, &y, 2).unwrap();
        assert!(
            (c[0] - 0.3).abs() < 1e-12 && (c[1] + 2.0).abs() < 1e-12 && (c[2] - 0.7).abs() < 1e-12
        );
        assert!((polyval(&c, 2.0) - (0.3 - 4.0 + 2.8)).abs() < 1e-12);
    }

    #[test]
    fn first_root_ahead_picks_the_nearest() {
        // (t - 1)(t - 3)
        assert_eq!(first_root_ahead(&[3.0, -4.0, 1.0]), Some(1.0));
        // (t + 1)(t - 2)
        assert_eq!(first_root_ahead(&[-2.0, -1.0, 1.0]), Some(2.0));
        assert_eq!(first_root_ahead(&[1.0, 0.0, 1.0]), None);
        assert_eq!(first_root_ahead(&[-1.0, 2.0]), Some(0.5));
    }
}
