//! `r2` as a function of curvature for fixed `r1` and mass ratio, per rule.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CurvatureSpace, Sign};
use crate::Scalar;

use super::split::partner_distances;
use super::{Branch, ComRule};

pub const SWEEP_CSV_HEADER: [&str; 5] = ["kappa", "rule", "branch", "r2", "feasible"];

/// One point of the curvature sweep. `r2` is `None` when the relation has no
/// solution; rows violating `r1 + r2 < pi/sqrt(kappa)` are kept and flagged.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow<T> {
    pub kappa: T,
    pub rule: ComRule,
    pub branch: Option<Branch>,
    pub r2: Option<T>,
    pub feasible: bool,
}

fn feasible<T: Scalar>(space: &CurvatureSpace<T>, r1: T, r2: T) -> bool {
    match space.max_distance() {
        Some(diam) => r1 + r2 < diam,
        None => true,
    }
}

/// Rows for a single curvature with `mu1 = 1`, `mu2 = mu_ratio`: one each for
/// the lever and collision rules, and for steady rotation one per branch on
/// the sphere (a single row elsewhere).
pub fn sweep_rows<T: Scalar>(kappa: T, mu_ratio: T, r1: T) -> Result<Vec<SweepRow<T>>> {
    let space = CurvatureSpace::new(kappa)?;
    let (mu1, mu2) = (T::one(), mu_ratio);
    let mut rows = Vec::with_capacity(4);
    let row = |rule, branch, r2: Option<T>| SweepRow {
        kappa,
        rule,
        branch,
        r2,
        feasible: r2.is_some_and(|x| feasible(&space, r1, x)),
    };

    for rule in [ComRule::Lever, ComRule::Collision] {
        let roots = partner_distances(&space, rule, mu1, mu2, r1)?;
        if roots.is_empty() {
            rows.push(row(rule, None, None));
        }
        rows.extend(roots.into_iter().map(|x| row(rule, None, Some(x))));
    }

    let roots = partner_distances(&space, ComRule::Rotation, mu1, mu2, r1)?;
    if space.sign() == Sign::Positive {
        let quarter = space.max_distance().unwrap() * T::half();
        for branch in [Branch::Acute, Branch::Obtuse] {
            let tagged: Vec<T> = roots
                .iter()
                .copied()
                .filter(|&x| (r1 + x < quarter) == (branch == Branch::Acute))
                .collect();
            if tagged.is_empty() {
                rows.push(row(ComRule::Rotation, Some(branch), None));
            }
            rows.extend(
                tagged
                    .into_iter()
                    .map(|x| row(ComRule::Rotation, Some(branch), Some(x))),
            );
        }
    } else if roots.is_empty() {
        rows.push(row(ComRule::Rotation, None, None));
    } else {
        rows.extend(
            roots
                .into_iter()
                .map(|x| row(ComRule::Rotation, None, Some(x))),
        );
    }
    Ok(rows)
}

/// Sweep over `kappa_grid` in grid order.
pub fn sweep_figure2<T: Scalar>(mu_ratio: T, r1: T, kappa_grid: &[T]) -> Result<Vec<SweepRow<T>>> {
    if !(r1 > T::zero()) {
        return Err(Error::Domain(format!("r1 must be positive, got {r1}")));
    }
    if !(mu_ratio > T::zero()) {
        return Err(Error::Domain(format!(
            "mass ratio must be positive, got {mu_ratio}"
        )));
    }
    let mut out = Vec::new();
    for &k in kappa_grid {
        out.extend(sweep_rows(k, mu_ratio, r1)?);
    }
    Ok(out)
}

/// 17 significant digits.
pub fn fmt_sci<T: Scalar>(x: T) -> String {
    format!("{x:.16e}")
}

pub fn write_sweep_csv<T: Scalar, W: Write>(rows: &[SweepRow<T>], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::Domain(format!("csv output failed: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_CSV_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            fmt_sci(r.kappa),
            r.rule.name().to_string(),
            r.branch.map_or(String::new(), |b| b.name().to_string()),
            r.r2.map_or(String::new(), fmt_sci),
            r.feasible.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::Domain(format!("csv output failed: {e}")))?;
    Ok(())
}
