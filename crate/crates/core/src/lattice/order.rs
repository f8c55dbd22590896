use serde::{Deserialize, Serialize};

use super::vector::{LorenzCurve, ProbVector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Outcome of comparing two vectors under majorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MajorizationOrder {
    FirstMajorizedBySecond,
    SecondMajorizedByFirst,
    Equal,
    Incomparable,
}

impl MajorizationOrder {
    /// True when the first argument is majorized by the second (including equality).
    pub fn first_below(self) -> bool {
        matches!(self, Self::FirstMajorizedBySecond | Self::Equal)
    }

    pub fn second_below(self) -> bool {
        matches!(self, Self::SecondMajorizedByFirst | Self::Equal)
    }
}

fn check_dims<S: Scalar>(a: &ProbVector<S>, b: &ProbVector<S>) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(())
}

/// Compare two vectors of equal dimension via their partial sums.
pub fn compare<S: Scalar>(a: &ProbVector<S>, b: &ProbVector<S>) -> Result<MajorizationOrder> {
    check_dims(a, b)?;
    let (la, lb) = (a.lorenz(), b.lorenz());
    let pairs = || la.partial_sums().iter().zip(lb.partial_sums());
    let a_below = pairs().all(|(x, y)| x.le_tol(y));
    let b_below = pairs().all(|(x, y)| y.le_tol(x));
    Ok(match (a_below, b_below) {
        (true, true) => MajorizationOrder::Equal,
        (true, false) => MajorizationOrder::FirstMajorizedBySecond,
        (false, true) => MajorizationOrder::SecondMajorizedByFirst,
        (false, false) => MajorizationOrder::Incomparable,
    })
}

impl<S: Scalar> ProbVector<S> {
    /// `self ≺ other`.
    pub fn is_majorized_by(&self, other: &Self) -> Result<bool> {
        Ok(compare(self, other)?.first_below())
    }

    /// `self ≺ other` with a caller-chosen absolute slack on the partial sums.
    pub fn is_majorized_by_within(&self, other: &Self, slack: &S) -> Result<bool> {
        check_dims(self, other)?;
        let (la, lb) = (self.lorenz(), other.lorenz());
        Ok(la
            .partial_sums()
            .iter()
            .zip(lb.partial_sums())
            .all(|(x, y)| *x <= y.clone() + slack.clone()))
    }
}

fn common_dim<S: Scalar>(set: &[ProbVector<S>]) -> Result<usize> {
    let first = set.first().ok_or(Error::EmptySet)?;
    for other in &set[1..] {
        check_dims(first, other)?;
    }
    Ok(first.dim())
}

/// Greatest lower bound: difference vector of the pointwise minimum of the
/// Lorenz curves. The minimum of concave curves is concave, so no
/// flattening is needed.
pub fn meet<S: Scalar>(set: &[ProbVector<S>]) -> Result<ProbVector<S>> {
    let d = common_dim(set)?;
    let curves: Vec<LorenzCurve<S>> = set.iter().map(ProbVector::lorenz).collect();
    let lower: Vec<S> = (0..d)
        .map(|k| {
            curves[1..]
                .iter()
                .fold(curves[0].partial_sums()[k].clone(), |acc, c| {
                    acc.min_of(c.partial_sums()[k].clone())
                })
        })
        .collect();
    Ok(ProbVector::from_sorted_unchecked(
        LorenzCurve::from_partial_sums(lower).increments(),
    ))
}

/// Least upper bound: pointwise maximum of the Lorenz curves, flattened to
/// its least concave majorant when the maximum is not concave.
pub fn join<S: Scalar>(set: &[ProbVector<S>]) -> Result<ProbVector<S>> {
    let d = common_dim(set)?;
    let curves: Vec<LorenzCurve<S>> = set.iter().map(ProbVector::lorenz).collect();
    let upper: Vec<S> = (0..d)
        .map(|k| {
            curves[1..]
                .iter()
                .fold(curves[0].partial_sums()[k].clone(), |acc, c| {
                    acc.max_of(c.partial_sums()[k].clone())
                })
        })
        .collect();
    let upper = LorenzCurve::from_partial_sums(upper);
    if upper.is_concave() {
        return Ok(ProbVector::from_sorted_unchecked(upper.increments()));
    }
    Ok(ProbVector::from_sorted_unchecked(concave_envelope_increments(
        upper.partial_sums(),
    )))
}

/// Slopes of the least concave majorant of the points `(k, s_k)`, `k = 0..d`,
/// with `s_0 = 0`, one slope per unit interval.
fn concave_envelope_increments<S: Scalar>(sums: &[S]) -> Vec<S> {
    let points: Vec<(usize, S)> = std::iter::once((0, S::zero()))
        .chain(sums.iter().cloned().enumerate().map(|(i, s)| (i + 1, s)))
        .collect();
    // upper hull, scanned left to right
    let mut hull: Vec<usize> = Vec::with_capacity(points.len());
    for (idx, point) in points.iter().enumerate() {
        while hull.len() >= 2 {
            let a = &points[hull[hull.len() - 2]];
            let m = &points[hull[hull.len() - 1]];
            // m is dropped unless strictly above the chord a -> point
            let lhs = (m.1.clone() - a.1.clone()) * S::from_usize(point.0 - a.0);
            let rhs = (point.1.clone() - a.1.clone()) * S::from_usize(m.0 - a.0);
            if lhs.le_tol(&rhs) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(idx);
    }
    let mut increments = Vec::with_capacity(sums.len());
    for pair in hull.windows(2) {
        let (a, b) = (&points[pair[0]], &points[pair[1]]);
        let width = b.0 - a.0;
        let slope = (b.1.clone() - a.1.clone()) / S::from_usize(width);
        increments.extend(std::iter::repeat_n(slope, width));
    }
    increments
}
