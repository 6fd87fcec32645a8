//! Points of R^d and the inner-product primitives everything else is built on.
//!
//! Public operations check dimensions eagerly and return
//! [`Error::DimensionMismatch`]. Crate-internal arithmetic
//! (`sub`, `lincomb`, ...) assumes the caller already checked.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A finite vector in R^d, d >= 1.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyPoint);
        }
        if let Some(index) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Point(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Point::filled(dim, 0.0)
    }

    /// Every coordinate equal to `value`.
    pub fn filled(dim: usize, value: f64) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        assert!(value.is_finite());
        Point(vec![value; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn ensure_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected,
                found: self.dim(),
            })
        }
    }

    pub fn ensure_same_dim(&self, other: &Point) -> Result<()> {
        other.ensure_dim(self.dim())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    // Unchecked arithmetic for hot loops.

    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty());
        Point(coords)
    }

    pub(crate) fn dot(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub(crate) fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub(crate) fn sub(&self, other: &Point) -> Point {
        debug_assert_eq!(self.dim(), other.dim());
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub(crate) fn add(&self, other: &Point) -> Point {
        debug_assert_eq!(self.dim(), other.dim());
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub(crate) fn scale(&self, factor: f64) -> Point {
        Point(self.0.iter().map(|a| a * factor).collect())
    }

    /// `a * self + b * other`
    pub(crate) fn lincomb(&self, a: f64, other: &Point, b: f64) -> Point {
        debug_assert_eq!(self.dim(), other.dim());
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
    }

    pub(crate) fn dist(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub(crate) fn dist_sq(&self, other: &Point) -> f64 {
        let d = self.dist(other);
        d * d
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point{:?}", self.0)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Point::new(coords)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

impl std::ops::Index<usize> for Point {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Euclidean inner product.
pub fn inner(x: &Point, y: &Point) -> Result<f64> {
    x.ensure_same_dim(y)?;
    Ok(x.dot(y))
}

pub fn norm(x: &Point) -> f64 {
    x.norm_sq().sqrt()
}

/// Euclidean distance between two points.
pub fn distance(x: &Point, y: &Point) -> Result<f64> {
    x.ensure_same_dim(y)?;
    Ok(x.dist(y))
}

/// Convex combination `t x + (1 - t) y`, t in [0, 1].
pub fn combine(t: f64, x: &Point, y: &Point) -> Result<Point> {
    if !(0.0..=1.0).contains(&t) {
        return Err(invalid("t", format!("{t} is outside [0, 1]")));
    }
    x.ensure_same_dim(y)?;
    Ok(x.lincomb(t, y, 1.0 - t))
}

/// Signed residual of
/// `||t x + (1-t) y||^2 = t||x||^2 + (1-t)||y||^2 - t(1-t)||x - y||^2`.
///
/// Both sides are evaluated independently; the result is LHS - RHS.
pub fn check_identity_convex(t: f64, x: &Point, y: &Point) -> Result<f64> {
    let lhs = combine(t, x, y)?.norm_sq();
    let rhs = t * x.norm_sq() + (1.0 - t) * y.norm_sq() - t * (1.0 - t) * x.dist_sq(y);
    Ok(lhs - rhs)
}

/// LHS - RHS of `||x + y||^2 <= ||x||^2 + 2<y, x + y>`; never positive
/// beyond rounding (it equals `-||y||^2`).
pub fn check_inequality_cross(x: &Point, y: &Point) -> Result<f64> {
    x.ensure_same_dim(y)?;
    let sum = x.add(y);
    Ok(sum.norm_sq() - (x.norm_sq() + 2.0 * y.dot(&sum)))
}

/// `1 + sum of squared norms`, the scale term relative tolerances are measured against.
pub(crate) fn scale_of(points: &[&Point]) -> f64 {
    1.0 + points.iter().map(|p| p.norm_sq()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    #[test]
    fn inner_examples() {
        assert_eq!(inner(&p(&[1.0, 0.0]), &p(&[0.0, 1.0])).unwrap(), 0.0);
        assert_eq!(inner(&p(&[2.0, 3.0]), &p(&[2.0, 3.0])).unwrap(), 13.0);
        assert_eq!(
            inner(&p(&[1.0, 2.0, 3.0]), &p(&[4.0, 5.0, 6.0])).unwrap(),
            32.0
        );
    }

    #[test]
    fn inner_rejects_mismatch() {
        let err = inner(&p(&[1.0, 2.0]), &p(&[1.0])).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 2,
                found: 1
            }
        );
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm(&p(&[0.0, 0.0, 0.0])), 0.0);
        assert_eq!(norm(&p(&[3.0, 4.0])), 5.0);
        assert_eq!(norm(&p(&[1.0, 1.0, 1.0, 1.0])), 2.0);
    }

    #[test]
    fn combine_examples() {
        let x = p(&[2.0, 0.0]);
        let y = p(&[0.0, 2.0]);
        assert_eq!(combine(0.5, &x, &y).unwrap(), p(&[1.0, 1.0]));
        assert_eq!(combine(1.0, &x, &y).unwrap(), x);
        assert_eq!(combine(0.0, &x, &y).unwrap(), y);
        assert!(combine(1.5, &x, &y).is_err());
        assert!(combine(-0.1, &x, &y).is_err());
    }

    #[test]
    fn rejects_bad_points() {
        assert_eq!(Point::new(vec![]), Err(Error::EmptyPoint));
        assert_eq!(
            Point::new(vec![1.0, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        );
        assert!(Point::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn identity_convex_examples() {
        let r = check_identity_convex(0.5, &p(&[1.0, 0.0]), &p(&[0.0, 1.0])).unwrap();
        assert!(r.abs() <= 1e-12);
        let r = check_identity_convex(0.0, &p(&[3.0, -1.0]), &p(&[0.5, 7.0])).unwrap();
        assert!(r.abs() <= 1e-12);
    }

    #[test]
    fn cross_inequality_examples() {
        let x = p(&[1.5, -2.0]);
        assert_eq!(check_inequality_cross(&x, &Point::zeros(2)).unwrap(), 0.0);
        // ||(1,1)||^2 = 2; RHS = 1 + 2 * <(0,1),(1,1)> = 3.
        let r = check_inequality_cross(&p(&[1.0, 0.0]), &p(&[0.0, 1.0])).unwrap();
        assert_eq!(r, -1.0);
    }

    #[test]
    fn serde_rejects_non_finite_via_try_from() {
        let pt: Result<Point> = Point::try_from(vec![1.0, f64::NEG_INFINITY]);
        assert!(pt.is_err());
    }
}
