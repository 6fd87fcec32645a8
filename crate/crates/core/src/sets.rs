//! Closed convex sets with closed-form metric projections.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::space::Point;

/// Half-width of the sampling cube used for halfspaces, centred on the
/// point of the bounding hyperplane closest to the origin.
pub const HALFSPACE_SAMPLING_HALF_WIDTH: f64 = 4.0;

/// A closed convex subset of R^d with an exact projection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConvexSet {
    Ball {
        center: Point,
        radius: f64,
    },
    Box {
        lower: Point,
        upper: Point,
    },
    /// `{x : <normal, x> <= offset}`
    Halfspace {
        normal: Point,
        offset: f64,
    },
    WholeSpace {
        dim: usize,
    },
}

impl ConvexSet {
    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        let set = ConvexSet::Ball { center, radius };
        set.validate()?;
        Ok(set)
    }

    pub fn cube(dim: usize, lower: f64, upper: f64) -> Result<Self> {
        ConvexSet::boxed(Point::filled(dim, lower), Point::filled(dim, upper))
    }

    pub fn boxed(lower: Point, upper: Point) -> Result<Self> {
        let set = ConvexSet::Box { lower, upper };
        set.validate()?;
        Ok(set)
    }

    pub fn halfspace(normal: Point, offset: f64) -> Result<Self> {
        let set = ConvexSet::Halfspace { normal, offset };
        set.validate()?;
        Ok(set)
    }

    pub fn whole_space(dim: usize) -> Result<Self> {
        let set = ConvexSet::WholeSpace { dim };
        set.validate()?;
        Ok(set)
    }

    /// The single point `{p}`, as a degenerate box.
    pub fn singleton(p: &Point) -> Self {
        ConvexSet::Box {
            lower: p.clone(),
            upper: p.clone(),
        }
    }

    /// Checks the variant's parameter constraints. Deserialized sets must
    /// pass through here before use.
    pub fn validate(&self) -> Result<()> {
        match self {
            ConvexSet::Ball { center, radius } => {
                if !center.is_finite() {
                    return Err(invalid("center", "non-finite coordinate"));
                }
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(invalid("radius", format!("{radius} must be > 0")));
                }
            }
            ConvexSet::Box { lower, upper } => {
                lower.ensure_same_dim(upper)?;
                if let Some(i) = (0..lower.dim()).find(|&i| !(lower[i] <= upper[i])) {
                    return Err(invalid(
                        "lower",
                        format!(
                            "lower[{i}] = {} exceeds upper[{i}] = {}",
                            lower[i], upper[i]
                        ),
                    ));
                }
            }
            ConvexSet::Halfspace { normal, offset } => {
                if !(normal.norm_sq() > 0.0) {
                    return Err(invalid("normal", "must be nonzero"));
                }
                if !offset.is_finite() {
                    return Err(invalid("offset", "must be finite"));
                }
            }
            ConvexSet::WholeSpace { dim } => {
                if *dim == 0 {
                    return Err(invalid("dim", "must be at least 1"));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexSet::Ball { center, .. } => center.dim(),
            ConvexSet::Box { lower, .. } => lower.dim(),
            ConvexSet::Halfspace { normal, .. } => normal.dim(),
            ConvexSet::WholeSpace { dim } => *dim,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConvexSet::Ball { .. } => "ball",
            ConvexSet::Box { .. } => "box",
            ConvexSet::Halfspace { .. } => "halfspace",
            ConvexSet::WholeSpace { .. } => "whole space",
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, ConvexSet::Ball { .. } | ConvexSet::Box { .. })
    }

    /// Euclidean distance from `x` to the set.
    pub fn distance_to(&self, x: &Point) -> Result<f64> {
        x.ensure_dim(self.dim())?;
        Ok(match self {
            ConvexSet::Ball { center, radius } => (x.dist(center) - radius).max(0.0),
            ConvexSet::Box { lower, upper } => (0..x.dim())
                .map(|i| {
                    let excess = (lower[i] - x[i]).max(x[i] - upper[i]).max(0.0);
                    excess * excess
                })
                .sum::<f64>()
                .sqrt(),
            ConvexSet::Halfspace { normal, offset } => {
                ((normal.dot(x) - offset) / normal.norm_sq().sqrt()).max(0.0)
            }
            ConvexSet::WholeSpace { .. } => 0.0,
        })
    }

    /// True iff `x` lies within distance `tol` of the set.
    pub fn contains(&self, x: &Point, tol: f64) -> Result<bool> {
        if !(tol >= 0.0) {
            return Err(invalid("tol", format!("{tol} must be >= 0")));
        }
        Ok(self.distance_to(x)? <= tol)
    }

    /// The metric projection: the unique nearest point of the set.
    pub fn project(&self, x: &Point) -> Result<Point> {
        x.ensure_dim(self.dim())?;
        Ok(self.project_unchecked(x))
    }

    pub(crate) fn project_unchecked(&self, x: &Point) -> Point {
        match self {
            ConvexSet::Ball { center, radius } => {
                let offset = x.sub(center);
                let dist = offset.norm_sq().sqrt();
                if dist <= *radius {
                    x.clone()
                } else {
                    center.add(&offset.scale(radius / dist))
                }
            }
            ConvexSet::Box { lower, upper } => Point::from_raw(
                (0..x.dim())
                    .map(|i| x[i].clamp(lower[i], upper[i]))
                    .collect(),
            ),
            ConvexSet::Halfspace { normal, offset } => {
                let excess = normal.dot(x) - offset;
                if excess <= 0.0 {
                    x.clone()
                } else {
                    x.lincomb(1.0, normal, -excess / normal.norm_sq())
                }
            }
            ConvexSet::WholeSpace { .. } => x.clone(),
        }
    }

    /// Draws a point of the set. WholeSpace has no bounded sampler.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Point> {
        match self {
            ConvexSet::Ball { center, radius } => {
                let d = center.dim();
                let dir: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
                let dir_norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
                let u: f64 = rng.random();
                let r = radius * u.powf(1.0 / d as f64);
                let scale = if dir_norm > 0.0 { r / dir_norm } else { 0.0 };
                Ok(Point::from_raw(
                    (0..d).map(|i| center[i] + scale * dir[i]).collect(),
                ))
            }
            ConvexSet::Box { lower, upper } => Ok(Point::from_raw(
                (0..lower.dim())
                    .map(|i| {
                        if lower[i] == upper[i] {
                            lower[i]
                        } else {
                            rng.random_range(lower[i]..=upper[i])
                        }
                    })
                    .collect(),
            )),
            ConvexSet::Halfspace { normal, offset } => {
                let nsq = normal.norm_sq();
                let anchor = normal.scale(offset / nsq);
                let h = HALFSPACE_SAMPLING_HALF_WIDTH;
                let y = Point::from_raw(
                    (0..normal.dim())
                        .map(|i| anchor[i] + rng.random_range(-h..=h))
                        .collect(),
                );
                let excess = normal.dot(&y) - offset;
                if excess <= 0.0 {
                    Ok(y)
                } else {
                    // reflect through the bounding hyperplane
                    Ok(y.lincomb(1.0, normal, -2.0 * excess / nsq))
                }
            }
            ConvexSet::WholeSpace { .. } => Err(Error::SamplerUnavailable("whole space")),
        }
    }

    /// Intersection of two sets when it has a closed form here.
    ///
    /// `Ok(None)` means the intersection is not representable;
    /// `Err(EmptyIntersection)` means it is provably empty.
    pub fn intersect(&self, other: &ConvexSet) -> Result<Option<ConvexSet>> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        if self == other {
            return Ok(Some(self.clone()));
        }
        match (self, other) {
            (ConvexSet::WholeSpace { .. }, s) | (s, ConvexSet::WholeSpace { .. }) => {
                Ok(Some(s.clone()))
            }
            (
                ConvexSet::Box {
                    lower: l1,
                    upper: u1,
                },
                ConvexSet::Box {
                    lower: l2,
                    upper: u2,
                },
            ) => {
                let d = l1.dim();
                let lower: Vec<f64> = (0..d).map(|i| l1[i].max(l2[i])).collect();
                let upper: Vec<f64> = (0..d).map(|i| u1[i].min(u2[i])).collect();
                if lower.iter().zip(&upper).any(|(l, u)| l > u) {
                    return Err(Error::EmptyIntersection);
                }
                Ok(Some(ConvexSet::Box {
                    lower: Point::from_raw(lower),
                    upper: Point::from_raw(upper),
                }))
            }
            _ => Ok(None),
        }
    }
}

/// Largest value of `<x - z, y - z>` over sampled `y` in the set, with
/// `z` the projection of `x`. Nonpositive (up to rounding) exactly when the
/// projection is correct.
///
/// For [`ConvexSet::WholeSpace`] pass a bounded `region` to sample from.
pub fn projection_characterization_check<R: Rng + ?Sized>(
    set: &ConvexSet,
    x: &Point,
    n_samples: usize,
    region: Option<&ConvexSet>,
    rng: &mut R,
) -> Result<f64> {
    if n_samples == 0 {
        return Err(invalid("n_samples", "must be at least 1"));
    }
    let z = set.project(x)?;
    let sampler = match (set, region) {
        (_, Some(r)) => r,
        (ConvexSet::WholeSpace { .. }, None) => {
            return Err(Error::SamplerUnavailable("whole space"))
        }
        (s, None) => s,
    };
    let xz = x.sub(&z);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..n_samples {
        let mut y = sampler.sample(rng)?;
        if region.is_some() {
            y = set.project_unchecked(&y);
        }
        worst = worst.max(xz.dot(&y.sub(&z)));
    }
    Ok(worst)
}
