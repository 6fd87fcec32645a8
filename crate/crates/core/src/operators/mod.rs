//! Self-maps of a convex domain, the averaged transform
//! `A_T = (1 - delta) I + delta T`, and sampling certifiers for the
//! operator-class inequalities.

mod certify;
mod search;

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::sets::ConvexSet;
use crate::space::Point;

pub use certify::{
    CertificateReport, Certifier, InequalityId, NonspreadingReport, QuasiFirmlyReport,
    CERTIFY_TOLERANCE, FIRMLY_DENOMINATOR_FLOOR,
};
pub use search::{search_nonspreading_not_nonexpansive, SearchConfig, SearchOutcome};

/// The class an operator is claimed to belong to. Claims are not trusted;
/// the certifiers check them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorClass {
    Nonexpansive,
    Nonspreading,
    QuasiNonexpansive,
    Generic,
}

/// A self-map of a convex domain in R^d.
///
/// Implementors provide [`SelfMap::apply_unchecked`]; callers outside hot
/// loops use [`SelfMap::apply`], which checks the dimension.
pub trait SelfMap: Sync {
    /// Applies the map to a point of the right dimension.
    fn apply_unchecked(&self, x: &Point) -> Point;

    fn domain(&self) -> &ConvexSet;

    /// The exact fixed-point set, when analytically known.
    fn known_fix(&self) -> Option<&ConvexSet>;

    /// Explicit bounded region to draw samples from when the domain is
    /// the whole space.
    fn sampling_region(&self) -> Option<&ConvexSet> {
        None
    }

    fn dim(&self) -> usize {
        self.domain().dim()
    }

    fn apply(&self, x: &Point) -> Result<Point> {
        x.ensure_dim(self.dim())?;
        Ok(self.apply_unchecked(x))
    }

    /// Region that domain samples are drawn from.
    fn sampler(&self) -> Result<&ConvexSet> {
        if let Some(region) = self.sampling_region() {
            return Ok(region);
        }
        match self.domain() {
            ConvexSet::WholeSpace { .. } => Err(Error::SamplerUnavailable("whole space")),
            d => Ok(d),
        }
    }

    /// Region that fixed points are drawn from.
    fn fix_sampler(&self) -> Result<&ConvexSet> {
        match self.known_fix() {
            None => Err(Error::MissingFixedSet),
            Some(ConvexSet::WholeSpace { .. }) => self.sampler(),
            Some(fix) => Ok(fix),
        }
    }
}

/// Dense row-major square matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn identity(n: usize) -> Self {
        Matrix::diagonal(&vec![1.0; n])
    }

    pub fn scaled_identity(n: usize, s: f64) -> Self {
        Matrix::diagonal(&vec![s; n])
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut data = vec![0.0; n * n];
        for (i, d) in diag.iter().enumerate() {
            data[i * n + i] = *d;
        }
        Matrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(invalid("matrix", "must have at least one row"));
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(invalid("matrix", "must be square"));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(invalid("matrix", "entries must be finite"));
            }
            data.extend(row);
        }
        Ok(Matrix { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry in row `i`, column `j` (0-based).
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    fn mul(&self, x: &Point) -> Point {
        Point::from_raw(
            self.data
                .chunks(self.n)
                .map(|row| row.iter().zip(x.coords()).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }
}

impl TryFrom<Vec<Vec<f64>>> for Matrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Matrix::from_rows(rows)
    }
}

impl From<Matrix> for Vec<Vec<f64>> {
    fn from(m: Matrix) -> Self {
        m.data.chunks(m.n).map(|r| r.to_vec()).collect()
    }
}

/// `x -> Mx + c`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffinePiece {
    pub matrix: Matrix,
    pub shift: Point,
}

impl AffinePiece {
    fn eval(&self, x: &Point) -> Point {
        self.matrix.mul(x).add(&self.shift)
    }

    fn validate(&self, dim: usize) -> Result<()> {
        if self.matrix.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.matrix.dim(),
            });
        }
        self.shift.ensure_dim(dim)
    }
}

/// The concrete built-in maps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorKind {
    Identity,
    Projection {
        set: ConvexSet,
    },
    /// Planar rotation applied to consecutive coordinate pairs.
    Rotation {
        angle: f64,
    },
    /// `Mx + c`, projected back onto the domain when it leaves it.
    Affine(AffinePiece),
    /// `below` on `{<normal, x> <= offset}`, `above` elsewhere, each
    /// projected back onto the domain.
    PiecewiseAffine {
        normal: Point,
        offset: f64,
        below: AffinePiece,
        above: AffinePiece,
    },
}

/// A built-in self-map together with its domain and what is known about it.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    kind: OperatorKind,
    domain: ConvexSet,
    claimed_class: OperatorClass,
    known_fix: Option<ConvexSet>,
    sampling_region: Option<ConvexSet>,
}

impl Operator {
    pub fn identity(domain: ConvexSet) -> Self {
        Operator {
            kind: OperatorKind::Identity,
            known_fix: Some(domain.clone()),
            domain,
            claimed_class: OperatorClass::Nonexpansive,
            sampling_region: None,
        }
    }

    /// `P_C` on `domain`, with `Fix = C`.
    pub fn projection(set: ConvexSet, domain: ConvexSet) -> Result<Self> {
        set.validate()?;
        domain.validate()?;
        if set.dim() != domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.dim(),
                found: set.dim(),
            });
        }
        Ok(Operator {
            kind: OperatorKind::Projection { set: set.clone() },
            known_fix: Some(set),
            domain,
            claimed_class: OperatorClass::Nonspreading,
            sampling_region: None,
        })
    }

    /// Rotation by `angle` on a ball centred at the origin (even dimension,
    /// rotating coordinate pairs).
    pub fn rotation(angle: f64, domain: ConvexSet) -> Result<Self> {
        if !angle.is_finite() {
            return Err(invalid("angle", "must be finite"));
        }
        let dim = match &domain {
            ConvexSet::Ball { center, .. } if center.norm_sq() == 0.0 => center.dim(),
            _ => {
                return Err(invalid(
                    "domain",
                    "rotation needs a ball centred at the origin",
                ))
            }
        };
        domain.validate()?;
        if dim % 2 != 0 {
            return Err(invalid(
                "domain",
                format!("rotation needs an even dimension, got {dim}"),
            ));
        }
        // a full turn fixes everything
        let residue = angle.rem_euclid(TAU);
        let full_turn = residue.min(TAU - residue) < 1e-15;
        let known_fix = if full_turn {
            domain.clone()
        } else {
            ConvexSet::singleton(&Point::zeros(dim))
        };
        Ok(Operator {
            kind: OperatorKind::Rotation { angle },
            known_fix: Some(known_fix),
            domain,
            claimed_class: OperatorClass::Nonexpansive,
            sampling_region: None,
        })
    }

    /// `x -> P_domain(Mx + c)`. Claimed class is Generic until certified;
    /// attach a fixed-point set with [`Operator::with_known_fix`].
    pub fn affine(matrix: Matrix, shift: Point, domain: ConvexSet) -> Result<Self> {
        domain.validate()?;
        let piece = AffinePiece { matrix, shift };
        piece.validate(domain.dim())?;
        Ok(Operator {
            kind: OperatorKind::Affine(piece),
            domain,
            claimed_class: OperatorClass::Generic,
            known_fix: None,
            sampling_region: None,
        })
    }

    pub fn piecewise_affine(
        normal: Point,
        offset: f64,
        below: AffinePiece,
        above: AffinePiece,
        domain: ConvexSet,
    ) -> Result<Self> {
        domain.validate()?;
        normal.ensure_dim(domain.dim())?;
        if !(normal.norm_sq() > 0.0) || !offset.is_finite() {
            return Err(invalid(
                "normal",
                "switching hyperplane must be nondegenerate",
            ));
        }
        below.validate(domain.dim())?;
        above.validate(domain.dim())?;
        Ok(Operator {
            kind: OperatorKind::PiecewiseAffine {
                normal,
                offset,
                below,
                above,
            },
            domain,
            claimed_class: OperatorClass::Generic,
            known_fix: None,
            sampling_region: None,
        })
    }

    /// Builds from a declarative description.
    pub fn from_kind(kind: OperatorKind, domain: ConvexSet) -> Result<Self> {
        match kind {
            OperatorKind::Identity => {
                domain.validate()?;
                Ok(Operator::identity(domain))
            }
            OperatorKind::Projection { set } => Operator::projection(set, domain),
            OperatorKind::Rotation { angle } => Operator::rotation(angle, domain),
            OperatorKind::Affine(AffinePiece { matrix, shift }) => {
                Operator::affine(matrix, shift, domain)
            }
            OperatorKind::PiecewiseAffine {
                normal,
                offset,
                below,
                above,
            } => Operator::piecewise_affine(normal, offset, below, above, domain),
        }
    }

    pub fn with_known_fix(mut self, fix: ConvexSet) -> Result<Self> {
        fix.validate()?;
        if fix.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: fix.dim(),
            });
        }
        self.known_fix = Some(fix);
        Ok(self)
    }

    pub fn with_claimed_class(mut self, class: OperatorClass) -> Self {
        self.claimed_class = class;
        self
    }

    pub fn with_sampling_region(mut self, region: ConvexSet) -> Result<Self> {
        region.validate()?;
        if region.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: region.dim(),
            });
        }
        self.sampling_region = Some(region);
        Ok(self)
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    pub fn claimed_class(&self) -> OperatorClass {
        self.claimed_class
    }
}

impl SelfMap for Operator {
    fn apply_unchecked(&self, x: &Point) -> Point {
        match &self.kind {
            OperatorKind::Identity => x.clone(),
            OperatorKind::Projection { set } => set.project_unchecked(x),
            OperatorKind::Rotation { angle } => {
                let (s, c) = angle.sin_cos();
                let v = x.coords();
                let mut out = Vec::with_capacity(v.len());
                for pair in v.chunks(2) {
                    out.push(c * pair[0] - s * pair[1]);
                    out.push(s * pair[0] + c * pair[1]);
                }
                Point::from_raw(out)
            }
            OperatorKind::Affine(piece) => self.domain.project_unchecked(&piece.eval(x)),
            OperatorKind::PiecewiseAffine {
                normal,
                offset,
                below,
                above,
            } => {
                let piece = if normal.dot(x) <= *offset {
                    below
                } else {
                    above
                };
                self.domain.project_unchecked(&piece.eval(x))
            }
        }
    }

    fn domain(&self) -> &ConvexSet {
        &self.domain
    }

    fn known_fix(&self) -> Option<&ConvexSet> {
        self.known_fix.as_ref()
    }

    fn sampling_region(&self) -> Option<&ConvexSet> {
        self.sampling_region.as_ref()
    }
}

/// The averaged map `(1 - delta) x + delta T x`, `delta` in (0, 1).
/// Shares the fixed points of `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct Averaged<M = Operator> {
    base: M,
    delta: f64,
}

pub type AveragedOperator = Averaged<Operator>;

/// Wraps `base` as `A_T = (1 - delta) I + delta T`.
pub fn averaged<M: SelfMap>(base: M, delta: f64) -> Result<Averaged<M>> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid("delta", format!("{delta} is outside (0, 1)")));
    }
    Ok(Averaged { base, delta })
}

impl<M: SelfMap> Averaged<M> {
    pub fn base(&self) -> &M {
        &self.base
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Averages an already computed `T x`; saves a second evaluation of `T`.
    pub fn from_base_value(&self, x: &Point, tx: &Point) -> Point {
        x.lincomb(1.0 - self.delta, tx, self.delta)
    }
}

impl<M: SelfMap> SelfMap for Averaged<M> {
    fn apply_unchecked(&self, x: &Point) -> Point {
        self.from_base_value(x, &self.base.apply_unchecked(x))
    }

    fn domain(&self) -> &ConvexSet {
        self.base.domain()
    }

    fn known_fix(&self) -> Option<&ConvexSet> {
        self.base.known_fix()
    }

    fn sampling_region(&self) -> Option<&ConvexSet> {
        self.base.sampling_region()
    }
}

/// `beta A_T x + (1 - beta) A_S x`, beta in [0, 1].
pub fn blend<A: SelfMap + ?Sized, B: SelfMap + ?Sized>(
    a_t: &A,
    a_s: &B,
    beta: f64,
    x: &Point,
) -> Result<Point> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(invalid("beta", format!("{beta} is outside [0, 1]")));
    }
    if a_t.dim() != a_s.dim() {
        return Err(Error::DimensionMismatch {
            expected: a_t.dim(),
            found: a_s.dim(),
        });
    }
    let at = a_t.apply(x)?;
    let as_ = a_s.apply_unchecked(x);
    Ok(at.lincomb(beta, &as_, 1.0 - beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn p(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    fn unit_ball(d: usize) -> ConvexSet {
        ConvexSet::ball(Point::zeros(d), 1.0).unwrap()
    }

    fn close(a: &Point, b: &Point, tol: f64) -> bool {
        a.dist(b) <= tol
    }

    #[test]
    fn projection_operator() {
        let op = Operator::projection(unit_ball(2), ConvexSet::ball(Point::zeros(2), 5.0).unwrap())
            .unwrap();
        assert_eq!(op.apply(&p(&[2.0, 0.0])).unwrap(), p(&[1.0, 0.0]));
        assert_eq!(op.known_fix(), Some(&unit_ball(2)));
        assert_eq!(op.claimed_class(), OperatorClass::Nonspreading);
        let z = p(&[0.3, -0.4]);
        assert_eq!(op.apply(&z).unwrap(), z);
    }

    #[test]
    fn projection_dimension_mismatch() {
        assert!(Operator::projection(unit_ball(2), unit_ball(3)).is_err());
        let op = Operator::projection(unit_ball(2), unit_ball(2)).unwrap();
        assert!(op.apply(&Point::zeros(3)).is_err());
    }

    #[test]
    fn rotation_operator() {
        let op =
            Operator::rotation(FRAC_PI_2, ConvexSet::ball(Point::zeros(2), 2.0).unwrap()).unwrap();
        assert!(close(
            &op.apply(&p(&[1.0, 0.0])).unwrap(),
            &p(&[0.0, 1.0]),
            1e-15
        ));
        assert_eq!(op.apply(&Point::zeros(2)).unwrap(), Point::zeros(2));
        assert_eq!(
            op.known_fix(),
            Some(&ConvexSet::singleton(&Point::zeros(2)))
        );
    }

    #[test]
    fn rotation_rejects_odd_dimension_and_offcentre_ball() {
        assert!(Operator::rotation(1.0, unit_ball(3)).is_err());
        let shifted = ConvexSet::ball(p(&[1.0, 0.0]), 1.0).unwrap();
        assert!(Operator::rotation(1.0, shifted).is_err());
        assert!(Operator::rotation(1.0, ConvexSet::cube(2, -1.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn block_rotation_in_four_dimensions() {
        let op = Operator::rotation(PI, unit_ball(4)).unwrap();
        let y = op.apply(&p(&[0.1, 0.2, 0.3, 0.4])).unwrap();
        assert!(close(&y, &p(&[-0.1, -0.2, -0.3, -0.4]), 1e-15));
    }

    #[test]
    fn affine_examples() {
        let d = 2;
        let half = Operator::affine(
            Matrix::scaled_identity(d, 0.5),
            Point::zeros(d),
            unit_ball(d),
        )
        .unwrap();
        assert_eq!(half.apply(&p(&[0.4, -0.2])).unwrap(), p(&[0.2, -0.1]));
        assert_eq!(half.apply(&Point::zeros(2)).unwrap(), Point::zeros(2));
        assert_eq!(half.claimed_class(), OperatorClass::Generic);

        let ident = Operator::affine(Matrix::identity(d), Point::zeros(d), unit_ball(d)).unwrap();
        let x = p(&[0.3, 0.6]);
        assert_eq!(ident.apply(&x).unwrap(), x);

        // reflection across the x-axis fixes the segment [-1, 1] x {0}
        let refl = Operator::affine(
            Matrix::diagonal(&[1.0, -1.0]),
            Point::zeros(d),
            unit_ball(d),
        )
        .unwrap();
        for t in [-1.0, -0.5, 0.0, 0.25, 1.0] {
            let z = p(&[t, 0.0]);
            assert_eq!(refl.apply(&z).unwrap(), z);
        }
        assert_eq!(refl.apply(&p(&[0.2, 0.5])).unwrap(), p(&[0.2, -0.5]));
    }

    #[test]
    fn affine_output_is_clipped_to_domain() {
        let op = Operator::affine(
            Matrix::scaled_identity(2, 2.0),
            Point::zeros(2),
            unit_ball(2),
        )
        .unwrap();
        let y = op.apply(&p(&[0.8, 0.0])).unwrap();
        assert_eq!(y, p(&[1.0, 0.0]));
    }

    #[test]
    fn affine_dimension_checks() {
        assert!(Operator::affine(Matrix::identity(3), Point::zeros(2), unit_ball(2)).is_err());
        assert!(Operator::affine(Matrix::identity(2), Point::zeros(3), unit_ball(2)).is_err());
        assert!(Matrix::from_rows(vec![vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn averaged_examples() {
        let ident = averaged(Operator::identity(unit_ball(2)), 0.5).unwrap();
        let x = p(&[0.3, 0.1]);
        assert_eq!(ident.apply(&x).unwrap(), x);

        let rot = Operator::rotation(PI, unit_ball(2)).unwrap();
        let a = averaged(rot, 0.5).unwrap();
        assert!(close(
            &a.apply(&p(&[1.0, 0.0])).unwrap(),
            &Point::zeros(2),
            1e-15
        ));

        let proj =
            Operator::projection(unit_ball(2), ConvexSet::ball(Point::zeros(2), 3.0).unwrap())
                .unwrap();
        let a = averaged(proj, 0.3).unwrap();
        assert_eq!(a.known_fix(), Some(&unit_ball(2)));
        let z = p(&[0.5, 0.5]);
        assert_eq!(a.apply(&z).unwrap(), z);
        let outside = p(&[2.0, 0.0]);
        assert!(a.apply(&outside).unwrap().dist(&outside) > 0.1);
    }

    #[test]
    fn averaged_rejects_bad_delta() {
        for delta in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(averaged(Operator::identity(unit_ball(2)), delta).is_err());
        }
    }

    #[test]
    fn blend_examples() {
        let big = ConvexSet::ball(Point::zeros(2), 4.0).unwrap();
        let a_t = averaged(
            Operator::projection(unit_ball(2), big.clone()).unwrap(),
            0.5,
        )
        .unwrap();
        let box_set = ConvexSet::cube(2, 0.0, 1.0).unwrap();
        let a_s = averaged(Operator::projection(box_set, big).unwrap(), 0.5).unwrap();
        let x = p(&[2.0, -1.5]);
        assert_eq!(blend(&a_t, &a_s, 1.0, &x).unwrap(), a_t.apply(&x).unwrap());
        assert_eq!(blend(&a_t, &a_s, 0.0, &x).unwrap(), a_s.apply(&x).unwrap());
        let same = blend(&a_t, &a_t, 0.5, &x).unwrap();
        assert!(close(&same, &a_t.apply(&x).unwrap(), 1e-15));
        assert!(blend(&a_t, &a_s, 1.2, &x).is_err());
    }

    #[test]
    fn operator_kind_roundtrips_through_toml() {
        let kind = OperatorKind::Affine(AffinePiece {
            matrix: Matrix::diagonal(&[1.0, -1.0]),
            shift: p(&[0.0, 0.5]),
        });
        #[derive(Serialize, Deserialize)]
        struct Wrap {
            op: OperatorKind,
        }
        let text = toml::to_string(&Wrap { op: kind.clone() }).unwrap();
        let back: Wrap = toml::from_str(&text).unwrap();
        assert_eq!(back.op, kind);
    }
}
