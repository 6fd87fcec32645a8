//! Randomized certifiers for the operator inequalities.
//!
//! A passing report means no sampled pair violated the inequality by more
//! than [`CERTIFY_TOLERANCE`] relative to the sample's scale term. Failing
//! reports carry the worst pair for reproduction.
//!
//! Samples are drawn in fixed blocks of [`BLOCK`] pairs, each block on its
//! own ChaCha stream of the seed, so the report does not depend on the
//! number of workers.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Averaged, SelfMap};
use crate::error::{invalid, Result};
use crate::space::{scale_of, Point};

/// Relative tolerance for every certifier.
pub const CERTIFY_TOLERANCE: f64 = 1e-10;

/// Pairs with `||(x - Tx) - (y - Ty)||^2` at or below this fraction of
/// `1 + ||x - y||^2` are skipped when estimating the firmly-type coefficient.
pub const FIRMLY_DENOMINATOR_FLOOR: f64 = 1e-8;

const BLOCK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityId {
    SelfMap,
    FixedSet,
    Nonexpansive,
    NonspreadingDefinition,
    NonspreadingCharacterization,
    QuasiNonexpansive,
    InverseStronglyMonotone,
    IMinusS,
    QuasiFirmlyFixedPoint,
    QuasiFirmlyTwoPoint,
    FirmlyType,
}

impl InequalityId {
    pub fn as_str(self) -> &'static str {
        match self {
            InequalityId::SelfMap => "self_map",
            InequalityId::FixedSet => "fixed_set",
            InequalityId::Nonexpansive => "nonexpansive",
            InequalityId::NonspreadingDefinition => "nonspreading_definition",
            InequalityId::NonspreadingCharacterization => "nonspreading_characterization",
            InequalityId::QuasiNonexpansive => "quasi_nonexpansive",
            InequalityId::InverseStronglyMonotone => "inverse_strongly_monotone",
            InequalityId::IMinusS => "i_minus_s",
            InequalityId::QuasiFirmlyFixedPoint => "quasi_firmly_fixed_point",
            InequalityId::QuasiFirmlyTwoPoint => "quasi_firmly_two_point",
            InequalityId::FirmlyType => "firmly_type",
        }
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of one certifier run.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport {
    pub inequality: InequalityId,
    pub samples_tested: usize,
    /// Largest LHS - RHS over the samples.
    pub max_violation: f64,
    /// Largest (LHS - RHS) / scale, the quantity compared with the tolerance.
    pub max_relative_violation: f64,
    /// The pair achieving `max_violation`.
    pub worst_pair: (Point, Point),
    /// Infimum estimate of the firmly-type coefficient `k`; `None` when not
    /// applicable (every displacement difference vanished) or not requested.
    pub estimated_coefficient: Option<f64>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.passes_at(CERTIFY_TOLERANCE)
    }

    pub fn passes_at(&self, tol: f64) -> bool {
        self.max_relative_violation <= tol
    }

    /// Whether the estimated coefficient exceeds `margin`; `None` when no
    /// estimate exists.
    pub fn coefficient_bounded_away_from_zero(&self, margin: f64) -> Option<bool> {
        self.estimated_coefficient.map(|k| k > margin)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonspreadingReport {
    /// `2||Tx - Ty||^2 <= ||Tx - y||^2 + ||x - Ty||^2`
    pub definition: CertificateReport,
    /// `||Tx - Ty||^2 <= ||x - y||^2 + 2<x - Tx, y - Ty>`
    pub characterization: CertificateReport,
    /// Largest |definition violation - characterization violation|.
    pub max_equivalence_gap: f64,
    pub max_relative_equivalence_gap: f64,
}

impl NonspreadingReport {
    pub fn passed(&self) -> bool {
        self.definition.passed()
            && self.characterization.passed()
            && self.max_relative_equivalence_gap <= CERTIFY_TOLERANCE
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiFirmlyReport {
    pub fixed_point: CertificateReport,
    pub two_point: CertificateReport,
}

impl QuasiFirmlyReport {
    pub fn passed(&self) -> bool {
        self.fixed_point.passed() && self.two_point.passed()
    }
}

/// One evaluated sample.
#[derive(Clone, Copy)]
struct Eval {
    violation: f64,
    scale: f64,
    /// secondary quantity: equivalence gap or coefficient ratio
    extra: f64,
}

#[derive(Clone)]
struct Acc {
    count: usize,
    max_violation: f64,
    max_relative: f64,
    worst: Option<(Point, Point)>,
    max_extra: f64,
    max_extra_relative: f64,
    min_extra: f64,
    min_extra_pair: Option<(Point, Point)>,
}

impl Acc {
    fn new() -> Self {
        Acc {
            count: 0,
            max_violation: f64::NEG_INFINITY,
            max_relative: f64::NEG_INFINITY,
            worst: None,
            max_extra: f64::NEG_INFINITY,
            max_extra_relative: f64::NEG_INFINITY,
            min_extra: f64::INFINITY,
            min_extra_pair: None,
        }
    }

    fn push(&mut self, x: &Point, y: &Point, e: Eval) {
        self.count += 1;
        if e.violation > self.max_violation || self.worst.is_none() {
            self.max_violation = e.violation;
            self.worst = Some((x.clone(), y.clone()));
        }
        self.max_relative = self.max_relative.max(e.violation / e.scale);
        if !e.extra.is_nan() {
            self.max_extra = self.max_extra.max(e.extra);
            self.max_extra_relative = self.max_extra_relative.max(e.extra / e.scale);
            if e.extra < self.min_extra {
                self.min_extra = e.extra;
                self.min_extra_pair = Some((x.clone(), y.clone()));
            }
        }
    }

    // Ties keep the earlier block, so merging in block order is deterministic.
    fn merge(mut self, other: Acc) -> Acc {
        self.count += other.count;
        if other.max_violation > self.max_violation || self.worst.is_none() {
            self.max_violation = other.max_violation;
            self.worst = other.worst;
        }
        self.max_relative = self.max_relative.max(other.max_relative);
        self.max_extra = self.max_extra.max(other.max_extra);
        self.max_extra_relative = self.max_extra_relative.max(other.max_extra_relative);
        if other.min_extra < self.min_extra {
            self.min_extra = other.min_extra;
            self.min_extra_pair = other.min_extra_pair;
        }
        self
    }

    fn report(self, inequality: InequalityId) -> CertificateReport {
        CertificateReport {
            inequality,
            samples_tested: self.count,
            max_violation: self.max_violation,
            max_relative_violation: self.max_relative,
            worst_pair: self.worst.expect("at least one sample"),
            estimated_coefficient: None,
        }
    }
}

/// Sampling configuration shared by all certifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Certifier {
    samples: usize,
    seed: u64,
    workers: usize,
}

impl Certifier {
    pub fn new(samples: usize, seed: u64) -> Result<Self> {
        if samples == 0 {
            return Err(invalid("samples", "must be at least 1"));
        }
        Ok(Certifier {
            samples,
            seed,
            workers: 1,
        })
    }

    /// Shards sampling across `workers` threads. Reports are identical for
    /// any worker count.
    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn run<D, F>(&self, draw: D, eval: F) -> Result<Acc>
    where
        D: Fn(&mut ChaCha8Rng) -> Result<(Point, Point)> + Sync,
        F: Fn(&Point, &Point) -> Eval + Sync,
    {
        let blocks = self.samples.div_ceil(BLOCK);
        let run_block = |b: usize| -> Result<Acc> {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            rng.set_stream(b as u64);
            let n = BLOCK.min(self.samples - b * BLOCK);
            let mut acc = Acc::new();
            for _ in 0..n {
                let (x, y) = draw(&mut rng)?;
                acc.push(&x, &y, eval(&x, &y));
            }
            Ok(acc)
        };
        let partials: Vec<Result<Acc>> = if self.workers > 1 && blocks > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(self.workers)
                .build()
                .map_err(|e| invalid("workers", e.to_string()))?;
            pool.install(|| (0..blocks).into_par_iter().map(run_block).collect())
        } else {
            (0..blocks).map(run_block).collect()
        };
        let mut acc = Acc::new();
        for part in partials {
            acc = acc.merge(part?);
        }
        Ok(acc)
    }

    fn run_pairs<M, F>(&self, op: &M, eval: F) -> Result<Acc>
    where
        M: SelfMap + ?Sized,
        F: Fn(&Point, &Point) -> Eval + Sync,
    {
        let region = op.sampler()?;
        self.run(|rng| Ok((region.sample(rng)?, region.sample(rng)?)), eval)
    }

    fn run_fixed<M, F>(&self, op: &M, eval: F) -> Result<Acc>
    where
        M: SelfMap + ?Sized,
        F: Fn(&Point, &Point) -> Eval + Sync,
    {
        let region = op.sampler()?;
        let fix = op.fix_sampler()?;
        self.run(|rng| Ok((region.sample(rng)?, fix.sample(rng)?)), eval)
    }

    /// Distance of `Tx` from the domain.
    pub fn self_map<M: SelfMap + ?Sized>(&self, op: &M) -> Result<CertificateReport> {
        let region = op.sampler()?;
        let acc = self.run(
            |rng| {
                let x = region.sample(rng)?;
                Ok((x.clone(), x))
            },
            |x, _| {
                let tx = op.apply_unchecked(x);
                Eval {
                    violation: op.domain().distance_to(&tx).unwrap_or(f64::INFINITY),
                    scale: 1.0 + x.norm_sq().sqrt(),
                    extra: f64::NAN,
                }
            },
        )?;
        Ok(acc.report(InequalityId::SelfMap))
    }

    /// `||Tz - z||` over sampled `z` in the known fixed-point set.
    pub fn fixed_set<M: SelfMap + ?Sized>(&self, op: &M) -> Result<CertificateReport> {
        let fix = op.fix_sampler()?;
        let acc = self.run(
            |rng| {
                let z = fix.sample(rng)?;
                Ok((z.clone(), z))
            },
            |z, _| Eval {
                violation: op.apply_unchecked(z).dist(z),
                scale: 1.0 + z.norm_sq().sqrt(),
                extra: f64::NAN,
            },
        )?;
        Ok(acc.report(InequalityId::FixedSet))
    }

    /// `||Tx - Ty|| <= ||x - y||`
    pub fn nonexpansive<M: SelfMap + ?Sized>(&self, op: &M) -> Result<CertificateReport> {
        let acc = self.run_pairs(op, |x, y| {
            let tx = op.apply_unchecked(x);
            let ty = op.apply_unchecked(y);
            Eval {
                violation: tx.dist(&ty) - x.dist(y),
                scale: 1.0
                    + [x, y, &tx, &ty]
                        .iter()
                        .map(|p| p.norm_sq().sqrt())
                        .sum::<f64>(),
                extra: f64::NAN,
            }
        })?;
        Ok(acc.report(InequalityId::Nonexpansive))
    }

    /// Both nonspreading forms on the same samples, plus the largest gap
    /// between their violation quantities (identically equal in exact
    /// arithmetic).
    pub fn nonspreading<M: SelfMap + ?Sized>(&self, op: &M) -> Result<NonspreadingReport> {
        let def = self.run_pairs(op, |x, y| {
            let (d, c, s) = nonspreading_violations(op, x, y);
            Eval {
                violation: d,
                scale: s,
                extra: (d - c).abs(),
            }
        })?;
        let chr = self.run_pairs(op, |x, y| {
            let (_, c, s) = nonspreading_violations(op, x, y);
            Eval {
                violation: c,
                scale: s,
                extra: f64::NAN,
            }
        })?;
        let gap = def.max_extra;
        let gap_rel = def.max_extra_relative;
        Ok(NonspreadingReport {
            definition: def.report(InequalityId::NonspreadingDefinition),
            characterization: chr.report(InequalityId::NonspreadingCharacterization),
            max_equivalence_gap: gap,
            max_relative_equivalence_gap: gap_rel,
        })
    }

    /// `||Tx - p|| <= ||x - p||` for `p` in the known fixed-point set.
    pub fn quasi_nonexpansive<M: SelfMap + ?Sized>(&self, op: &M) -> Result<CertificateReport> {
        let acc = self.run_fixed(op, |x, p| {
            let tx = op.apply_unchecked(x);
            Eval {
                violation: tx.dist(p) - x.dist(p),
                scale: 1.0 + [x, p, &tx].iter().map(|v| v.norm_sq().sqrt()).sum::<f64>(),
                extra: f64::NAN,
            }
        })?;
        Ok(acc.report(InequalityId::QuasiNonexpansive))
    }

    /// `1/2 ||(I-T)x - (I-T)y||^2 <= <x - y, (I-T)x - (I-T)y>`
    pub fn inverse_strongly_monotone<M: SelfMap + ?Sized>(
        &self,
        op: &M,
    ) -> Result<CertificateReport> {
        let acc = self.run_pairs(op, |x, y| {
            let tx = op.apply_unchecked(x);
            let ty = op.apply_unchecked(y);
            let dx = x.sub(&tx);
            let dy = y.sub(&ty);
            let diff = dx.sub(&dy);
            Eval {
                violation: 0.5 * diff.norm_sq() - x.sub(y).dot(&diff),
                scale: scale_of(&[x, y, &tx, &ty]),
                extra: f64::NAN,
            }
        })?;
        Ok(acc.report(InequalityId::InverseStronglyMonotone))
    }

    /// `||(I-S)x - (I-S)y||^2 <= <x - y, (I-S)x - (I-S)y>
    ///     + 1/2 (||x - Sx||^2 + ||y - Sy||^2)`
    pub fn i_minus_s<M: SelfMap + ?Sized>(&self, op: &M) -> Result<CertificateReport> {
        let acc = self.run_pairs(op, |x, y| {
            let sx = op.apply_unchecked(x);
            let sy = op.apply_unchecked(y);
            let dx = x.sub(&sx);
            let dy = y.sub(&sy);
            let diff = dx.sub(&dy);
            let rhs = x.sub(y).dot(&diff) + 0.5 * (dx.norm_sq() + dy.norm_sq());
            Eval {
                violation: diff.norm_sq() - rhs,
                scale: scale_of(&[x, y, &sx, &sy]),
                extra: f64::NAN,
            }
        })?;
        Ok(acc.report(InequalityId::IMinusS))
    }

    /// `||A x - p||^2 <= ||x - p||^2 - (1 - delta) ||x - A x||^2` for `p`
    /// in the known fixed-point set.
    pub fn quasi_firmly_fixed_point<M: SelfMap>(
        &self,
        a: &Averaged<M>,
    ) -> Result<CertificateReport> {
        let k = 1.0 - a.delta();
        let acc = self.run_fixed(a, |x, p| {
            let ax = a.apply_unchecked(x);
            Eval {
                violation: ax.dist_sq(p) - x.dist_sq(p) + k * x.dist_sq(&ax),
                scale: scale_of(&[x, p, &ax]),
                extra: f64::NAN,
            }
        })?;
        Ok(acc.report(InequalityId::QuasiFirmlyFixedPoint))
    }

    /// `||Ax - Ay||^2 <= ||x - y||^2 + (2/delta) <x - Ax, y - Ay>
    ///     - (1 - delta) ||(x - Ax) - (y - Ay)||^2`
    pub fn quasi_firmly_two_point<M: SelfMap>(&self, a: &Averaged<M>) -> Result<CertificateReport> {
        let delta = a.delta();
        let acc = self.run_pairs(a, |x, y| {
            let ax = a.apply_unchecked(x);
            let ay = a.apply_unchecked(y);
            let dx = x.sub(&ax);
            let dy = y.sub(&ay);
            let rhs = x.dist_sq(y) + (2.0 / delta) * dx.dot(&dy) - (1.0 - delta) * dx.dist_sq(&dy);
            Eval {
                violation: ax.dist_sq(&ay) - rhs,
                scale: scale_of(&[x, y, &ax, &ay]) / delta,
                extra: f64::NAN,
            }
        })?;
        Ok(acc.report(InequalityId::QuasiFirmlyTwoPoint))
    }

    /// Both quasi-firmly parts; errors when the base has no known fixed set.
    pub fn quasi_firmly<M: SelfMap>(&self, a: &Averaged<M>) -> Result<QuasiFirmlyReport> {
        Ok(QuasiFirmlyReport {
            fixed_point: self.quasi_firmly_fixed_point(a)?,
            two_point: self.quasi_firmly_two_point(a)?,
        })
    }

    /// Estimates the largest `k` with
    /// `||Tx - Ty||^2 <= ||x - y||^2 - k ||(x - Tx) - (y - Ty)||^2` on the
    /// samples, as the infimum of
    /// `(||x - y||^2 - ||Tx - Ty||^2) / ||(x - Tx) - (y - Ty)||^2`.
    ///
    /// `max_violation` reports the `k = 0` form; `worst_pair` is the pair
    /// attaining the infimum when one exists.
    pub fn firmly_coefficient<M: SelfMap + ?Sized>(&self, op: &M) -> Result<CertificateReport> {
        let acc = self.run_pairs(op, |x, y| {
            let tx = op.apply_unchecked(x);
            let ty = op.apply_unchecked(y);
            let num = x.dist_sq(y) - tx.dist_sq(&ty);
            let den = x.sub(&tx).dist_sq(&y.sub(&ty));
            let ratio = if den > FIRMLY_DENOMINATOR_FLOOR * (1.0 + x.dist_sq(y)) {
                num / den
            } else {
                f64::NAN
            };
            Eval {
                violation: -num,
                scale: scale_of(&[x, y, &tx, &ty]),
                extra: ratio,
            }
        })?;
        let estimate = acc.min_extra.is_finite().then_some(acc.min_extra);
        let pair = acc.min_extra_pair.clone();
        let mut report = acc.report(InequalityId::FirmlyType);
        report.estimated_coefficient = estimate;
        if let Some(pair) = pair {
            report.worst_pair = pair;
        }
        Ok(report)
    }
}

/// (definition violation, characterization violation, scale)
fn nonspreading_violations<M: SelfMap + ?Sized>(op: &M, x: &Point, y: &Point) -> (f64, f64, f64) {
    let tx = op.apply_unchecked(x);
    let ty = op.apply_unchecked(y);
    let t_gap = tx.dist_sq(&ty);
    let def = 2.0 * t_gap - (tx.dist_sq(y) + x.dist_sq(&ty));
    let chr = t_gap - (x.dist_sq(y) + 2.0 * x.sub(&tx).dot(&y.sub(&ty)));
    (def, chr, scale_of(&[x, y, &tx, &ty]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{averaged, Matrix, Operator};
    use crate::sets::ConvexSet;
    use std::f64::consts::FRAC_PI_2;

    fn ball(r: f64) -> ConvexSet {
        ConvexSet::ball(Point::zeros(2), r).unwrap()
    }

    fn projection() -> Operator {
        Operator::projection(ConvexSet::cube(2, -0.5, 0.5).unwrap(), ball(3.0)).unwrap()
    }

    #[test]
    fn rejects_zero_samples() {
        assert!(Certifier::new(0, 1).is_err());
    }

    #[test]
    fn identity_is_trivially_certified() {
        let c = Certifier::new(2000, 4).unwrap();
        let id = Operator::identity(ball(1.0));
        assert!(c.nonexpansive(&id).unwrap().max_violation <= 1e-15);
        let ns = c.nonspreading(&id).unwrap();
        assert!(ns.definition.max_violation <= 0.0);
        assert!(ns.characterization.max_violation <= 1e-15);
        assert_eq!(c.inverse_strongly_monotone(&id).unwrap().max_violation, 0.0);
        assert_eq!(c.i_minus_s(&id).unwrap().max_violation, 0.0);
        let firm = c.firmly_coefficient(&id).unwrap();
        assert_eq!(firm.estimated_coefficient, None);
        assert_eq!(firm.coefficient_bounded_away_from_zero(0.0), None);
    }

    #[test]
    fn averaged_identity_quasi_firmly_is_tight() {
        let c = Certifier::new(500, 4).unwrap();
        let a = averaged(Operator::identity(ball(1.0)), 0.4).unwrap();
        let r = c.quasi_firmly(&a).unwrap();
        assert!(r.fixed_point.max_violation.abs() <= 1e-14);
        assert!(r.two_point.max_violation.abs() <= 1e-14);
    }

    #[test]
    fn projection_passes_everything() {
        let c = Certifier::new(4000, 9).unwrap();
        let op = projection();
        assert!(c.self_map(&op).unwrap().passed());
        assert!(c.fixed_set(&op).unwrap().passed());
        assert!(c.nonexpansive(&op).unwrap().passed());
        assert!(c.nonspreading(&op).unwrap().passed());
        assert!(c.quasi_nonexpansive(&op).unwrap().passed());
        assert!(c.inverse_strongly_monotone(&op).unwrap().passed());
        assert!(c.i_minus_s(&op).unwrap().passed());
        let k = c
            .firmly_coefficient(&op)
            .unwrap()
            .estimated_coefficient
            .unwrap();
        assert!(k >= 1.0 - 1e-6, "{k}");
    }

    #[test]
    fn averaged_projection_firmly_coefficient() {
        let c = Certifier::new(4000, 21).unwrap();
        for delta in [0.1, 0.5, 0.9] {
            let a = averaged(projection(), delta).unwrap();
            let k = c
                .firmly_coefficient(&a)
                .unwrap()
                .estimated_coefficient
                .unwrap();
            assert!(k >= (1.0 - delta) / delta - 1e-6, "delta {delta}: {k}");
            assert!(c.quasi_nonexpansive(&a).unwrap().passed());
        }
    }

    #[test]
    fn rotation_is_isometric() {
        let c = Certifier::new(3000, 2).unwrap();
        let rot = Operator::rotation(FRAC_PI_2, ball(2.0)).unwrap();
        let r = c.nonexpansive(&rot).unwrap();
        assert!(r.passed());
        assert!(r.max_violation.abs() <= 1e-12);
        assert!(c.quasi_nonexpansive(&rot).unwrap().passed());
        assert!(c.inverse_strongly_monotone(&rot).unwrap().passed());
    }

    #[test]
    fn expansive_map_is_caught() {
        let c = Certifier::new(2000, 5).unwrap();
        let op =
            Operator::affine(Matrix::scaled_identity(2, 2.0), Point::zeros(2), ball(1.0)).unwrap();
        let r = c.nonexpansive(&op).unwrap();
        assert!(!r.passed());
        assert!(r.max_violation > 0.1);
        let (x, y) = &r.worst_pair;
        let recomputed = op.apply(x).unwrap().dist(&op.apply(y).unwrap()) - x.dist(y);
        assert_eq!(recomputed, r.max_violation);
        assert!(!c.nonspreading(&op).unwrap().definition.passed());
    }

    #[test]
    fn missing_fixed_set_is_an_error() {
        let c = Certifier::new(10, 0).unwrap();
        let op = Operator::affine(Matrix::identity(2), Point::zeros(2), ball(1.0)).unwrap();
        assert_eq!(
            c.quasi_nonexpansive(&op),
            Err(crate::Error::MissingFixedSet)
        );
        let a = averaged(op, 0.5).unwrap();
        assert!(c.quasi_firmly(&a).is_err());
        assert!(c.quasi_firmly_two_point(&a).is_ok());
    }

    #[test]
    fn reports_are_deterministic_and_worker_independent() {
        let op = projection();
        let base = Certifier::new(5000, 77).unwrap();
        let a = base.nonspreading(&op).unwrap();
        let b = base.nonspreading(&op).unwrap();
        let c = base.workers(4).nonspreading(&op).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.definition.samples_tested, 5000);
    }
}
