//! Randomized search for a map that is nonspreading but not nonexpansive.
//!
//! Candidates are one-dimensional piecewise-affine maps on an interval with
//! a single switching point. A candidate is kept only if the nonspreading
//! certifier passes at the confirmation sample count and the nonexpansive
//! certifier finds a violation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AffinePiece, CertificateReport, Certifier, Matrix, NonspreadingReport, Operator};
use crate::error::{invalid, Result};
use crate::sets::ConvexSet;
use crate::space::Point;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub lower: f64,
    pub upper: f64,
    pub candidates: usize,
    /// Pairs used to cheaply discard candidates.
    pub screening_pairs: usize,
    /// Pairs both certifiers must run at before a candidate is kept.
    pub confirmation_pairs: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            lower: 0.0,
            upper: 3.0,
            candidates: 2000,
            screening_pairs: 512,
            confirmation_pairs: 100_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub operator: Operator,
    pub candidates_tried: usize,
    pub nonspreading: NonspreadingReport,
    pub nonexpansive: CertificateReport,
}

fn random_piece<R: Rng>(rng: &mut R, lower: f64, upper: f64) -> AffinePiece {
    let slope = if rng.random_bool(0.5) {
        0.0
    } else {
        rng.random_range(-1.0..=1.0)
    };
    let intercept = rng.random_range(lower..=upper);
    AffinePiece {
        matrix: Matrix::diagonal(&[slope]),
        shift: Point::from_raw(vec![intercept]),
    }
}

/// Returns the first candidate that survives confirmation, if any.
pub fn search_nonspreading_not_nonexpansive(cfg: &SearchConfig) -> Result<Option<SearchOutcome>> {
    if !(cfg.lower < cfg.upper) {
        return Err(invalid("upper", "interval must be nonempty"));
    }
    let domain = ConvexSet::boxed(Point::new(vec![cfg.lower])?, Point::new(vec![cfg.upper])?)?;
    let screen = Certifier::new(cfg.screening_pairs, cfg.seed)?;
    let confirm = Certifier::new(cfg.confirmation_pairs, cfg.seed ^ 0x5eed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    for tried in 1..=cfg.candidates {
        let threshold = rng.random_range(cfg.lower..cfg.upper);
        let below = random_piece(&mut rng, cfg.lower, cfg.upper);
        let above = random_piece(&mut rng, cfg.lower, cfg.upper);
        let op = Operator::piecewise_affine(
            Point::from_raw(vec![1.0]),
            threshold,
            below,
            above,
            domain.clone(),
        )?;
        if screen.nonexpansive(&op)?.passed() || !screen.nonspreading(&op)?.passed() {
            continue;
        }
        let nonspreading = confirm.nonspreading(&op)?;
        let nonexpansive = confirm.nonexpansive(&op)?;
        if nonspreading.passed() && !nonexpansive.passed() {
            return Ok(Some(SearchOutcome {
                operator: op,
                candidates_tried: tried,
                nonspreading,
                nonexpansive,
            }));
        }
    }
    Ok(None)
}
