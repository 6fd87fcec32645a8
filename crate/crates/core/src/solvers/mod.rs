//! Anchored fixed-point iterations.
//!
//! Iterates are indexed from `n = 1`. A run with `max_iters = N` performs
//! `N` updates and its trace ends at `x_{N+1}`, unless the residual stop
//! fires first. Row `n` records `alpha_n` and `beta_n`, the weights used to
//! move from `x_n` to `x_{n+1}`.

mod browder;
mod limit;
mod trace;

use crate::error::{invalid, Error, Result};
use crate::operators::SelfMap;
use crate::schedules::{validate_anchor, validate_case, Case, Schedule};
use crate::space::Point;

pub use browder::{browder_path, BrowderPoint, MIN_PATH_T};
pub use limit::{predicted_limit, PredictedLimit};
pub use trace::{fmt_f64, IterationTrace, Status, TraceRow};

use trace::Recorder;

/// Tolerance for the anchor and start lying in the domain.
pub const START_TOLERANCE: f64 = 1e-9;
/// An iterate farther than this from the domain aborts the run.
pub const ESCAPE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// The anchor `u`.
    pub anchor: Point,
    /// The starting point `x_1`.
    pub start: Point,
    pub alpha: Schedule,
    /// Ignored by single-operator schemes.
    pub beta: Schedule,
    pub delta: f64,
    /// Averaging parameter for `S` in two-operator schemes; `delta` when unset.
    pub delta_s: Option<f64>,
    pub max_iters: usize,
    /// Residual stop; 0 disables it.
    pub stop_residual: f64,
    pub trace_stride: usize,
    /// Run even when the schedules do not carry the hypotheses the scheme
    /// needs.
    pub override_checks: bool,
}

impl SolverConfig {
    pub fn new(anchor: Point, start: Point, alpha: Schedule) -> Self {
        SolverConfig {
            anchor,
            start,
            alpha,
            beta: Schedule::Constant { v: 0.5 },
            delta: 0.5,
            delta_s: None,
            max_iters: 1000,
            stop_residual: 0.0,
            trace_stride: 1,
            override_checks: false,
        }
    }

    pub fn beta(mut self, beta: Schedule) -> Self {
        self.beta = beta;
        self
    }

    pub fn delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn max_iters(mut self, n: usize) -> Self {
        self.max_iters = n;
        self
    }

    pub fn stop_residual(mut self, r: f64) -> Self {
        self.stop_residual = r;
        self
    }

    pub fn trace_stride(mut self, stride: usize) -> Self {
        self.trace_stride = stride;
        self
    }

    pub fn override_checks(mut self, yes: bool) -> Self {
        self.override_checks = yes;
        self
    }

    fn validate<M: SelfMap + ?Sized>(&self, op: &M) -> Result<()> {
        if self.max_iters == 0 {
            return Err(invalid("max_iters", "must be at least 1"));
        }
        if self.trace_stride == 0 {
            return Err(invalid("trace_stride", "must be at least 1"));
        }
        if !(self.stop_residual >= 0.0) {
            return Err(invalid("stop_residual", "must be >= 0"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(invalid(
                "delta",
                format!("{} is outside (0, 1)", self.delta),
            ));
        }
        if let Some(ds) = self.delta_s {
            if !(ds > 0.0 && ds < 1.0) {
                return Err(invalid("delta_s", format!("{ds} is outside (0, 1)")));
            }
        }
        self.alpha.validate()?;
        self.beta.validate()?;
        let domain = op.domain();
        for (which, p) in [("anchor", &self.anchor), ("start", &self.start)] {
            p.ensure_dim(domain.dim())?;
            let distance = domain.distance_to(p)?;
            if distance > START_TOLERANCE {
                return Err(Error::OutsideDomain { which, distance });
            }
        }
        Ok(())
    }

    fn check_anchor_schedule(&self) -> Result<()> {
        if self.override_checks {
            return Ok(());
        }
        validate_anchor(&self.alpha).map_err(|r| Error::Schedule(r.to_string()))
    }
}

/// What one evaluation at `x_n` produced.
struct Step {
    residual_t: f64,
    residual_s: Option<f64>,
    stop_value: f64,
    next: Point,
}

fn iterate<M, F>(cfg: &SolverConfig, op: &M, mut eval: F) -> Result<IterationTrace>
where
    M: SelfMap + ?Sized,
    F: FnMut(&Point, f64, f64) -> Step,
{
    let domain = op.domain();
    let mut rec = Recorder::new(cfg.trace_stride);
    let mut x = cfg.start.clone();
    let stop_enabled = cfg.stop_residual > 0.0;
    let last_n = cfg.max_iters + 1;
    for n in 1..=last_n {
        let alpha = cfg.alpha.value_at(n);
        let beta = cfg.beta.value_at(n);
        let step = eval(&x, alpha, beta);
        let row = || TraceRow {
            n,
            x: x.clone(),
            residual_t: step.residual_t,
            residual_s: step.residual_s,
            dist_to_target: None,
            alpha,
            beta,
        };
        let converged = stop_enabled && step.stop_value <= cfg.stop_residual;
        if converged || n == last_n {
            let status = if converged {
                Status::Converged
            } else {
                Status::MaxItersReached
            };
            return Ok(rec.finish(row(), status));
        }
        rec.offer(row, n);
        let distance = domain.distance_to(&step.next)?;
        if distance > ESCAPE_TOLERANCE || !step.next.is_finite() {
            return Err(Error::DomainEscape { n: n + 1, distance });
        }
        x = step.next;
    }
    unreachable!("loop returns at n = max_iters + 1")
}

/// `x_{n+1} = alpha_n u + (1 - alpha_n) T x_n`
pub fn halpern_classic<M: SelfMap + ?Sized>(op: &M, cfg: &SolverConfig) -> Result<IterationTrace> {
    cfg.validate(op)?;
    cfg.check_anchor_schedule()?;
    let u = &cfg.anchor;
    iterate(cfg, op, |x, alpha, _| {
        let tx = op.apply_unchecked(x);
        let residual = x.dist(&tx);
        Step {
            residual_t: residual,
            residual_s: None,
            stop_value: residual,
            next: u.lincomb(alpha, &tx, 1.0 - alpha),
        }
    })
}

/// Halpern's scheme with `alpha_n = n^(-theta)`, theta in (0, 1).
pub fn halpern_theta<M: SelfMap + ?Sized>(
    op: &M,
    theta: f64,
    cfg: &SolverConfig,
) -> Result<IterationTrace> {
    let cfg = SolverConfig {
        alpha: Schedule::power(theta)?,
        ..cfg.clone()
    };
    halpern_classic(op, &cfg)
}

/// `x_{n+1} = alpha_n u + (1 - alpha_n)(lambda x_n + (1 - lambda) T x_n)`
pub fn halpern_segmented<M: SelfMap + ?Sized>(
    op: &M,
    lambda: f64,
    cfg: &SolverConfig,
) -> Result<IterationTrace> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(invalid("lambda", format!("{lambda} is outside (0, 1)")));
    }
    cfg.validate(op)?;
    cfg.check_anchor_schedule()?;
    let u = &cfg.anchor;
    iterate(cfg, op, |x, alpha, _| {
        let tx = op.apply_unchecked(x);
        let residual = x.dist(&tx);
        let inner = x.lincomb(lambda, &tx, 1.0 - lambda);
        Step {
            residual_t: residual,
            residual_s: None,
            stop_value: residual,
            next: u.lincomb(alpha, &inner, 1.0 - alpha),
        }
    })
}

fn ensure_shared_domain<A, B>(t: &A, s: &B) -> Result<()>
where
    A: SelfMap + ?Sized,
    B: SelfMap + ?Sized,
{
    if t.dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: t.dim(),
            found: s.dim(),
        });
    }
    if t.domain() != s.domain() {
        return Err(invalid("domain", "T and S must share the domain"));
    }
    Ok(())
}

/// `x_{n+1} = alpha_n u + (1 - alpha_n)[beta_n A_T x_n + (1 - beta_n) A_S x_n]`
/// with `A_T`, `A_S` the averaged maps at `cfg.delta` (and `cfg.delta_s`
/// for `A_S` when set).
///
/// T and S are each evaluated once per iteration. The stop test uses
/// `||x - Tx||` in case i, `||x - Sx||` in case ii and their maximum in
/// case iii.
pub fn main_scheme<A, B>(t: &A, s: &B, cfg: &SolverConfig, case: Case) -> Result<IterationTrace>
where
    A: SelfMap + ?Sized,
    B: SelfMap + ?Sized,
{
    ensure_shared_domain(t, s)?;
    cfg.validate(t)?;
    if !cfg.override_checks {
        validate_case(&cfg.alpha, &cfg.beta, case).map_err(|r| Error::Schedule(r.to_string()))?;
    }
    if case == Case::Iii {
        if let (Some(ft), Some(fs)) = (t.known_fix(), s.known_fix()) {
            // propagates EmptyIntersection; unrepresentable is fine here
            ft.intersect(fs)?;
        }
    }
    let u = &cfg.anchor;
    let delta = cfg.delta;
    let delta_s = cfg.delta_s.unwrap_or(delta);
    iterate(cfg, t, |x, alpha, beta| {
        let tx = t.apply_unchecked(x);
        let sx = s.apply_unchecked(x);
        let res_t = x.dist(&tx);
        let res_s = x.dist(&sx);
        let a_t = x.lincomb(1.0 - delta, &tx, delta);
        let a_s = x.lincomb(1.0 - delta_s, &sx, delta_s);
        let blended = a_t.lincomb(beta, &a_s, 1.0 - beta);
        Step {
            residual_t: res_t,
            residual_s: Some(res_s),
            stop_value: match case {
                Case::I => res_t,
                Case::Ii => res_s,
                Case::Iii => res_t.max(res_s),
            },
            next: u.lincomb(alpha, &blended, 1.0 - alpha),
        }
    })
}

/// `x_{n+1} = (1 - alpha_n) x_n + alpha_n [beta_n S x_n + (1 - beta_n) T x_n]`
///
/// No anchor; `cfg.anchor` must still lie in the domain but is unused.
pub fn moudafi_scheme<A, B>(t: &A, s: &B, cfg: &SolverConfig) -> Result<IterationTrace>
where
    A: SelfMap + ?Sized,
    B: SelfMap + ?Sized,
{
    ensure_shared_domain(t, s)?;
    cfg.validate(t)?;
    iterate(cfg, t, |x, alpha, beta| {
        let tx = t.apply_unchecked(x);
        let sx = s.apply_unchecked(x);
        let res_t = x.dist(&tx);
        let res_s = x.dist(&sx);
        let inner = sx.lincomb(beta, &tx, 1.0 - beta);
        Step {
            residual_t: res_t,
            residual_s: Some(res_s),
            stop_value: res_t.max(res_s),
            next: x.lincomb(1.0 - alpha, &inner, alpha),
        }
    })
}
