//! The `run`, `certify` and `path` commands as library functions. The
//! binary only parses flags and maps results to exit codes.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::config::{CheckKind, Experiment, ExperimentConfig, Scheme, Which};
use crate::error::{Error, Result};
use crate::operators::{averaged, CertificateReport, Certifier, Operator, SelfMap};
use crate::schedules::Case;
use crate::solvers::{
    browder_path, fmt_f64, halpern_classic, halpern_segmented, halpern_theta, main_scheme,
    moudafi_scheme, predicted_limit, IterationTrace, Status,
};
use crate::space::Point;

/// Coefficient estimates at or below this count as not bounded away from 0.
pub const FIRMLY_MARGIN: f64 = 1e-6;

/// Command-line overrides shared by the commands.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
}

fn apply_overrides(mut cfg: ExperimentConfig, ov: &Overrides) -> ExperimentConfig {
    if let Some(seed) = ov.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &ov.out {
        cfg.output = Some(out.clone());
    }
    cfg
}

fn output_path(cfg: &ExperimentConfig, default: &str) -> PathBuf {
    cfg.output.clone().unwrap_or_else(|| PathBuf::from(default))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub final_n: usize,
    pub residual_t: f64,
    pub residual_s: Option<f64>,
    pub dist_to_target: Option<f64>,
    pub status: Status,
    pub output: PathBuf,
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} residual_T={:e}", self.final_n, self.residual_t)?;
        if let Some(r) = self.residual_s {
            write!(f, " residual_S={r:e}")?;
        }
        if let Some(d) = self.dist_to_target {
            write!(f, " dist_to_target={d:e}")?;
        }
        write!(f, " status={}", self.status.as_str())
    }
}

/// Runs the configured iterative scheme and returns its trace with
/// `dist_to_target` attached when a limit can be predicted.
pub fn run_experiment(exp: &Experiment) -> Result<IterationTrace> {
    let cfg = &exp.config;
    let solver = cfg.solver_config()?;
    let t = &exp.t;
    let s = exp.s.as_ref();
    let mut trace = match cfg.scheme {
        Scheme::Halpern => halpern_classic(t, &solver)?,
        Scheme::HalpernTheta => halpern_theta(t, cfg.theta.unwrap_or(f64::NAN), &solver)?,
        Scheme::Segmented => halpern_segmented(t, cfg.lambda.unwrap_or(f64::NAN), &solver)?,
        Scheme::Main => main_scheme(
            t,
            s.expect("checked by build"),
            &solver,
            cfg.case.expect("checked by build"),
        )?,
        Scheme::Moudafi => moudafi_scheme(t, s.expect("checked by build"), &solver)?,
        Scheme::Browder => {
            return Err(Error::Config(
                "scheme = \"browder\" is run by the `path` command".into(),
            ))
        }
    };
    if let Some(target) = run_target(exp) {
        trace.attach_target(&target);
    }
    Ok(trace)
}

/// The point a run is measured against: the predicted limit of the
/// two-operator scheme, or `P_Fix(T) u` for the single-operator schemes.
/// Moudafi's scheme has no predicted limit.
pub fn run_target(exp: &Experiment) -> Option<Point> {
    let u = &exp.config.anchor;
    match exp.config.scheme {
        Scheme::Main => {
            let case = exp.config.case?;
            predicted_limit(case, &exp.t, exp.s.as_ref()?, u)
                .point()
                .cloned()
        }
        Scheme::Moudafi => None,
        _ => predicted_limit(Case::I, &exp.t, &exp.t, u).point().cloned(),
    }
}

/// `run`: iterate, write the CSV trace, return the summary.
pub fn cmd_run(config: &Path, ov: &Overrides) -> Result<RunSummary> {
    let cfg = apply_overrides(ExperimentConfig::from_path(config)?, ov);
    let exp = cfg.build()?;
    let trace = run_experiment(&exp)?;
    let output = output_path(&cfg, "trace.csv");
    let mut w = BufWriter::new(File::create(&output)?);
    trace.write_csv(&mut w)?;
    w.flush()?;
    let last = trace.last();
    Ok(RunSummary {
        final_n: last.n,
        residual_t: last.residual_t,
        residual_s: last.residual_s,
        dist_to_target: last.dist_to_target,
        status: trace.status,
        output,
    })
}

/// `run --print-config`: the parsed config echoed back as TOML.
pub fn cmd_print_config(config: &Path, ov: &Overrides) -> Result<String> {
    let cfg = apply_overrides(ExperimentConfig::from_path(config)?, ov);
    cfg.build()?;
    cfg.to_toml_string()
}

#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Pass,
    Fail,
    NotApplicable,
    Skipped(String),
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowStatus::Pass => f.write_str("pass"),
            RowStatus::Fail => f.write_str("fail"),
            RowStatus::NotApplicable => f.write_str("not applicable"),
            RowStatus::Skipped(why) => write!(f, "skipped: {why}"),
        }
    }
}

/// One line of a certification report.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifyRow {
    pub id: String,
    pub samples: usize,
    pub max_violation: Option<f64>,
    pub max_relative_violation: Option<f64>,
    pub estimated_coefficient: Option<f64>,
    pub worst_pair: Option<(Point, Point)>,
    pub status: RowStatus,
}

impl CertifyRow {
    fn from_report(id: String, r: &CertificateReport) -> Self {
        CertifyRow {
            id,
            samples: r.samples_tested,
            max_violation: Some(r.max_violation),
            max_relative_violation: Some(r.max_relative_violation),
            estimated_coefficient: r.estimated_coefficient,
            worst_pair: Some(r.worst_pair.clone()),
            status: if r.passed() {
                RowStatus::Pass
            } else {
                RowStatus::Fail
            },
        }
    }

    fn skipped(id: String, why: impl Into<String>) -> Self {
        CertifyRow {
            id,
            samples: 0,
            max_violation: None,
            max_relative_violation: None,
            estimated_coefficient: None,
            worst_pair: None,
            status: RowStatus::Skipped(why.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertifyReport {
    pub rows: Vec<CertifyRow>,
    pub output: Option<PathBuf>,
}

impl CertifyReport {
    /// True unless some row failed; skipped and not-applicable rows do not count.
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.status != RowStatus::Fail)
    }

    pub fn row(&self, id: &str) -> Option<&CertifyRow> {
        self.rows.iter().find(|r| r.id == id)
    }

    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(
            w,
            "inequality_id,samples,max_violation,max_relative_violation,estimated_coefficient,status,worst_x,worst_y"
        )?;
        let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
        let pt = |p: &Point| {
            p.coords()
                .iter()
                .map(|c| fmt_f64(*c))
                .collect::<Vec<_>>()
                .join(" ")
        };
        for r in &self.rows {
            let (wx, wy) = r
                .worst_pair
                .as_ref()
                .map(|(x, y)| (pt(x), pt(y)))
                .unwrap_or_default();
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                r.id,
                r.samples,
                opt(r.max_violation),
                opt(r.max_relative_violation),
                opt(r.estimated_coefficient),
                r.status,
                wx,
                wy
            )?;
        }
        Ok(())
    }
}

fn missing_fix_or<T>(id: &str, result: Result<T>, rows: &mut Vec<CertifyRow>) -> Result<Option<T>> {
    match result {
        Ok(v) => Ok(Some(v)),
        Err(Error::MissingFixedSet) => {
            rows.push(CertifyRow::skipped(id.to_string(), "missing fixed set"));
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// Runs the requested certifiers on one operator.
pub fn certify_operator(
    op: &Operator,
    checks: &[CheckKind],
    deltas: &[f64],
    certifier: &Certifier,
) -> Result<Vec<CertifyRow>> {
    let mut rows = Vec::new();
    for check in checks {
        match check {
            CheckKind::SelfMap => {
                let r = certifier.self_map(op)?;
                rows.push(CertifyRow::from_report(
                    r.inequality.as_str().to_string(),
                    &r,
                ));
            }
            CheckKind::FixedSet => {
                if let Some(r) = missing_fix_or("fixed_set", certifier.fixed_set(op), &mut rows)? {
                    rows.push(CertifyRow::from_report(
                        r.inequality.as_str().to_string(),
                        &r,
                    ));
                }
            }
            CheckKind::Nonexpansive => {
                let r = certifier.nonexpansive(op)?;
                rows.push(CertifyRow::from_report(
                    r.inequality.as_str().to_string(),
                    &r,
                ));
            }
            CheckKind::Nonspreading => {
                let r = certifier.nonspreading(op)?;
                rows.push(CertifyRow::from_report(
                    r.definition.inequality.as_str().to_string(),
                    &r.definition,
                ));
                rows.push(CertifyRow::from_report(
                    r.characterization.inequality.as_str().to_string(),
                    &r.characterization,
                ));
                let gap_ok = r.max_relative_equivalence_gap <= crate::operators::CERTIFY_TOLERANCE;
                rows.push(CertifyRow {
                    id: "nonspreading_equivalence_gap".into(),
                    samples: r.definition.samples_tested,
                    max_violation: Some(r.max_equivalence_gap),
                    max_relative_violation: Some(r.max_relative_equivalence_gap),
                    estimated_coefficient: None,
                    worst_pair: None,
                    status: if gap_ok {
                        RowStatus::Pass
                    } else {
                        RowStatus::Fail
                    },
                });
            }
            CheckKind::QuasiNonexpansive => {
                if let Some(r) = missing_fix_or(
                    "quasi_nonexpansive",
                    certifier.quasi_nonexpansive(op),
                    &mut rows,
                )? {
                    rows.push(CertifyRow::from_report(
                        r.inequality.as_str().to_string(),
                        &r,
                    ));
                }
            }
            CheckKind::InverseStronglyMonotone => {
                let r = certifier.inverse_strongly_monotone(op)?;
                rows.push(CertifyRow::from_report(
                    r.inequality.as_str().to_string(),
                    &r,
                ));
            }
            CheckKind::IMinusS => {
                let r = certifier.i_minus_s(op)?;
                rows.push(CertifyRow::from_report(
                    r.inequality.as_str().to_string(),
                    &r,
                ));
            }
            CheckKind::QuasiFirmly => {
                for &delta in deltas {
                    let a = averaged(op.clone(), delta)?;
                    let fixed_id = format!("quasi_firmly_fixed_point[delta={delta}]");
                    if let Some(r) = missing_fix_or(
                        &fixed_id,
                        certifier.quasi_firmly_fixed_point(&a),
                        &mut rows,
                    )? {
                        rows.push(CertifyRow::from_report(fixed_id.clone(), &r));
                    }
                    let r = certifier.quasi_firmly_two_point(&a)?;
                    rows.push(CertifyRow::from_report(
                        format!("quasi_firmly_two_point[delta={delta}]"),
                        &r,
                    ));
                }
            }
            CheckKind::FirmlyCoefficient => {
                let r = certifier.firmly_coefficient(op)?;
                let mut row = CertifyRow::from_report("firmly_coefficient".into(), &r);
                row.status = match r.coefficient_bounded_away_from_zero(FIRMLY_MARGIN) {
                    None => RowStatus::NotApplicable,
                    Some(true) => RowStatus::Pass,
                    Some(false) => RowStatus::Fail,
                };
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

/// `certify`: run the configured certifiers and write the report.
pub fn cmd_certify(config: &Path, ov: &Overrides) -> Result<CertifyReport> {
    let cfg = apply_overrides(ExperimentConfig::from_path(config)?, ov);
    let exp = cfg.build()?;
    let section = cfg
        .certify
        .clone()
        .ok_or_else(|| Error::Config("field `certify`: section required".into()))?;
    let op = match section.operator {
        Which::T => &exp.t,
        Which::S => exp.s.as_ref().expect("checked by build"),
    };
    let certifier = Certifier::new(section.samples, cfg.seed)?.workers(ov.workers.unwrap_or(1));
    let rows = certify_operator(op, &section.checks, &section.deltas, &certifier)?;
    let mut report = CertifyReport { rows, output: None };
    if let Some(out) = &cfg.output {
        let mut w = BufWriter::new(File::create(out)?);
        report.write(&mut w)?;
        w.flush()?;
        report.output = Some(out.clone());
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathRow {
    pub t: f64,
    pub z: Point,
    /// `||z_t - P_Fix(T) u||` when the fixed set is known.
    pub dist_to_fix_projection: Option<f64>,
}

pub fn write_path<W: Write>(rows: &[PathRow], mut w: W) -> std::io::Result<()> {
    let d = rows.first().map(|r| r.z.dim()).unwrap_or(0);
    write!(w, "t")?;
    for i in 0..d {
        write!(w, ",z_{i}")?;
    }
    writeln!(w, ",dist_to_fix_projection")?;
    for r in rows {
        write!(w, "{}", fmt_f64(r.t))?;
        for c in r.z.coords() {
            write!(w, ",{}", fmt_f64(*c))?;
        }
        writeln!(
            w,
            ",{}",
            r.dist_to_fix_projection.map(fmt_f64).unwrap_or_default()
        )?;
    }
    Ok(())
}

/// Browder path rows for an experiment.
pub fn path_rows(exp: &Experiment) -> Result<Vec<PathRow>> {
    let cfg = &exp.config;
    let u = &cfg.anchor;
    let target = exp.t.known_fix().map(|fix| fix.project(u)).transpose()?;
    let path = browder_path(&exp.t, u, &cfg.t_values, cfg.inner_tol).map_err(|e| match e {
        Error::InvalidParameter { name, reason } => {
            Error::Config(format!("field `{name}`: {reason}"))
        }
        other => other,
    })?;
    Ok(path
        .into_iter()
        .map(|bp| PathRow {
            dist_to_fix_projection: target.as_ref().map(|p| bp.z.dist(p)),
            t: bp.t,
            z: bp.z,
        })
        .collect())
}

/// `path`: trace the Browder path and write it.
pub fn cmd_path(config: &Path, ov: &Overrides) -> Result<(Vec<PathRow>, PathBuf)> {
    let cfg = apply_overrides(ExperimentConfig::from_path(config)?, ov);
    if cfg.scheme != Scheme::Browder {
        return Err(Error::Config(
            "field `scheme`: the path command needs scheme = \"browder\"".into(),
        ));
    }
    let exp = cfg.build()?;
    let rows = path_rows(&exp)?;
    let output = output_path(&cfg, "path.csv");
    let mut w = BufWriter::new(File::create(&output)?);
    write_path(&rows, &mut w)?;
    w.flush()?;
    Ok((rows, output))
}
