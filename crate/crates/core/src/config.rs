//! Declarative experiment files (TOML).
//!
//! One file describes one experiment. Unknown keys are rejected.
//!
//! ```toml
//! dimension = 2
//! scheme = "halpern"
//! anchor = [1.0, 0.0]
//! start = [0.0, 1.0]
//! max_iters = 1000
//!
//! [domain]
//! kind = "ball"
//! center = [0.0, 0.0]
//! radius = 2.0
//!
//! [operator_t.map]
//! kind = "rotation"
//! angle = 1.5707963267948966
//!
//! [alpha]
//! family = "harmonic"
//! c = 1.0
//! a = 1.0
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{Operator, OperatorClass, OperatorKind};
use crate::schedules::{Case, Schedule};
use crate::sets::ConvexSet;
use crate::solvers::SolverConfig;
use crate::space::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Browder,
    Halpern,
    HalpernTheta,
    Segmented,
    Main,
    Moudafi,
}

/// An operator description: the map plus optional facts about it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpec {
    pub map: OperatorKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub known_fix: Option<ConvexSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling_region: Option<ConvexSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claimed_class: Option<OperatorClass>,
}

impl OperatorSpec {
    pub fn build(&self, domain: &ConvexSet) -> Result<Operator> {
        let mut op = Operator::from_kind(self.map.clone(), domain.clone())?;
        if let Some(fix) = &self.known_fix {
            op = op.with_known_fix(fix.clone())?;
        }
        if let Some(region) = &self.sampling_region {
            op = op.with_sampling_region(region.clone())?;
        }
        if let Some(class) = self.claimed_class {
            op = op.with_claimed_class(class);
        }
        Ok(op)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    SelfMap,
    FixedSet,
    Nonexpansive,
    Nonspreading,
    QuasiNonexpansive,
    InverseStronglyMonotone,
    IMinusS,
    QuasiFirmly,
    FirmlyCoefficient,
}

impl CheckKind {
    pub const ALL: [CheckKind; 9] = [
        CheckKind::SelfMap,
        CheckKind::FixedSet,
        CheckKind::Nonexpansive,
        CheckKind::Nonspreading,
        CheckKind::QuasiNonexpansive,
        CheckKind::InverseStronglyMonotone,
        CheckKind::IMinusS,
        CheckKind::QuasiFirmly,
        CheckKind::FirmlyCoefficient,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    T,
    S,
}

fn default_checks() -> Vec<CheckKind> {
    CheckKind::ALL.to_vec()
}

fn default_samples() -> usize {
    10_000
}

fn default_deltas() -> Vec<f64> {
    vec![0.5]
}

fn default_target() -> Which {
    Which::T
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifySection {
    #[serde(default = "default_target")]
    pub operator: Which,
    #[serde(default = "default_checks")]
    pub checks: Vec<CheckKind>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Averaging parameters for the quasi-firmly checks.
    #[serde(default = "default_deltas")]
    pub deltas: Vec<f64>,
}

fn default_delta() -> f64 {
    0.5
}

fn default_max_iters() -> usize {
    1000
}

fn default_stride() -> usize {
    1
}

fn default_inner_tol() -> f64 {
    1e-10
}

fn default_t_values() -> Vec<f64> {
    vec![1e-1, 1e-2, 1e-3]
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dimension: usize,
    pub scheme: Scheme,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<Case>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Run even if the schedules lack the hypotheses for the scheme.
    #[serde(default, rename = "override", skip_serializing_if = "is_false")]
    pub override_checks: bool,
    pub anchor: Point,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<Point>,
    #[serde(default = "default_delta")]
    pub delta: f64,
    /// Averaging parameter for S when it should differ from `delta`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_s: Option<f64>,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default)]
    pub stop_residual: f64,
    #[serde(default = "default_stride")]
    pub trace_stride: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default = "default_t_values")]
    pub t_values: Vec<f64>,
    #[serde(default = "default_inner_tol")]
    pub inner_tol: f64,
    pub domain: ConvexSet,
    pub operator_t: OperatorSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator_s: Option<OperatorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Schedule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Schedule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certify: Option<CertifySection>,
}

/// A config resolved into library objects.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub domain: ConvexSet,
    pub t: Operator,
    pub s: Option<Operator>,
}

fn field(name: &str, err: impl std::fmt::Display) -> Error {
    Error::Config(format!("field `{name}`: {err}"))
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Resolves and cross-checks every section.
    pub fn build(&self) -> Result<Experiment> {
        let d = self.dimension;
        if d == 0 {
            return Err(field("dimension", "must be at least 1"));
        }
        self.domain.validate().map_err(|e| field("domain", e))?;
        if self.domain.dim() != d {
            return Err(field(
                "domain",
                format!("has dimension {}, expected {d}", self.domain.dim()),
            ));
        }
        self.anchor.ensure_dim(d).map_err(|e| field("anchor", e))?;
        if let Some(start) = &self.start {
            start.ensure_dim(d).map_err(|e| field("start", e))?;
        }
        let t = self
            .operator_t
            .build(&self.domain)
            .map_err(|e| field("operator_t", e))?;
        let s = self
            .operator_s
            .as_ref()
            .map(|spec| spec.build(&self.domain))
            .transpose()
            .map_err(|e| field("operator_s", e))?;

        let needs_s = matches!(self.scheme, Scheme::Main | Scheme::Moudafi);
        if needs_s && s.is_none() {
            return Err(field("operator_s", "required by this scheme"));
        }
        if self.scheme == Scheme::Main && self.case.is_none() {
            return Err(field("case", "required by scheme = \"main\""));
        }
        if self.scheme == Scheme::HalpernTheta && self.theta.is_none() {
            return Err(field("theta", "required by scheme = \"halpern_theta\""));
        }
        if self.scheme == Scheme::Segmented && self.lambda.is_none() {
            return Err(field("lambda", "required by scheme = \"segmented\""));
        }
        if let Some(alpha) = &self.alpha {
            alpha.validate().map_err(|e| field("alpha", e))?;
        }
        if let Some(beta) = &self.beta {
            beta.validate().map_err(|e| field("beta", e))?;
        }
        if let Some(c) = &self.certify {
            if c.samples == 0 {
                return Err(field("certify.samples", "must be at least 1"));
            }
            if let Some(bad) = c.deltas.iter().find(|d| !(**d > 0.0 && **d < 1.0)) {
                return Err(field("certify.deltas", format!("{bad} is outside (0, 1)")));
            }
            if c.operator == Which::S && s.is_none() {
                return Err(field("certify.operator", "operator_s is not configured"));
            }
        }
        Ok(Experiment {
            config: self.clone(),
            domain: self.domain.clone(),
            t,
            s,
        })
    }

    /// Solver settings for iterative schemes.
    pub fn solver_config(&self) -> Result<SolverConfig> {
        let start = self
            .start
            .clone()
            .ok_or_else(|| field("start", "required by iterative schemes"))?;
        let alpha = match (&self.alpha, self.scheme) {
            (Some(a), _) => a.clone(),
            (None, Scheme::HalpernTheta) => {
                Schedule::power(self.theta.unwrap_or(f64::NAN)).map_err(|e| field("theta", e))?
            }
            (None, _) => return Err(field("alpha", "required by iterative schemes")),
        };
        let mut cfg = SolverConfig::new(self.anchor.clone(), start, alpha)
            .delta(self.delta)
            .max_iters(self.max_iters)
            .stop_residual(self.stop_residual)
            .trace_stride(self.trace_stride)
            .override_checks(self.override_checks);
        cfg.delta_s = self.delta_s;
        if let Some(beta) = &self.beta {
            cfg = cfg.beta(beta.clone());
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_BOX: &str = r#"
dimension = 2
scheme = "main"
case = "iii"
anchor = [2.0, 2.0]
start = [-1.0, -1.0]
max_iters = 100

[domain]
kind = "box"
lower = [-3.0, -3.0]
upper = [3.0, 3.0]

[operator_t.map]
kind = "projection"
set = { kind = "box", lower = [0.0, 0.0], upper = [1.0, 1.0] }

[operator_s.map]
kind = "projection"
set = { kind = "box", lower = [0.5, 0.5], upper = [1.5, 1.5] }

[alpha]
family = "harmonic"
c = 1.0
a = 1.0

[beta]
family = "constant"
v = 0.5
"#;

    #[test]
    fn parses_and_builds() {
        let cfg = ExperimentConfig::from_toml_str(TWO_BOX).unwrap();
        assert_eq!(cfg.scheme, Scheme::Main);
        assert_eq!(cfg.case, Some(Case::Iii));
        assert_eq!(cfg.delta, 0.5);
        let exp = cfg.build().unwrap();
        assert!(exp.s.is_some());
        let solver = cfg.solver_config().unwrap();
        assert_eq!(solver.max_iters, 100);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = TWO_BOX.replace("max_iters = 100", "max_iters = 100\nmax_iter = 3");
        let err = ExperimentConfig::from_toml_str(&text).unwrap_err();
        assert!(err.to_string().contains("max_iter"), "{err}");

        let text = TWO_BOX.replace("v = 0.5", "v = 0.5\nw = 1.0");
        assert!(ExperimentConfig::from_toml_str(&text).is_err());

        let text = TWO_BOX.replace(
            "kind = \"projection\"\nset",
            "kind = \"projection\"\nradius = 1.0\nset",
        );
        assert!(ExperimentConfig::from_toml_str(&text).is_err());
    }

    #[test]
    fn error_mentions_line() {
        let text = TWO_BOX.replace("max_iters = 100", "max_iters = \"many\"");
        let err = ExperimentConfig::from_toml_str(&text)
            .unwrap_err()
            .to_string();
        assert!(err.contains("line"), "{err}");
    }

    #[test]
    fn semantic_errors_name_the_field() {
        let text = TWO_BOX.replace("anchor = [2.0, 2.0]", "anchor = [2.0, 2.0, 2.0]");
        let err = ExperimentConfig::from_toml_str(&text)
            .unwrap()
            .build()
            .unwrap_err();
        assert!(err.to_string().contains("`anchor`"), "{err}");

        let text = TWO_BOX.replace("case = \"iii\"\n", "");
        let err = ExperimentConfig::from_toml_str(&text)
            .unwrap()
            .build()
            .unwrap_err();
        assert!(err.to_string().contains("`case`"), "{err}");

        let text = TWO_BOX
            .replace("radius", "r")
            .replace("upper = [3.0, 3.0]", "upper = [-4.0, 3.0]");
        let err = ExperimentConfig::from_toml_str(&text)
            .unwrap()
            .build()
            .unwrap_err();
        assert!(err.to_string().contains("`domain`"), "{err}");
    }

    #[test]
    fn print_config_roundtrip() {
        let cfg = ExperimentConfig::from_toml_str(TWO_BOX).unwrap();
        let echoed = cfg.to_toml_string().unwrap();
        let back = ExperimentConfig::from_toml_str(&echoed).unwrap();
        assert_eq!(back, cfg);
    }
}
