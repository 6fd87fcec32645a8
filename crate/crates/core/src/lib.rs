//! Anchored (Halpern-type) iterations for nonexpansive-type maps on convex
//! subsets of R^d.
//!
//! The pieces:
//!
//! - [`space`] and [`sets`]: points, inner products, closed convex sets with
//!   exact projections and samplers.
//! - [`operators`]: concrete self-maps, the averaged map
//!   `A_T = (1 - delta) I + delta T`, and sampling certifiers for the
//!   operator-class inequalities.
//! - [`schedules`]: step-size sequences with symbolic tags, checked against
//!   the hypotheses of each scheme before a run starts.
//! - [`solvers`]: the Browder path, Halpern variants and the two-operator
//!   anchored scheme, all producing an [`IterationTrace`].
//! - [`lemmas`]: finite checks of two sequence lemmas.
//! - [`config`] and [`cli`]: TOML experiments and the `halpern` binary.
//!
//! ```
//! use halpern::{halpern_classic, ConvexSet, Operator, Point, Schedule, SolverConfig};
//!
//! let domain = ConvexSet::cube(2, -1.0, 1.0).unwrap();
//! let t = Operator::identity(domain);
//! let u = Point::new(vec![0.5, 0.5]).unwrap();
//! let x1 = Point::new(vec![-0.5, 0.0]).unwrap();
//! let cfg = SolverConfig::new(u.clone(), x1, Schedule::harmonic(1.0, 1.0).unwrap())
//!     .max_iters(999);
//! let trace = halpern_classic(&t, &cfg).unwrap();
//! assert!(halpern::distance(trace.final_point(), &u).unwrap() < 1e-2);
//! ```

// `!(x > 0.0)` style checks are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod lemmas;
pub mod operators;
pub mod schedules;
pub mod sets;
pub mod solvers;
pub mod space;

pub use config::{Experiment, ExperimentConfig, Scheme};
pub use error::{Error, Result};
pub use lemmas::{mainge_indices, xu_check, ScalarSeq, XuReport};
pub use operators::{
    averaged, blend, Averaged, AveragedOperator, CertificateReport, Certifier, InequalityId,
    Matrix, Operator, OperatorClass, OperatorKind, SelfMap,
};
pub use schedules::{validate_anchor, validate_case, Case, ConditionTag, Rejection, Schedule};
pub use sets::ConvexSet;
pub use solvers::{
    browder_path, halpern_classic, halpern_segmented, halpern_theta, main_scheme, moudafi_scheme,
    predicted_limit, BrowderPoint, IterationTrace, PredictedLimit, SolverConfig, Status, TraceRow,
};
pub use space::{combine, distance, inner, norm, Point};
