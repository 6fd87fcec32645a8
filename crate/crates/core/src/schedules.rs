//! Parameter sequences `alpha_n`, `beta_n` with symbolically known
//! asymptotic properties.
//!
//! Tags are decided from the family alone, never from numerics: divergence
//! of a series is not observable on finite data.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// An asymptotic property of a sequence in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionTag {
    /// `lim a_n = 0`
    TendsToZero,
    /// `sum a_n = inf`
    SumDiverges,
    /// `sum a_n < inf`
    Summable,
    /// `sum (1 - a_n) < inf`
    ComplementSummable,
    /// `liminf a_n (1 - a_n) > 0`
    LiminfProductPositive,
    /// User-supplied values; nothing is known.
    Unverified,
}

impl fmt::Display for ConditionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConditionTag::TendsToZero => "tends_to_zero",
            ConditionTag::SumDiverges => "sum_diverges",
            ConditionTag::Summable => "summable",
            ConditionTag::ComplementSummable => "complement_summable",
            ConditionTag::LiminfProductPositive => "liminf_product_positive",
            ConditionTag::Unverified => "unverified",
        })
    }
}

/// Which hypothesis on `beta` selects the convergence regime of the
/// two-operator scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    /// `sum (1 - beta_n) < inf`: limit in Fix(T)
    I,
    /// `sum beta_n < inf`: limit in Fix(S)
    Ii,
    /// `liminf beta_n (1 - beta_n) > 0`: limit in Fix(T) ∩ Fix(S)
    Iii,
}

impl Case {
    pub fn required_beta_tag(self) -> ConditionTag {
        match self {
            Case::I => ConditionTag::ComplementSummable,
            Case::Ii => ConditionTag::Summable,
            Case::Iii => ConditionTag::LiminfProductPositive,
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::I => "i",
            Case::Ii => "ii",
            Case::Iii => "iii",
        })
    }
}

/// A parameter sequence indexed from n = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Schedule {
    /// `n^(-theta)`, theta in (0, 1)
    Power {
        theta: f64,
    },
    /// `min(1, c / (n + a))`
    Harmonic {
        c: f64,
        a: f64,
    },
    Constant {
        v: f64,
    },
    /// `1 - (n + 1)^(-p)`, p > 1
    OneMinusInversePower {
        p: f64,
    },
    /// `(n + 1)^(-p)`, p > 1
    InversePower {
        p: f64,
    },
    /// Explicit values for n = 1, 2, ...; the last value repeats.
    Custom {
        values: Vec<f64>,
    },
}

impl Schedule {
    pub fn power(theta: f64) -> Result<Self> {
        Schedule::checked(Schedule::Power { theta })
    }

    pub fn harmonic(c: f64, a: f64) -> Result<Self> {
        Schedule::checked(Schedule::Harmonic { c, a })
    }

    pub fn constant(v: f64) -> Result<Self> {
        Schedule::checked(Schedule::Constant { v })
    }

    pub fn one_minus_inverse_power(p: f64) -> Result<Self> {
        Schedule::checked(Schedule::OneMinusInversePower { p })
    }

    pub fn inverse_power(p: f64) -> Result<Self> {
        Schedule::checked(Schedule::InversePower { p })
    }

    pub fn custom(values: Vec<f64>) -> Result<Self> {
        Schedule::checked(Schedule::Custom { values })
    }

    fn checked(s: Schedule) -> Result<Self> {
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Schedule::Power { theta } if !(theta > 0.0 && theta < 1.0) => {
                Err(invalid("theta", format!("{theta} is outside (0, 1)")))
            }
            Schedule::Harmonic { c, .. } if !(c > 0.0 && c.is_finite()) => {
                Err(invalid("c", format!("{c} must be > 0")))
            }
            Schedule::Harmonic { a, .. } if !(a >= 0.0 && a.is_finite()) => {
                Err(invalid("a", format!("{a} must be >= 0")))
            }
            Schedule::Constant { v } if !(0.0..=1.0).contains(&v) => {
                Err(invalid("v", format!("{v} is outside [0, 1]")))
            }
            Schedule::OneMinusInversePower { p } | Schedule::InversePower { p }
                if !(p > 1.0 && p.is_finite()) =>
            {
                Err(invalid("p", format!("{p} must be > 1")))
            }
            Schedule::Custom { ref values } => {
                if values.is_empty() {
                    Err(invalid("values", "must not be empty"))
                } else if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                    Err(invalid("values", format!("{v} is outside [0, 1]")))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// The n-th value, n >= 1 (n = 0 is treated as 1).
    pub fn value_at(&self, n: usize) -> f64 {
        let n = n.max(1);
        let nf = n as f64;
        match self {
            Schedule::Power { theta } => nf.powf(-theta),
            Schedule::Harmonic { c, a } => (c / (nf + a)).min(1.0),
            Schedule::Constant { v } => *v,
            Schedule::OneMinusInversePower { p } => 1.0 - (nf + 1.0).powf(-p),
            Schedule::InversePower { p } => (nf + 1.0).powf(-p),
            Schedule::Custom { values } => values[(n - 1).min(values.len() - 1)],
        }
    }

    /// The asymptotic properties provable for this family.
    pub fn tags(&self) -> BTreeSet<ConditionTag> {
        use ConditionTag::*;
        let tags: &[ConditionTag] = match *self {
            Schedule::Power { .. } | Schedule::Harmonic { .. } => &[TendsToZero, SumDiverges],
            Schedule::Constant { v: 0.0 } => &[TendsToZero, Summable],
            Schedule::Constant { v: 1.0 } => &[ComplementSummable],
            Schedule::Constant { .. } => &[LiminfProductPositive],
            Schedule::OneMinusInversePower { .. } => &[ComplementSummable],
            Schedule::InversePower { .. } => &[Summable, TendsToZero],
            Schedule::Custom { .. } => &[Unverified],
        };
        tags.iter().copied().collect()
    }

    pub fn has(&self, tag: ConditionTag) -> bool {
        self.tags().contains(&tag)
    }

    /// Upper bound on the infinite sum for summable families.
    pub fn sum_bound(&self) -> Option<f64> {
        match *self {
            Schedule::Constant { v: 0.0 } => Some(0.0),
            // sum_{m>=2} m^-p <= integral_1^inf x^-p dx
            Schedule::InversePower { p } => Some(1.0 / (p - 1.0)),
            _ => None,
        }
    }

    /// Upper bound on `sum (1 - a_n)` for complement-summable families.
    pub fn complement_sum_bound(&self) -> Option<f64> {
        match *self {
            Schedule::Constant { v: 1.0 } => Some(0.0),
            Schedule::OneMinusInversePower { p } => Some(1.0 / (p - 1.0)),
            _ => None,
        }
    }
}

/// Why a schedule pair does not meet a case's hypotheses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub schedule: &'static str,
    pub missing: ConditionTag,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} lacks {}", self.schedule, self.missing)
    }
}

/// Checks `alpha` has (C1) and (C2) and `beta` has the tag `case` needs.
pub fn validate_case(
    alpha: &Schedule,
    beta: &Schedule,
    case: Case,
) -> std::result::Result<(), Rejection> {
    validate_anchor(alpha)?;
    let needed = case.required_beta_tag();
    if !beta.has(needed) {
        return Err(Rejection {
            schedule: "beta",
            missing: needed,
        });
    }
    Ok(())
}

/// Checks `alpha` tends to zero and is not summable.
pub fn validate_anchor(alpha: &Schedule) -> std::result::Result<(), Rejection> {
    let tags = alpha.tags();
    for needed in [ConditionTag::TendsToZero, ConditionTag::SumDiverges] {
        if !tags.contains(&needed) {
            return Err(Rejection {
                schedule: "alpha",
                missing: needed,
            });
        }
    }
    Ok(())
}
