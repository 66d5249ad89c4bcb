use serde::{Deserialize, Serialize};

/// The outcome of checking one inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`; negative values mean the bound is violated before tolerance.
    pub slack: f64,
    pub tolerance: f64,
    pub holds: bool,
    /// The inequality is a consequence of a premise that was false here, so it
    /// holds vacuously regardless of `lhs` and `rhs`.
    pub vacuous: bool,
    pub context: String,
}

impl BoundReport {
    /// `holds` iff `lhs ≤ rhs + tolerance`.
    pub fn check(context: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self {
            lhs,
            rhs,
            slack: rhs - lhs,
            tolerance,
            holds: lhs <= rhs + tolerance,
            vacuous: false,
            context: context.into(),
        }
    }

    pub fn vacuous(context: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            slack: rhs - lhs,
            tolerance: 0.0,
            holds: true,
            vacuous: true,
            context: context.into(),
        }
    }
}
