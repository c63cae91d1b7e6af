//! Constraints attached to a QUBO model.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubo::{Assignment, FEASIBILITY_TOL};

/// Comparison operator of a constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstraintSense {
    LessEq,
    GreaterEq,
    Equal,
    /// Exactly one variable of the support set equals 1.
    OneHot,
}

impl ConstraintSense {
    pub fn token(self) -> &'static str {
        match self {
            ConstraintSense::LessEq => "<=",
            ConstraintSense::GreaterEq => ">=",
            ConstraintSense::Equal => "=",
            ConstraintSense::OneHot => "one-hot",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        match token {
            "<=" => Some(ConstraintSense::LessEq),
            ">=" => Some(ConstraintSense::GreaterEq),
            "=" => Some(ConstraintSense::Equal),
            "one-hot" => Some(ConstraintSense::OneHot),
            _ => None,
        }
    }
}

/// A (possibly quadratic) constraint `sum C_ij x_i x_j  <sense>  rhs`.
///
/// Linear constraints use diagonal entries only. One-hot constraints are a
/// first-class sense: unit diagonal coefficients with rhs 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    coeffs: BTreeMap<(usize, usize), f64>,
    sense: ConstraintSense,
    rhs: f64,
    label: String,
}

impl Constraint {
    pub fn new(
        coeffs: impl IntoIterator<Item = ((usize, usize), f64)>,
        sense: ConstraintSense,
        rhs: f64,
        label: impl Into<String>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for ((i, j), c) in coeffs {
            if c == 0.0 {
                continue;
            }
            let key = if i <= j { (i, j) } else { (j, i) };
            *map.entry(key).or_insert(0.0) += c;
        }
        map.retain(|_, c| *c != 0.0);
        if map.is_empty() {
            return Err(Error::InvalidConstraint(
                "constraint has an empty variable set".into(),
            ));
        }
        if sense == ConstraintSense::OneHot {
            let shape_ok =
                map.iter().all(|(&(i, j), &c)| i == j && c == 1.0) && rhs == 1.0;
            if !shape_ok {
                return Err(Error::InvalidConstraint(
                    "one-hot constraints require unit diagonal coefficients and rhs 1".into(),
                ));
            }
        }
        Ok(Self { coeffs: map, sense, rhs, label: label.into() })
    }

    /// Linear constraint over single variables.
    pub fn linear(
        terms: &[(usize, f64)],
        sense: ConstraintSense,
        rhs: f64,
        label: impl Into<String>,
    ) -> Result<Self> {
        Self::new(terms.iter().map(|&(i, c)| ((i, i), c)), sense, rhs, label)
    }

    /// Exactly-one constraint over the given variables.
    pub fn one_hot(vars: &[usize], label: impl Into<String>) -> Result<Self> {
        Self::new(
            vars.iter().map(|&i| ((i, i), 1.0)),
            ConstraintSense::OneHot,
            1.0,
            label,
        )
    }

    pub fn sense(&self) -> ConstraintSense {
        self.sense
    }

    pub fn rhs(&self) -> f64 {
        self.rhs
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn coeffs(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.coeffs.iter().map(|(&k, &v)| (k, v))
    }

    pub fn num_coeffs(&self) -> usize {
        self.coeffs.len()
    }

    /// True when every coefficient sits on the diagonal.
    pub fn is_linear(&self) -> bool {
        self.coeffs.keys().all(|&(i, j)| i == j)
    }

    /// The support set `V_p`: indices with a nonzero coefficient.
    pub fn variables(&self) -> BTreeSet<usize> {
        let mut vars = BTreeSet::new();
        for &(i, j) in self.coeffs.keys() {
            vars.insert(i);
            vars.insert(j);
        }
        vars
    }

    pub fn lhs(&self, x: &Assignment) -> f64 {
        let mut total = 0.0;
        for (&(i, j), &c) in &self.coeffs {
            if x.get(i) && (i == j || x.get(j)) {
                total += c;
            }
        }
        total
    }

    /// Violation magnitude of a left-hand-side value: `|lhs - rhs|` for
    /// equalities and one-hot, one-sided excess for inequalities.
    pub fn violation(&self, lhs: f64) -> f64 {
        match self.sense {
            ConstraintSense::Equal | ConstraintSense::OneHot => (lhs - self.rhs).abs(),
            ConstraintSense::LessEq => (lhs - self.rhs).max(0.0),
            ConstraintSense::GreaterEq => (self.rhs - lhs).max(0.0),
        }
    }

    pub fn check(&self, x: &Assignment) -> ConstraintCheck {
        let lhs = self.lhs(x);
        let violation = self.violation(lhs);
        ConstraintCheck {
            label: self.label.clone(),
            sense: self.sense,
            lhs,
            rhs: self.rhs,
            violation,
            satisfied: violation <= FEASIBILITY_TOL,
        }
    }

    /// True when this constraint and `other` form a `>= r` / `<= r`
    /// complementary pair over identical coefficients, which together state
    /// an equality.
    pub fn is_complement_of(&self, other: &Constraint) -> bool {
        let senses = (self.sense, other.sense);
        let complementary = matches!(
            senses,
            (ConstraintSense::LessEq, ConstraintSense::GreaterEq)
                | (ConstraintSense::GreaterEq, ConstraintSense::LessEq)
        );
        complementary && self.rhs == other.rhs && self.coeffs == other.coeffs
    }
}

/// Outcome of checking one constraint against an assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintCheck {
    pub label: String,
    pub sense: ConstraintSense,
    pub lhs: f64,
    pub rhs: f64,
    pub violation: f64,
    pub satisfied: bool,
}

/// Per-constraint feasibility of an assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub checks: Vec<ConstraintCheck>,
}

impl FeasibilityReport {
    /// Checks that failed.
    pub fn violations(&self) -> impl Iterator<Item = &ConstraintCheck> {
        self.checks.iter().filter(|c| !c.satisfied)
    }

    pub fn total_violation(&self) -> f64 {
        self.checks.iter().map(|c| c.violation).sum()
    }
}
