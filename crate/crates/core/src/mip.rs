//! Minimal mixed-integer linear model with LP-format text export.
//!
//! Used as the export target for the reaction-network integer program and
//! the codon-selection MIP; evaluation helpers let tests enumerate feasible
//! assignments without an external solver.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    Integer { lower: i64, upper: i64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MipVar {
    pub name: String,
    pub kind: VarKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    LessEq,
    GreaterEq,
    Equal,
}

impl CmpOp {
    fn lp_token(self) -> &'static str {
        match self {
            CmpOp::LessEq => "<=",
            CmpOp::GreaterEq => ">=",
            CmpOp::Equal => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint {
    pub name: String,
    pub terms: Vec<(usize, f64)>,
    pub op: CmpOp,
    pub rhs: f64,
}

/// Linear objective + linear constraints over binary/integer variables.
#[derive(Debug, Clone, PartialEq)]
pub struct MipModel {
    name: String,
    vars: Vec<MipVar>,
    objective: Vec<(usize, f64)>,
    constraints: Vec<LinearConstraint>,
}

impl MipModel {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), vars: Vec::new(), objective: Vec::new(), constraints: Vec::new() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn add_var(&mut self, name: impl Into<String>, kind: VarKind) -> usize {
        self.vars.push(MipVar { name: name.into(), kind });
        self.vars.len() - 1
    }

    pub fn add_objective_term(&mut self, var: usize, coeff: f64) {
        if coeff != 0.0 {
            self.objective.push((var, coeff));
        }
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(usize, f64)>,
        op: CmpOp,
        rhs: f64,
    ) {
        self.constraints.push(LinearConstraint { name: name.into(), terms, op, rhs });
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[MipVar] {
        &self.vars
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn objective_value(&self, values: &[f64]) -> Result<f64> {
        if values.len() != self.vars.len() {
            return Err(Error::DimensionMismatch { expected: self.vars.len(), got: values.len() });
        }
        Ok(self.objective.iter().map(|&(v, c)| c * values[v]).sum())
    }

    /// Checks bounds, integrality, and every linear constraint.
    pub fn is_feasible(&self, values: &[f64], tol: f64) -> Result<bool> {
        if values.len() != self.vars.len() {
            return Err(Error::DimensionMismatch { expected: self.vars.len(), got: values.len() });
        }
        for (var, &v) in self.vars.iter().zip(values) {
            if (v - v.round()).abs() > tol {
                return Ok(false);
            }
            let (lo, hi) = match var.kind {
                VarKind::Binary => (0.0, 1.0),
                VarKind::Integer { lower, upper } => (lower as f64, upper as f64),
            };
            if v < lo - tol || v > hi + tol {
                return Ok(false);
            }
        }
        for con in &self.constraints {
            let lhs: f64 = con.terms.iter().map(|&(v, c)| c * values[v]).sum();
            let ok = match con.op {
                CmpOp::LessEq => lhs <= con.rhs + tol,
                CmpOp::GreaterEq => lhs >= con.rhs - tol,
                CmpOp::Equal => (lhs - con.rhs).abs() <= tol,
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// LP-format text: objective, subject-to, bounds, binary/general sections.
    pub fn to_lp_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("\\ {}\n", self.name));
        out.push_str("Minimize\n obj:");
        out.push_str(&format_terms(&self.objective, &self.vars));
        out.push('\n');

        out.push_str("Subject To\n");
        for con in &self.constraints {
            out.push_str(&format!(
                " {}:{} {} {}\n",
                con.name,
                format_terms(&con.terms, &self.vars),
                con.op.lp_token(),
                con.rhs
            ));
        }

        let integers: Vec<&MipVar> = self
            .vars
            .iter()
            .filter(|v| matches!(v.kind, VarKind::Integer { .. }))
            .collect();
        if !integers.is_empty() {
            out.push_str("Bounds\n");
            for v in &integers {
                if let VarKind::Integer { lower, upper } = v.kind {
                    out.push_str(&format!(" {lower} <= {} <= {upper}\n", v.name));
                }
            }
        }

        let binaries: Vec<&str> = self
            .vars
            .iter()
            .filter(|v| v.kind == VarKind::Binary)
            .map(|v| v.name.as_str())
            .collect();
        if !binaries.is_empty() {
            out.push_str("Binary\n");
            for chunk in binaries.chunks(10) {
                out.push_str(&format!(" {}\n", chunk.join(" ")));
            }
        }
        if !integers.is_empty() {
            out.push_str("Generals\n");
            for chunk in integers.chunks(10) {
                let names: Vec<&str> = chunk.iter().map(|v| v.name.as_str()).collect();
                out.push_str(&format!(" {}\n", names.join(" ")));
            }
        }
        out.push_str("End\n");
        out
    }
}

fn format_terms(terms: &[(usize, f64)], vars: &[MipVar]) -> String {
    if terms.is_empty() {
        return " 0".to_string();
    }
    let mut out = String::new();
    for (pos, &(v, c)) in terms.iter().enumerate() {
        let mag = c.abs();
        if c < 0.0 {
            out.push_str(" -");
        } else if pos > 0 {
            out.push_str(" +");
        } else {
            out.push(' ');
        }
        out.push_str(&format!(" {mag} {}", vars[v].name));
        // LP lines can get unwieldy; fold every eight terms.
        if (pos + 1) % 8 == 0 && pos + 1 < terms.len() {
            out.push_str("\n   ");
        }
    }
    out
}
