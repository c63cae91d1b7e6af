//! Sparse upper-triangular QUBO models with labeled term groups and
//! attached constraints.
//!
//! A model stores `Q_ij` coefficients for `i <= j`: diagonal entries are
//! linear terms (`x^2 = x` for binaries), off-diagonal entries are quadratic
//! couplings. Terms can carry a group label (`"H_f"`, `"penalty"`, ...) so
//! structure metrics can attribute connectivity to individual cost
//! contributions. Several groups may contribute to the same `(i, j)` entry;
//! energy evaluation always uses the summed coefficient.

mod constraint;
mod embed;
mod text;

pub use constraint::{Constraint, ConstraintCheck, ConstraintSense, FeasibilityReport};
pub use embed::MultiplierRule;

use std::collections::BTreeMap;

use serde::de::{SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Tolerance applied to constraint residuals when deciding feasibility.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// A binary variable assignment.
///
/// Ordering is lexicographic over the bit sequence, which is the tie-break
/// order used by the exact solvers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn zeros(len: usize) -> Self {
        Self { bits: vec![false; len] }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// Builds an assignment from 0/1 integers; anything nonzero reads as 1.
    pub fn from_ints(ints: &[u8]) -> Self {
        Self { bits: ints.iter().map(|&v| v != 0).collect() }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] = !self.bits[i];
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    /// Indices of bits set to 1.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }
}

impl Serialize for Assignment {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.bits.len()))?;
        for &b in &self.bits {
            seq.serialize_element(&(b as u8))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Assignment {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct BitsVisitor;
        impl<'de> Visitor<'de> for BitsVisitor {
            type Value = Assignment;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a sequence of 0/1 integers")
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Assignment, A::Error> {
                let mut bits = Vec::new();
                while let Some(v) = seq.next_element::<u8>()? {
                    bits.push(v != 0);
                }
                Ok(Assignment { bits })
            }
        }
        deserializer.deserialize_seq(BitsVisitor)
    }
}

/// Terms contributed under one group label, in upper-triangular form.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TermGroup {
    terms: BTreeMap<(usize, usize), f64>,
    offset: f64,
}

impl TermGroup {
    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.terms.get(&key).copied().unwrap_or(0.0)
    }
}

/// Sparse constrained QUBO model.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QuboModel {
    num_vars: usize,
    offset: f64,
    /// Symmetric adjacency of summed coefficients; `couplings[i]` maps every
    /// neighbor `j` (including `i` itself for the diagonal) to `Q_(min,max)`.
    couplings: Vec<BTreeMap<usize, f64>>,
    ungrouped: BTreeMap<(usize, usize), f64>,
    groups: BTreeMap<String, TermGroup>,
    constraints: Vec<Constraint>,
}

impl QuboModel {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            offset: 0.0,
            couplings: vec![BTreeMap::new(); num_vars],
            ungrouped: BTreeMap::new(),
            groups: BTreeMap::new(),
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Adds to the constant offset without attributing it to a group.
    pub fn add_offset(&mut self, value: f64) {
        self.offset += value;
    }

    /// Adds to the constant offset on behalf of a group, so group-stripped
    /// evaluation can remove the constant together with the group's terms.
    pub fn add_offset_in(&mut self, group: &str, value: f64) -> Result<()> {
        validate_group_label(group)?;
        self.offset += value;
        self.groups.entry(group.to_string()).or_default().offset += value;
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.num_vars {
            return Err(Error::IndexOutOfRange { index: i, num_vars: self.num_vars });
        }
        Ok(())
    }

    fn check_len(&self, x: &Assignment) -> Result<()> {
        if x.len() != self.num_vars {
            return Err(Error::DimensionMismatch { expected: self.num_vars, got: x.len() });
        }
        Ok(())
    }

    fn apply_total(&mut self, i: usize, j: usize, delta: f64) {
        let update = |row: &mut BTreeMap<usize, f64>, col: usize| {
            let next = row.get(&col).copied().unwrap_or(0.0) + delta;
            if next == 0.0 {
                row.remove(&col);
            } else {
                row.insert(col, next);
            }
        };
        update(&mut self.couplings[i], j);
        if i != j {
            update(&mut self.couplings[j], i);
        }
    }

    fn apply_contribution(map: &mut BTreeMap<(usize, usize), f64>, key: (usize, usize), c: f64) {
        let next = map.get(&key).copied().unwrap_or(0.0) + c;
        if next == 0.0 {
            map.remove(&key);
        } else {
            map.insert(key, next);
        }
    }

    /// Adds `coeff` to the ungrouped term `(i, j)`. Indices are normalized to
    /// `i <= j`; a contribution that cancels to exactly zero deletes the entry.
    pub fn add_term(&mut self, i: usize, j: usize, coeff: f64) -> Result<()> {
        self.check_index(i)?;
        self.check_index(j)?;
        if coeff == 0.0 {
            return Ok(());
        }
        let key = if i <= j { (i, j) } else { (j, i) };
        Self::apply_contribution(&mut self.ungrouped, key, coeff);
        self.apply_total(key.0, key.1, coeff);
        Ok(())
    }

    /// Adds `coeff` to term `(i, j)` under a group label.
    pub fn add_term_in(&mut self, group: &str, i: usize, j: usize, coeff: f64) -> Result<()> {
        validate_group_label(group)?;
        self.check_index(i)?;
        self.check_index(j)?;
        if coeff == 0.0 {
            return Ok(());
        }
        let key = if i <= j { (i, j) } else { (j, i) };
        let grp = self.groups.entry(group.to_string()).or_default();
        Self::apply_contribution(&mut grp.terms, key, coeff);
        self.apply_total(key.0, key.1, coeff);
        Ok(())
    }

    /// Summed coefficient at `(i, j)`; reads are symmetric and zero for
    /// absent entries or out-of-range indices.
    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i >= self.num_vars || j >= self.num_vars {
            return 0.0;
        }
        self.couplings[i].get(&j).copied().unwrap_or(0.0)
    }

    /// Iterates summed upper-triangular entries `((i, j), coeff)` with
    /// `i <= j`, ordered by `(i, j)`.
    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.couplings
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.range(i..).map(move |(&j, &c)| ((i, j), c)))
    }

    /// Number of distinct nonzero entries in the summed matrix.
    pub fn num_entries(&self) -> usize {
        self.terms().count()
    }

    /// Number of stored term contributions across all groups.
    pub fn num_terms(&self) -> usize {
        self.ungrouped.len() + self.groups.values().map(|g| g.terms.len()).sum::<usize>()
    }

    pub fn group(&self, name: &str) -> Option<&TermGroup> {
        self.groups.get(name)
    }

    pub fn group_names(&self) -> impl Iterator<Item = &str> {
        self.groups.keys().map(|s| s.as_str())
    }

    pub fn ungrouped_terms(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.ungrouped.iter().map(|(&k, &v)| (k, v))
    }

    /// Neighbors of variable `i` in the summed matrix, diagonal included.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.couplings[i].iter().map(|(&j, &c)| (j, c))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms().map(|(_, c)| c.abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_diagonal(&self) -> f64 {
        (0..self.num_vars).map(|i| self.coeff(i, i).abs()).fold(0.0, f64::max)
    }

    pub fn add_constraint(&mut self, constraint: Constraint) -> Result<()> {
        if let Some(&max) = constraint.variables().iter().max() {
            self.check_index(max)?;
        }
        self.constraints.push(constraint);
        Ok(())
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Total energy `offset + sum_i Q_ii x_i + sum_{i<j} Q_ij x_i x_j`.
    pub fn evaluate(&self, x: &Assignment) -> Result<f64> {
        self.check_len(x)?;
        let mut e = self.offset;
        for i in 0..self.num_vars {
            if !x.get(i) {
                continue;
            }
            for (&j, &c) in self.couplings[i].range(i..) {
                if j == i || x.get(j) {
                    e += c;
                }
            }
        }
        Ok(e)
    }

    /// Energy of one group's terms (plus its offset share) in isolation.
    pub fn evaluate_group(&self, x: &Assignment, group: &str) -> Result<f64> {
        self.check_len(x)?;
        let grp = self.groups.get(group).ok_or_else(|| Error::UnknownGroup(group.to_string()))?;
        let mut e = grp.offset;
        for (&(i, j), &c) in &grp.terms {
            if x.get(i) && (i == j || x.get(j)) {
                e += c;
            }
        }
        Ok(e)
    }

    /// Energy with one group's terms and offset share removed.
    pub fn evaluate_without_group(&self, x: &Assignment, group: &str) -> Result<f64> {
        Ok(self.evaluate(x)? - self.evaluate_group(x, group)?)
    }

    /// Local field `h_i = Q_ii + sum_{j != i} Q_(min,max) x_j`, the energy a
    /// set bit `i` contributes given the rest of the assignment.
    pub fn local_field(&self, x: &Assignment, i: usize) -> Result<f64> {
        self.check_len(x)?;
        self.check_index(i)?;
        let mut h = 0.0;
        for (&j, &c) in &self.couplings[i] {
            if j == i || x.get(j) {
                h += c;
            }
        }
        Ok(h)
    }

    /// Energy change from flipping bit `i`, computed in O(degree) as
    /// `delta_x_i * h_i`.
    pub fn flip_delta(&self, x: &Assignment, i: usize) -> Result<f64> {
        let h = self.local_field(x, i)?;
        Ok(if x.get(i) { -h } else { h })
    }

    /// Per-constraint pass/fail with violation magnitudes.
    pub fn check_feasible(&self, x: &Assignment) -> Result<FeasibilityReport> {
        self.check_len(x)?;
        let checks: Vec<ConstraintCheck> =
            self.constraints.iter().map(|c| c.check(x)).collect();
        let feasible = checks.iter().all(|c| c.satisfied);
        Ok(FeasibilityReport { feasible, checks })
    }

    /// Copy of the model without its constraints (terms and groups kept).
    pub fn without_constraints(&self) -> Self {
        let mut clone = self.clone();
        clone.constraints.clear();
        clone
    }
}

fn validate_group_label(group: &str) -> Result<()> {
    if group.is_empty() || group.chars().any(char::is_whitespace) {
        return Err(Error::Config(format!(
            "group label `{group}` must be non-empty and free of whitespace"
        )));
    }
    Ok(())
}
