//! Structure metrics over a QUBO model: size, density, interconnectivity,
//! rank-1 analysis of labeled groups, and constraint/penalty taxonomy.
//!
//! Density and interconnectivity are ratios over all `|x|^2` ordered index
//! pairs: an off-diagonal coupling counts as both `(i, j)` and `(j, i)`,
//! a diagonal entry counts once. Interconnectivity additionally counts pairs
//! whose variables share a constraint support set, diagonal self-pairs
//! included.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubo::QuboModel;

/// Relative tolerance when verifying a recovered rank-1 factorization.
const RANK1_TOL: f64 = 1e-6;

/// Number of variables.
pub fn size(model: &QuboModel) -> usize {
    model.num_vars()
}

/// Ratio of nonzero matrix entries to `|x|^2`.
pub fn density(model: &QuboModel) -> Result<f64> {
    let n = model.num_vars();
    if n == 0 {
        return Err(Error::UndefinedMetric);
    }
    let mut count = 0usize;
    for ((i, j), _) in model.terms() {
        count += if i == j { 1 } else { 2 };
    }
    Ok(count as f64 / (n * n) as f64)
}

/// Ratio of coupled ordered pairs to `|x|^2`, where two variables couple if
/// a matrix entry joins them or they share a constraint support set.
pub fn interconnectivity(model: &QuboModel) -> Result<f64> {
    let n = model.num_vars();
    if n == 0 {
        return Err(Error::UndefinedMetric);
    }
    if model.constraints().is_empty() {
        return density(model);
    }
    // Upper-triangle bitset over (i, j) with i <= j.
    let cells = n * (n + 1) / 2;
    let mut seen = vec![0u64; cells.div_ceil(64)];
    let mut count = 0usize;
    let mut mark = |i: usize, j: usize| {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        // Row-major index into the packed upper triangle.
        let idx = a * n - a * (a + 1) / 2 + b;
        let (word, bit) = (idx / 64, idx % 64);
        if seen[word] & (1u64 << bit) == 0 {
            seen[word] |= 1u64 << bit;
            count += if a == b { 1 } else { 2 };
        }
    };
    for ((i, j), _) in model.terms() {
        mark(i, j);
    }
    for con in model.constraints() {
        let vars: Vec<usize> = con.variables().into_iter().collect();
        for (pos, &i) in vars.iter().enumerate() {
            mark(i, i);
            for &j in &vars[pos + 1..] {
                mark(i, j);
            }
        }
    }
    Ok(count as f64 / (n * n) as f64)
}

/// Tests whether a labeled group equals `(sum_i s_i x_i)^2` for some real
/// vector `s`, i.e. stored diagonal `s_i^2` and upper-triangular off-diagonal
/// `2 s_i s_j`. Returns the recovered `s` (length `num_vars`, pivot taken
/// positive) when it does. An empty group is rank-1 with `s = 0`.
pub fn detect_rank_one(model: &QuboModel, group: &str) -> Result<(bool, Option<Vec<f64>>)> {
    let grp = model.group(group).ok_or_else(|| Error::UnknownGroup(group.to_string()))?;
    let n = model.num_vars();
    if grp.num_terms() == 0 {
        return Ok((true, Some(vec![0.0; n])));
    }

    let mut support: Vec<usize> = Vec::new();
    let mut in_support = vec![false; n];
    for ((i, j), _) in grp.terms() {
        for k in [i, j] {
            if !in_support[k] {
                in_support[k] = true;
                support.push(k);
            }
        }
    }
    support.sort_unstable();

    // Pivot on the first support variable with a positive diagonal; a
    // negative diagonal can never be s^2 and a missing one forces s = 0.
    let pivot = match support.iter().copied().find(|&i| grp.coeff(i, i) > 0.0) {
        Some(p) => p,
        None => return Ok((false, None)),
    };
    let mut s = vec![0.0; n];
    s[pivot] = grp.coeff(pivot, pivot).sqrt();
    for &j in &support {
        if j != pivot {
            s[j] = grp.coeff(pivot, j) / (2.0 * s[pivot]);
        }
    }

    // Verify every pair over the support, stored or implied zero.
    for (a_pos, &i) in support.iter().enumerate() {
        for &j in &support[a_pos..] {
            let expected = if i == j { s[i] * s[i] } else { 2.0 * s[i] * s[j] };
            let stored = grp.coeff(i, j);
            if (stored - expected).abs() > RANK1_TOL * expected.abs().max(1.0) {
                return Ok((false, None));
            }
        }
    }
    Ok((true, Some(s)))
}

/// Share of stored term contributions that belong to rank-1 groups; zero by
/// convention when the summed matrix has no quadratic entry at all.
pub fn rank1_dominance(model: &QuboModel) -> f64 {
    let has_quadratic = model.terms().any(|((i, j), _)| i != j);
    if !has_quadratic {
        return 0.0;
    }
    let total = model.num_terms();
    if total == 0 {
        return 0.0;
    }
    let mut rank1_entries = 0usize;
    for name in model.group_names() {
        if let Ok((true, _)) = detect_rank_one(model, name) {
            rank1_entries += model.group(name).expect("listed group").num_terms();
        }
    }
    rank1_entries as f64 / total as f64
}

/// Rank-1 verdict for one labeled group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rank1Group {
    pub group: String,
    pub is_rank_one: bool,
    /// Recovered coefficients (up to global sign) when rank-1.
    pub coefficients: Option<Vec<f64>>,
}

/// Full structure report for a model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    pub size: usize,
    pub density: f64,
    pub interconnectivity: f64,
    pub rank1_groups: Vec<Rank1Group>,
    pub rank1_dominance: f64,
    pub constraint_type_counts: BTreeMap<String, usize>,
    /// True when constraints are kept separate from the cost function rather
    /// than embedded as penalty terms.
    pub penalty_separated: bool,
}

pub fn structure_report(model: &QuboModel) -> Result<StructureReport> {
    let mut rank1_groups = Vec::new();
    for name in model.group_names() {
        let (is_rank_one, coefficients) = detect_rank_one(model, name)?;
        rank1_groups.push(Rank1Group { group: name.to_string(), is_rank_one, coefficients });
    }
    let mut constraint_type_counts = BTreeMap::new();
    for con in model.constraints() {
        *constraint_type_counts.entry(con.sense().token().to_string()).or_insert(0) += 1;
    }
    Ok(StructureReport {
        size: size(model),
        density: density(model)?,
        interconnectivity: interconnectivity(model)?,
        rank1_groups,
        rank1_dominance: rank1_dominance(model),
        constraint_type_counts,
        penalty_separated: !model.constraints().is_empty(),
    })
}

impl StructureReport {
    /// Flat `key value` text block.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "size {}", self.size);
        let _ = writeln!(out, "density {}", self.density);
        let _ = writeln!(out, "interconnectivity {}", self.interconnectivity);
        let _ = writeln!(out, "rank1_dominance {}", self.rank1_dominance);
        for g in &self.rank1_groups {
            let _ = writeln!(out, "rank1_group {} {}", g.group, g.is_rank_one);
            if let Some(s) = &g.coefficients {
                let nonzero = s.iter().filter(|v| **v != 0.0).count();
                let _ = writeln!(out, "rank1_support {} {}", g.group, nonzero);
            }
        }
        for (sense, count) in &self.constraint_type_counts {
            let _ = writeln!(out, "constraints {sense} {count}");
        }
        let _ = writeln!(out, "penalty_separated {}", self.penalty_separated);
        out
    }

    pub fn csv_header() -> &'static str {
        "instance,size,density,interconnectivity,rank1_dominance,rank1_groups,constraints,penalty_separated"
    }

    /// One CSV row; group verdicts and constraint counts are packed with `;`.
    pub fn csv_row(&self, instance: &str) -> String {
        let groups = self
            .rank1_groups
            .iter()
            .map(|g| format!("{}:{}", g.group, g.is_rank_one))
            .collect::<Vec<_>>()
            .join(";");
        let constraints = self
            .constraint_type_counts
            .iter()
            .map(|(s, c)| format!("{s}:{c}"))
            .collect::<Vec<_>>()
            .join(";");
        format!(
            "{instance},{},{},{},{},{groups},{constraints},{}",
            self.size, self.density, self.interconnectivity, self.rank1_dominance,
            self.penalty_separated
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::{Constraint, ConstraintSense};

    #[test]
    fn size_counts_variables() {
        assert_eq!(size(&QuboModel::new(5)), 5);
        let mut toy = QuboModel::new(2);
        toy.add_term(0, 1, 4.0).unwrap();
        assert_eq!(size(&toy), 2);
    }

    #[test]
    fn density_counts_symmetric_pairs() {
        let mut m = QuboModel::new(2);
        m.add_term(0, 0, -2.0).unwrap();
        m.add_term(1, 1, 3.0).unwrap();
        m.add_term(0, 1, 4.0).unwrap();
        assert_eq!(density(&m).unwrap(), 1.0);
    }

    #[test]
    fn density_diagonal_only() {
        let n = 8;
        let mut m = QuboModel::new(n);
        for i in 0..n {
            m.add_term(i, i, 1.0 + i as f64).unwrap();
        }
        assert_eq!(density(&m).unwrap(), 1.0 / n as f64);
    }

    #[test]
    fn density_empty_and_undefined() {
        assert_eq!(density(&QuboModel::new(4)).unwrap(), 0.0);
        assert!(matches!(density(&QuboModel::new(0)), Err(Error::UndefinedMetric)));
    }

    #[test]
    fn interconnectivity_counts_constraint_coupling() {
        // Diagonal term on var 2, one constraint over {0, 1}:
        // pairs (0,0) (0,1) (1,0) (1,1) (2,2) -> 5/9.
        let mut m = QuboModel::new(3);
        m.add_term(2, 2, 1.0).unwrap();
        m.add_constraint(
            Constraint::linear(&[(0, 1.0), (1, 1.0)], ConstraintSense::LessEq, 1.0, "c")
                .unwrap(),
        )
        .unwrap();
        assert_eq!(interconnectivity(&m).unwrap(), 5.0 / 9.0);
    }

    #[test]
    fn interconnectivity_extremes() {
        let mut full = QuboModel::new(2);
        full.add_term(0, 0, 1.0).unwrap();
        full.add_term(1, 1, 1.0).unwrap();
        full.add_term(0, 1, 1.0).unwrap();
        assert_eq!(interconnectivity(&full).unwrap(), 1.0);
        assert_eq!(interconnectivity(&QuboModel::new(3)).unwrap(), 0.0);
    }

    #[test]
    fn constraint_terms_do_not_double_count_matrix_pairs() {
        let mut m = QuboModel::new(2);
        m.add_term(0, 1, 1.0).unwrap();
        m.add_constraint(
            Constraint::linear(&[(0, 1.0), (1, 1.0)], ConstraintSense::Equal, 1.0, "c").unwrap(),
        )
        .unwrap();
        // (0,0),(0,1),(1,0),(1,1) all coupled exactly once.
        assert_eq!(interconnectivity(&m).unwrap(), 1.0);
    }

    #[test]
    fn rank_one_detection_recovers_s() {
        let s = [0.5, -1.5, 2.0, 0.0];
        let mut m = QuboModel::new(4);
        for i in 0..4 {
            m.add_term_in("sq", i, i, s[i] * s[i]).unwrap();
            for j in i + 1..4 {
                m.add_term_in("sq", i, j, 2.0 * s[i] * s[j]).unwrap();
            }
        }
        let (flag, recovered) = detect_rank_one(&m, "sq").unwrap();
        assert!(flag);
        let recovered = recovered.unwrap();
        // Pivot sign is positive, so the recovered vector is s or -s.
        let sign = if recovered[0].signum() == s[0].signum() { 1.0 } else { -1.0 };
        for i in 0..4 {
            assert!((recovered[i] - sign * s[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn rank_one_rejects_zero_diagonal_coupling() {
        let mut m = QuboModel::new(2);
        m.add_term_in("g", 0, 1, 1.0).unwrap();
        let (flag, s) = detect_rank_one(&m, "g").unwrap();
        assert!(!flag);
        assert!(s.is_none());
    }

    #[test]
    fn rank_one_rejects_block_diagonal_union() {
        // Two independent squares are rank 2.
        let mut m = QuboModel::new(4);
        for (a, b) in [(0usize, 1usize), (2, 3)] {
            m.add_term_in("g", a, a, 1.0).unwrap();
            m.add_term_in("g", b, b, 1.0).unwrap();
            m.add_term_in("g", a, b, 2.0).unwrap();
        }
        assert!(!detect_rank_one(&m, "g").unwrap().0);
    }

    #[test]
    fn rank_one_empty_group_and_unknown_group() {
        let mut m = QuboModel::new(2);
        m.add_term_in("g", 0, 0, 1.0).unwrap();
        m.add_term_in("g", 0, 0, -1.0).unwrap();
        let (flag, s) = detect_rank_one(&m, "g").unwrap();
        assert!(flag);
        assert_eq!(s.unwrap(), vec![0.0, 0.0]);
        assert!(matches!(detect_rank_one(&m, "missing"), Err(Error::UnknownGroup(_))));
    }

    #[test]
    fn dominance_is_zero_for_linear_models() {
        let mut m = QuboModel::new(3);
        m.add_term_in("obj", 0, 0, 2.0).unwrap();
        m.add_term_in("obj", 1, 1, 5.0).unwrap();
        assert_eq!(rank1_dominance(&m), 0.0);
    }

    #[test]
    fn dominance_is_one_for_single_rank_one_group() {
        let mut m = QuboModel::new(2);
        m.add_term_in("sq", 0, 0, 1.0).unwrap();
        m.add_term_in("sq", 1, 1, 4.0).unwrap();
        m.add_term_in("sq", 0, 1, 4.0).unwrap();
        assert_eq!(rank1_dominance(&m), 1.0);
    }

    #[test]
    fn dominance_counts_entries_per_group() {
        let mut m = QuboModel::new(2);
        // Rank-1 square over both vars: 3 entries.
        m.add_term_in("sq", 0, 0, 1.0).unwrap();
        m.add_term_in("sq", 1, 1, 1.0).unwrap();
        m.add_term_in("sq", 0, 1, 2.0).unwrap();
        // Linear group with 2 entries, not rank-1.
        m.add_term_in("lin", 0, 0, 3.0).unwrap();
        m.add_term_in("lin", 1, 1, 7.0).unwrap();
        assert_eq!(rank1_dominance(&m), 3.0 / 5.0);
    }

    #[test]
    fn metrics_invariant_under_positive_scaling() {
        let mut m = QuboModel::new(3);
        m.add_term_in("sq", 0, 0, 1.0).unwrap();
        m.add_term_in("sq", 1, 1, 4.0).unwrap();
        m.add_term_in("sq", 0, 1, 4.0).unwrap();
        let mut scaled = QuboModel::new(3);
        for ((i, j), c) in m.group("sq").unwrap().terms().collect::<Vec<_>>() {
            scaled.add_term_in("sq", i, j, 3.5 * c).unwrap();
        }
        assert_eq!(density(&m).unwrap(), density(&scaled).unwrap());
        assert_eq!(interconnectivity(&m).unwrap(), interconnectivity(&scaled).unwrap());
        assert_eq!(rank1_dominance(&m), rank1_dominance(&scaled));
    }

    #[test]
    fn report_collects_everything() {
        let mut m = QuboModel::new(3);
        m.add_term_in("sq", 0, 0, 1.0).unwrap();
        m.add_term_in("sq", 1, 1, 1.0).unwrap();
        m.add_term_in("sq", 0, 1, 2.0).unwrap();
        m.add_constraint(Constraint::one_hot(&[0, 1], "p").unwrap()).unwrap();
        let report = structure_report(&m).unwrap();
        assert_eq!(report.size, 3);
        assert!(report.penalty_separated);
        assert_eq!(report.constraint_type_counts["one-hot"], 1);
        assert_eq!(report.rank1_groups.len(), 1);
        assert!(report.rank1_groups[0].is_rank_one);
        assert!(report.to_text().contains("rank1_group sq true"));
        assert!(report.csv_row("m").starts_with("m,3,"));
    }
}
