//! Reaction networks and their optimization formulations.
//!
//! A network is a bipartite species/reaction graph with signed stoichiometry.
//! The pathway problem minimizes `sum_r c_r^unit x_r + c_r^fixed p(x_r)`
//! subject to a per-species mass balance `sum_r v_{s,r} x_r = 0` and bounds
//! `l_r <= x_r <= u_r`, where `p` is the positivity indicator. Two builders
//! are provided: an integer program ([`build_ip`]) and a binarized
//! constrained QUBO ([`build_qubo`]) that emits the mass balance as a
//! `>= 0` / `<= 0` inequality pair per species.

mod generate;

pub use generate::generate_artificial;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::encodings::{EncodingScheme, IntegerEncoding};
use crate::error::{Error, Result};
use crate::mip::{CmpOp, MipModel, VarKind};
use crate::qubo::{Assignment, Constraint, ConstraintSense, QuboModel};

/// One reaction: signed stoichiometry, costs, and quantity bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reaction {
    pub id: String,
    /// species -> signed coefficient; negative consumes, positive produces.
    pub stoich: BTreeMap<String, i64>,
    pub unit_cost: f64,
    pub fixed_cost: f64,
    /// `[l_r, u_r]` occurrence bounds.
    pub bounds: (i64, i64),
}

/// A validated reaction network with species and reactions in canonical
/// (id-sorted) order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReactionNetwork {
    pub name: String,
    pub species: Vec<String>,
    pub reactions: Vec<Reaction>,
}

impl ReactionNetwork {
    pub fn new(name: impl Into<String>, species: Vec<String>, reactions: Vec<Reaction>) -> Result<Self> {
        let mut network = Self { name: name.into(), species, reactions };
        network.validate()?;
        network.species.sort();
        network.reactions.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(network)
    }

    fn validate(&self) -> Result<()> {
        if self.reactions.is_empty() {
            return Err(Error::InvalidNetwork("network has no reactions".into()));
        }
        let mut seen_species = BTreeSet::new();
        for s in &self.species {
            if s.is_empty() {
                return Err(Error::InvalidNetwork("empty species id".into()));
            }
            if !seen_species.insert(s) {
                return Err(Error::InvalidNetwork(format!("duplicate species id `{s}`")));
            }
        }
        let mut seen_reactions = BTreeSet::new();
        for r in &self.reactions {
            if r.id.is_empty() {
                return Err(Error::InvalidNetwork("empty reaction id".into()));
            }
            if !seen_reactions.insert(&r.id) {
                return Err(Error::InvalidNetwork(format!("duplicate reaction id `{}`", r.id)));
            }
            if r.stoich.is_empty() {
                return Err(Error::InvalidNetwork(format!(
                    "reaction `{}` has empty stoichiometry",
                    r.id
                )));
            }
            for (s, &v) in &r.stoich {
                if !seen_species.contains(s) {
                    return Err(Error::InvalidNetwork(format!(
                        "reaction `{}` references undeclared species `{s}`",
                        r.id
                    )));
                }
                if v == 0 {
                    return Err(Error::InvalidNetwork(format!(
                        "reaction `{}` has zero stoichiometry for `{s}`",
                        r.id
                    )));
                }
            }
            let (l, u) = r.bounds;
            if l < 0 {
                return Err(Error::InvalidNetwork(format!(
                    "reaction `{}` has negative lower bound {l}",
                    r.id
                )));
            }
            if l > u {
                return Err(Error::InvalidBounds { lower: l, upper: u });
            }
            if !(r.unit_cost >= 0.0) || !(r.fixed_cost >= 0.0) {
                return Err(Error::InvalidNetwork(format!(
                    "reaction `{}` has a negative or non-finite cost",
                    r.id
                )));
            }
        }
        Ok(())
    }

    pub fn num_species(&self) -> usize {
        self.species.len()
    }

    pub fn num_reactions(&self) -> usize {
        self.reactions.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("network serializes")
    }
}

/// Parses and validates a network from its JSON form.
pub fn load_network(text: &str) -> Result<ReactionNetwork> {
    let raw: ReactionNetwork = serde_json::from_str(text)?;
    ReactionNetwork::new(raw.name, raw.species, raw.reactions)
}

/// Integer-program view of a network: quantity variables with bounds, an
/// indicator per fixed-cost reaction, mass-balance equalities, and linking
/// rows `x_r <= u_r y_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrnModel {
    reactions: Vec<CrnReaction>,
    species: Vec<String>,
    /// Per species: `(reaction index, v_{s,r})` for nonzero coefficients.
    balances: Vec<Vec<(usize, i64)>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrnReaction {
    pub id: String,
    pub lower: i64,
    pub upper: i64,
    pub unit_cost: f64,
    pub fixed_cost: f64,
    /// Present exactly for reactions with positive fixed cost.
    pub has_indicator: bool,
}

impl CrnModel {
    pub fn reactions(&self) -> &[CrnReaction] {
        &self.reactions
    }

    pub fn species(&self) -> &[String] {
        &self.species
    }

    pub fn num_indicators(&self) -> usize {
        self.reactions.iter().filter(|r| r.has_indicator).count()
    }

    /// Objective with the positivity indicator applied directly.
    pub fn objective(&self, quantities: &[i64]) -> Result<f64> {
        if quantities.len() != self.reactions.len() {
            return Err(Error::DimensionMismatch {
                expected: self.reactions.len(),
                got: quantities.len(),
            });
        }
        Ok(self
            .reactions
            .iter()
            .zip(quantities)
            .map(|(r, &q)| {
                r.unit_cost * q as f64 + if q > 0 { r.fixed_cost } else { 0.0 }
            })
            .sum())
    }

    /// Mass-balance residual per species; zero everywhere iff balanced.
    pub fn balance_residuals(&self, quantities: &[i64]) -> Result<Vec<i64>> {
        if quantities.len() != self.reactions.len() {
            return Err(Error::DimensionMismatch {
                expected: self.reactions.len(),
                got: quantities.len(),
            });
        }
        Ok(self
            .balances
            .iter()
            .map(|row| row.iter().map(|&(r, v)| v * quantities[r]).sum())
            .collect())
    }

    pub fn within_bounds(&self, quantities: &[i64]) -> bool {
        self.reactions
            .iter()
            .zip(quantities)
            .all(|(r, &q)| q >= r.lower && q <= r.upper)
    }

    pub fn is_feasible(&self, quantities: &[i64]) -> Result<bool> {
        Ok(self.within_bounds(quantities)
            && self.balance_residuals(quantities)?.iter().all(|&r| r == 0))
    }

    /// Quantities keyed by reaction id.
    pub fn solution_map(&self, quantities: &[i64]) -> BTreeMap<String, i64> {
        self.reactions
            .iter()
            .zip(quantities)
            .map(|(r, &q)| (r.id.clone(), q))
            .collect()
    }

    /// MIP export: integer `x_<id>` per reaction, binary `y_<id>` per
    /// indicator, balance equalities, and linking rows.
    pub fn to_mip(&self) -> MipModel {
        let mut mip = MipModel::new("crn_pathway");
        let mut x_vars = Vec::with_capacity(self.reactions.len());
        for r in &self.reactions {
            let x = mip.add_var(
                format!("x_{}", sanitize(&r.id)),
                VarKind::Integer { lower: r.lower, upper: r.upper },
            );
            mip.add_objective_term(x, r.unit_cost);
            x_vars.push(x);
        }
        for (idx, r) in self.reactions.iter().enumerate() {
            if !r.has_indicator {
                continue;
            }
            let y = mip.add_var(format!("y_{}", sanitize(&r.id)), VarKind::Binary);
            mip.add_objective_term(y, r.fixed_cost);
            mip.add_constraint(
                format!("link_{}", sanitize(&r.id)),
                vec![(x_vars[idx], 1.0), (y, -(r.upper as f64))],
                CmpOp::LessEq,
                0.0,
            );
        }
        for (s, row) in self.species.iter().zip(&self.balances) {
            let terms: Vec<(usize, f64)> =
                row.iter().map(|&(r, v)| (x_vars[r], v as f64)).collect();
            mip.add_constraint(format!("balance_{}", sanitize(s)), terms, CmpOp::Equal, 0.0);
        }
        mip
    }
}

fn sanitize(id: &str) -> String {
    id.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect()
}

/// Builds the integer-program model of a network.
pub fn build_ip(network: &ReactionNetwork) -> CrnModel {
    let species_index: BTreeMap<&str, usize> =
        network.species.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut balances = vec![Vec::new(); network.species.len()];
    for (r_idx, r) in network.reactions.iter().enumerate() {
        for (s, &v) in &r.stoich {
            balances[species_index[s.as_str()]].push((r_idx, v));
        }
    }
    let reactions = network
        .reactions
        .iter()
        .map(|r| CrnReaction {
            id: r.id.clone(),
            lower: r.bounds.0,
            upper: r.bounds.1,
            unit_cost: r.unit_cost,
            fixed_cost: r.fixed_cost,
            has_indicator: r.fixed_cost > 0.0,
        })
        .collect();
    CrnModel { reactions, species: network.species.clone(), balances }
}

/// A binarized network QUBO plus the codebook to map bits back to reaction
/// quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct CrnQubo {
    pub model: QuboModel,
    /// Per reaction (canonical order): the quantity encoding.
    pub encodings: Vec<IntegerEncoding>,
    /// Per reaction: indicator bit index, for positive fixed costs.
    pub indicator_bits: Vec<Option<usize>>,
    pub reaction_ids: Vec<String>,
}

impl CrnQubo {
    pub fn num_vars(&self) -> usize {
        self.model.num_vars()
    }

    /// Reaction quantities encoded by an assignment.
    pub fn decode(&self, x: &Assignment) -> Result<BTreeMap<String, i64>> {
        if x.len() != self.model.num_vars() {
            return Err(Error::DimensionMismatch {
                expected: self.model.num_vars(),
                got: x.len(),
            });
        }
        let mut out = BTreeMap::new();
        for (id, enc) in self.reaction_ids.iter().zip(&self.encodings) {
            let bits: Vec<bool> = enc.bit_indices().map(|b| x.get(b)).collect();
            out.insert(id.clone(), enc.decode(&bits)?);
        }
        Ok(out)
    }
}

/// Binarizes a network into a constrained QUBO: unit costs land on encoding
/// bits, fixed costs on indicator bits, each species contributes a
/// `>= 0` / `<= 0` constraint pair, and linking rows tie quantity bits to
/// their indicator.
pub fn build_qubo(network: &ReactionNetwork, scheme: EncodingScheme) -> Result<CrnQubo> {
    let ip = build_ip(network);

    let mut encodings = Vec::with_capacity(ip.reactions.len());
    let mut indicator_bits = Vec::with_capacity(ip.reactions.len());
    let mut next_bit = 0usize;
    for r in ip.reactions() {
        let mut enc = IntegerEncoding::with_scheme(scheme, r.lower, r.upper)?;
        enc.set_bit_offset(next_bit);
        next_bit += enc.num_bits();
        encodings.push(enc);
        if r.has_indicator {
            indicator_bits.push(Some(next_bit));
            next_bit += 1;
        } else {
            indicator_bits.push(None);
        }
    }

    let mut model = QuboModel::new(next_bit);
    for ((r, enc), indicator) in ip.reactions().iter().zip(&encodings).zip(&indicator_bits) {
        for (bit, &w) in enc.bit_indices().zip(enc.bit_weights()) {
            model.add_term_in("unit_cost", bit, bit, r.unit_cost * w as f64)?;
        }
        if r.unit_cost != 0.0 && r.lower != 0 {
            model.add_offset_in("unit_cost", r.unit_cost * r.lower as f64)?;
        }
        if let Some(y) = indicator {
            model.add_term_in("fixed_cost", *y, *y, r.fixed_cost)?;
        }
    }

    for (s_idx, species) in ip.species().iter().enumerate() {
        let mut coeffs: Vec<((usize, usize), f64)> = Vec::new();
        let mut fixed_flow = 0i64;
        for &(r_idx, v) in &ip.balances[s_idx] {
            let enc = &encodings[r_idx];
            fixed_flow += v * enc.lower();
            for (bit, &w) in enc.bit_indices().zip(enc.bit_weights()) {
                coeffs.push(((bit, bit), (v * w) as f64));
            }
        }
        let rhs = -fixed_flow as f64;
        if coeffs.is_empty() {
            if fixed_flow != 0 {
                return Err(Error::InvalidNetwork(format!(
                    "species `{species}` has a fixed imbalance of {fixed_flow}"
                )));
            }
            continue;
        }
        model.add_constraint(Constraint::new(
            coeffs.clone(),
            ConstraintSense::GreaterEq,
            rhs,
            format!("balance:{species}:ge"),
        )?)?;
        model.add_constraint(Constraint::new(
            coeffs,
            ConstraintSense::LessEq,
            rhs,
            format!("balance:{species}:le"),
        )?)?;
    }

    for ((r, enc), indicator) in ip.reactions().iter().zip(&encodings).zip(&indicator_bits) {
        let Some(y) = indicator else { continue };
        if enc.num_bits() == 0 && r.lower == 0 {
            continue; // x_r is constantly zero; nothing to link
        }
        let mut coeffs: Vec<((usize, usize), f64)> = enc
            .bit_indices()
            .zip(enc.bit_weights())
            .map(|(bit, &w)| ((bit, bit), w as f64))
            .collect();
        coeffs.push(((*y, *y), -(r.upper as f64)));
        model.add_constraint(Constraint::new(
            coeffs,
            ConstraintSense::LessEq,
            -(r.lower as f64),
            format!("link:{}", r.id),
        )?)?;
    }

    let reaction_ids = ip.reactions().iter().map(|r| r.id.clone()).collect();
    Ok(CrnQubo { model, encodings, indicator_bits, reaction_ids })
}

/// DOT export of the bipartite graph: boxes are reactions, circles species.
/// With a solution, zero-quantity reactions are omitted and reaction labels
/// carry the chosen quantity.
pub fn export_dot(network: &ReactionNetwork, solution: Option<&BTreeMap<String, i64>>) -> String {
    let mut out = String::from("digraph crn {\n  rankdir=LR;\n");
    for s in &network.species {
        out.push_str(&format!("  \"sp:{s}\" [shape=circle, label=\"{s}\"];\n"));
    }
    for r in &network.reactions {
        let quantity = solution.map(|sol| sol.get(&r.id).copied().unwrap_or(0));
        if quantity == Some(0) {
            continue;
        }
        let label = match quantity {
            Some(q) => format!("{} x={q}", r.id),
            None => format!("{} [{},{}]", r.id, r.bounds.0, r.bounds.1),
        };
        out.push_str(&format!("  \"rx:{}\" [shape=box, label=\"{label}\"];\n", r.id));
        for (s, &v) in &r.stoich {
            if v < 0 {
                out.push_str(&format!(
                    "  \"sp:{s}\" -> \"rx:{}\" [label=\"{}\"];\n",
                    r.id,
                    -v
                ));
            } else {
                out.push_str(&format!(
                    "  \"rx:{}\" -> \"sp:{s}\" [label=\"{v}\"];\n",
                    r.id
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}
