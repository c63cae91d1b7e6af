//! Penalty embedding: rewrite constraints as weighted cost terms so
//! unconstrained solvers can work on the model.

use crate::error::{Error, Result};
use crate::qubo::{Constraint, ConstraintSense, QuboModel};

/// Group label attached to all embedded penalty terms.
pub const PENALTY_GROUP: &str = "penalty";

/// How the penalty weight is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MultiplierRule {
    /// `mu = factor * max_{i<=j} |Q_ij|` over the model's cost terms.
    MaxCoeffScaled(f64),
    /// Fixed weight.
    Fixed(f64),
}

impl Default for MultiplierRule {
    fn default() -> Self {
        // Strength that reliably dominates the cost terms without tuning.
        MultiplierRule::MaxCoeffScaled(25.0)
    }
}

impl MultiplierRule {
    fn resolve(self, model: &QuboModel) -> Result<f64> {
        let mu = match self {
            MultiplierRule::Fixed(v) => v,
            MultiplierRule::MaxCoeffScaled(factor) => factor * model.max_abs_coeff(),
        };
        if !(mu > 0.0) {
            return Err(Error::Config(format!(
                "penalty multiplier resolved to {mu}; the model has no terms to scale against"
            )));
        }
        Ok(mu)
    }
}

impl QuboModel {
    /// Returns a constraint-free model whose cost carries the constraints as
    /// penalty terms in group `"penalty"`.
    ///
    /// Supported constraints: one-hot and linear equalities become
    /// `mu * (sum a_i x_i - rhs)^2`; a complementary `>= r` / `<= r` pair over
    /// identical coefficients is treated as one equality; a `x_a + x_b <= 1`
    /// pair cap becomes the single product term `mu * x_a x_b`. Anything else
    /// cannot be expressed as a quadratic penalty and is rejected.
    pub fn embed_penalties(&self, rule: MultiplierRule) -> Result<QuboModel> {
        if self.constraints().is_empty() {
            return Ok(self.clone());
        }
        let mu = rule.resolve(self)?;
        let mut out = self.without_constraints();

        let constraints = self.constraints();
        let mut consumed = vec![false; constraints.len()];
        for (idx, con) in constraints.iter().enumerate() {
            if consumed[idx] {
                continue;
            }
            match con.sense() {
                ConstraintSense::OneHot => {
                    add_square_penalty(&mut out, con, mu)?;
                }
                ConstraintSense::Equal => {
                    if !con.is_linear() {
                        return Err(unsupported(con, "squaring quadratic terms leaves the quadratic order"));
                    }
                    add_square_penalty(&mut out, con, mu)?;
                }
                ConstraintSense::GreaterEq | ConstraintSense::LessEq => {
                    let partner = constraints
                        .iter()
                        .enumerate()
                        .skip(idx + 1)
                        .find(|(k, other)| !consumed[*k] && con.is_complement_of(other));
                    if let Some((k, _)) = partner {
                        if !con.is_linear() {
                            return Err(unsupported(con, "squaring quadratic terms leaves the quadratic order"));
                        }
                        consumed[k] = true;
                        add_square_penalty(&mut out, con, mu)?;
                    } else if con.sense() == ConstraintSense::LessEq && is_pair_cap(con) {
                        let vars: Vec<usize> = con.variables().into_iter().collect();
                        out.add_term_in(PENALTY_GROUP, vars[0], vars[1], mu)?;
                    } else {
                        return Err(unsupported(
                            con,
                            "inequalities without a complementary partner need slack variables",
                        ));
                    }
                }
            }
            consumed[idx] = true;
        }
        Ok(out)
    }
}

fn unsupported(con: &Constraint, reason: &str) -> Error {
    Error::UnsupportedEmbedding { label: con.label().to_string(), reason: reason.to_string() }
}

/// `x_a + x_b <= 1`: exactly two unit diagonal coefficients with rhs 1.
fn is_pair_cap(con: &Constraint) -> bool {
    con.rhs() == 1.0
        && con.num_coeffs() == 2
        && con.coeffs().all(|((i, j), c)| i == j && c == 1.0)
}

/// Expands `mu * (sum a_i x_i - rhs)^2` into linear and quadratic terms plus
/// a constant, using `x_i^2 = x_i`. The `mu * rhs^2` constant goes to the
/// model offset under the penalty group so stripping the group restores the
/// constrained objective.
fn add_square_penalty(out: &mut QuboModel, con: &Constraint, mu: f64) -> Result<()> {
    let rhs = con.rhs();
    let linear: Vec<(usize, f64)> = con.coeffs().map(|((i, _), c)| (i, c)).collect();
    for (pos, &(i, a)) in linear.iter().enumerate() {
        out.add_term_in(PENALTY_GROUP, i, i, mu * (a * a - 2.0 * rhs * a))?;
        for &(j, b) in &linear[pos + 1..] {
            out.add_term_in(PENALTY_GROUP, i, j, mu * 2.0 * a * b)?;
        }
    }
    out.add_offset_in(PENALTY_GROUP, mu * rhs * rhs)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::Assignment;

    #[test]
    fn one_hot_pair_expansion() {
        let mut m = QuboModel::new(2);
        m.add_constraint(Constraint::one_hot(&[0, 1], "p").unwrap()).unwrap();
        let out = m.embed_penalties(MultiplierRule::Fixed(10.0)).unwrap();
        assert!(out.constraints().is_empty());
        assert_eq!(out.coeff(0, 0), -10.0);
        assert_eq!(out.coeff(1, 1), -10.0);
        assert_eq!(out.coeff(0, 1), 20.0);
        assert_eq!(out.offset(), 10.0);
        // Penalty vanishes exactly on the feasible set.
        for pattern in [[1u8, 0u8], [0, 1]] {
            let x = Assignment::from_ints(&pattern);
            assert_eq!(out.evaluate(&x).unwrap(), 0.0);
        }
        assert_eq!(out.evaluate(&Assignment::from_ints(&[0, 0])).unwrap(), 10.0);
        assert_eq!(out.evaluate(&Assignment::from_ints(&[1, 1])).unwrap(), 10.0);
    }

    #[test]
    fn no_constraints_is_identity() {
        let mut m = QuboModel::new(2);
        m.add_term(0, 1, 4.0).unwrap();
        let out = m.embed_penalties(MultiplierRule::default()).unwrap();
        assert_eq!(out, m);
    }

    #[test]
    fn pair_cap_becomes_product_term() {
        // `2 x0 + 3 x1 - 6 x0 x1` with `x0 + x1 <= 1`.
        let mut m = QuboModel::new(2);
        m.add_term(0, 0, 2.0).unwrap();
        m.add_term(1, 1, 3.0).unwrap();
        m.add_term(0, 1, -6.0).unwrap();
        m.add_constraint(
            Constraint::linear(&[(0, 1.0), (1, 1.0)], ConstraintSense::LessEq, 1.0, "cap")
                .unwrap(),
        )
        .unwrap();
        let out = m.embed_penalties(MultiplierRule::default()).unwrap();
        // mu = 25 * 6 and the product adds on top of the -6 coupling.
        assert_eq!(out.coeff(0, 1), -6.0 + 150.0);
        assert_eq!(out.evaluate(&Assignment::from_ints(&[1, 1])).unwrap(), 2.0 + 3.0 - 6.0 + 150.0);
    }

    #[test]
    fn complementary_pair_embeds_as_equality() {
        // x0 - x1 >= 0 and x0 - x1 <= 0 together mean x0 = x1.
        let mut m = QuboModel::new(2);
        m.add_term(0, 0, 1.0).unwrap();
        let coeffs = [(0, 1.0), (1, -1.0)];
        m.add_constraint(
            Constraint::linear(&coeffs, ConstraintSense::GreaterEq, 0.0, "bal:ge").unwrap(),
        )
        .unwrap();
        m.add_constraint(
            Constraint::linear(&coeffs, ConstraintSense::LessEq, 0.0, "bal:le").unwrap(),
        )
        .unwrap();
        let out = m.embed_penalties(MultiplierRule::Fixed(5.0)).unwrap();
        // (x0 - x1)^2 = x0 + x1 - 2 x0 x1.
        assert_eq!(out.coeff(0, 0), 1.0 + 5.0);
        assert_eq!(out.coeff(1, 1), 5.0);
        assert_eq!(out.coeff(0, 1), -10.0);
        let equal = Assignment::from_ints(&[1, 1]);
        let unequal = Assignment::from_ints(&[0, 1]);
        assert_eq!(out.evaluate(&equal).unwrap(), 1.0);
        assert_eq!(out.evaluate(&unequal).unwrap(), 5.0);
    }

    #[test]
    fn lone_inequality_is_rejected() {
        let mut m = QuboModel::new(2);
        m.add_term(0, 0, 1.0).unwrap();
        m.add_constraint(
            Constraint::linear(&[(0, 2.0), (1, 1.0)], ConstraintSense::LessEq, 2.0, "odd")
                .unwrap(),
        )
        .unwrap();
        assert!(matches!(
            m.embed_penalties(MultiplierRule::default()),
            Err(Error::UnsupportedEmbedding { .. })
        ));
    }

    #[test]
    fn zero_scale_model_is_rejected() {
        let mut m = QuboModel::new(2);
        m.add_constraint(Constraint::one_hot(&[0, 1], "p").unwrap()).unwrap();
        assert!(matches!(
            m.embed_penalties(MultiplierRule::default()),
            Err(Error::Config(_))
        ));
    }
}
