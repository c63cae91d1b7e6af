//! Whitespace-delimited text form of a model.
//!
//! ```text
//! qubo <num_vars> <num_terms> <offset>
//! <i> <j> <coeff> [group]
//! ...
//! con <sense> <rhs> : <i> <j> <coeff> ...
//! ```
//!
//! Term lines are ordered by `(i, j)`, ungrouped entries before grouped ones
//! and groups alphabetically, so exports are deterministic. Coefficients use
//! the shortest round-trip float form.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::qubo::{Constraint, ConstraintSense, QuboModel};

impl QuboModel {
    pub fn to_text(&self) -> String {
        let mut lines: Vec<((usize, usize), Option<&str>, f64)> = Vec::new();
        for ((i, j), c) in self.ungrouped_terms() {
            lines.push(((i, j), None, c));
        }
        for name in self.group_names() {
            for ((i, j), c) in self.group(name).expect("listed group").terms() {
                lines.push(((i, j), Some(name), c));
            }
        }
        lines.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

        let mut out = String::new();
        let _ = writeln!(out, "qubo {} {} {}", self.num_vars(), lines.len(), self.offset());
        for ((i, j), group, c) in lines {
            match group {
                Some(g) => {
                    let _ = writeln!(out, "{i} {j} {c} {g}");
                }
                None => {
                    let _ = writeln!(out, "{i} {j} {c}");
                }
            }
        }
        for con in self.constraints() {
            let _ = write!(out, "con {} {} :", con.sense().token(), con.rhs());
            for ((i, j), c) in con.coeffs() {
                let _ = write!(out, " {i} {j} {c}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let parse_err = |line: usize, message: &str| Error::Parse {
            line,
            message: message.to_string(),
        };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());

        let (header_no, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "missing header line"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "qubo" {
            return Err(parse_err(header_no + 1, "expected `qubo <vars> <terms> <offset>`"));
        }
        let num_vars: usize = fields[1]
            .parse()
            .map_err(|_| parse_err(header_no + 1, "bad variable count"))?;
        let num_terms: usize = fields[2]
            .parse()
            .map_err(|_| parse_err(header_no + 1, "bad term count"))?;
        let offset: f64 = fields[3]
            .parse()
            .map_err(|_| parse_err(header_no + 1, "bad offset"))?;

        let mut model = QuboModel::new(num_vars);
        model.add_offset(offset);

        for _ in 0..num_terms {
            let (no, line) = lines
                .next()
                .ok_or_else(|| parse_err(header_no + 1, "fewer term lines than the header declares"))?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 && fields.len() != 4 {
                return Err(parse_err(no + 1, "expected `<i> <j> <coeff> [group]`"));
            }
            let i: usize = fields[0].parse().map_err(|_| parse_err(no + 1, "bad index"))?;
            let j: usize = fields[1].parse().map_err(|_| parse_err(no + 1, "bad index"))?;
            let c: f64 = fields[2].parse().map_err(|_| parse_err(no + 1, "bad coefficient"))?;
            let added = match fields.get(3) {
                Some(group) => model.add_term_in(group, i, j, c),
                None => model.add_term(i, j, c),
            };
            added.map_err(|e| parse_err(no + 1, &e.to_string()))?;
        }

        for (con_index, (no, line)) in lines.enumerate() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.first() != Some(&"con") {
                return Err(parse_err(no + 1, "expected a `con` line"));
            }
            if fields.len() < 5 || fields[3] != ":" {
                return Err(parse_err(no + 1, "expected `con <sense> <rhs> : i j coeff ...`"));
            }
            let sense = ConstraintSense::from_token(fields[1])
                .ok_or_else(|| parse_err(no + 1, "unknown constraint sense"))?;
            let rhs: f64 = fields[2].parse().map_err(|_| parse_err(no + 1, "bad rhs"))?;
            let body = &fields[4..];
            if body.len() % 3 != 0 {
                return Err(parse_err(no + 1, "constraint coefficients must come in i j coeff triples"));
            }
            let mut coeffs = Vec::with_capacity(body.len() / 3);
            for triple in body.chunks(3) {
                let i: usize = triple[0].parse().map_err(|_| parse_err(no + 1, "bad index"))?;
                let j: usize = triple[1].parse().map_err(|_| parse_err(no + 1, "bad index"))?;
                let c: f64 = triple[2].parse().map_err(|_| parse_err(no + 1, "bad coefficient"))?;
                coeffs.push(((i, j), c));
            }
            let constraint = Constraint::new(coeffs, sense, rhs, format!("con{con_index}"))
                .map_err(|e| parse_err(no + 1, &e.to_string()))?;
            model
                .add_constraint(constraint)
                .map_err(|e| parse_err(no + 1, &e.to_string()))?;
        }
        Ok(model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_model() -> QuboModel {
        let mut m = QuboModel::new(3);
        m.add_term(0, 0, -2.0).unwrap();
        m.add_term_in("H_f", 1, 1, 0.25).unwrap();
        m.add_term_in("H_GC", 0, 2, 4.5).unwrap();
        m.add_offset(1.5);
        m.add_constraint(Constraint::one_hot(&[0, 1], "pos0").unwrap()).unwrap();
        m.add_constraint(
            Constraint::linear(
                &[(0, 2.0), (2, -1.0)],
                ConstraintSense::LessEq,
                0.0,
                "bal",
            )
            .unwrap(),
        )
        .unwrap();
        m
    }

    #[test]
    fn export_is_deterministic() {
        let text = sample_model().to_text();
        let expected = "qubo 3 3 1.5\n\
                        0 0 -2\n\
                        0 2 4.5 H_GC\n\
                        1 1 0.25 H_f\n\
                        con one-hot 1 : 0 0 1 1 1 1\n\
                        con <= 0 : 0 0 2 2 2 -1\n";
        assert_eq!(text, expected);
    }

    #[test]
    fn round_trip_preserves_structure() {
        let m = sample_model();
        let back = QuboModel::from_text(&m.to_text()).unwrap();
        assert_eq!(back.num_vars(), m.num_vars());
        assert_eq!(back.offset(), m.offset());
        assert_eq!(back.num_terms(), m.num_terms());
        assert_eq!(back.coeff(0, 2), m.coeff(0, 2));
        assert_eq!(back.constraints().len(), 2);
        assert_eq!(back.constraints()[0].sense(), ConstraintSense::OneHot);
        // A second round trip is byte-identical.
        assert_eq!(back.to_text(), m.to_text());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = QuboModel::from_text("qubo 2 1 0\n0 zero 1\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(QuboModel::from_text("nope").is_err());
        assert!(QuboModel::from_text("qubo 2 5 0\n0 0 1\n").is_err());
    }
}
