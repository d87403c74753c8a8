//! CPLEX-LP text emission.
//!
//! Sections appear in the order `Minimize`, `Subject To`, `Bounds`, `Binary`,
//! `End`. Numbers are written with 17 significant digits, so values round-trip.

use std::fmt::Write;

use crate::master::model::{MilpModel, VarKind};

const TERMS_PER_LINE: usize = 6;

fn number(v: f64) -> String {
    if v == f64::INFINITY {
        "+inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:.16e}")
    }
}

fn write_expression(out: &mut String, model: &MilpModel, terms: &[(usize, f64)]) {
    if terms.is_empty() {
        // The format has no empty expressions; a zero term keeps the row valid.
        let _ = write!(out, " 0 {}", model.variables[0].name);
        return;
    }
    for (k, &(v, c)) in terms.iter().enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if c < 0.0 { '-' } else { '+' };
        if k == 0 && sign == '+' {
            let _ = write!(out, " {} {}", number(c), model.variables[v].name);
        } else {
            let _ = write!(out, " {sign} {} {}", number(c.abs()), model.variables[v].name);
        }
    }
}

/// Renders `model` as an LP file.
pub fn write_lp(model: &MilpModel) -> String {
    let mut out = String::new();
    out.push_str("Minimize\n obj:");
    if model.variables.is_empty() {
        out.push_str("\nSubject To\nEnd\n");
        return out;
    }
    write_expression(&mut out, model, &model.objective);
    out.push_str("\nSubject To\n");
    for c in &model.constraints {
        let _ = write!(out, " {}:", c.name);
        write_expression(&mut out, model, &c.terms);
        let _ = writeln!(out, " {} {}", c.sense.symbol(), number(c.rhs));
    }
    out.push_str("Bounds\n");
    for v in &model.variables {
        if v.kind == VarKind::Binary {
            continue;
        }
        let name = &v.name;
        match (v.lower, v.upper) {
            (lo, hi) if lo == 0.0 && hi == f64::INFINITY => {}
            (lo, hi) if lo == f64::NEG_INFINITY && hi == f64::INFINITY => {
                let _ = writeln!(out, " {name} free");
            }
            (lo, hi) if lo == hi => {
                let _ = writeln!(out, " {name} = {}", number(lo));
            }
            (lo, hi) => {
                let _ = writeln!(out, " {} <= {name} <= {}", number(lo), number(hi));
            }
        }
    }
    let binaries: Vec<&str> = model
        .variables
        .iter()
        .filter(|v| v.kind == VarKind::Binary)
        .map(|v| v.name.as_str())
        .collect();
    if !binaries.is_empty() {
        out.push_str("Binary\n");
        for chunk in binaries.chunks(TERMS_PER_LINE * 2) {
            let _ = writeln!(out, " {}", chunk.join(" "));
        }
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::master::model::ConstraintSense;

    #[test]
    fn single_binary() {
        let mut m = MilpModel::new();
        let x = m.add_binary("x_0");
        m.objective.push((x, 1.0));
        let text = write_lp(&m);
        assert_eq!(
            text,
            "Minimize\n obj: 1.0000000000000000e0 x_0\nSubject To\nBounds\nBinary\n x_0\nEnd\n"
        );
    }

    #[test]
    fn bounds_and_signs() {
        let mut m = MilpModel::new();
        let x = m.add_binary("x_0");
        let u = m.add_var("u_0_1", VarKind::Continuous, f64::NEG_INFINITY, f64::INFINITY);
        let s = m.add_var("u_0_0", VarKind::Continuous, 0.0, 0.0);
        let f = m.add_var("f_0_0", VarKind::Continuous, 0.0, 3.0);
        m.add_var("z_0", VarKind::Continuous, 0.0, f64::INFINITY);
        m.objective = vec![(x, 0.1), (u, -2.0)];
        m.add_constraint("dual_0_0", vec![(u, 1.0), (s, -1.0), (x, -0.5)], ConstraintSense::Le, 2.5);
        m.add_constraint("cap", vec![(f, 1.0)], ConstraintSense::Ge, -1.0);
        let text = write_lp(&m);
        assert!(text.contains(" obj: 1.0000000000000001e-1 x_0 - 2.0000000000000000e0 u_0_1\n"), "{text}");
        assert!(text.contains(
            " dual_0_0: 1.0000000000000000e0 u_0_1 - 1.0000000000000000e0 u_0_0 - 5.0000000000000000e-1 x_0 <= 2.5000000000000000e0\n"
        ));
        assert!(text.contains(" cap: 1.0000000000000000e0 f_0_0 >= -1.0000000000000000e0\n"));
        assert!(text.contains(" u_0_1 free\n"));
        assert!(text.contains(" u_0_0 = 0.0000000000000000e0\n"));
        assert!(text.contains(" 0.0000000000000000e0 <= f_0_0 <= 3.0000000000000000e0\n"));
        assert!(!text.contains("z_0"));
        let order: Vec<usize> = ["Minimize", "Subject To", "Bounds", "Binary", "End"]
            .iter()
            .map(|s| text.find(s).unwrap())
            .collect();
        assert!(order.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn long_rows_wrap() {
        let mut m = MilpModel::new();
        let xs: Vec<usize> = (0..20).map(|i| m.add_binary(format!("x_{i}"))).collect();
        m.add_constraint("card", xs.iter().map(|&v| (v, 1.0)).collect(), ConstraintSense::Eq, 3.0);
        let text = write_lp(&m);
        assert!(text.lines().all(|l| l.len() < 255));
        assert!(text.contains(" obj: 0 x_0\n"));
    }

    #[test]
    fn values_round_trip_through_text() {
        for v in [0.1, 1.0 / 3.0, 2.0f64.sqrt() * 1e-7, 123456.789] {
            assert_eq!(number(v).parse::<f64>().unwrap(), v);
        }
    }
}
