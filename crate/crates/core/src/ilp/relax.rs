//! Linear programming relaxation of a model.

use microlp::{ComparisonOp, OptimizationDirection, Problem};

use crate::error::{Error, Result};

use super::model::{IlpModel, Sense};

/// Optimum of the LP relaxation including the objective offset, or `None`
/// when the relaxation is infeasible (and so is the model).
pub fn relax(m: &IlpModel) -> Result<Option<f64>> {
    let mut p = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = m
        .vars
        .iter()
        .map(|v| p.add_var(v.objective as f64, (v.lower as f64, v.upper as f64)))
        .collect();
    for c in &m.constraints {
        let terms: Vec<_> = c.terms.iter().map(|&(i, a)| (vars[i], a as f64)).collect();
        let op = match c.sense {
            Sense::Le => ComparisonOp::Le,
            Sense::Eq => ComparisonOp::Eq,
            Sense::Ge => ComparisonOp::Ge,
        };
        p.add_constraint(terms.as_slice(), op, c.rhs as f64);
    }
    match p.solve() {
        Ok(out) => match out.solution() {
            Some(sol) => Ok(Some(sol.objective() + m.objective_offset as f64)),
            None => Err(Error::Unsupported("LP relaxation was interrupted".into())),
        },
        Err(microlp::Error::Infeasible) => Ok(None),
        Err(e) => Err(Error::Unsupported(format!("LP relaxation failed: {e}"))),
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::ilp::build::build_base_model;
    use crate::ilp::solve::solve_exact;

    #[test]
    fn relaxation_bounds_the_optimum() {
        for (v, d) in [(3, 3), (4, 3), (4, 1)] {
            let dims: BTreeSet<usize> = (0..=v).collect();
            let m = build_base_model(v, d, &dims).unwrap();
            let lp = relax(&m).unwrap().unwrap();
            let ilp = solve_exact(&m, None).unwrap().value.unwrap();
            assert!(lp + 1e-6 >= ilp as f64, "v={v} d={d}: {lp} < {ilp}");
        }
    }

    #[test]
    fn infeasible_relaxation() {
        let mut m = build_base_model(3, 3, &BTreeSet::from([1])).unwrap();
        m.vars[0].lower = 1;
        m.vars[1].lower = 1;
        assert_eq!(relax(&m).unwrap(), None);
    }
}
