//! Orbit reduction of a model under a prescribed automorphism group.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::group::MatrixGroup;
use crate::linalg2::Subspace;

use super::model::{Constraint, IlpModel, Sense, VarKind, Variable};

/// Merges the subspace variables of `m` along the orbits of `g`: one binary
/// per orbit, rows aggregated per orbit and duplicate rows dropped. Orbits
/// that cannot be chosen entirely (some aggregated packing coefficient
/// exceeds its right-hand side) are fixed to 0.
///
/// Every feasible point of the result expands to a `g`-invariant feasible
/// point of `m`, so its optimum is a lower bound for the optimum of `m`.
pub fn reduce_kramer_mesner(m: &IlpModel, g: &MatrixGroup) -> Result<IlpModel> {
    if g.ambient() != m.meta.v {
        return Err(Error::DimensionMismatch(format!(
            "group acts on F_2^{}, model lives in F_2^{}",
            g.ambient(),
            m.meta.v
        )));
    }
    if g.order() == 1 {
        return Ok(m.clone());
    }
    let mut position: HashMap<&Subspace, usize> = HashMap::new();
    for (i, var) in m.vars.iter().enumerate() {
        match &var.kind {
            VarKind::Subspace(s) => {
                position.insert(s, i);
            }
            VarKind::DimCount(_) => {}
            VarKind::Orbit(_) => {
                return Err(Error::Unsupported("model is already orbit-reduced".into()))
            }
        }
    }

    // new index of every old variable
    let mut new_of = vec![usize::MAX; m.vars.len()];
    let mut vars: Vec<Variable> = Vec::new();
    for (i, var) in m.vars.iter().enumerate() {
        if new_of[i] != usize::MAX {
            continue;
        }
        let VarKind::Subspace(s) = &var.kind else {
            new_of[i] = vars.len();
            vars.push(var.clone());
            continue;
        };
        let orbit = g.orbit(s);
        let mut objective = 0;
        for u in &orbit {
            let j = *position.get(u).ok_or_else(|| {
                Error::Precondition(format!("orbit of {} leaves the model variables", var.name))
            })?;
            let other = &m.vars[j];
            if (other.lower, other.upper) != (var.lower, var.upper) {
                return Err(Error::Precondition(format!(
                    "bounds of {} and {} differ inside one orbit",
                    var.name, other.name
                )));
            }
            objective += other.objective;
            new_of[j] = vars.len();
        }
        let rep = &m.vars[position[&orbit[0]]];
        vars.push(Variable {
            name: match rep.name.strip_prefix("x_") {
                Some(rest) => format!("o_{rest}"),
                None => format!("o_{}", rep.name),
            },
            kind: VarKind::Orbit(orbit),
            objective,
            lower: var.lower,
            upper: var.upper,
        });
    }

    let mut seen: HashSet<(Vec<(usize, i64)>, Sense, i64)> = HashSet::new();
    let mut constraints = Vec::new();
    for c in &m.constraints {
        let mut agg: HashMap<usize, i64> = HashMap::new();
        for &(i, a) in &c.terms {
            *agg.entry(new_of[i]).or_default() += a;
        }
        let mut terms: Vec<(usize, i64)> = agg.into_iter().filter(|t| t.1 != 0).collect();
        terms.sort_unstable();
        let key = (terms, c.sense, c.rhs);
        if seen.contains(&key) {
            continue;
        }
        seen.insert(key.clone());
        constraints.push(Constraint {
            name: c.name.clone(),
            terms: key.0,
            sense: c.sense,
            rhs: c.rhs,
        });
    }

    for c in &constraints {
        if c.sense == Sense::Le && c.rhs >= 0 && c.terms.iter().all(|t| t.1 >= 0) {
            for &(i, a) in &c.terms {
                if a > c.rhs && vars[i].is_binary() && vars[i].lower == 0 {
                    vars[i].upper = 0;
                }
            }
        }
    }

    let mut meta = m.meta.clone();
    meta.group_order = Some(g.order());
    meta.gl_invariant = false;
    Ok(IlpModel {
        vars,
        constraints,
        objective_offset: m.objective_offset,
        meta,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::group::orbits;
    use crate::ilp::build::build_base_model;
    use crate::ilp::solve::{solve_exact, SolveStatus};
    use crate::linalg2::BitMatrix;

    fn all(v: usize) -> BTreeSet<usize> {
        (0..=v).collect()
    }

    #[test]
    fn trivial_group_keeps_model() {
        let m = build_base_model(4, 3, &all(4)).unwrap();
        let r = reduce_kramer_mesner(&m, &MatrixGroup::trivial(4).unwrap()).unwrap();
        assert_eq!(r, m);
    }

    #[test]
    fn singer_cycle_on_f2_4() {
        // multiplication by a primitive element of GF(16): order 15
        let c = BitMatrix::from_strings(&["0100", "0010", "0001", "1100"]).unwrap();
        let g = MatrixGroup::closure(4, &[c], 100).unwrap();
        assert_eq!(g.order(), 15);
        let m = build_base_model(4, 3, &all(4)).unwrap();
        let r = reduce_kramer_mesner(&m, &g).unwrap();
        let want: usize = (0..=4).map(|k| orbits(&g, k).unwrap().orbits.len()).sum();
        assert_eq!(r.binary_count(), want);
        assert_eq!(r.meta.group_order, Some(15));
        assert!(!r.meta.gl_invariant);
        // the Desarguesian spread is Singer-invariant
        let s = solve_exact(&r, None).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        assert_eq!(s.value, Some(5));
        let code = s.code.unwrap();
        assert!(code.verify(3, &all(4)).is_ok());
        for e in g.generators() {
            assert_eq!(code.transform(e).unwrap(), code);
        }
    }
}
