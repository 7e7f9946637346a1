//! Model builders for A_2(v,d;T).

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::grassmann::{ball, count, SubspaceIndex};

use super::model::{Constraint, IlpModel, ModelMeta, Sense, VarKind, Variable};

pub(crate) const MAX_MODEL_V: usize = 8;

pub(crate) fn check_dims(v: usize, dims: &BTreeSet<usize>) -> Result<()> {
    if v == 0 || v > MAX_MODEL_V {
        return Err(Error::InvalidParameter(format!(
            "models are built for 1 <= v <= {MAX_MODEL_V}, got {v}"
        )));
    }
    if dims.is_empty() || dims.iter().any(|&k| k > v) {
        return Err(Error::InvalidParameter(format!(
            "dimension set {dims:?} must be a nonempty subset of 0..={v}"
        )));
    }
    Ok(())
}

/// Ball-packing model for odd `d`: one binary per subspace whose dimension is
/// within (d-1)/2 of `dims` (fixed to 0 outside `dims`), one packing row per
/// subspace of F_2^v, and counters delta_k tied to the binaries.
pub fn build_base_model(v: usize, d: usize, dims: &BTreeSet<usize>) -> Result<IlpModel> {
    check_dims(v, dims)?;
    if d % 2 == 0 || d == 0 || d > v {
        return Err(Error::InvalidParameter(format!(
            "base model needs odd 1 <= d <= v, got d={d} (use even-d cuts for even d)"
        )));
    }
    packing_model(v, d, (d - 1) / 2, dims)
}

/// Shared construction of the ball model with packing radius `r`.
pub(crate) fn packing_model(
    v: usize,
    d: usize,
    r: usize,
    dims: &BTreeSet<usize>,
) -> Result<IlpModel> {
    let index = SubspaceIndex::new(v)?;
    let var_dims: Vec<usize> = (0..=v)
        .filter(|&k| dims.iter().any(|&t| k.abs_diff(t) <= r))
        .collect();

    let mut vars = Vec::new();
    let mut var_of = vec![None; index.total()];
    for &k in &var_dims {
        for g in index.range(k) {
            var_of[g] = Some(vars.len());
            vars.push(Variable {
                name: format!("x_{g}"),
                kind: VarKind::Subspace(index.subspaces()[g].clone()),
                objective: 0,
                lower: 0,
                upper: i64::from(dims.contains(&k)),
            });
        }
    }
    let mut counters = Vec::new();
    for &k in &var_dims {
        counters.push(vars.len());
        vars.push(Variable {
            name: format!("delta_{k}"),
            kind: VarKind::DimCount(k),
            objective: i64::from(dims.contains(&k)),
            lower: 0,
            upper: count(v, k) as i64,
        });
    }

    let mut constraints = Vec::new();
    for (g, w) in index.subspaces().iter().enumerate() {
        let mut terms: Vec<(usize, i64)> = ball(w, r)?
            .iter()
            .filter_map(|u| var_of[index.get(u).expect("indexed") as usize])
            .map(|i| (i, 1))
            .collect();
        if terms.is_empty() {
            continue;
        }
        terms.sort_unstable();
        constraints.push(Constraint {
            name: format!("ball_{g}"),
            terms,
            sense: Sense::Le,
            rhs: 1,
        });
    }
    for (&k, &c) in var_dims.iter().zip(&counters) {
        let mut terms = vec![(c, 1)];
        terms.extend(index.range(k).map(|g| (var_of[g].expect("var dim"), -1)));
        terms.sort_unstable();
        constraints.push(Constraint {
            name: format!("dim_{k}"),
            terms,
            sense: Sense::Eq,
            rhs: 0,
        });
    }

    Ok(IlpModel {
        vars,
        constraints,
        objective_offset: 0,
        meta: ModelMeta {
            v,
            d,
            dims: dims.clone(),
            group_order: None,
            gl_invariant: true,
            cuts: Vec::new(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all(v: usize) -> BTreeSet<usize> {
        (0..=v).collect()
    }

    #[test]
    fn base_model_counts() {
        let m = build_base_model(6, 3, &all(6)).unwrap();
        assert_eq!(m.binary_count(), 2825);
        assert_eq!(m.count_prefixed("ball_"), 2825);
        assert_eq!(m.count_prefixed("dim_"), 7);
        let m = build_base_model(4, 3, &all(4)).unwrap();
        assert_eq!(m.binary_count(), 67);
    }

    #[test]
    fn restricted_dims_pad_neighbours() {
        let m = build_base_model(6, 3, &BTreeSet::from([3])).unwrap();
        let live = m.vars.iter().filter(|x| x.is_binary() && x.upper == 1).count();
        assert_eq!(live, 1395);
        assert_eq!(m.count_prefixed("dim_"), 3);
        assert!(build_base_model(6, 4, &all(6)).is_err());
        assert!(build_base_model(9, 3, &all(9)).is_err());
    }
}
