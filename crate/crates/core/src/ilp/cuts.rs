//! Valid inequalities added on top of the ball-packing model.

use std::collections::HashMap;

use crate::bounds::cdc_bounds;
use crate::error::{Error, Result};
use crate::grassmann::{enumerate, subspaces_of, superspaces_of, SubspaceIndex};
use crate::linalg2::Subspace;

use super::model::{Constraint, IlpModel, Sense, VarKind};

/// Incidence triple (k, l, a): at most `a` chosen k-subspaces are incident
/// with any l-subspace.
pub type IncidenceTriple = (usize, usize, u64);

/// Triples derived from known constant-dimension upper bounds, keeping only
/// those with a >= 2 (for a = 1 the cut follows from the distance rows).
pub fn auto_incidence_set(v: usize, d: usize) -> Vec<IncidenceTriple> {
    let mut out = Vec::new();
    for k in 1..v {
        for l in 1..v {
            let a = if k <= l {
                cdc_bounds(l, d, k)
            } else {
                cdc_bounds(v - l, d, k - l)
            };
            if let Some((_, a)) = a {
                if a >= 2 {
                    out.push((k, l, a));
                }
            }
        }
    }
    out
}

fn subspace_vars(m: &IlpModel) -> Result<HashMap<Subspace, usize>> {
    let mut map = HashMap::new();
    for (i, var) in m.vars.iter().enumerate() {
        match &var.kind {
            VarKind::Subspace(s) => {
                map.insert(s.clone(), i);
            }
            VarKind::DimCount(_) => {}
            VarKind::Orbit(_) => {
                return Err(Error::Unsupported(
                    "cuts are added before orbit reduction".into(),
                ))
            }
        }
    }
    Ok(map)
}

/// Adds, for each (k, l, a) and every l-subspace L,
/// sum_{U incident with L, dim U = k} x_U + [|k-l| < d] a x_L <= a.
pub fn add_incidence_cuts(mut m: IlpModel, set: &[IncidenceTriple]) -> Result<IlpModel> {
    let (v, d) = (m.meta.v, m.meta.d);
    let vars = subspace_vars(&m)?;
    let index = SubspaceIndex::new(v)?;
    for &(k, l, a) in set {
        if a < 2 {
            return Err(Error::InvalidParameter(format!(
                "incidence triple ({k},{l},{a}) needs a >= 2"
            )));
        }
        if k == 0 || l == 0 || k >= v || l >= v {
            return Err(Error::InvalidParameter(format!(
                "incidence triple ({k},{l},{a}) needs 1 <= k, l <= {}",
                v - 1
            )));
        }
        for big_l in enumerate(v, l)? {
            let incident = if k <= l {
                subspaces_of(&big_l, k)?
            } else {
                superspaces_of(&big_l, k)?
            };
            let mut terms: Vec<(usize, i64)> = incident
                .iter()
                .filter_map(|u| vars.get(u))
                .filter(|&&i| m.vars[i].upper > 0)
                .map(|&i| (i, 1))
                .collect();
            let own = vars.get(&big_l).copied().filter(|&i| m.vars[i].upper > 0);
            if k.abs_diff(l) < d {
                if let Some(i) = own {
                    terms.push((i, a as i64));
                }
            }
            if terms.is_empty() {
                continue;
            }
            terms.sort_unstable();
            m.constraints.push(Constraint {
                name: format!("ie_{k}_{l}_{}", index.get(&big_l).expect("indexed")),
                terms,
                sense: Sense::Le,
                rhs: a as i64,
            });
        }
    }
    m.meta.cuts.push("ie_add".into());
    Ok(m)
}

/// Triples (a, b, i) with a < b, i <= a and a + b - 2i = d - 1 inside F_2^v:
/// an a- and a b-subspace meeting in an i-subspace are at distance d - 1.
pub fn even_d_triples(v: usize, d: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for a in 0..=v {
        for b in a + 1..=v {
            for i in 0..=a {
                if a + b == d - 1 + 2 * i && b - i <= v - i {
                    out.push((a, b, i));
                }
            }
        }
    }
    out
}

/// Turns a model for distance d-1 (odd) into one for even `d`: for each
/// triple (a,b,i) and i-subspace W,
/// sum_{U >= W, dim a} L x_U + sum_{U >= W, dim b} x_U <= L
/// with L an upper bound for A_2(v-i, d; b-i).
pub fn add_even_d_cuts(mut m: IlpModel, d: usize) -> Result<IlpModel> {
    let v = m.meta.v;
    if d % 2 == 1 || d == 0 || d > v {
        return Err(Error::InvalidParameter(format!(
            "even-d cuts need even 2 <= d <= v, got {d}"
        )));
    }
    if m.meta.d + 1 != d {
        return Err(Error::Precondition(format!(
            "even-d cuts for d={d} extend a model built for d={}",
            d - 1
        )));
    }
    let vars = subspace_vars(&m)?;
    let index = SubspaceIndex::new(v)?;
    for (a, b, i) in even_d_triples(v, d) {
        let lambda = cdc_bounds(v - i, d, b - i)
            .map(|x| x.1)
            .unwrap_or_else(|| crate::grassmann::count(v - i, b - i));
        for w in enumerate(v, i)? {
            let live = |j: usize| -> Result<Vec<usize>> {
                Ok(superspaces_of(&w, j)?
                    .iter()
                    .filter_map(|u| vars.get(u).copied())
                    .filter(|&x| m.vars[x].upper > 0)
                    .collect())
            };
            let small = live(a)?;
            let large = live(b)?;
            if small.is_empty() && large.len() as u64 <= lambda {
                continue;
            }
            let mut terms: Vec<(usize, i64)> = small.iter().map(|&x| (x, lambda as i64)).collect();
            terms.extend(large.iter().map(|&x| (x, 1)));
            terms.sort_unstable();
            m.constraints.push(Constraint {
                name: format!("even_{a}_{b}_{}", index.get(&w).expect("indexed")),
                terms,
                sense: Sense::Le,
                rhs: lambda as i64,
            });
        }
    }
    m.meta.d = d;
    m.meta.cuts.push("even".into());
    Ok(m)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::grassmann::count;
    use crate::ilp::build::build_base_model;
    use crate::ilp::solve::{solve_exact, SolveStatus};

    fn all(v: usize) -> BTreeSet<usize> {
        (0..=v).collect()
    }

    #[test]
    fn auto_set_for_6_3() {
        let s: BTreeSet<_> = auto_incidence_set(6, 3).into_iter().collect();
        let want = BTreeSet::from([(2, 4, 5), (2, 5, 9), (3, 1, 9), (3, 5, 9), (4, 1, 9), (4, 2, 5)]);
        assert_eq!(s, want);
    }

    #[test]
    fn incidence_family_sizes() {
        let m = build_base_model(6, 3, &all(6)).unwrap();
        let m = add_incidence_cuts(m, &auto_incidence_set(6, 3)).unwrap();
        assert_eq!(m.count_prefixed("ie_2_4_"), count(6, 4) as usize);
        assert_eq!(m.count_prefixed("ie_3_1_"), count(6, 1) as usize);
        assert_eq!(m.meta.cuts, vec!["ie_add".to_string()]);
        let base = build_base_model(6, 3, &all(6)).unwrap();
        assert!(add_incidence_cuts(base, &[(2, 4, 1)]).is_err());
    }

    #[test]
    fn cuts_keep_optimum() {
        let m = build_base_model(4, 3, &all(4)).unwrap();
        assert!(auto_incidence_set(4, 3).is_empty());
        let m = add_incidence_cuts(m, &[(1, 3, 7), (3, 1, 7), (2, 3, 3)]).unwrap();
        assert_eq!(m.count_prefixed("ie_1_3_"), 15);
        let r = solve_exact(&m, None).unwrap();
        assert_eq!((r.status, r.value), (SolveStatus::Optimal, Some(5)));
    }

    #[test]
    fn even_triples_d4() {
        for (a, b, i) in even_d_triples(6, 4) {
            assert!(a < b && i <= a);
            assert_eq!(a + b - 2 * i, 3);
        }
        assert!(even_d_triples(6, 4).contains(&(1, 2, 0)));
        assert!(even_d_triples(6, 4).contains(&(2, 3, 1)));
        assert!(even_d_triples(4, 4).contains(&(0, 3, 0)));
    }

    #[test]
    fn even_models_small() {
        for (v, d, want) in [(3, 2, 8), (4, 2, 37), (4, 4, 5), (3, 2, 8), (2, 2, 3)] {
            let m = build_base_model(v, d - 1, &all(v)).unwrap();
            let m = add_even_d_cuts(m, d).unwrap();
            let r = solve_exact(&m, None).unwrap();
            assert_eq!((r.status, r.value), (SolveStatus::Optimal, Some(want)), "v={v} d={d}");
            assert!(r.code.unwrap().verify(d, &all(v)).is_ok());
        }
        let m = build_base_model(4, 3, &all(4)).unwrap();
        assert!(add_even_d_cuts(m.clone(), 3).is_err());
        assert!(add_even_d_cuts(m, 2).is_err());
    }
}
