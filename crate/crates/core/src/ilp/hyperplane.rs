//! Models for solid codes in F_2^8 with minimum distance 6, either in the
//! ambient space with prescribed codewords or through their section with a
//! hyperplane F_2^7.

use std::collections::{BTreeSet, HashMap};

use crate::code::SubspaceCode;
use crate::error::{Error, Result};
use crate::grassmann::{enumerate, subspaces_of, superspaces_of, SubspaceIndex};
use crate::linalg2::{meet_dim, Row, Subspace};

use super::model::{Constraint, IlpModel, ModelMeta, Sense, VarKind, Variable};
use super::search::{self, Packing};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HyperplaneMode {
    /// Solids of F_2^8 containing the prescribed ones, with at most
    /// `point_cap` codewords through a point and `hyperplane_cap` in a
    /// hyperplane.
    Ambient8 { point_cap: u64, hyperplane_cap: u64 },
    /// Plane sections inside F_2^7 of a code whose solids in the hyperplane
    /// are the prescribed ones (16 or 17 of them).
    Hyperplane7,
}

/// Largest number of planes of `vars` inside `w` pairwise meeting in at
/// most a point.
pub fn omega(vars: &[Subspace], w: &Subspace) -> u64 {
    let inside: Vec<&Subspace> = vars.iter().filter(|u| u.is_subspace_of(w)).collect();
    if inside.is_empty() {
        return 0;
    }
    let mut p = Packing::new(vec![1; inside.len()]);
    for a in 0..inside.len() {
        for b in a + 1..inside.len() {
            if meet_dim(inside[a], inside[b]) >= 2 {
                p.add_conflict(a, b);
            }
        }
    }
    let out = search::solve(&p, None, None);
    debug_assert!(out.complete);
    out.best.map_or(0, |b| b.0)
}

/// Planes of F_2^7 meeting every prescribed solid in at most a point.
pub fn var7(prescribed: &[Subspace]) -> Result<Vec<Subspace>> {
    Ok(enumerate(7, 3)?
        .filter(|u| prescribed.iter().all(|s| meet_dim(u, s) <= 1))
        .collect())
}

fn check_solids(code: &SubspaceCode, v: usize) -> Result<Vec<Subspace>> {
    if code.ambient() != v {
        return Err(Error::DimensionMismatch(format!(
            "prescribed code lives in F_2^{}, expected F_2^{v}",
            code.ambient()
        )));
    }
    if let Some(w) = code.words().iter().find(|w| w.dim() != 4) {
        return Err(Error::InvalidParameter(format!(
            "prescribed codewords must be solids, found dimension {}",
            w.dim()
        )));
    }
    Ok(code.words().to_vec())
}

/// Builds the model for the given mode. The binaries are named after the
/// canonical index of their subspace in the ambient space of the model.
pub fn build_hyperplane_model(prescribed: &SubspaceCode, mode: HyperplaneMode) -> Result<IlpModel> {
    match mode {
        HyperplaneMode::Ambient8 {
            point_cap,
            hyperplane_cap,
        } => ambient8(&check_solids(prescribed, 8)?, point_cap, hyperplane_cap),
        HyperplaneMode::Hyperplane7 => {
            let f = check_solids(prescribed, 7)?;
            if !(16..=17).contains(&f.len()) {
                return Err(Error::InvalidParameter(format!(
                    "hyperplane model needs 16 or 17 prescribed solids, got {}",
                    f.len()
                )));
            }
            hyperplane7(&f)
        }
    }
}

struct Rows {
    rows: Vec<Constraint>,
    slot: HashMap<u32, usize>,
}

impl Rows {
    fn new() -> Self {
        Self {
            rows: Vec::new(),
            slot: HashMap::new(),
        }
    }

    /// Registers row `name` for the subspace with canonical index `g`.
    fn open(&mut self, g: u32, name: String, sense: Sense, rhs: i64) {
        self.slot.insert(g, self.rows.len());
        self.rows.push(Constraint {
            name,
            terms: Vec::new(),
            sense,
            rhs,
        });
    }

    fn add(&mut self, g: u32, var: usize) {
        if let Some(&r) = self.slot.get(&g) {
            self.rows[r].terms.push((var, 1));
        }
    }

    fn finish(self) -> Vec<Constraint> {
        self.rows.into_iter().filter(|c| !c.terms.is_empty()).collect()
    }
}

fn ambient8(f: &[Subspace], point_cap: u64, hyperplane_cap: u64) -> Result<IlpModel> {
    let index = SubspaceIndex::with_dims(8, &[1, 2, 4, 6, 7])?;
    let prescribed: BTreeSet<&Subspace> = f.iter().collect();
    let mut vars = Vec::new();
    for u in enumerate(8, 4)? {
        let g = index.get(&u).expect("indexed");
        let forced = i64::from(prescribed.contains(&u));
        vars.push(Variable {
            name: format!("x_{g}"),
            kind: VarKind::Subspace(u),
            objective: 1,
            lower: forced,
            upper: 1,
        });
    }
    let mut rows = Rows::new();
    for (k, prefix, rhs) in [
        (1, "pt", point_cap as i64),
        (2, "ln", 1),
        (6, "sx", 1),
        (7, "hp", hyperplane_cap as i64),
    ] {
        for g in index.range(k) {
            rows.open(g as u32, format!("{prefix}_{g}"), Sense::Le, rhs);
        }
    }
    for (i, var) in vars.iter().enumerate() {
        let VarKind::Subspace(u) = &var.kind else { unreachable!() };
        for w in subspaces_of(u, 1)?.iter().chain(&subspaces_of(u, 2)?) {
            rows.add(index.get(w).expect("indexed"), i);
        }
        for w in superspaces_of(u, 6)?.iter().chain(&superspaces_of(u, 7)?) {
            rows.add(index.get(w).expect("indexed"), i);
        }
    }
    Ok(IlpModel {
        vars,
        constraints: rows.finish(),
        objective_offset: 0,
        meta: ModelMeta {
            v: 8,
            d: 6,
            dims: BTreeSet::from([4]),
            group_order: None,
            gl_invariant: false,
            cuts: vec![format!("ambient8:f={point_cap},{hyperplane_cap}")],
        },
    })
}

fn hyperplane7(f: &[Subspace]) -> Result<IlpModel> {
    let nf = f.len() as i64;
    let index = SubspaceIndex::with_dims(7, &[1, 2, 3, 4, 5, 6])?;
    let planes = var7(f)?;
    let vars: Vec<Variable> = planes
        .iter()
        .map(|u| Variable {
            name: format!("x_{}", index.get(u).expect("indexed")),
            kind: VarKind::Subspace(u.clone()),
            objective: 1,
            lower: 0,
            upper: 1,
        })
        .collect();

    let mut rows = Rows::new();
    for w in enumerate(7, 1)? {
        let g = index.get(&w).expect("indexed");
        let through = f.iter().filter(|s| w.is_subspace_of(s)).count() as i64;
        rows.open(g, format!("pt_{g}"), Sense::Le, nf - through);
    }
    for w in enumerate(7, 2)? {
        if f.iter().all(|s| !w.is_subspace_of(s)) {
            let g = index.get(&w).expect("indexed");
            rows.open(g, format!("ln_{g}"), Sense::Le, 1);
        }
    }
    for w in enumerate(7, 4)? {
        if !f.contains(&w) {
            let g = index.get(&w).expect("indexed");
            rows.open(g, format!("so_{g}"), Sense::Le, 1);
        }
    }
    for w in enumerate(7, 5)? {
        if f.iter().all(|s| !s.is_subspace_of(&w)) {
            let g = index.get(&w).expect("indexed");
            let cap = omega(&planes, &w).min(7);
            rows.open(g, format!("fv_{g}"), Sense::Le, cap as i64);
        }
    }
    for w in enumerate(7, 6)? {
        let g = index.get(&w).expect("indexed");
        let inside = f.iter().filter(|s| s.is_subspace_of(&w)).count() as i64;
        rows.open(g, format!("hp_{g}"), Sense::Le, 2 * (nf - inside));
    }
    for (i, u) in planes.iter().enumerate() {
        for k in [1, 2] {
            for w in subspaces_of(u, k)? {
                rows.add(index.get(&w).expect("indexed"), i);
            }
        }
        for k in [4, 5, 6] {
            for w in superspaces_of(u, k)? {
                rows.add(index.get(&w).expect("indexed"), i);
            }
        }
    }
    let mut constraints = rows.finish();
    constraints.push(Constraint {
        name: "card".into(),
        terms: (0..vars.len()).map(|i| (i, 1)).collect(),
        sense: Sense::Ge,
        rhs: 255 - nf,
    });
    Ok(IlpModel {
        vars,
        constraints,
        objective_offset: nf,
        meta: ModelMeta {
            v: 7,
            d: 4,
            dims: BTreeSet::from([3]),
            group_order: None,
            gl_invariant: false,
            cuts: vec!["hyperplane7".into()],
        },
    })
}

/// Coordinates of the subspaces of `code` lying in the hyperplane `h`, and
/// of the sections of the remaining codewords with `h`, both expressed in
/// the basis of `h` given by its reduced echelon rows.
pub fn hyperplane_section(
    code: &SubspaceCode,
    h: &Subspace,
) -> Result<(SubspaceCode, SubspaceCode)> {
    let v = code.ambient();
    if h.ambient() != v || h.dim() + 1 != v {
        return Err(Error::InvalidParameter("expected a hyperplane of the ambient space".into()));
    }
    let pivots: Vec<usize> = (0..v).filter(|&c| h.pivot_mask() >> (v - 1 - c) & 1 == 1).collect();
    let coords = |s: &Subspace| -> Result<Subspace> {
        let rows: Vec<Row> = s
            .rows()
            .iter()
            .map(|&x| {
                pivots
                    .iter()
                    .fold(0 as Row, |acc, &c| (acc << 1) | ((x >> (v - 1 - c)) & 1))
            })
            .collect();
        Subspace::span(v - 1, &rows)
    };
    let mut inside = Vec::new();
    let mut traces = Vec::new();
    for w in code.words() {
        if w.is_subspace_of(h) {
            inside.push(coords(w)?);
        } else {
            traces.push(coords(&crate::linalg2::meet(w, h)?)?);
        }
    }
    Ok((
        SubspaceCode::from_subspaces(v - 1, inside)?,
        SubspaceCode::from_subspaces(v - 1, traces)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_of_full_five_space() {
        // planes of F_2^5 pairwise meeting in at most a point: A_2(5,4;3) = 9
        let all: Vec<Subspace> = enumerate(5, 3).unwrap().collect();
        let w = Subspace::full(5).unwrap();
        assert_eq!(omega(&all, &w), 9);
        assert_eq!(omega(&[], &w), 0);
    }

    #[test]
    fn hyperplane7_needs_16_or_17() {
        let f = SubspaceCode::from_subspaces(7, enumerate(7, 4).unwrap().take(3)).unwrap();
        assert!(build_hyperplane_model(&f, HyperplaneMode::Hyperplane7).is_err());
        let bad = SubspaceCode::from_subspaces(7, enumerate(7, 3).unwrap().take(16)).unwrap();
        assert!(build_hyperplane_model(&bad, HyperplaneMode::Hyperplane7).is_err());
    }
}
