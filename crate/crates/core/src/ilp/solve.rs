//! Exact solving of packing-form models and the clique formulation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::time::{Duration, Instant};

use crate::code::SubspaceCode;
use crate::error::{Error, Result};
use crate::grassmann::{enumerate, PointMask};
use crate::group::MatrixGroup;
use crate::linalg2::{distance_unchecked, Subspace};

use super::bits::Bits;
use super::model::{IlpModel, Sense, VarKind};
use super::search::{self, Packing, Row};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    /// Search finished; the value is optimal.
    Optimal,
    /// Time limit hit with an incumbent.
    Feasible,
    /// Search finished without any feasible point.
    Infeasible,
    /// Time limit hit before any feasible point was seen.
    Unknown,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Feasible => "feasible",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Objective value of the incumbent, including any constant offset.
    pub value: Option<i64>,
    /// Codewords selected by the incumbent, orbits expanded.
    pub code: Option<SubspaceCode>,
    /// Incumbent values of every model variable.
    pub assignment: Option<Vec<i64>>,
    pub nodes: u64,
    pub elapsed: Duration,
}

/// Packing view of a model: engine vertex i is model variable `vars[i]`.
struct Reduced {
    packing: Packing,
    vars: Vec<usize>,
    offset: i64,
    /// Some row can never hold.
    infeasible: bool,
    /// (counter variable, constant, coefficients over model vars) so that
    /// counter = constant + sum coef * x.
    definitions: Vec<(usize, i64, Vec<(usize, i64)>)>,
}

fn unsupported(msg: impl Into<String>) -> Error {
    Error::Unsupported(msg.into())
}

/// Conflicts are stored densely; this keeps the matrix near 128 MiB.
const MAX_VERTICES: usize = 1 << 15;

/// Rewrites a model as a weighted packing problem over its binary variables.
fn reduce(m: &IlpModel) -> Result<Reduced> {
    let nv = m.vars.len();
    // counters defined by an equality with a unit coefficient
    let mut defined: Vec<Option<usize>> = vec![None; nv];
    let mut uses = vec![0usize; nv];
    for c in &m.constraints {
        for &(i, _) in &c.terms {
            uses[i] += 1;
        }
    }
    for (ci, c) in m.constraints.iter().enumerate() {
        if c.sense != Sense::Eq {
            continue;
        }
        let general: Vec<_> = c.terms.iter().filter(|(i, _)| !m.vars[*i].is_binary()).collect();
        if let [&(g, a)] = general.as_slice() {
            if a.abs() == 1 && uses[g] == 1 && defined[g].is_none() {
                defined[g] = Some(ci);
            }
        }
    }
    for (i, var) in m.vars.iter().enumerate() {
        if !var.is_binary() && defined[i].is_none() {
            return Err(unsupported(format!(
                "general integer variable {} is not defined by an equality",
                var.name
            )));
        }
    }

    let mut weight = vec![0i64; nv];
    let mut offset = m.objective_offset;
    let mut rows: Vec<(Vec<(usize, i64)>, Sense, i64)> = Vec::new();
    let mut definitions = Vec::new();
    for (i, var) in m.vars.iter().enumerate() {
        match defined[i] {
            None => weight[i] += var.objective,
            Some(ci) => {
                // a*g + sum b_j x_j = rhs  =>  g = (rhs - sum b_j x_j) / a
                let c = &m.constraints[ci];
                let a = c.terms.iter().find(|t| t.0 == i).expect("term").1;
                let konst = c.rhs * a;
                let expr: Vec<(usize, i64)> = c
                    .terms
                    .iter()
                    .filter(|t| t.0 != i)
                    .map(|&(j, b)| (j, -b * a))
                    .collect();
                offset += var.objective * konst;
                for &(j, e) in &expr {
                    weight[j] += var.objective * e;
                }
                rows.push((expr.clone(), Sense::Le, var.upper - konst));
                rows.push((expr.clone(), Sense::Ge, var.lower - konst));
                definitions.push((i, konst, expr));
            }
        }
    }
    let definition_rows: BTreeSet<usize> = defined.iter().flatten().copied().collect();
    for (ci, c) in m.constraints.iter().enumerate() {
        if !definition_rows.contains(&ci) {
            if c.terms.iter().any(|t| defined[t.0].is_some()) {
                return Err(unsupported(format!(
                    "row {} uses a defined counter variable",
                    c.name
                )));
            }
            rows.push((c.terms.clone(), c.sense, c.rhs));
        }
    }

    // live binaries
    let mut vertex_of = vec![None; nv];
    let mut vars = Vec::new();
    let mut forced = Vec::new();
    for (i, var) in m.vars.iter().enumerate() {
        if defined[i].is_none() && var.upper >= 1 {
            if weight[i] < 0 {
                return Err(unsupported(format!(
                    "variable {} has a negative objective weight",
                    var.name
                )));
            }
            vertex_of[i] = Some(vars.len());
            if var.lower >= 1 {
                forced.push(vars.len());
            }
            vars.push(i);
        }
    }
    if vars.len() > MAX_VERTICES {
        return Err(unsupported(format!(
            "{} live binaries exceed the dense conflict limit of {MAX_VERTICES}",
            vars.len()
        )));
    }
    let mut p = Packing::new(vars.iter().map(|&i| weight[i] as u64).collect());
    p.forced = forced;

    let mut fixed_zero = vec![false; vars.len()];
    let mut packing_rows = Vec::new();
    let mut cover_rows = Vec::new();
    for (terms, sense, rhs) in rows {
        let live: Vec<(usize, i64)> = terms
            .iter()
            .filter_map(|&(i, a)| vertex_of[i].map(|v| (v, a)))
            .filter(|t| t.1 != 0)
            .collect();
        let senses: &[Sense] = match sense {
            Sense::Eq => &[Sense::Le, Sense::Ge],
            Sense::Le => &[Sense::Le],
            Sense::Ge => &[Sense::Ge],
        };
        for &s in senses {
            let (mut t, mut r, mut s) = (live.clone(), rhs, s);
            if t.iter().all(|x| x.1 <= 0) {
                t.iter_mut().for_each(|x| x.1 = -x.1);
                r = -r;
                s = if s == Sense::Le { Sense::Ge } else { Sense::Le };
            }
            if t.iter().any(|x| x.1 < 0) {
                return Err(unsupported("row with mixed coefficient signs"));
            }
            match s {
                Sense::Le => packing_rows.push((t, r)),
                _ => cover_rows.push((t, r)),
            }
        }
    }
    let mut infeasible = false;
    for (terms, rhs) in packing_rows {
        if rhs < 0 {
            infeasible = true;
            continue;
        }
        let rhs = rhs as u64;
        let mut t: Vec<(usize, u64)> = terms.into_iter().map(|(i, a)| (i, a as u64)).collect();
        for &(i, a) in &t {
            if a > rhs {
                fixed_zero[i] = true;
            }
        }
        t.retain(|&(i, a)| a <= rhs && !fixed_zero[i]);
        t.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
        let total: u64 = t.iter().map(|x| x.1).sum();
        if total <= rhs {
            continue;
        }
        let mut all_pairs = true;
        for a in 0..t.len() {
            for b in a + 1..t.len() {
                if t[a].1 + t[b].1 > rhs {
                    p.add_conflict(t[a].0, t[b].0);
                } else {
                    all_pairs = false;
                    break;
                }
            }
        }
        if !all_pairs {
            t.sort_unstable();
            p.capacities.push(Row { terms: t, rhs });
        }
    }
    for (terms, rhs) in cover_rows {
        if rhs <= 0 {
            continue;
        }
        let t = terms.into_iter().map(|(i, a)| (i, a as u64)).collect();
        p.covers.push(Row { terms: t, rhs: rhs as u64 });
    }
    // a zero-capacity row keeps fixed vertices out of every candidate set
    let zeros: Vec<usize> = (0..vars.len()).filter(|&i| fixed_zero[i]).collect();
    if !zeros.is_empty() {
        p.capacities.push(Row {
            terms: zeros.into_iter().map(|i| (i, 1)).collect(),
            rhs: 0,
        });
    }
    Ok(Reduced {
        packing: p,
        vars,
        offset,
        infeasible,
        definitions,
    })
}

fn expand(m: &IlpModel, red: &Reduced, set: &[usize]) -> Result<(Vec<i64>, SubspaceCode)> {
    let mut x = vec![0i64; m.vars.len()];
    let mut words = Vec::new();
    for &v in set {
        let i = red.vars[v];
        x[i] = 1;
        words.extend(m.vars[i].subspaces().iter().cloned());
    }
    for (g, konst, expr) in &red.definitions {
        x[*g] = konst + expr.iter().map(|&(j, e)| e * x[j]).sum::<i64>();
    }
    Ok((x, SubspaceCode::from_subspaces(m.meta.v, words)?))
}

/// Node budget for the sub-solves that derive per-class capacity rows.
const CAP_NODES: u64 = 2_000_000;

/// Dimension of the subspaces behind each vertex, when they share one.
fn vertex_dims(m: &IlpModel, red: &Reduced) -> Vec<Option<usize>> {
    red.vars
        .iter()
        .map(|&i| {
            let subs = m.vars[i].subspaces();
            let k = subs.first()?.dim();
            subs.iter().all(|s| s.dim() == k).then_some(k)
        })
        .collect()
}

/// Exact optimum of the sub-problem on `members`, if found within budget.
fn class_cap(p: &Packing, members: &[usize], nodes: &mut u64) -> Option<u64> {
    let out = search::solve_limited(&p.restrict(members), None, Some(CAP_NODES), None);
    *nodes += out.nodes;
    out.complete.then(|| out.best.map_or(0, |b| b.0))
}

/// Adds a capacity row per dimension class (merging neighbouring classes
/// when that tightens the cap); the engine bounds each class by its row.
fn add_class_caps(p: &mut Packing, dims: &[Option<usize>], nodes: &mut u64) {
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, k) in dims.iter().enumerate() {
        if let Some(k) = k {
            classes.entry(*k).or_default().push(i);
        }
    }
    let weight = |ms: &[usize]| -> u64 { ms.iter().map(|&i| p.weights[i]).sum() };
    let mut groups: Vec<(Vec<usize>, u64)> = Vec::new();
    for members in classes.into_values() {
        let cap = class_cap(p, &members, nodes).unwrap_or_else(|| weight(&members));
        if let Some((last, last_cap)) = groups.last_mut() {
            let mut union = last.clone();
            union.extend(&members);
            union.sort_unstable();
            if let Some(u) = class_cap(p, &union, nodes) {
                if u < *last_cap + cap {
                    *last = union;
                    *last_cap = u;
                    continue;
                }
            }
        }
        groups.push((members, cap));
    }
    let rows: Vec<Row> = groups
        .into_iter()
        .filter(|(ms, cap)| *cap < weight(ms))
        .map(|(ms, cap)| Row {
            terms: ms.iter().map(|&i| (i, p.weights[i])).collect(),
            rhs: cap,
        })
        .collect();
    p.capacities.splice(0..0, rows);
}

/// Accumulates the results of a sequence of sub-searches.
struct Split {
    best: Option<(u64, Vec<usize>)>,
    complete: bool,
    nodes: u64,
    deadline: Option<Instant>,
}

impl Split {
    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    fn run(&mut self, p: &Packing) {
        let left = self.deadline.map(|d| d.saturating_duration_since(Instant::now()));
        let out = search::solve(p, left, self.best.as_ref().map(|b| b.0));
        self.nodes += out.nodes;
        self.complete &= out.complete;
        if let Some(b) = out.best {
            if self.best.as_ref().is_none_or(|o| b.0 > o.0) {
                self.best = Some(b);
            }
        }
    }
}

/// Largest stabilizer enumerated explicitly during orbital branching.
const STABILIZER_CAP: usize = 400_000;
/// Depth up to which orbital branching is applied before plain search.
const ORBITAL_DEPTH: usize = 8;

/// Symmetries known to preserve the feasible set at a search node.
enum Symmetry {
    /// All of GL(v,2); its orbits on vertices are the dimension classes.
    Full,
    Group(MatrixGroup),
    Unknown,
}

/// Orbital branching for models whose feasible set is GL(v,2)-invariant.
///
/// At a node with forced set F, excluded set X and a group G fixing F and X,
/// every code is equivalent under G to one whose first orbit met (in a fixed
/// orbit order) contains that orbit's representative. Children force each
/// representative in turn while excluding the earlier orbits; the child
/// group is the stabilizer of the new representative.
struct Orbital<'a> {
    base: &'a Packing,
    subs: &'a [&'a Subspace],
    dims: &'a [Option<usize>],
    position: HashMap<&'a Subspace, usize>,
}

impl Orbital<'_> {
    fn node(&self, forced: &[usize], excluded: &Bits, sym: Symmetry, depth: usize, split: &mut Split) {
        if split.expired() {
            split.complete = false;
            return;
        }
        let n = self.base.n;
        let mut q = self.base.clone();
        q.forced = forced.to_vec();
        let gone: Vec<usize> = excluded.iter().collect();
        q = excluding(&q, &gone);
        let Some(bound) = search::root_bound(&q) else {
            return;
        };
        if split.best.as_ref().is_some_and(|b| bound <= b.0) {
            return;
        }
        let candidates: Vec<usize> = (0..n)
            .filter(|&v| !excluded.test(v) && !forced.contains(&v))
            .filter(|&v| !forced.iter().any(|&f| q.conflicts[f].test(v)))
            .collect();
        let orbits: Vec<Vec<usize>> = match &sym {
            _ if depth >= ORBITAL_DEPTH || candidates.is_empty() => Vec::new(),
            Symmetry::Unknown => Vec::new(),
            Symmetry::Full => group_classes(candidates.iter().copied(), |v| self.dims[v]),
            Symmetry::Group(g) if g.order() == 1 => Vec::new(),
            Symmetry::Group(g) => self.explicit_orbits(g, &candidates),
        };
        if orbits.is_empty() {
            split.run(&q);
            return;
        }
        // the code is exactly the forced set
        split.run(&excluding(&q, &candidates));
        let mut gone = excluded.clone();
        for orbit in &orbits {
            let rep = orbit[0];
            let child = match &sym {
                Symmetry::Full => crate::group::gl_stabilizer(self.subs[rep], STABILIZER_CAP)
                    .map_or(Symmetry::Unknown, Symmetry::Group),
                Symmetry::Group(g) => Symmetry::Group(g.stabilizer(self.subs[rep])),
                Symmetry::Unknown => Symmetry::Unknown,
            };
            let mut f = forced.to_vec();
            f.push(rep);
            self.node(&f, &gone, child, depth + 1, split);
            for &v in orbit {
                gone.set(v);
            }
        }
    }

    /// Orbits of `g` on an invariant vertex set, each sorted, largest first.
    fn explicit_orbits(&self, g: &MatrixGroup, verts: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = Bits::new(self.base.n);
        let mut out = Vec::new();
        for &v in verts {
            if seen.test(v) {
                continue;
            }
            let mut orbit: Vec<usize> = g
                .elements()
                .iter()
                .map(|e| self.position[&self.subs[v].transform_unchecked(e)])
                .collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &u in &orbit {
                seen.set(u);
            }
            out.push(orbit);
        }
        out.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        out
    }
}

/// Partitions vertices into classes by `key`, largest class first.
fn group_classes<K: Ord>(verts: impl Iterator<Item = usize>, key: impl Fn(usize) -> K) -> Vec<Vec<usize>> {
    let mut by: BTreeMap<K, Vec<usize>> = BTreeMap::new();
    for v in verts {
        by.entry(key(v)).or_default().push(v);
    }
    let mut out: Vec<Vec<usize>> = by.into_values().collect();
    out.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    out
}

fn excluding(p: &Packing, gone: &[usize]) -> Packing {
    let mut q = p.clone();
    if !gone.is_empty() {
        q.capacities.push(Row {
            terms: gone.iter().map(|&i| (i, 1)).collect(),
            rhs: 0,
        });
    }
    q
}

/// Solves a packing-form model exactly, or returns the best incumbent found
/// within `time_limit`.
pub fn solve_exact(m: &IlpModel, time_limit: Option<Duration>) -> Result<SolveResult> {
    let start = Instant::now();
    let mut red = reduce(m)?;
    let mut split = Split {
        best: None,
        complete: true,
        nodes: 0,
        deadline: time_limit.map(|l| start + l),
    };
    if !red.infeasible {
        let dims = vertex_dims(m, &red);
        add_class_caps(&mut red.packing, &dims, &mut split.nodes);
        let subs: Option<Vec<&Subspace>> = red
            .vars
            .iter()
            .map(|&i| match &m.vars[i].kind {
                VarKind::Subspace(s) => Some(s),
                _ => None,
            })
            .collect();
        match subs {
            Some(subs) if m.meta.gl_invariant && red.packing.forced.is_empty() => {
                let orbital = Orbital {
                    base: &red.packing,
                    subs: &subs,
                    dims: &dims,
                    position: subs.iter().enumerate().map(|(i, s)| (*s, i)).collect(),
                };
                orbital.node(&[], &Bits::new(red.packing.n), Symmetry::Full, 0, &mut split);
            }
            _ => split.run(&red.packing),
        }
    }
    let mut result = SolveResult {
        status: match (split.complete, split.best.is_some()) {
            (true, true) => SolveStatus::Optimal,
            (true, false) => SolveStatus::Infeasible,
            (false, true) => SolveStatus::Feasible,
            (false, false) => SolveStatus::Unknown,
        },
        value: None,
        code: None,
        assignment: None,
        nodes: split.nodes,
        elapsed: Duration::ZERO,
    };
    if let Some((w, set)) = split.best {
        let (x, code) = expand(m, &red, &set)?;
        check_incumbent(m, &x, &code)?;
        let value = m.objective_value(&x);
        debug_assert_eq!(value, red.offset + w as i64);
        result.value = Some(value);
        result.code = Some(code);
        result.assignment = Some(x);
    }
    result.elapsed = start.elapsed();
    Ok(result)
}

/// Every reported incumbent must satisfy the model and, when the model
/// records a distance, be a valid code for it.
fn check_incumbent(m: &IlpModel, x: &[i64], code: &SubspaceCode) -> Result<()> {
    if !m.is_feasible(x) {
        return Err(Error::Precondition("incumbent violates the model".into()));
    }
    if m.meta.d > 0 {
        let report = code.verify(m.meta.d, &m.meta.dims);
        if !report.is_ok() {
            return Err(Error::Precondition(format!(
                "incumbent fails verification: {} distance and {} dimension violations",
                report.distance_violation_count,
                report.dimension_violations.len()
            )));
        }
    }
    Ok(())
}

/// Maximum clique in the graph on subspaces with dimensions in `dims`,
/// adjacent iff their subspace distance is at least `d`.
pub fn max_clique(
    v: usize,
    d: usize,
    dims: &BTreeSet<usize>,
    time_limit: Option<Duration>,
) -> Result<SolveResult> {
    super::build::check_dims(v, dims)?;
    let start = Instant::now();
    let verts: Vec<Subspace> = dims
        .iter()
        .map(|&k| enumerate(v, k))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    if verts.len() > MAX_VERTICES {
        return Err(unsupported(format!(
            "{} vertices exceed the dense conflict limit of {MAX_VERTICES}",
            verts.len()
        )));
    }
    let masks: Vec<PointMask> = verts.iter().map(PointMask::of).collect();
    let mut p = Packing::new(vec![1; verts.len()]);
    for a in 0..verts.len() {
        for b in a + 1..verts.len() {
            let da = verts[a].dim() + verts[b].dim() - 2 * masks[a].meet_dim(&masks[b]);
            debug_assert_eq!(da, distance_unchecked(&verts[a], &verts[b]));
            // the engine packs non-adjacent pairs apart
            if da < d {
                p.add_conflict(a, b);
            }
        }
    }
    let out = search::solve(&p, time_limit, None);
    let (value, code) = match out.best {
        Some((w, set)) => (
            Some(w as i64),
            Some(SubspaceCode::from_subspaces(v, set.into_iter().map(|i| verts[i].clone()))?),
        ),
        None => (None, None),
    };
    Ok(SolveResult {
        status: if out.complete { SolveStatus::Optimal } else { SolveStatus::Feasible },
        value,
        code,
        assignment: None,
        nodes: out.nodes,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilp::build::build_base_model;

    fn all(v: usize) -> BTreeSet<usize> {
        (0..=v).collect()
    }

    #[test]
    fn small_exact_values() {
        for (v, d, want) in [(3, 1, 16), (3, 3, 2), (4, 1, 67), (4, 3, 5), (5, 5, 2)] {
            let r = solve_exact(&build_base_model(v, d, &all(v)).unwrap(), None).unwrap();
            assert_eq!(r.status, SolveStatus::Optimal);
            assert_eq!(r.value, Some(want), "v={v} d={d}");
            let code = r.code.unwrap();
            assert_eq!(code.len() as i64, want);
            assert!(code.verify(d, &all(v)).is_ok());
        }
    }

    #[test]
    fn clique_matches() {
        for (v, d, want) in [(3, 2, 8), (3, 3, 2), (4, 2, 37), (4, 4, 5)] {
            let r = max_clique(v, d, &all(v), None).unwrap();
            assert_eq!(r.value, Some(want), "v={v} d={d}");
        }
    }
}
