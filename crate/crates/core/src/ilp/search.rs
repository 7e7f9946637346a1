//! Branch-and-bound for weighted packing problems.
//!
//! Pairwise conflicts are handled as a graph and bounded by greedy
//! colouring; general knapsack-like rows are tracked by residual capacity
//! and covering rows (>=) are checked for reachability at every node.

use std::time::{Duration, Instant};

use super::bits::Bits;

/// A row sum_i c_i x_i (<= or >=) rhs over engine vertices.
#[derive(Clone, Debug)]
pub(crate) struct Row {
    pub terms: Vec<(usize, u64)>,
    pub rhs: u64,
}

#[derive(Clone, Debug)]
pub(crate) struct Packing {
    pub n: usize,
    pub weights: Vec<u64>,
    /// Symmetric conflict sets without self loops.
    pub conflicts: Vec<Bits>,
    pub capacities: Vec<Row>,
    pub covers: Vec<Row>,
    pub forced: Vec<usize>,
}

impl Packing {
    pub fn new(weights: Vec<u64>) -> Self {
        let n = weights.len();
        Self {
            n,
            weights,
            conflicts: vec![Bits::new(n); n],
            capacities: Vec::new(),
            covers: Vec::new(),
            forced: Vec::new(),
        }
    }

    pub fn add_conflict(&mut self, a: usize, b: usize) {
        if a != b {
            self.conflicts[a].set(b);
            self.conflicts[b].set(a);
        }
    }

    /// Sub-problem on the vertices in `keep` (ascending); covering rows are
    /// dropped, so its optimum bounds the original restricted to `keep`.
    pub fn restrict(&self, keep: &[usize]) -> Packing {
        let mut map = vec![usize::MAX; self.n];
        for (j, &i) in keep.iter().enumerate() {
            map[i] = j;
        }
        let mut q = Packing::new(keep.iter().map(|&i| self.weights[i]).collect());
        for (j, &i) in keep.iter().enumerate() {
            for k in self.conflicts[i].iter() {
                if map[k] != usize::MAX {
                    q.conflicts[j].set(map[k]);
                }
            }
        }
        for r in &self.capacities {
            let terms: Vec<(usize, u64)> = r
                .terms
                .iter()
                .filter(|t| map[t.0] != usize::MAX)
                .map(|&(i, c)| (map[i], c))
                .collect();
            if terms.iter().map(|t| t.1).sum::<u64>() > r.rhs {
                q.capacities.push(Row { terms, rhs: r.rhs });
            }
        }
        q.forced = self.forced.iter().filter(|&&f| map[f] != usize::MAX).map(|&f| map[f]).collect();
        q
    }

    #[cfg(test)]
    pub fn is_feasible(&self, set: &[usize]) -> bool {
        let mut on = Bits::new(self.n);
        for &i in set {
            on.set(i);
        }
        let pairwise = set.iter().all(|&i| !self.conflicts[i].intersects(&on));
        let sum = |r: &Row| -> u64 { r.terms.iter().filter(|(i, _)| on.test(*i)).map(|t| t.1).sum() };
        pairwise
            && self.capacities.iter().all(|r| sum(r) <= r.rhs)
            && self.covers.iter().all(|r| sum(r) >= r.rhs)
            && self.forced.iter().all(|&f| on.test(f))
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Outcome {
    /// Best value and vertex set found, if any feasible set was seen.
    pub best: Option<(u64, Vec<usize>)>,
    /// True if the search space was exhausted.
    pub complete: bool,
    pub nodes: u64,
    /// Colouring bound at the root (forced vertices included).
    pub bound: Option<u64>,
}

struct CapIndex {
    rhs: u64,
    /// Members grouped by coefficient, descending.
    groups: Vec<(u64, Bits)>,
}

struct Engine<'a> {
    p: &'a Packing,
    caps: Vec<CapIndex>,
    /// Vertex partition used for bounding, with optional capacity row.
    parts: Vec<(Bits, Option<usize>)>,
    var_caps: Vec<Vec<(usize, u64)>>,
    covers: Vec<(Bits, Vec<(usize, u64)>, u64)>,
    residual: Vec<u64>,
    best: u64,
    best_set: Option<Vec<usize>>,
    current: Vec<usize>,
    nodes: u64,
    deadline: Option<Instant>,
    max_nodes: u64,
    stopped: bool,
}

/// Solves the packing problem to optimality unless `limit` expires. With a
/// `threshold`, only sets of strictly larger weight are reported.
pub(crate) fn solve(p: &Packing, limit: Option<Duration>, threshold: Option<u64>) -> Outcome {
    solve_limited(p, limit, None, threshold)
}

/// Colouring bound at the root, or `None` if the forced vertices clash.
pub(crate) fn root_bound(p: &Packing) -> Option<u64> {
    let out = solve_limited(p, None, Some(0), Some(u64::MAX));
    out.bound
}

/// Like [`solve`], additionally stopping after `max_nodes` search nodes.
pub(crate) fn solve_limited(
    p: &Packing,
    limit: Option<Duration>,
    max_nodes: Option<u64>,
    threshold: Option<u64>,
) -> Outcome {
    let mut caps = Vec::with_capacity(p.capacities.len());
    let mut var_caps = vec![Vec::new(); p.n];
    for (ci, row) in p.capacities.iter().enumerate() {
        let mut coefs: Vec<u64> = row.terms.iter().map(|t| t.1).collect();
        coefs.sort_unstable_by(|a, b| b.cmp(a));
        coefs.dedup();
        let groups = coefs
            .into_iter()
            .map(|c| {
                let mut b = Bits::new(p.n);
                for &(i, ci) in &row.terms {
                    if ci == c {
                        b.set(i);
                    }
                }
                (c, b)
            })
            .collect();
        caps.push(CapIndex { rhs: row.rhs, groups });
        for &(i, c) in &row.terms {
            var_caps[i].push((ci, c));
        }
    }
    // capacity rows weighing each member by its objective weight and
    // disjoint from earlier ones bound their members' contribution
    let mut grouped = Bits::new(p.n);
    let mut parts = Vec::new();
    for (ci, row) in p.capacities.iter().enumerate() {
        let mut members = Bits::new(p.n);
        for &(i, _) in &row.terms {
            members.set(i);
        }
        if row.terms.iter().all(|&(i, c)| c == p.weights[i]) && !members.intersects(&grouped) {
            grouped.or_assign(&members);
            parts.push((members, Some(ci)));
        }
    }
    let mut rest = Bits::full(p.n);
    rest.and_not_assign(&grouped);
    parts.insert(0, (rest, None));
    let covers = p
        .covers
        .iter()
        .map(|r| {
            let mut b = Bits::new(p.n);
            for &(i, _) in &r.terms {
                b.set(i);
            }
            (b, r.terms.clone(), r.rhs)
        })
        .collect();
    let mut e = Engine {
        p,
        residual: caps.iter().map(|c| c.rhs).collect(),
        caps,
        parts,
        var_caps,
        covers,
        best: 0,
        best_set: None,
        current: Vec::new(),
        nodes: 0,
        deadline: limit.map(|l| Instant::now() + l),
        max_nodes: max_nodes.unwrap_or(u64::MAX),
        stopped: false,
    };
    let mut cand = Bits::full(p.n);
    for c in &e.caps {
        for (gc, bits) in &c.groups {
            if *gc > c.rhs {
                cand.and_not_assign(bits);
            }
        }
    }
    let mut weight = 0;
    for &f in &p.forced {
        if !cand.test(f) {
            return Outcome { best: None, complete: true, nodes: 0, bound: None };
        }
        weight += p.weights[f];
        e.take(f, &mut cand);
    }
    let root = {
        let (_, bounds) = e.colour(&cand);
        weight + bounds.last().copied().unwrap_or(0)
    };
    if max_nodes == Some(0) {
        return Outcome { best: None, complete: false, nodes: 0, bound: Some(root) };
    }
    match threshold {
        Some(t) => {
            e.best = t;
            if let Some((w, set)) = e.greedy(&cand, weight) {
                if w > t {
                    e.best = w;
                    e.best_set = Some(set);
                }
            }
        }
        None => {
            if let Some((w, set)) = e.greedy(&cand, weight) {
                e.best = w;
                e.best_set = Some(set);
            } else if e.covers_ok() {
                e.best_set = Some(e.current.clone());
                e.best = weight;
            }
        }
    }
    e.expand(cand, weight);
    let best = e.best_set.take().map(|s| {
        let w = s.iter().map(|&i| p.weights[i]).sum();
        (w, s)
    });
    Outcome {
        best,
        complete: !e.stopped,
        nodes: e.nodes,
        bound: Some(root),
    }
}

impl Engine<'_> {
    /// Adds vertex v to the current set and shrinks the candidate set.
    fn take(&mut self, v: usize, cand: &mut Bits) {
        self.current.push(v);
        cand.clear(v);
        cand.and_not_assign(&self.p.conflicts[v]);
        for k in 0..self.var_caps[v].len() {
            let (c, coef) = self.var_caps[v][k];
            self.residual[c] -= coef;
            let r = self.residual[c];
            for (gc, bits) in &self.caps[c].groups {
                if *gc <= r {
                    break;
                }
                cand.and_not_assign(bits);
            }
        }
    }

    fn untake(&mut self, v: usize) {
        self.current.pop();
        for &(c, coef) in &self.var_caps[v] {
            self.residual[c] += coef;
        }
    }

    fn covers_ok(&self) -> bool {
        self.covers.iter().all(|(_, terms, rhs)| {
            let s: u64 = terms
                .iter()
                .filter(|(i, _)| self.current.contains(i))
                .map(|t| t.1)
                .sum();
            s >= *rhs
        })
    }

    /// Whether every covering row can still be met using candidates.
    fn covers_reachable(&self, cand: &Bits) -> bool {
        self.covers.iter().all(|(_, terms, rhs)| {
            let mut s = 0;
            for &(i, c) in terms {
                if cand.test(i) || self.current.contains(&i) {
                    s += c;
                    if s >= *rhs {
                        return true;
                    }
                }
            }
            false
        })
    }

    fn greedy(&mut self, cand: &Bits, weight: u64) -> Option<(u64, Vec<usize>)> {
        let mut order: Vec<usize> = cand.iter().collect();
        order.sort_by(|&a, &b| self.p.weights[b].cmp(&self.p.weights[a]).then(a.cmp(&b)));
        let mut c = cand.clone();
        let base = self.current.len();
        let mut w = weight;
        for v in order {
            if c.test(v) {
                w += self.p.weights[v];
                self.take(v, &mut c);
            }
        }
        let ok = self.covers_ok();
        let set = self.current.clone();
        while self.current.len() > base {
            let v = *self.current.last().unwrap();
            self.untake(v);
        }
        ok.then_some((w, set))
    }

    /// Greedy colouring of the candidates, part by part; returns vertices in
    /// colour order with the bound reached by each prefix. A part's bound is
    /// capped by the residual of its capacity row.
    fn colour(&self, cand: &Bits) -> (Vec<usize>, Vec<u64>) {
        let mut order = Vec::with_capacity(cand.count());
        let mut bounds = Vec::with_capacity(order.capacity());
        let mut before = 0;
        for (members, row) in &self.parts {
            let sub = cand.and(members);
            if sub.is_empty() {
                continue;
            }
            let cap = row.map_or(u64::MAX, |r| self.residual[r]);
            let start = order.len();
            let total = self.colour_part(sub, &mut order, &mut bounds);
            for b in &mut bounds[start..] {
                *b = before + (*b).min(cap);
            }
            before += total.min(cap);
        }
        (order, bounds)
    }

    fn colour_part(&self, mut rest: Bits, order: &mut Vec<usize>, bounds: &mut Vec<u64>) -> u64 {
        let mut total = 0;
        while rest.first().is_some() {
            let mut avail = rest.clone();
            let mut top = 0;
            let start = order.len();
            while let Some(v) = avail.first() {
                avail.clear(v);
                // vertices of one class pairwise conflict
                avail.and_assign(&self.p.conflicts[v]);
                rest.clear(v);
                top = top.max(self.p.weights[v]);
                order.push(v);
            }
            total += top;
            bounds.extend(std::iter::repeat(total).take(order.len() - start));
        }
        total
    }

    fn expand(&mut self, mut cand: Bits, weight: u64) {
        self.nodes += 1;
        if self.nodes >= self.max_nodes {
            self.stopped = true;
        }
        if self.nodes & 1023 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.stopped = true;
                }
            }
        }
        if self.stopped {
            return;
        }
        if !self.covers.is_empty() && !self.covers_reachable(&cand) {
            return;
        }
        let (order, bounds) = self.colour(&cand);
        for idx in (0..order.len()).rev() {
            if weight + bounds[idx] <= self.best || self.stopped {
                return;
            }
            let v = order[idx];
            let mut next = cand.clone();
            let w = weight + self.p.weights[v];
            self.take(v, &mut next);
            if w > self.best && self.covers_ok() {
                self.best = w;
                self.best_set = Some(self.current.clone());
            }
            if !next.is_empty() {
                self.expand(next, w);
            }
            self.untake(v);
            cand.clear(v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(p: &Packing) -> Option<u64> {
        let mut best = None;
        for mask in 0u32..(1 << p.n) {
            let set: Vec<usize> = (0..p.n).filter(|i| mask >> i & 1 == 1).collect();
            if p.is_feasible(&set) {
                let w = set.iter().map(|&i| p.weights[i]).sum::<u64>();
                best = best.max(Some(w));
            }
        }
        best
    }

    fn lcg(seed: &mut u64) -> u64 {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        *seed >> 33
    }

    #[test]
    fn matches_brute_force_on_random_instances() {
        let mut seed = 7;
        for round in 0..200 {
            let n = 4 + (lcg(&mut seed) % 9) as usize;
            let weights = (0..n).map(|_| 1 + lcg(&mut seed) % 4).collect();
            let mut p = Packing::new(weights);
            for a in 0..n {
                for b in a + 1..n {
                    if lcg(&mut seed) % 4 == 0 {
                        p.add_conflict(a, b);
                    }
                }
            }
            if round % 2 == 0 {
                let mut terms = Vec::new();
                for i in 0..n {
                    if lcg(&mut seed) % 2 == 0 {
                        terms.push((i, 1 + lcg(&mut seed) % 3));
                    }
                }
                p.capacities.push(Row { terms, rhs: 3 });
            }
            if round % 4 == 1 {
                let terms: Vec<_> = (0..n).filter(|i| i % 2 == 1).map(|i| (i, p.weights[i])).collect();
                p.capacities.push(Row { terms, rhs: 4 });
            }
            if round % 3 == 0 {
                let terms: Vec<_> = (0..n).filter(|_| lcg(&mut seed) % 2 == 0).map(|i| (i, 1)).collect();
                p.covers.push(Row { terms, rhs: 2 });
            }
            if round % 5 == 0 {
                p.forced.push(lcg(&mut seed) as usize % n);
            }
            let out = solve(&p, None, None);
            assert!(out.complete);
            assert_eq!(out.best.as_ref().map(|b| b.0), brute(&p), "round {round}");
            if let Some((_, set)) = out.best {
                assert!(p.is_feasible(&set));
            }
        }
    }
}
