//! Code constructions: lifted Gabidulin codes, spreads, the Echelon-Ferrers
//! multi-pivot construction and greedy extension.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use crate::code::SubspaceCode;
use crate::error::{Error, Result};
use crate::grassmann::{enumerate, subspaces_of};
use crate::linalg2::{distance_unchecked, meet_dim, BitMatrix, ExtFieldCtx, Row, Subspace};

/// Parameters of the lifted Gabidulin code G_{v,k,delta}.
///
/// The domain W of the linearized polynomials is spanned by the first k
/// power-basis elements 1, a, ..., a^{k-1} of GF(2^n), n = v - k, and a
/// field element sum b_j a^j is written as the row (b_0, ..., b_{n-1}).
#[derive(Clone, Debug)]
pub struct GabidulinSpec {
    pub v: usize,
    pub k: usize,
    pub delta: usize,
    pub ctx: ExtFieldCtx,
}

impl GabidulinSpec {
    /// Uses the default modulus for GF(2^(v-k)).
    pub fn new(v: usize, k: usize, delta: usize) -> Result<Self> {
        if !(1 <= delta && delta <= k && 2 * k <= v) {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= delta <= k <= v/2, got v={v} k={k} delta={delta}"
            )));
        }
        Ok(Self {
            v,
            k,
            delta,
            ctx: ExtFieldCtx::new(v - k)?,
        })
    }

    pub fn n(&self) -> usize {
        self.v - self.k
    }

    pub fn expected_size(&self) -> usize {
        1 << ((self.k - self.delta + 1) * self.n())
    }
}

/// Field element as a row of width n, coefficient of a^j in column j+1.
fn element_row(x: u32, n: usize) -> Row {
    (0..n)
        .filter(|&j| x >> j & 1 == 1)
        .fold(0, |acc, j| acc | 1 << (n - 1 - j))
}

/// The k x n matrices of the Gabidulin MRD code with minimum rank distance
/// delta: row i is the image of a^i under a_0 x + a_1 x^2 + ... + a_{k-delta} x^{2^{k-delta}}.
pub fn gabidulin_matrices(spec: &GabidulinSpec) -> Result<Vec<BitMatrix>> {
    let (k, n, ctx) = (spec.k, spec.n(), &spec.ctx);
    let terms = k - spec.delta + 1;
    let basis: Vec<u32> = (0..k as u32).map(|i| ctx.pow(ctx.alpha(), i)).collect();
    let q = ctx.order() as u64;
    let total = q.pow(terms as u32);
    let mut out = Vec::with_capacity(total as usize);
    for code in 0..total {
        let coeffs: Vec<u32> = (0..terms)
            .map(|t| ((code / q.pow(t as u32)) % q) as u32)
            .collect();
        let rows = basis
            .iter()
            .map(|&x| element_row(ctx.linpoly_eval_unchecked(&coeffs, x), n))
            .collect();
        out.push(BitMatrix::new(n, rows)?);
    }
    Ok(out)
}

/// The lifted Gabidulin code G_{v,k,delta}.
pub fn gabidulin(spec: &GabidulinSpec) -> Result<SubspaceCode> {
    if spec.n() > ExtFieldCtx::MAX_DEGREE {
        return Err(Error::InvalidParameter(format!(
            "v - k = {} exceeds {}",
            spec.n(),
            ExtFieldCtx::MAX_DEGREE
        )));
    }
    lift(&gabidulin_matrices(spec)?)
}

/// The special subspace {0} x F_2^n of a lifted code in F_2^{k+n}.
pub fn special_subspace(v: usize, k: usize) -> Result<Subspace> {
    let rows: Vec<Row> = (k..v).map(|j| 1 << (v - 1 - j)).collect();
    Subspace::span(v, &rows)
}

/// Row spaces of (I | M) for equally shaped matrices M.
pub fn lift(matrices: &[BitMatrix]) -> Result<SubspaceCode> {
    let Some(first) = matrices.first() else {
        return Err(Error::InvalidParameter("nothing to lift".into()));
    };
    let (k, n) = (first.num_rows(), first.width());
    let mut words = Vec::with_capacity(matrices.len());
    for m in matrices {
        if (m.num_rows(), m.width()) != (k, n) {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, expected {k}x{n}",
                m.num_rows(),
                m.width()
            )));
        }
        words.push(Subspace::lift(m)?);
    }
    let code = SubspaceCode::from_subspaces(k + n, words)?;
    if code.len() != matrices.len() {
        return Err(Error::InvalidParameter("duplicate matrices".into()));
    }
    Ok(code)
}

/// For every t-subspace disjoint from `s`, the number of codewords
/// containing it; returned as a histogram multiplicity -> number of
/// t-subspaces.
pub fn cover_count(code: &SubspaceCode, s: &Subspace, t: usize) -> Result<BTreeMap<usize, usize>> {
    let v = code.ambient();
    if s.ambient() != v {
        return Err(Error::DimensionMismatch("special subspace ambient differs".into()));
    }
    let mut hits: HashMap<Subspace, usize> = enumerate(v, t)?
        .filter(|u| meet_dim(u, s) == 0)
        .map(|u| (u, 0))
        .collect();
    for w in code.words() {
        if w.dim() < t {
            continue;
        }
        for u in subspaces_of(w, t)? {
            if let Some(c) = hits.get_mut(&u) {
                *c += 1;
            }
        }
    }
    let mut hist = BTreeMap::new();
    for c in hits.into_values() {
        *hist.entry(c).or_default() += 1;
    }
    Ok(hist)
}

/// Desarguesian spread of F_2^v, v = 2m: G_{v,m,m} together with the
/// special subspace.
pub fn spread(v: usize) -> Result<SubspaceCode> {
    if v % 2 == 1 || v == 0 || v > 2 * ExtFieldCtx::MAX_DEGREE {
        return Err(Error::InvalidParameter(format!("spread needs even v, got {v}")));
    }
    let m = v / 2;
    let mut code = gabidulin(&GabidulinSpec::new(v, m, m)?)?;
    code.insert(special_subspace(v, m)?)?;
    Ok(code)
}

/// A pivot vector with the size wanted from its Ferrers-diagram code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotProfile {
    pub v: usize,
    /// Pivot columns as a row mask (column 1 is the most significant bit).
    pub pivots: Row,
    pub target: usize,
}

impl PivotProfile {
    pub fn parse(s: &str, target: usize) -> Result<Self> {
        let pivots = crate::linalg2::parse_row(s)?;
        Ok(Self {
            v: s.len(),
            pivots,
            target,
        })
    }

    pub fn dim(&self) -> usize {
        self.pivots.count_ones() as usize
    }

    fn pivot_columns(&self) -> Vec<usize> {
        (0..self.v).filter(|&c| self.bit(c)).collect()
    }

    fn bit(&self, c: usize) -> bool {
        self.pivots >> (self.v - 1 - c) & 1 == 1
    }

    /// Free (non-pivot) columns right of each pivot: the Ferrers diagram.
    pub fn ferrers(&self) -> Vec<Vec<usize>> {
        self.pivot_columns()
            .iter()
            .map(|&p| (p + 1..self.v).filter(|&c| !self.bit(c)).collect())
            .collect()
    }
}

fn rank_rows(mut rows: Vec<Row>) -> usize {
    let mut rank = 0;
    for bit in (0..16).rev() {
        let mask = 1 << bit;
        if let Some(i) = (rank..rows.len()).find(|&i| rows[i] & mask != 0) {
            rows.swap(rank, i);
            let r = rows[rank];
            for row in rows.iter_mut().skip(rank + 1) {
                if *row & mask != 0 {
                    *row ^= r;
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Outcome of the Echelon-Ferrers construction.
#[derive(Clone, Debug)]
pub struct EchelonFerrers {
    pub code: SubspaceCode,
    /// Achieved size per profile, in input order.
    pub sizes: Vec<usize>,
}

/// Node budget of the backtracking fill of one profile.
const FILL_NODES: u64 = 50_000_000;

/// Union of lifted Ferrers-diagram rank-metric codes with rank distance
/// ceil(d/2), one per pivot vector.
pub fn echelon_ferrers(profiles: &[PivotProfile], d: usize) -> Result<EchelonFerrers> {
    let Some(v) = profiles.first().map(|p| p.v) else {
        return Err(Error::InvalidParameter("no pivot profiles".into()));
    };
    for (i, a) in profiles.iter().enumerate() {
        if a.v != v {
            return Err(Error::DimensionMismatch("pivot vectors of different lengths".into()));
        }
        for b in &profiles[i + 1..] {
            let h = (a.pivots ^ b.pivots).count_ones() as usize;
            if h < d {
                return Err(Error::Precondition(format!(
                    "pivot vectors {} and {} have Hamming distance {h} < {d}",
                    crate::linalg2::format_row(a.pivots, v),
                    crate::linalg2::format_row(b.pivots, v)
                )));
            }
        }
    }
    let delta = d.div_ceil(2);
    let mut words = Vec::new();
    let mut sizes = Vec::new();
    for p in profiles {
        let fill = fill_profile(p, delta)?;
        sizes.push(fill.len());
        words.extend(fill);
    }
    Ok(EchelonFerrers {
        code: SubspaceCode::from_subspaces(v, words)?,
        sizes,
    })
}

/// Subspaces with pivot vector `p` whose echelon matrices pairwise differ
/// in rank >= delta, up to `p.target` of them.
fn fill_profile(p: &PivotProfile, delta: usize) -> Result<Vec<Subspace>> {
    let v = p.v;
    let pivots = p.pivot_columns();
    let ferrers = p.ferrers();
    let k = pivots.len();
    let build = |cells: &[Row]| -> Result<Subspace> {
        let rows: Vec<Row> = pivots
            .iter()
            .zip(cells)
            .map(|(&c, &r)| (1 << (v - 1 - c)) | r)
            .collect();
        Subspace::span(v, &rows)
    };
    if k == 0 {
        return Ok(vec![Subspace::zero(v)?].into_iter().take(p.target).collect());
    }

    // Full rectangle: every row has the same free columns.
    let rect = ferrers.iter().all(|f| *f == ferrers[0]);
    let cols = &ferrers[0];
    if rect && !cols.is_empty() && delta <= k.min(cols.len()) {
        let (rows_n, cols_n) = (k, cols.len());
        let (small, large) = (rows_n.min(cols_n), rows_n.max(cols_n));
        let spec = GabidulinSpec::new(small + large, small, delta)?;
        let mut out = Vec::new();
        for m in gabidulin_matrices(&spec)?.into_iter().take(p.target) {
            // entry (i, j) of the k x |cols| fill
            let entry = |i: usize, j: usize| -> bool {
                if rows_n <= cols_n {
                    m.get(i, j)
                } else {
                    m.get(j, i)
                }
            };
            let cells: Vec<Row> = (0..rows_n)
                .map(|i| {
                    (0..cols_n)
                        .filter(|&j| entry(i, j))
                        .fold(0, |acc, j| acc | 1 << (v - 1 - cols[j]))
                })
                .collect();
            out.push(build(&cells)?);
        }
        return Ok(out);
    }

    // Depth-first search over all fillings in lexicographic order.
    let free: Vec<(usize, usize)> = ferrers
        .iter()
        .enumerate()
        .flat_map(|(i, f)| f.iter().map(move |&c| (i, c)))
        .collect();
    if free.len() > 20 {
        return Err(Error::OutOfScope(format!(
            "Ferrers diagram with {} cells is too large for backtracking",
            free.len()
        )));
    }
    let candidates: Vec<Vec<Row>> = (0u32..1 << free.len())
        .map(|bits| {
            let mut cells = vec![0 as Row; k];
            for (b, &(i, c)) in free.iter().enumerate() {
                if bits >> (free.len() - 1 - b) & 1 == 1 {
                    cells[i] |= 1 << (v - 1 - c);
                }
            }
            cells
        })
        .collect();
    let compatible = |a: &[Row], b: &[Row]| -> bool {
        rank_rows(a.iter().zip(b).map(|(x, y)| x ^ y).collect()) >= delta
    };
    let mut best: Vec<usize> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    let mut nodes = 0u64;
    fn dfs(
        start: usize,
        n: usize,
        target: usize,
        current: &mut Vec<usize>,
        best: &mut Vec<usize>,
        nodes: &mut u64,
        ok: &dyn Fn(usize, usize) -> bool,
    ) {
        *nodes += 1;
        if current.len() > best.len() {
            *best = current.clone();
        }
        if best.len() >= target || *nodes > FILL_NODES || current.len() + (n - start) <= best.len() {
            return;
        }
        for c in start..n {
            if current.iter().all(|&x| ok(x, c)) {
                current.push(c);
                dfs(c + 1, n, target, current, best, nodes, ok);
                current.pop();
                if best.len() >= target || *nodes > FILL_NODES {
                    return;
                }
            }
        }
    }
    let ok = |a: usize, b: usize| compatible(&candidates[a], &candidates[b]);
    dfs(0, candidates.len(), p.target, &mut current, &mut best, &mut nodes, &ok);
    best.iter().map(|&i| build(&candidates[i])).collect()
}

/// Subspaces with dimensions in `dims` at distance at least `d` from every
/// codeword, in canonical order.
pub fn extension_candidates(
    code: &SubspaceCode,
    d: usize,
    dims: &BTreeSet<usize>,
) -> Result<Vec<Subspace>> {
    let v = code.ambient();
    let mut out = Vec::new();
    for &k in dims {
        let all: Vec<Subspace> = enumerate(v, k)?.collect();
        out.extend(
            all.into_par_iter()
                .filter(|u| code.words().iter().all(|w| distance_unchecked(w, u) >= d))
                .collect::<Vec<_>>(),
        );
    }
    Ok(out)
}

/// Adds subspaces with dimensions in `dims`, scanned in canonical order,
/// whenever they keep minimum distance `d`.
pub fn extend_greedy(code: &SubspaceCode, d: usize, dims: &BTreeSet<usize>) -> Result<SubspaceCode> {
    let v = code.ambient();
    let mut out = code.clone();
    let mut words: Vec<Subspace> = code.words().to_vec();
    for &k in dims {
        for u in enumerate(v, k)? {
            if words.iter().all(|w| distance_unchecked(w, &u) >= d) {
                out.insert(u.clone())?;
                words.push(u);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::MinDistance;
    use crate::grassmann::count;
    use crate::linalg2::rank_distance;

    fn g(v: usize, k: usize, delta: usize) -> SubspaceCode {
        gabidulin(&GabidulinSpec::new(v, k, delta).unwrap()).unwrap()
    }

    #[test]
    fn gabidulin_sizes_and_distances() {
        for (v, k, delta) in [(4, 2, 2), (6, 3, 2), (6, 2, 1), (5, 2, 2), (6, 3, 3)] {
            let c = g(v, k, delta);
            let spec = GabidulinSpec::new(v, k, delta).unwrap();
            assert_eq!(c.len(), spec.expected_size());
            assert_eq!(c.min_distance(), MinDistance::Finite(2 * delta), "{v} {k} {delta}");
            let s = special_subspace(v, k).unwrap();
            assert!(c.words().iter().all(|w| w.dim() == k && meet_dim(w, &s) == 0));
        }
        assert!(GabidulinSpec::new(5, 3, 2).is_err());
        assert!(GabidulinSpec::new(6, 3, 4).is_err());
    }

    #[test]
    fn spread_from_gabidulin() {
        for v in [2, 4, 6, 8] {
            let c = spread(v).unwrap();
            assert_eq!(c.len(), (1 << (v / 2)) + 1);
            // partition of the nonzero points
            let mut covered = vec![0; 1 << v];
            for w in c.words() {
                for x in w.vectors().filter(|&x| x != 0) {
                    covered[x as usize] += 1;
                }
            }
            assert!(covered[1..].iter().all(|&c| c == 1));
        }
        assert!(spread(5).is_err());
    }

    #[test]
    fn lifting_doubles_rank_distance() {
        let ms = gabidulin_matrices(&GabidulinSpec::new(6, 3, 2).unwrap()).unwrap();
        for a in ms.iter().take(12) {
            for b in ms.iter().take(12) {
                let r = rank_distance(a, b).unwrap();
                let la = Subspace::lift(a).unwrap();
                let lb = Subspace::lift(b).unwrap();
                assert_eq!(distance_unchecked(&la, &lb), 2 * r);
            }
        }
        let zero = BitMatrix::zeros(3, 3).unwrap();
        assert_eq!(Subspace::lift(&zero).unwrap().pivot_vector(), "111000");
        assert!(lift(&[zero.clone(), zero]).is_err());
    }

    #[test]
    fn exact_covers_small() {
        // G_{6,3,2}: t = 2 exact cover, points covered 2^{3*1} = 8 times
        let c = g(6, 3, 2);
        let s = special_subspace(6, 3).unwrap();
        let lines = cover_count(&c, &s, 2).unwrap();
        assert_eq!(lines, BTreeMap::from([(1, 64 * count(3, 2) as usize)]));
        let points = cover_count(&c, &s, 1).unwrap();
        assert_eq!(points, BTreeMap::from([(8, 63 - 7)]));
    }

    #[test]
    fn ferrers_shapes() {
        let p = PivotProfile::parse("01001100", 4).unwrap();
        assert_eq!(p.dim(), 3);
        assert_eq!(p.ferrers(), vec![vec![2, 3, 6, 7], vec![6, 7], vec![6, 7]]);
        let ef = echelon_ferrers(
            &[PivotProfile::parse("1100", 16).unwrap(), PivotProfile::parse("0011", 1).unwrap()],
            4,
        )
        .unwrap();
        assert_eq!(ef.sizes, vec![4, 1]);
        assert_eq!(ef.code.min_distance(), MinDistance::Finite(4));
        let bad = [PivotProfile::parse("1100", 4).unwrap(), PivotProfile::parse("1010", 1).unwrap()];
        assert!(echelon_ferrers(&bad, 4).is_err());
    }

    #[test]
    fn greedy_extension_small() {
        let s = spread(4).unwrap();
        let same = extend_greedy(&s, 4, &BTreeSet::from([0, 4])).unwrap();
        assert_eq!(same, s);
        let empty = SubspaceCode::new(6).unwrap();
        let ps = extend_greedy(&empty, 6, &BTreeSet::from([3])).unwrap();
        assert!(ps.len() >= 8);
        assert!(ps.min_distance().at_least(6));
    }
}
