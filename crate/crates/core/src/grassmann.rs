//! Counting and enumeration over PG(v-1, F_2).

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::linalg2::{Row, Subspace, MAX_V};

/// Gaussian binomial coefficient `[v k]_q`, the number of k-subspaces of F_q^v.
pub fn gaussian_binomial(v: u32, k: u32, q: u32) -> Result<BigUint> {
    if k > v {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds v = {v}")));
    }
    if q < 2 {
        return Err(Error::InvalidParameter(format!("field size {q} < 2")));
    }
    let q = BigUint::from(q);
    let one = BigUint::one();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q.pow(v - i) - &one;
        den *= q.pow(k - i) - &one;
    }
    Ok(num / den)
}

/// Binary Gaussian binomial as a machine integer (v <= 16 always fits).
pub fn count(v: usize, k: usize) -> u64 {
    if k > v {
        return 0;
    }
    gaussian_binomial(v as u32, k as u32, 2)
        .expect("valid parameters")
        .to_u64()
        .expect("fits in u64 for v <= 16")
}

/// Spreads the low bits of `c` over the set bits of `mask`, lowest first.
fn deposit(mut c: u32, mask: Row) -> Row {
    let mut out = 0;
    let mut m = mask;
    while m != 0 && c != 0 {
        let low = m & m.wrapping_neg();
        if c & 1 == 1 {
            out |= low;
        }
        c >>= 1;
        m ^= low;
    }
    out
}

/// Iterator over all k-subspaces of F_2^v in canonical order.
///
/// Order: pivot vector as integer ascending, then rows lexicographically.
pub struct GrassmannIter {
    v: usize,
    pivot_masks: Vec<Row>,
    next_mask: usize,
    pivots: Vec<Row>,
    free: Vec<Row>,
    counters: Vec<u32>,
    active: bool,
}

impl GrassmannIter {
    fn load_mask(&mut self) -> bool {
        let Some(&mask) = self.pivot_masks.get(self.next_mask) else {
            return false;
        };
        self.next_mask += 1;
        self.pivots.clear();
        self.free.clear();
        for b in (0..self.v).rev() {
            let bit: Row = 1 << b;
            if mask & bit != 0 {
                // Free columns of this row: non-pivot columns right of the pivot.
                self.pivots.push(bit);
                self.free.push(!mask & (bit - 1));
            }
        }
        self.counters = vec![0; self.pivots.len()];
        true
    }
}

impl Iterator for GrassmannIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if !self.active {
            if !self.load_mask() {
                return None;
            }
            self.active = true;
        }
        let rows: Vec<Row> = self
            .pivots
            .iter()
            .zip(&self.free)
            .zip(&self.counters)
            .map(|((&p, &f), &c)| p | deposit(c, f))
            .collect();
        let out = Subspace::from_rref_unchecked(self.v, &rows);
        // Advance the mixed-radix counter; the last row is the least significant digit.
        let mut i = self.counters.len();
        loop {
            if i == 0 {
                self.active = false;
                break;
            }
            i -= 1;
            self.counters[i] += 1;
            if self.counters[i] < 1 << self.free[i].count_ones() {
                break;
            }
            self.counters[i] = 0;
        }
        Some(out)
    }
}

/// Enumerates the k-subspaces of F_2^v in canonical order.
pub fn enumerate(v: usize, k: usize) -> Result<GrassmannIter> {
    if v == 0 || v > MAX_V || k > v {
        return Err(Error::InvalidParameter(format!(
            "cannot enumerate {k}-subspaces of F_2^{v}"
        )));
    }
    let pivot_masks = (0u32..(1 << v))
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| m as Row)
        .collect();
    Ok(GrassmannIter {
        v,
        pivot_masks,
        next_mask: 0,
        pivots: Vec::new(),
        free: Vec::new(),
        counters: Vec::new(),
        active: false,
    })
}

/// Every subspace of F_2^v, dimension by dimension, in canonical order.
pub fn all_subspaces(v: usize) -> Result<Vec<Subspace>> {
    let mut out = Vec::new();
    for k in 0..=v {
        out.extend(enumerate(v, k)?);
    }
    Ok(out)
}

/// True iff the lower-dimensional operand is contained in the other.
pub fn incident(a: &Subspace, b: &Subspace) -> bool {
    if a.dim() <= b.dim() {
        a.is_subspace_of(b)
    } else {
        b.is_subspace_of(a)
    }
}

/// All subspaces within subspace distance `r` of `center`, in canonical order.
///
/// Built from chains `center ⊇ M ⊆ U` with codimensions a and b, a + b <= r,
/// so only the ball itself is enumerated.
pub fn ball(center: &Subspace, r: usize) -> Result<Vec<Subspace>> {
    let v = center.ambient();
    let k = center.dim();
    let mut out = HashSet::new();
    for a in 0..=r.min(k) {
        for m in subspaces_of(center, k - a)? {
            for b in 0..=(r - a).min(v - m.dim()) {
                out.extend(superspaces_of(&m, m.dim() + b)?);
            }
        }
    }
    let mut out: Vec<Subspace> = out.into_iter().collect();
    out.sort();
    Ok(out)
}

/// All j-dimensional subspaces of `u`, in canonical order.
pub fn subspaces_of(u: &Subspace, j: usize) -> Result<Vec<Subspace>> {
    let k = u.dim();
    if j > k {
        return Ok(Vec::new());
    }
    if j == 0 {
        return Ok(vec![Subspace::zero(u.ambient())?]);
    }
    if j == k {
        return Ok(vec![u.clone()]);
    }
    let basis = u.rows();
    let image = |c: Row| -> Row {
        basis
            .iter()
            .enumerate()
            .filter(|(i, _)| c >> (k - 1 - i) & 1 == 1)
            .fold(0, |acc, (_, &r)| acc ^ r)
    };
    let mut out: Vec<Subspace> = enumerate(k, j)?
        .map(|s| {
            let gens: Vec<Row> = s.rows().iter().map(|&c| image(c)).collect();
            Subspace::span(u.ambient(), &gens).expect("fits")
        })
        .collect();
    out.sort();
    Ok(out)
}

/// All j-dimensional subspaces containing `u`, in canonical order.
pub fn superspaces_of(u: &Subspace, j: usize) -> Result<Vec<Subspace>> {
    let v = u.ambient();
    if j < u.dim() || j > v {
        return Ok(Vec::new());
    }
    let d = crate::linalg2::dual(u);
    let mut out: Vec<Subspace> = subspaces_of(&d, v - j)?
        .iter()
        .map(crate::linalg2::dual)
        .collect();
    out.sort();
    Ok(out)
}

/// Lookup table from subspaces to their position in the canonical order of
/// all subspaces of F_2^v (dimension by dimension).
pub struct SubspaceIndex {
    v: usize,
    subspaces: Vec<Subspace>,
    offsets: Vec<usize>,
    index: HashMap<Subspace, u32>,
}

impl SubspaceIndex {
    /// Indexes every subspace of F_2^v.
    pub fn new(v: usize) -> Result<Self> {
        Self::with_dims(v, &(0..=v).collect::<Vec<_>>())
    }

    /// Indexes only the listed dimensions; positions still follow the global
    /// canonical order, so indices agree with [`SubspaceIndex::new`].
    pub fn with_dims(v: usize, dims: &[usize]) -> Result<Self> {
        let mut offsets = vec![0usize; v + 2];
        for k in 0..=v {
            offsets[k + 1] = offsets[k] + count(v, k) as usize;
        }
        let mut subspaces = Vec::new();
        let mut index = HashMap::new();
        for k in 0..=v {
            if !dims.contains(&k) {
                continue;
            }
            for (i, s) in enumerate(v, k)?.enumerate() {
                index.insert(s.clone(), (offsets[k] + i) as u32);
                subspaces.push(s);
            }
        }
        Ok(Self {
            v,
            subspaces,
            offsets,
            index,
        })
    }

    pub fn ambient(&self) -> usize {
        self.v
    }

    /// Canonical index of `s`, if its dimension was indexed.
    pub fn get(&self, s: &Subspace) -> Option<u32> {
        self.index.get(s).copied()
    }

    /// Canonical index range of dimension k.
    pub fn range(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }

    /// The indexed subspaces in canonical order.
    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    pub fn total(&self) -> usize {
        self.offsets[self.v + 1]
    }
}

/// Point set of a subspace of F_2^v for v <= 8 as a 256-bit mask indexed by
/// the nonzero vectors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct PointMask(pub [u64; 4]);

impl PointMask {
    pub fn of(s: &Subspace) -> Self {
        debug_assert!(s.ambient() <= 8);
        let mut m = PointMask::default();
        for x in s.vectors() {
            m.insert(x);
        }
        m
    }

    pub fn insert(&mut self, x: Row) {
        self.0[usize::from(x) >> 6] |= 1 << (x & 63);
    }

    pub fn contains(&self, x: Row) -> bool {
        self.0[usize::from(x) >> 6] >> (x & 63) & 1 == 1
    }

    pub fn len(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn and(&self, o: &Self) -> Self {
        PointMask([
            self.0[0] & o.0[0],
            self.0[1] & o.0[1],
            self.0[2] & o.0[2],
            self.0[3] & o.0[3],
        ])
    }

    pub fn is_subset(&self, o: &Self) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }

    /// Dimension of the intersection of the two underlying subspaces.
    pub fn meet_dim(&self, o: &Self) -> usize {
        (self.and(o).len() + 1).trailing_zeros() as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg2::subspace_distance;

    #[test]
    fn gaussian_binomial_values() {
        assert_eq!(gaussian_binomial(6, 1, 2).unwrap(), BigUint::from(63u32));
        let total: BigUint = (0..=6).map(|k| gaussian_binomial(6, k, 2).unwrap()).sum();
        assert_eq!(total, BigUint::from(2825u32));
        for v in 0..6 {
            assert_eq!(gaussian_binomial(v, 0, 3).unwrap(), BigUint::one());
        }
        assert_eq!(gaussian_binomial(8, 4, 2).unwrap(), BigUint::from(200787u32));
        assert!(gaussian_binomial(3, 4, 2).is_err());
        for v in 0..9u32 {
            for k in 0..=v {
                for q in [2, 3, 4, 5] {
                    assert_eq!(
                        gaussian_binomial(v, k, q).unwrap(),
                        gaussian_binomial(v, v - k, q).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(enumerate(4, 2).unwrap().count(), 35);
        assert_eq!(enumerate(6, 3).unwrap().count(), 1395);
        let z: Vec<_> = enumerate(5, 0).unwrap().collect();
        assert_eq!(z, vec![Subspace::zero(5).unwrap()]);
        for v in 1..=6 {
            for k in 0..=v {
                let subs: Vec<Subspace> = enumerate(v, k).unwrap().collect();
                assert_eq!(subs.len() as u64, count(v, k));
                assert!(subs.windows(2).all(|w| w[0] < w[1]), "order v={v} k={k}");
                assert!(subs.iter().all(|s| s.dim() == k));
            }
        }
    }

    #[test]
    fn incidence_examples() {
        let p = Subspace::parse(4, "1000").unwrap();
        let l = Subspace::parse(4, "1000;0100").unwrap();
        let l2 = Subspace::parse(4, "1000;0010").unwrap();
        assert!(incident(&p, &l));
        assert!(incident(&l, &p));
        assert!(!incident(&l, &l2));
        assert!(incident(&l, &Subspace::full(4).unwrap()));
    }

    #[test]
    fn ball_examples() {
        let l = Subspace::parse(4, "1000;0100").unwrap();
        assert_eq!(ball(&l, 0).unwrap(), vec![l.clone()]);
        let b1 = ball(&l, 1).unwrap();
        assert_eq!(b1.len(), 7);
        assert_eq!(b1.iter().filter(|s| s.dim() == 1).count(), 3);
        assert_eq!(b1.iter().filter(|s| s.dim() == 3).count(), 3);
        assert_eq!(ball(&l, 4).unwrap().len(), 67);
        // Ball sizes depend only on (v, k, r).
        for k in 0..=4 {
            for r in 0..=4 {
                let sizes: std::collections::BTreeSet<usize> = enumerate(4, k)
                    .unwrap()
                    .map(|c| ball(&c, r).unwrap().len())
                    .collect();
                assert_eq!(sizes.len(), 1, "k={k} r={r}");
            }
        }
        // Direct filter oracle.
        let all = all_subspaces(4).unwrap();
        for r in 0..=4 {
            let expect: Vec<_> = all
                .iter()
                .filter(|u| subspace_distance(u, &l).unwrap() <= r)
                .cloned()
                .collect();
            assert_eq!(ball(&l, r).unwrap(), expect);
        }
    }

    #[test]
    fn hyperplane_section_counts() {
        for v in 2..=5 {
            let h = enumerate(v, v - 1).unwrap().next().unwrap();
            for k in 0..v {
                let n = enumerate(v, k).unwrap().filter(|s| s.is_subspace_of(&h)).count();
                assert_eq!(n as u64, count(v - 1, k));
            }
        }
    }

    #[test]
    fn sub_and_superspaces() {
        let all = all_subspaces(5).unwrap();
        let u = Subspace::parse(5, "10010;01001;00111").unwrap();
        for j in 0..=5 {
            let subs = subspaces_of(&u, j).unwrap();
            let expect: Vec<_> = all
                .iter()
                .filter(|s| s.dim() == j && s.is_subspace_of(&u))
                .cloned()
                .collect();
            assert_eq!(subs, expect);
            let sups = superspaces_of(&u, j).unwrap();
            let expect: Vec<_> = all
                .iter()
                .filter(|s| s.dim() == j && u.is_subspace_of(s))
                .cloned()
                .collect();
            assert_eq!(sups, expect);
        }
    }

    #[test]
    fn index_positions() {
        let idx = SubspaceIndex::new(4).unwrap();
        assert_eq!(idx.total(), 67);
        for (i, s) in idx.subspaces().iter().enumerate() {
            assert_eq!(idx.get(s), Some(i as u32));
        }
        let lines = SubspaceIndex::with_dims(4, &[2]).unwrap();
        let l = enumerate(4, 2).unwrap().nth(3).unwrap();
        assert_eq!(lines.get(&l), idx.get(&l));
        assert_eq!(lines.range(2), 16..51);
    }

    #[test]
    fn point_masks() {
        let a = Subspace::parse(6, "100000;010000;001000").unwrap();
        let b = Subspace::parse(6, "100000;000100;000010").unwrap();
        let (ma, mb) = (PointMask::of(&a), PointMask::of(&b));
        assert_eq!(ma.len(), 7);
        assert_eq!(ma.meet_dim(&mb), 1);
        assert_eq!(ma.meet_dim(&ma), 3);
    }
}
