//! Exact values, ranges and standard relations for A_q(v,d;T).

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::grassmann::gaussian_binomial;

/// A lower/upper bound pair for A_q(v,d;T).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundEntry {
    pub q: u32,
    pub v: usize,
    pub d: usize,
    /// Allowed dimensions; `None` means all of 0..=v.
    pub dims: Option<BTreeSet<usize>>,
    pub lower: BigUint,
    pub upper: BigUint,
    pub exact: bool,
    /// Formula name, "table", or the relation that produced the entry.
    pub provenance: String,
    /// Number of isomorphism types of optimal codes, where known.
    pub types: Option<u64>,
}

impl BoundEntry {
    pub fn new(
        q: u32,
        v: usize,
        d: usize,
        lower: impl Into<BigUint>,
        upper: impl Into<BigUint>,
        provenance: &str,
    ) -> Result<Self> {
        let (lower, upper) = (lower.into(), upper.into());
        if lower > upper {
            return Err(Error::InvalidParameter(format!(
                "lower bound {lower} exceeds upper bound {upper}"
            )));
        }
        Ok(Self {
            q,
            v,
            d,
            dims: None,
            exact: lower == upper,
            lower,
            upper,
            provenance: provenance.to_string(),
            types: None,
        })
    }

    pub fn with_dims(mut self, dims: BTreeSet<usize>) -> Self {
        self.dims = Some(dims);
        self
    }

    fn with_types(mut self, types: u64) -> Self {
        self.types = Some(types);
        self
    }

    /// Upper bound as u64, if it fits.
    pub fn upper_u64(&self) -> Option<u64> {
        self.upper.to_u64()
    }

    pub fn lower_u64(&self) -> Option<u64> {
        self.lower.to_u64()
    }

    fn dim_set(&self) -> BTreeSet<usize> {
        self.dims.clone().unwrap_or_else(|| (0..=self.v).collect())
    }
}

impl fmt::Display for BoundEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact {
            write!(f, "{}", self.upper)?;
        } else {
            write!(f, "{}-{}", self.lower, self.upper)?;
        }
        if let Some(t) = self.types {
            write!(f, "({t})")?;
        }
        Ok(())
    }
}

fn pow(q: u32, e: usize) -> BigUint {
    BigUint::from(q).pow(e as u32)
}

fn gauss_sum(q: u32, v: usize, ks: impl Iterator<Item = usize>) -> Result<BigUint> {
    let mut s = BigUint::zero();
    for k in ks {
        s += gaussian_binomial(v as u32, k as u32, q)?;
    }
    Ok(s)
}

/// Closed-form value (or interval) of A_q(v,d) for d in {1, 2, v-2, v-1, v}.
pub fn a_closed_form(q: u32, v: usize, d: usize) -> Result<BoundEntry> {
    if q < 2 || v == 0 || d == 0 || d > v {
        return Err(Error::InvalidParameter(format!(
            "need q >= 2 and 1 <= d <= v, got q={q} v={v} d={d}"
        )));
    }
    let out_of_scope = || Error::OutOfScope(format!("no closed form for A_{q}({v},{d})"));
    let entry = |value: BigUint, name: &str| BoundEntry::new(q, v, d, value.clone(), value, name);

    if d == 1 {
        return entry(gauss_sum(q, v, 0..=v)?, "all subspaces");
    }
    if d == 2 {
        // The larger of the two parity classes; it is the one containing
        // dimension floor(v/2).
        let even = gauss_sum(q, v, (0..=v).step_by(2))?;
        let odd = gauss_sum(q, v, (1..=v).step_by(2))?;
        return entry(even.max(odd), "parity classes");
    }
    if d == v {
        return if v % 2 == 1 {
            entry(BigUint::from(2u32), "complementary pair")
        } else {
            entry(pow(q, v / 2) + 1u32, "spread")
        };
    }
    if d == v - 1 {
        let k = v / 2;
        return if v % 2 == 0 {
            entry(pow(q, k) + 1u32, "spread")
        } else if v >= 5 {
            entry(pow(q, k + 1) + 1u32, "extended partial spread")
        } else {
            Err(out_of_scope())
        };
    }
    if d == v - 2 {
        let k = v / 2;
        if v % 2 == 1 && v >= 5 {
            let low = pow(q, k + 1) * 2u32 + 1u32;
            let high = pow(q, k + 1) * 2u32 + 2u32;
            return if v == 5 || (q == 2 && v == 7) {
                entry(high, "two partial spreads")
            } else {
                BoundEntry::new(q, v, d, low, high, "two partial spreads")
            };
        }
        if v % 2 == 0 && q == 2 {
            let known = match v {
                6 => Some(77u32),
                8 => Some(257u32),
                _ => None,
            };
            if let Some(x) = known {
                return entry(BigUint::from(x), "constant dimension v/2");
            }
        }
    }
    Err(out_of_scope())
}

/// Singleton-like bound q^{max(m,n)(min(m,n)-delta+1)} on rank-metric codes.
pub fn mrd_bound(q: u32, m: usize, n: usize, delta: usize) -> Result<BigUint> {
    let (lo, hi) = (m.min(n), m.max(n));
    if delta == 0 || delta > lo {
        return Err(Error::InvalidParameter(format!(
            "rank distance {delta} outside 1..={lo}"
        )));
    }
    Ok(pow(q, hi * (lo - delta + 1)))
}

/// How bounds are combined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// A(v,d;T1 u T2) <= A(v,d;T1) + A(v,d;T2) for disjoint dimension sets.
    Union,
    /// A(v,d;T) = A(v,d;v-T).
    Dual,
    /// Transfer to another distance: upper bounds move to larger d, lower
    /// bounds to smaller d.
    Distance(usize),
}

/// Applies a relation to one or more entries.
pub fn combine(entries: &[BoundEntry], relation: Relation) -> Result<BoundEntry> {
    let first = entries
        .first()
        .ok_or_else(|| Error::InvalidParameter("no entries to combine".into()))?;
    let incompatible = |msg: &str| Error::InvalidParameter(format!("cannot combine: {msg}"));
    match relation {
        Relation::Union => {
            let mut dims = BTreeSet::new();
            let mut upper = BigUint::zero();
            let mut lower = BigUint::zero();
            for e in entries {
                if (e.q, e.v, e.d) != (first.q, first.v, first.d) {
                    return Err(incompatible("different (q, v, d)"));
                }
                for k in e.dim_set() {
                    if !dims.insert(k) {
                        return Err(incompatible("dimension sets overlap"));
                    }
                }
                upper += &e.upper;
                lower = lower.max(e.lower.clone());
            }
            let dims_all = dims.len() == first.v + 1;
            let out = BoundEntry::new(first.q, first.v, first.d, lower, upper, "union")?;
            Ok(if dims_all { out } else { out.with_dims(dims) })
        }
        Relation::Dual => {
            if entries.len() != 1 {
                return Err(incompatible("duality takes one entry"));
            }
            let mut out = first.clone();
            out.dims = first
                .dims
                .as_ref()
                .map(|t| t.iter().map(|&k| first.v - k).collect());
            out.provenance = "dual".into();
            Ok(out)
        }
        Relation::Distance(d) => {
            if entries.len() != 1 {
                return Err(incompatible("distance transfer takes one entry"));
            }
            if d == 0 || d > first.v {
                return Err(incompatible("target distance out of range"));
            }
            let (lower, upper) = if d >= first.d {
                (BigUint::one().min(first.upper.clone()), first.upper.clone())
            } else {
                let all = gauss_sum(first.q, first.v, first.dim_set().into_iter())?;
                (first.lower.clone(), all)
            };
            let mut out = BoundEntry::new(first.q, first.v, d, lower, upper, "distance")?;
            out.dims = first.dims.clone();
            Ok(out)
        }
    }
}

/// Best known values of A_2(v,d) for v <= 8: (v, d, lower, upper, types).
const TABLE: [(usize, usize, u64, u64, Option<u64>); 36] = [
    (1, 1, 2, 2, Some(1)),
    (2, 1, 5, 5, Some(1)),
    (2, 2, 3, 3, Some(1)),
    (3, 1, 16, 16, Some(1)),
    (3, 2, 8, 8, Some(2)),
    (3, 3, 2, 2, Some(2)),
    (4, 1, 67, 67, Some(1)),
    (4, 2, 37, 37, Some(1)),
    (4, 3, 5, 5, Some(4)),
    (4, 4, 5, 5, Some(1)),
    (5, 1, 374, 374, Some(1)),
    (5, 2, 187, 187, Some(2)),
    (5, 3, 18, 18, Some(48217)),
    (5, 4, 9, 9, Some(14)),
    (5, 5, 2, 2, Some(3)),
    (6, 1, 2825, 2825, Some(1)),
    (6, 2, 1521, 1521, Some(1)),
    (6, 3, 108, 117, None),
    (6, 4, 77, 77, Some(5)),
    (6, 5, 9, 9, Some(5)),
    (6, 6, 9, 9, Some(1)),
    (7, 1, 29212, 29212, Some(1)),
    (7, 2, 14606, 14606, Some(2)),
    (7, 3, 614, 776, None),
    (7, 4, 334, 407, None),
    (7, 5, 34, 34, Some(39)),
    (7, 6, 17, 17, Some(1856)),
    (7, 7, 2, 2, Some(4)),
    (8, 1, 417199, 417199, Some(1)),
    (8, 2, 222379, 222379, Some(2)),
    (8, 3, 5687, 9268, None),
    (8, 4, 4803, 6479, None),
    (8, 5, 263, 326, None),
    (8, 6, 257, 257, Some(8)),
    (8, 7, 17, 17, Some(572)),
    (8, 8, 17, 17, Some(8)),
];

/// The table of A_2(v,d), v <= 8, with isomorphism-type counts of optimal
/// codes where the value is known.
pub fn table_ledger() -> Vec<BoundEntry> {
    TABLE
        .iter()
        .map(|&(v, d, lo, hi, types)| {
            let e = BoundEntry::new(2, v, d, lo, hi, "table").expect("table rows are ordered");
            match types {
                Some(t) => e.with_types(t),
                None => e,
            }
        })
        .collect()
}

/// Ledger cell for A_2(v,d).
pub fn ledger_lookup(v: usize, d: usize) -> Option<BoundEntry> {
    table_ledger().into_iter().find(|e| e.v == v && e.d == d)
}

/// Known bounds (lower, upper) on the binary constant-dimension quantity
/// A_2(n,d;k), or `None` where nothing better than trivial is recorded here.
pub fn cdc_bounds(n: usize, d: usize, k: usize) -> Option<(u64, u64)> {
    if k > n || n > 62 {
        return None;
    }
    let k = k.min(n - k);
    let d = d + d % 2;
    if k == 0 || d > 2 * k {
        return Some((1, 1));
    }
    if d <= 2 {
        let c = crate::grassmann::count(n, k);
        return Some((c, c));
    }
    if d == 2 * k {
        // Partial k-spreads.
        let r = n % k;
        let qk = (1u64 << k) - 1;
        if r == 0 {
            let s = ((1u64 << n) - 1) / qk;
            return Some((s, s));
        }
        if r == 1 {
            let s = ((1u64 << n) - (1u64 << (k + 1))) / qk + 1;
            return Some((s, s));
        }
        return match (n, k) {
            (8, 3) => Some((34, 34)),
            _ => None,
        };
    }
    match (n, d, k) {
        (6, 4, 3) => Some((77, 77)),
        (7, 4, 3) => Some((333, 381)),
        (8, 6, 4) => Some((257, 257)),
        (8, 4, 4) => Some((4801, 6477)),
        _ => None,
    }
}
