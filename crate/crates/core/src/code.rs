//! Subspace codes: metric statistics, verification, invariants and file I/O.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg2::{distance_unchecked, dual, BitMatrix, Subspace, MAX_V};

/// Minimum distance of a code; codes with fewer than two words have
/// distance `Infinite`, which compares above every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MinDistance {
    Finite(usize),
    Infinite,
}

impl MinDistance {
    pub fn at_least(self, d: usize) -> bool {
        match self {
            MinDistance::Finite(x) => x >= d,
            MinDistance::Infinite => true,
        }
    }
}

impl fmt::Display for MinDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinDistance::Finite(d) => write!(f, "{d}"),
            MinDistance::Infinite => write!(f, "inf"),
        }
    }
}

/// A set of subspaces of F_2^v kept sorted in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubspaceCode {
    v: usize,
    words: Vec<Subspace>,
}

impl SubspaceCode {
    pub fn new(v: usize) -> Result<Self> {
        if v > MAX_V {
            return Err(Error::InvalidParameter(format!("ambient dimension {v} exceeds {MAX_V}")));
        }
        Ok(Self { v, words: Vec::new() })
    }

    /// Builds a code from subspaces, silently dropping duplicates.
    pub fn from_subspaces(v: usize, words: impl IntoIterator<Item = Subspace>) -> Result<Self> {
        let mut c = Self::new(v)?;
        let mut all = Vec::new();
        for w in words {
            if w.ambient() != v {
                return Err(Error::DimensionMismatch(format!(
                    "codeword in ambient {} added to code in ambient {v}",
                    w.ambient()
                )));
            }
            all.push(w);
        }
        all.sort();
        all.dedup();
        c.words = all;
        Ok(c)
    }

    /// Inserts a codeword; returns false if it was already present.
    pub fn insert(&mut self, w: Subspace) -> Result<bool> {
        if w.ambient() != self.v {
            return Err(Error::DimensionMismatch(format!(
                "codeword in ambient {} added to code in ambient {}",
                w.ambient(),
                self.v
            )));
        }
        match self.words.binary_search(&w) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.words.insert(pos, w);
                Ok(true)
            }
        }
    }

    pub fn remove(&mut self, w: &Subspace) -> bool {
        match self.words.binary_search(w) {
            Ok(pos) => {
                self.words.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub fn ambient(&self) -> usize {
        self.v
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Subspace] {
        &self.words
    }

    pub fn contains(&self, w: &Subspace) -> bool {
        self.words.binary_search(w).is_ok()
    }

    /// Counts δ_0..δ_v of codewords per dimension.
    pub fn dim_distribution(&self) -> Vec<usize> {
        let mut d = vec![0; self.v + 1];
        for w in &self.words {
            d[w.dim()] += 1;
        }
        d
    }

    pub fn min_distance(&self) -> MinDistance {
        let n = self.words.len();
        (0..n)
            .into_par_iter()
            .filter_map(|i| {
                (i + 1..n)
                    .map(|j| distance_unchecked(&self.words[i], &self.words[j]))
                    .min()
            })
            .min()
            .map_or(MinDistance::Infinite, MinDistance::Finite)
    }

    /// Histogram of distances over unordered pairs of distinct codewords.
    pub fn distance_distribution(&self) -> BTreeMap<usize, usize> {
        let n = self.words.len();
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut h = BTreeMap::new();
                for j in i + 1..n {
                    *h.entry(distance_unchecked(&self.words[i], &self.words[j]))
                        .or_insert(0) += 1;
                }
                h
            })
            .reduce(BTreeMap::new, |mut a, b| {
                for (k, c) in b {
                    *a.entry(k).or_insert(0) += c;
                }
                a
            })
    }

    /// Checks the code against minimum distance `d` and allowed dimensions `dims`.
    pub fn verify(&self, d: usize, dims: &BTreeSet<usize>) -> VerifyReport {
        const MAX_EXAMPLES: usize = 10;
        let dimension_violations: Vec<Subspace> = self
            .words
            .iter()
            .filter(|w| !dims.contains(&w.dim()))
            .cloned()
            .collect();
        let n = self.words.len();
        let bad: Vec<(usize, usize, usize)> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                (i + 1..n).filter_map(move |j| {
                    let x = distance_unchecked(&self.words[i], &self.words[j]);
                    (x < d).then_some((i, j, x))
                })
            })
            .collect();
        VerifyReport {
            size: n,
            min_distance: self.min_distance(),
            distance_violation_count: bad.len(),
            distance_violations: bad
                .iter()
                .take(MAX_EXAMPLES)
                .map(|&(i, j, x)| (self.words[i].clone(), self.words[j].clone(), x))
                .collect(),
            dimension_violations,
        }
    }

    /// Image under x -> x·g for an invertible v x v matrix g.
    pub fn transform(&self, g: &BitMatrix) -> Result<Self> {
        let words = self
            .words
            .iter()
            .map(|w| w.transform(g))
            .collect::<Result<Vec<_>>>()?;
        Self::from_subspaces(self.v, words)
    }

    /// Code of orthogonal complements; reverses the dimension distribution.
    pub fn dual(&self) -> Self {
        let mut words: Vec<Subspace> = self.words.iter().map(dual).collect();
        words.sort();
        Self { v: self.v, words }
    }

    /// Number of codewords through each nonzero vector, indexed by the vector.
    pub fn point_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; 1 << self.v];
        for w in &self.words {
            for x in w.vectors().filter(|&x| x != 0) {
                deg[usize::from(x)] += 1;
            }
        }
        deg
    }

    /// Number of codewords inside the hyperplane a·x = 0, indexed by a.
    pub fn hyperplane_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; 1 << self.v];
        for w in &self.words {
            for a in dual(w).vectors().filter(|&a| a != 0) {
                deg[usize::from(a)] += 1;
            }
        }
        deg
    }

    /// GL(v,2)-invariant summary of the code.
    pub fn fingerprint(&self) -> Fingerprint {
        let mut points: Vec<u32> = self.point_degrees().into_iter().skip(1).collect();
        points.sort_unstable();
        let mut hyperplanes: Vec<u32> = self.hyperplane_degrees().into_iter().skip(1).collect();
        hyperplanes.sort_unstable();
        Fingerprint {
            v: self.v,
            size: self.len(),
            dims: self.dim_distribution(),
            distances: self.distance_distribution(),
            point_degrees: points,
            hyperplane_degrees: hyperplanes,
        }
    }

    /// Fingerprint invariant under GL(v,2) and under passing to the dual code.
    pub fn fingerprint_up_to_duality(&self) -> Fingerprint {
        self.fingerprint().min(self.dual().fingerprint())
    }
}

/// Outcome of [`SubspaceCode::verify`].
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub size: usize,
    pub min_distance: MinDistance,
    pub distance_violation_count: usize,
    /// The first few offending pairs with their distance.
    pub distance_violations: Vec<(Subspace, Subspace, usize)>,
    pub dimension_violations: Vec<Subspace>,
}

impl VerifyReport {
    pub fn is_ok(&self) -> bool {
        self.distance_violation_count == 0 && self.dimension_violations.is_empty()
    }
}

/// Invariants that agree for isomorphic codes. Equal fingerprints do not
/// imply isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint {
    pub v: usize,
    pub size: usize,
    pub dims: Vec<usize>,
    pub distances: BTreeMap<usize, usize>,
    pub point_degrees: Vec<u32>,
    pub hyperplane_degrees: Vec<u32>,
}

/// All invertible v x v matrices over GF(2); only supported for v <= 4.
pub fn general_linear(v: usize) -> Result<Vec<BitMatrix>> {
    if v > 4 {
        return Err(Error::OutOfScope(format!(
            "enumerating GL({v},2) is limited to v <= 4"
        )));
    }
    let mut out = Vec::new();
    let mut rows = Vec::with_capacity(v);
    gl_rec(v, &mut rows, &mut out)?;
    Ok(out)
}

fn gl_rec(v: usize, rows: &mut Vec<u16>, out: &mut Vec<BitMatrix>) -> Result<()> {
    if rows.len() == v {
        out.push(BitMatrix::new(v, rows.clone())?);
        return Ok(());
    }
    let span = Subspace::span(v, rows)?;
    for r in 1..(1u16 << v) {
        if !span.contains_vector(r) {
            rows.push(r);
            gl_rec(v, rows, out)?;
            rows.pop();
        }
    }
    Ok(())
}

/// Decides isomorphism by trying every element of GL(v,2). With
/// `allow_dual`, the map U -> g(U^⊥) is tried as well.
pub fn is_isomorphic_bruteforce(
    c1: &SubspaceCode,
    c2: &SubspaceCode,
    allow_dual: bool,
) -> Result<bool> {
    if c1.ambient() != c2.ambient() {
        return Ok(false);
    }
    let v = c1.ambient();
    if v > 4 {
        return Err(Error::OutOfScope(format!(
            "brute-force isomorphism is limited to v <= 4, got {v}"
        )));
    }
    if c1.len() != c2.len() {
        return Ok(false);
    }
    let mut sources = vec![c1.clone()];
    if allow_dual {
        sources.push(c1.dual());
    }
    let target = c2.fingerprint();
    sources.retain(|s| s.fingerprint() == target);
    if sources.is_empty() {
        return Ok(false);
    }
    for g in general_linear(v)? {
        for s in &sources {
            if s.transform(&g)? == *c2 {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Result of parsing a code file: the code plus non-fatal notices.
#[derive(Clone, Debug)]
pub struct ParsedCode {
    pub code: SubspaceCode,
    pub warnings: Vec<String>,
}

pub fn parse_code(text: &str) -> Result<ParsedCode> {
    let mut v = None;
    let mut words = Vec::new();
    let mut warnings = Vec::new();
    let mut seen = BTreeSet::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::ParseLine { line, msg };
        let Some(v) = v else {
            v = Some(parse_header(s).map_err(err)?);
            continue;
        };
        let word = if s == "-" {
            Subspace::zero(v)?
        } else {
            let rows = s
                .split(';')
                .map(|r| {
                    let r = r.trim();
                    if r.len() != v {
                        return Err(err(format!("row `{r}` has width {}, expected {v}", r.len())));
                    }
                    crate::linalg2::parse_row(r).map_err(|e| err(e.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            let w = Subspace::span(v, &rows).map_err(|e| err(e.to_string()))?;
            if w.rows() != rows.as_slice() {
                warnings.push(format!("line {line}: rows normalized to reduced row echelon form"));
            }
            w
        };
        if !seen.insert(word.clone()) {
            warnings.push(format!("line {line}: duplicate subspace {word} ignored"));
            continue;
        }
        words.push(word);
    }
    let v = v.ok_or_else(|| Error::Parse("missing header line `v=<int> q=2`".into()))?;
    Ok(ParsedCode {
        code: SubspaceCode::from_subspaces(v, words)?,
        warnings,
    })
}

fn parse_header(s: &str) -> std::result::Result<usize, String> {
    let mut v = None;
    let mut q = None;
    for tok in s.split_whitespace() {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| format!("malformed header token `{tok}`"))?;
        let val: usize = val
            .parse()
            .map_err(|_| format!("header value `{val}` is not an integer"))?;
        match key {
            "v" => v = Some(val),
            "q" => q = Some(val),
            _ => return Err(format!("unknown header key `{key}`")),
        }
    }
    if q.is_some_and(|q| q != 2) {
        return Err("only q=2 is supported".into());
    }
    match v {
        Some(v) if v <= MAX_V => Ok(v),
        Some(v) => Err(format!("ambient dimension {v} exceeds {MAX_V}")),
        None => Err("header must start with `v=<int>`".into()),
    }
}

/// Serializes a code in canonical order.
pub fn format_code(c: &SubspaceCode) -> String {
    let mut out = format!("v={} q=2\n", c.ambient());
    for w in c.words() {
        out.push_str(&w.to_string());
        out.push('\n');
    }
    out
}

pub fn read_code(path: &Path) -> Result<ParsedCode> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_code(&text)
}

pub fn write_code(c: &SubspaceCode, path: &Path) -> Result<()> {
    std::fs::write(path, format_code(c)).map_err(|e| Error::io(path, e))
}
