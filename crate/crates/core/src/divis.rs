//! Divisible point multisets and the completion of lifted MRD codes in F_2^8.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::code::SubspaceCode;
use crate::construct::{gabidulin, special_subspace, GabidulinSpec};
use crate::error::{Error, Result};
use crate::grassmann::enumerate;
use crate::linalg2::{distance_unchecked, format_row, meet_dim, parse_row, Row, Subspace, MAX_V};

/// Multiplicity function on the points of F_2^v. A point is identified with
/// its unique nonzero vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointMultiset {
    v: usize,
    chi: Vec<u64>,
}

impl PointMultiset {
    pub fn new(v: usize) -> Result<Self> {
        if v == 0 || v > MAX_V {
            return Err(Error::InvalidParameter(format!(
                "ambient dimension must be in 1..={MAX_V}, got {v}"
            )));
        }
        Ok(Self {
            v,
            chi: vec![0; 1 << v],
        })
    }

    /// Each point of `s` with multiplicity `times`.
    pub fn of_subspace(s: &Subspace, times: u64) -> Result<Self> {
        let mut p = Self::new(s.ambient())?;
        for x in s.vectors() {
            p.chi[usize::from(x)] = times;
        }
        Ok(p)
    }

    pub fn ambient(&self) -> usize {
        self.v
    }

    pub fn get(&self, x: Row) -> u64 {
        self.chi[usize::from(x)]
    }

    pub fn set(&mut self, x: Row, m: u64) -> Result<()> {
        if x == 0 || usize::from(x) >= self.chi.len() {
            return Err(Error::InvalidParameter(format!(
                "{x:#x} is not a point of F_2^{}",
                self.v
            )));
        }
        self.chi[usize::from(x)] = m;
        Ok(())
    }

    pub fn cardinality(&self) -> u64 {
        self.chi.iter().sum()
    }

    pub fn max_multiplicity(&self) -> u64 {
        self.chi.iter().copied().max().unwrap_or(0)
    }

    /// Points with nonzero multiplicity, in increasing vector order.
    pub fn support(&self) -> impl Iterator<Item = (Row, u64)> + '_ {
        self.chi
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(x, &m)| (x as Row, m))
    }

    /// Total multiplicity of the hyperplane a·x = 0.
    pub fn hyperplane_sum(&self, a: Row) -> u64 {
        self.support()
            .filter(|&(x, _)| (x & a).count_ones() % 2 == 0)
            .map(|(_, m)| m)
            .sum()
    }

    /// Pointwise sum; ambient dimensions must agree.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        Ok(Self {
            v: self.v,
            chi: self.chi.iter().zip(&other.chi).map(|(a, b)| a + b).collect(),
        })
    }

    /// Pointwise difference; fails if some multiplicity would go negative.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let mut chi = Vec::with_capacity(self.chi.len());
        for (x, (a, b)) in self.chi.iter().zip(&other.chi).enumerate() {
            chi.push(a.checked_sub(*b).ok_or_else(|| {
                Error::Precondition(format!(
                    "multiplicity at {} would become negative",
                    format_row(x as Row, self.v)
                ))
            })?);
        }
        Ok(Self { v: self.v, chi })
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.v != other.v {
            return Err(Error::DimensionMismatch(format!(
                "multisets live in F_2^{} and F_2^{}",
                self.v, other.v
            )));
        }
        Ok(())
    }
}

/// Each point counted once per codeword containing it.
pub fn points_of_code(c: &SubspaceCode) -> PointMultiset {
    let mut p = PointMultiset::new(c.ambient()).expect("code ambient is valid");
    for w in c.words() {
        for x in w.vectors() {
            p.chi[usize::from(x)] += 1;
        }
    }
    p
}

/// Whether every hyperplane misses a multiple of 2^r of the multiset.
pub fn is_divisible(p: &PointMultiset, r: u32) -> bool {
    if r == 0 {
        return true;
    }
    let total = p.cardinality();
    let modulus = 1u64.checked_shl(r).filter(|&m| m != 0);
    (1..p.chi.len() as u32).all(|a| {
        let off = total - p.hyperplane_sum(a as Row);
        match modulus {
            Some(m) => off % m == 0,
            None => off == 0,
        }
    })
}

/// The Λ-complement: multiplicity Λ - χ(P) at every point.
pub fn complement(p: &PointMultiset, lambda: u64) -> Result<PointMultiset> {
    let mut chi = vec![0; p.chi.len()];
    for x in 1..p.chi.len() {
        chi[x] = lambda.checked_sub(p.chi[x]).ok_or_else(|| {
            Error::Precondition(format!(
                "point {} has multiplicity {} > {lambda}",
                format_row(x as Row, p.v),
                p.chi[x]
            ))
        })?;
    }
    Ok(PointMultiset { v: p.v, chi })
}

/// The (r+1)-subspace whose point set is a 2^r-divisible multiset of
/// 2^{r+1} - 1 points.
///
/// Errors when the cardinality or divisibility hypothesis fails. `Ok(None)`
/// would mean the support is not a subspace, which the hypothesis rules out.
pub fn recognize_subspace(p: &PointMultiset, r: u32) -> Result<Option<Subspace>> {
    let size = (1u64 << (r + 1)) - 1;
    if p.cardinality() != size {
        return Err(Error::Precondition(format!(
            "multiset has {} points, expected {size}",
            p.cardinality()
        )));
    }
    if !is_divisible(p, r) {
        return Err(Error::Precondition(format!("multiset is not {}-divisible", 1u64 << r)));
    }
    if p.max_multiplicity() > 1 {
        return Ok(None);
    }
    let points: Vec<Row> = p.support().map(|(x, _)| x).collect();
    let s = Subspace::span(p.v, &points)?;
    Ok((s.dim() as u32 == r + 1).then_some(s))
}

/// Solids completing a code of 254 or 255 solids of F_2^8, pairwise at
/// distance at least 6 and disjoint from the solid `s`, to 256 codewords.
///
/// The missing points form the 16-complement of the code's multiset with the
/// 16-fold `s` removed. For 255 codewords this is a single solid; for 254 it
/// is the sum of two solids meeting in at most a point, which are located
/// among the solids inside its support.
pub fn lmrd_extend(c: &SubspaceCode, s: &Subspace) -> Result<Vec<Subspace>> {
    if c.ambient() != 8 || s.ambient() != 8 || s.dim() != 4 {
        return Err(Error::InvalidParameter(
            "expected solids of F_2^8 and a special solid".into(),
        ));
    }
    if !(254..=255).contains(&c.len()) {
        return Err(Error::InvalidParameter(format!(
            "expected 254 or 255 codewords, got {}",
            c.len()
        )));
    }
    for w in c.words() {
        if w.dim() != 4 || meet_dim(w, s) != 0 {
            return Err(Error::Precondition(format!(
                "codeword {w} is not a solid disjoint from the special solid"
            )));
        }
    }
    if !c.min_distance().at_least(6) {
        return Err(Error::Precondition("codewords are not at distance >= 6".into()));
    }

    let outside = complement(&PointMultiset::of_subspace(s, 16)?, 16)?;
    let missing = outside.sub(&points_of_code(c))?;
    let found = if c.len() == 255 {
        let u = recognize_subspace(&missing, 3)?.ok_or_else(|| {
            Error::Precondition("missing points do not form a solid".into())
        })?;
        vec![u]
    } else {
        two_solids(&missing)?
    };
    for u in &found {
        if meet_dim(u, s) != 0 || c.words().iter().any(|w| distance_unchecked(w, u) < 6) {
            return Err(Error::Precondition(format!("completion {u} is not compatible")));
        }
    }
    Ok(found)
}

fn two_solids(missing: &PointMultiset) -> Result<Vec<Subspace>> {
    if missing.cardinality() != 30 || !is_divisible(missing, 3) || missing.max_multiplicity() > 2 {
        return Err(Error::Precondition(
            "missing points are not an 8-divisible 30-point multiset".into(),
        ));
    }
    let candidates: Vec<Subspace> = enumerate(8, 4)?
        .filter(|u| u.vectors().all(|x| missing.get(x) > 0))
        .collect();
    for (i, u) in candidates.iter().enumerate() {
        for w in &candidates[i + 1..] {
            if meet_dim(u, w) <= 1
                && PointMultiset::of_subspace(u, 1)?.add(&PointMultiset::of_subspace(w, 1)?)?
                    == *missing
            {
                return Ok(vec![u.clone(), w.clone()]);
            }
        }
    }
    Err(Error::Precondition(
        "missing points are not the union of two solids".into(),
    ))
}

/// Subspaces that extend the lifted Gabidulin code G_{8,4,3} at distance 6,
/// one per isomorphism type of the extended code.
pub const THEOREM_EXTENSIONS: [&[&str]; 8] = [
    &["00001010", "00000101"],
    &["00000010", "00000001"],
    &["00000100", "00000010", "00000001"],
    &["00001000", "00000100", "00000010", "00000001"],
    &["00010000", "00001000", "00000100", "00000010"],
    &["00010000", "00001000", "00000100", "00000010", "00000001"],
    &["00100000", "00010000", "00001000", "00000100", "00000010", "00000001"],
    &["10010000", "01010000", "00001000", "00000100", "00000010", "00000001"],
];

#[derive(Clone, Debug)]
pub struct ExtensionCheck {
    pub subspace: Subspace,
    /// Smallest distance to a codeword of G_{8,4,3}.
    pub min_distance: usize,
    /// Dimension of the intersection with the special solid.
    pub meet_special: usize,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct ExtensionReport {
    pub checks: Vec<ExtensionCheck>,
}

impl ExtensionReport {
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

/// Checks the listed extensions of G_{8,4,3}: distance at least 6 to every
/// codeword, and subspaces of dimension at most 3 inside the special solid.
pub fn verify_theorem_extensions() -> Result<ExtensionReport> {
    let g = gabidulin(&GabidulinSpec::new(8, 4, 3)?)?;
    let s = special_subspace(8, 4)?;
    let mut checks = Vec::new();
    for rows in THEOREM_EXTENSIONS {
        let gens = rows.iter().map(|r| parse_row(r)).collect::<Result<Vec<_>>>()?;
        let u = Subspace::span(8, &gens)?;
        let min_distance = g
            .words()
            .iter()
            .map(|w| distance_unchecked(w, &u))
            .min()
            .expect("nonempty code");
        let meet_special = meet_dim(&u, &s);
        let placed = u.dim() > 3 || meet_special == u.dim();
        checks.push(ExtensionCheck {
            ok: min_distance >= 6 && placed,
            subspace: u,
            min_distance,
            meet_special,
        });
    }
    Ok(ExtensionReport { checks })
}

/// Parses lines `point multiplicity`; blank lines and `#` comments are
/// skipped and omitted points have multiplicity 0.
pub fn parse_multiset(text: &str) -> Result<PointMultiset> {
    let mut entries: BTreeMap<Row, u64> = BTreeMap::new();
    let mut v = None;
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| Error::ParseLine { line: no + 1, msg };
        let mut parts = line.split_whitespace();
        let (Some(point), Some(mult), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad(format!("expected `point multiplicity`, got {line:?}")));
        };
        match v {
            None => v = Some(point.len()),
            Some(w) if w != point.len() => {
                return Err(bad(format!("point {point} has length {}, expected {w}", point.len())))
            }
            _ => {}
        }
        let x = parse_row(point).map_err(|e| bad(e.to_string()))?;
        if x == 0 {
            return Err(bad("the zero vector is not a point".into()));
        }
        let m: u64 = mult.parse().map_err(|_| bad(format!("bad multiplicity {mult:?}")))?;
        if entries.insert(x, m).is_some() {
            return Err(bad(format!("point {point} listed twice")));
        }
    }
    let v = v.ok_or_else(|| Error::Parse("empty multiset file".into()))?;
    let mut p = PointMultiset::new(v)?;
    for (x, m) in entries {
        p.set(x, m)?;
    }
    Ok(p)
}

/// One line per point of positive multiplicity, in increasing vector order.
pub fn format_multiset(p: &PointMultiset) -> String {
    let mut out = String::new();
    for (x, m) in p.support() {
        writeln!(out, "{} {m}", format_row(x, p.v)).expect("string write");
    }
    out
}

pub fn read_multiset(path: &Path) -> Result<PointMultiset> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_multiset(&text)
}

pub fn write_multiset(p: &PointMultiset, path: &Path) -> Result<()> {
    std::fs::write(path, format_multiset(p)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::spread;

    fn g843() -> SubspaceCode {
        gabidulin(&GabidulinSpec::new(8, 4, 3).unwrap()).unwrap()
    }

    #[test]
    fn single_solid() {
        let u = enumerate(6, 4).unwrap().nth(17).unwrap();
        let p = points_of_code(&SubspaceCode::from_subspaces(6, [u.clone()]).unwrap());
        assert_eq!(p.cardinality(), 15);
        assert_eq!(p.max_multiplicity(), 1);
        assert!(is_divisible(&p, 3));
        assert!(!is_divisible(&p, 4));
        assert_eq!(recognize_subspace(&p, 3).unwrap(), Some(u));
    }

    #[test]
    fn single_point_and_spread() {
        let mut p = PointMultiset::new(4).unwrap();
        p.set(0b0100, 1).unwrap();
        assert!(is_divisible(&p, 0));
        assert!(!is_divisible(&p, 1));
        let s = points_of_code(&spread(4).unwrap());
        assert!(s.support().all(|(_, m)| m == 1));
        assert_eq!(s.support().count(), 15);
    }

    #[test]
    fn lifted_gabidulin_multiset() {
        let p = points_of_code(&g843());
        let s = special_subspace(8, 4).unwrap();
        for x in 1..256u32 {
            let want = if s.contains_vector(x as Row) { 0 } else { 16 };
            assert_eq!(p.get(x as Row), want);
        }
        assert!(is_divisible(&p, 3));
        let c = complement(&p, 16).unwrap();
        assert_eq!(c, PointMultiset::of_subspace(&s, 16).unwrap());
        assert_eq!(c.cardinality(), 240);
        assert_eq!(complement(&c, 16).unwrap(), p);
        assert!(complement(&p, 15).is_err());
    }

    #[test]
    fn recover_one_codeword() {
        let g = g843();
        let s = special_subspace(8, 4).unwrap();
        let first = g.words()[0].clone();
        let mut c = g.clone();
        c.remove(&first);
        assert_eq!(lmrd_extend(&c, &s).unwrap(), vec![first]);
    }

    #[test]
    fn recover_two_codewords() {
        let g = g843();
        let s = special_subspace(8, 4).unwrap();
        let w = g.words();
        // a pair meeting in a point, a disjoint pair, and an arbitrary one
        let with_meet = |m: usize| (1..w.len()).find(|&j| meet_dim(&w[0], &w[j]) == m).unwrap();
        let pairs = [(0, with_meet(1)), (0, with_meet(0)), (3, 100)];
        let mut meets = Vec::new();
        for (a, b) in pairs {
            let mut c = g.clone();
            c.remove(&w[a]);
            c.remove(&w[b]);
            let mut want = vec![w[a].clone(), w[b].clone()];
            want.sort();
            let mut got = lmrd_extend(&c, &s).unwrap();
            got.sort();
            assert_eq!(got, want);
            meets.push(meet_dim(&w[a], &w[b]));
        }
        assert_eq!(&meets[..2], &[1, 0]);
    }

    #[test]
    fn extend_preconditions() {
        let g = g843();
        let s = special_subspace(8, 4).unwrap();
        assert!(lmrd_extend(&g, &s).is_err());
        let mut c = g.clone();
        c.remove(&g.words()[0]);
        c.insert(s.clone()).unwrap();
        c.remove(&g.words()[1]);
        assert!(lmrd_extend(&c, &s).is_err());
    }

    #[test]
    fn theorem_extensions_hold() {
        let r = verify_theorem_extensions().unwrap();
        let dims: Vec<usize> = r.checks.iter().map(|c| c.subspace.dim()).collect();
        assert_eq!(dims, vec![2, 2, 3, 4, 4, 5, 6, 6]);
        assert!(r.all_ok());
        let s = &r.checks[3];
        assert_eq!((s.min_distance, s.meet_special), (8, 4));
    }

    #[test]
    fn multiset_file_round_trip() {
        let mut p = PointMultiset::new(5).unwrap();
        p.set(0b00011, 2).unwrap();
        p.set(0b10000, 7).unwrap();
        let text = format_multiset(&p);
        assert_eq!(text, "00011 2\n10000 7\n");
        assert_eq!(parse_multiset(&text).unwrap(), p);
        assert!(parse_multiset("0001 1\n001 1\n").is_err());
        assert!(parse_multiset("0000 1\n").is_err());
        assert!(parse_multiset("0001 1\n0001 2\n").is_err());
    }
}
