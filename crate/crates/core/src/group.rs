//! Finite matrix groups over GF(2) acting on subspaces from the right.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::path::Path;

use crate::code::{general_linear, SubspaceCode};
use crate::error::{Error, Result};
use crate::grassmann::enumerate;
use crate::linalg2::{BitMatrix, Row, Subspace, MAX_V};

/// Default bound on the number of elements a closure may produce.
pub const DEFAULT_CAP: usize = 1_000_000;

/// An explicitly enumerated group of invertible v x v matrices.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    v: usize,
    generators: Vec<BitMatrix>,
    /// Sorted by rows; the identity is always present.
    elements: Vec<BitMatrix>,
}

fn check_square(v: usize, g: &BitMatrix) -> Result<()> {
    if g.width() != v || g.num_rows() != v {
        return Err(Error::DimensionMismatch(format!(
            "generator is {}x{}, expected {v}x{v}",
            g.num_rows(),
            g.width()
        )));
    }
    if g.rank() != v {
        return Err(Error::InvalidParameter(format!(
            "generator {} is singular",
            g.to_strings().join(";")
        )));
    }
    Ok(())
}

impl MatrixGroup {
    pub fn trivial(v: usize) -> Result<Self> {
        Self::closure(v, &[], DEFAULT_CAP)
    }

    /// Smallest group containing `generators`, failing once more than `cap`
    /// elements have been produced.
    pub fn closure(v: usize, generators: &[BitMatrix], cap: usize) -> Result<Self> {
        for g in generators {
            check_square(v, g)?;
        }
        let id = BitMatrix::identity(v)?;
        let mut seen: HashSet<BitMatrix> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = x.mul(g)?;
                if seen.insert(y.clone()) {
                    if seen.len() > cap {
                        return Err(Error::CapExceeded(cap));
                    }
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<BitMatrix> = seen.into_iter().collect();
        elements.sort_by(|a, b| a.rows().cmp(b.rows()));
        Ok(Self {
            v,
            generators: generators.to_vec(),
            elements,
        })
    }

    /// Wraps a list already known to be a group.
    pub(crate) fn from_elements(v: usize, mut elements: Vec<BitMatrix>) -> Self {
        elements.sort_by(|a, b| a.rows().cmp(b.rows()));
        Self {
            v,
            generators: elements.clone(),
            elements,
        }
    }

    pub fn ambient(&self) -> usize {
        self.v
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[BitMatrix] {
        &self.elements
    }

    pub fn generators(&self) -> &[BitMatrix] {
        &self.generators
    }

    pub fn contains(&self, g: &BitMatrix) -> bool {
        self.elements
            .binary_search_by(|e| e.rows().cmp(g.rows()))
            .is_ok()
    }

    /// Elements fixing `u` setwise, as a group.
    pub fn stabilizer(&self, u: &Subspace) -> MatrixGroup {
        let elements = self
            .elements
            .iter()
            .filter(|g| u.transform_unchecked(g) == *u)
            .cloned()
            .collect();
        Self::from_elements(self.v, elements)
    }

    /// Orbit of `u`, sorted canonically.
    pub fn orbit(&self, u: &Subspace) -> Vec<Subspace> {
        if self.generators.len() >= self.elements.len() / 2 {
            let set: BTreeSet<Subspace> =
                self.elements.iter().map(|g| u.transform_unchecked(g)).collect();
            return set.into_iter().collect();
        }
        let gens = &self.generators;
        let mut seen = BTreeSet::from([u.clone()]);
        let mut queue = vec![u.clone()];
        while let Some(x) = queue.pop() {
            for g in gens {
                let y = x.transform_unchecked(g);
                if seen.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Partition of an invariant set of subspaces into orbits, each sorted,
    /// ordered by their canonical representatives.
    pub fn orbits_on(&self, set: &[Subspace]) -> Vec<Vec<Subspace>> {
        let mut done: HashSet<&Subspace> = HashSet::new();
        let mut out = Vec::new();
        let mut sorted: Vec<&Subspace> = set.iter().collect();
        sorted.sort();
        for s in sorted {
            if done.contains(s) {
                continue;
            }
            let orbit = self.orbit(s);
            for o in &orbit {
                if let Some(x) = set.iter().find(|x| *x == o) {
                    done.insert(x);
                }
            }
            out.push(orbit);
        }
        out
    }
}

/// Orbits of a group on the Grassmannian G[v,k].
#[derive(Clone, Debug)]
pub struct OrbitDecomposition {
    pub k: usize,
    /// Orbits sorted internally and by representative.
    pub orbits: Vec<Vec<Subspace>>,
}

impl OrbitDecomposition {
    pub fn representatives(&self) -> Vec<&Subspace> {
        self.orbits.iter().map(|o| &o[0]).collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(Vec::len).collect()
    }
}

pub fn orbits(g: &MatrixGroup, k: usize) -> Result<OrbitDecomposition> {
    if k > g.ambient() {
        return Err(Error::InvalidParameter(format!(
            "dimension {k} exceeds ambient {}",
            g.ambient()
        )));
    }
    let mut seen: HashSet<Subspace> = HashSet::new();
    let mut out = Vec::new();
    for s in enumerate(g.ambient(), k)? {
        if seen.contains(&s) {
            continue;
        }
        let orbit = g.orbit(&s);
        debug_assert_eq!(g.order() % orbit.len(), 0);
        seen.extend(orbit.iter().cloned());
        out.push(orbit);
    }
    Ok(OrbitDecomposition { k, orbits: out })
}

/// The k-subspaces fixed by every element.
pub fn fixed_subspaces(g: &MatrixGroup, k: usize) -> Result<Vec<Subspace>> {
    Ok(orbits(g, k)?
        .orbits
        .into_iter()
        .filter(|o| o.len() == 1)
        .map(|mut o| o.remove(0))
        .collect())
}

/// Number of supplied elements mapping the code onto itself.
pub fn stabilizer_order(g: &MatrixGroup, c: &SubspaceCode) -> Result<usize> {
    if g.ambient() != c.ambient() {
        return Err(Error::DimensionMismatch("group and code ambients differ".into()));
    }
    Ok(g.elements()
        .iter()
        .filter(|e| c.words().iter().all(|w| c.contains(&w.transform_unchecked(e))))
        .count())
}

/// Order of the stabilizer of a k-subspace in GL(v,2).
pub fn gl_stabilizer_order(v: usize, k: usize) -> u128 {
    let gl = |n: usize| -> u128 { (0..n).map(|i| (1u128 << n) - (1u128 << i)).product() };
    gl(k) * gl(v - k) * (1u128 << (k * (v - k)))
}

/// The full stabilizer of `u` in GL(v,2), if it has at most `cap` elements.
pub fn gl_stabilizer(u: &Subspace, cap: usize) -> Result<MatrixGroup> {
    let v = u.ambient();
    let k = u.dim();
    let order = gl_stabilizer_order(v, k);
    if order > cap as u128 || k > 4 || v - k > 4 {
        return Err(Error::CapExceeded(cap));
    }
    // basis adapted to u: its rref rows, then unit vectors off the pivots
    let pivots = u.pivot_mask();
    let mut basis: Vec<Row> = u.rows().to_vec();
    for c in 0..v {
        let bit = 1 << (v - 1 - c);
        if pivots & bit == 0 {
            basis.push(bit);
        }
    }
    let p = BitMatrix::new(v, basis)?;
    let p_inv = p.inverse().expect("adapted basis is invertible");
    let a_list = if k == 0 { vec![] } else { general_linear(k)? };
    let d_list = if k == v { vec![] } else { general_linear(v - k)? };
    let a_list: Vec<Option<&BitMatrix>> = if k == 0 { vec![None] } else { a_list.iter().map(Some).collect() };
    let d_list: Vec<Option<&BitMatrix>> = if k == v { vec![None] } else { d_list.iter().map(Some).collect() };
    let n = v - k;
    let mut out = Vec::with_capacity(order as usize);
    for a in &a_list {
        for d in &d_list {
            for c in 0u32..(1u32 << (k * n)) {
                // M = [[A, 0], [C, D]] acting on the adapted coordinates
                let mut rows: Vec<Row> = Vec::with_capacity(v);
                if let Some(a) = a {
                    rows.extend(a.rows().iter().map(|&r| r << n));
                }
                for i in 0..n {
                    let ci = ((c >> (i * k)) & ((1 << k) - 1)) as Row;
                    let di = d.map_or(0, |d| d.rows()[i]);
                    rows.push(ci << n | di);
                }
                let m = BitMatrix::new(v, rows)?;
                out.push(p_inv.mul(&m)?.mul(&p)?);
            }
        }
    }
    Ok(MatrixGroup::from_elements(v, out))
}

/// Parses a generator file: `v=<int>` then one generator per line as
/// v rows joined by `;`; `#` starts a comment line.
pub fn parse_generators(text: &str) -> Result<(usize, Vec<BitMatrix>)> {
    let mut v = None;
    let mut gens = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::ParseLine { line, msg };
        let Some(v) = v else {
            let n = s
                .strip_prefix("v=")
                .and_then(|x| x.trim().parse::<usize>().ok())
                .filter(|&n| (1..=MAX_V).contains(&n))
                .ok_or_else(|| err(format!("expected header `v=<int>`, got `{s}`")))?;
            v = Some(n);
            continue;
        };
        let rows: Vec<&str> = s.split(';').map(str::trim).collect();
        if rows.len() != v || rows.iter().any(|r| r.len() != v) {
            return Err(err(format!("generator must be {v} rows of width {v}")));
        }
        let g = BitMatrix::from_strings(&rows).map_err(|e| err(e.to_string()))?;
        check_square(v, &g).map_err(|e| err(e.to_string()))?;
        gens.push(g);
    }
    let v = v.ok_or_else(|| Error::Parse("missing header `v=<int>`".into()))?;
    Ok((v, gens))
}

pub fn read_generators(path: &Path) -> Result<(usize, Vec<BitMatrix>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_generators(&text)
}

pub fn format_generators(v: usize, gens: &[BitMatrix]) -> String {
    let mut out = format!("v={v}\n");
    for g in gens {
        out.push_str(&g.to_strings().join(";"));
        out.push('\n');
    }
    out
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::count;

    pub(crate) fn eq9_generators() -> Vec<BitMatrix> {
        let a = BitMatrix::from_strings(&[
            "100000", "010000", "000100", "001100", "000001", "000011",
        ])
        .unwrap();
        let b = BitMatrix::from_strings(&[
            "010000", "110000", "001010", "000101", "001000", "000100",
        ])
        .unwrap();
        vec![a, b]
    }

    #[test]
    fn closure_orders() {
        assert_eq!(MatrixGroup::trivial(4).unwrap().order(), 1);
        let t = BitMatrix::from_strings(&["1100", "0100", "0010", "0001"]).unwrap();
        assert_eq!(MatrixGroup::closure(4, &[t], DEFAULT_CAP).unwrap().order(), 2);
        let g = MatrixGroup::closure(6, &eq9_generators(), DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 9);
        let s = BitMatrix::from_strings(&["1100", "1100", "0010", "0001"]).unwrap();
        assert!(MatrixGroup::closure(4, &[s], DEFAULT_CAP).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let gl3 = general_linear(3).unwrap();
        assert!(matches!(
            MatrixGroup::closure(3, &gl3, 100),
            Err(Error::CapExceeded(100))
        ));
    }

    #[test]
    fn eq9_group_orbits() {
        let g = MatrixGroup::closure(6, &eq9_generators(), DEFAULT_CAP).unwrap();
        let lines = orbits(&g, 2).unwrap();
        assert_eq!(lines.sizes().iter().sum::<usize>(), 651);
        assert_eq!(fixed_subspaces(&g, 2).unwrap().len(), 3);
        for o in &lines.orbits {
            assert_eq!(9 % o.len(), 0);
            for e in g.elements() {
                let img: BTreeSet<Subspace> = o.iter().map(|s| s.transform(e).unwrap()).collect();
                assert_eq!(img, o.iter().cloned().collect());
            }
        }
        assert_eq!(fixed_subspaces(&g, 0).unwrap(), vec![Subspace::zero(6).unwrap()]);
    }

    #[test]
    fn trivial_group_fixes_everything() {
        let g = MatrixGroup::trivial(4).unwrap();
        assert_eq!(fixed_subspaces(&g, 2).unwrap().len(), 35);
    }

    #[test]
    fn burnside_on_lines_of_f4() {
        let gens = vec![
            BitMatrix::from_strings(&["0100", "0010", "0001", "1001"]).unwrap(),
        ];
        let g = MatrixGroup::closure(4, &gens, DEFAULT_CAP).unwrap();
        let lines: Vec<Subspace> = enumerate(4, 2).unwrap().collect();
        let fixed: usize = g
            .elements()
            .iter()
            .map(|e| lines.iter().filter(|l| l.transform(e).unwrap() == **l).count())
            .sum();
        assert_eq!(fixed % g.order(), 0);
        assert_eq!(orbits(&g, 2).unwrap().orbits.len(), fixed / g.order());
    }

    #[test]
    fn gl_stabilizers() {
        for v in 2..=5 {
            for k in 0..=v {
                if gl_stabilizer_order(v, k) > 400_000 {
                    continue;
                }
                let u = enumerate(v, k).unwrap().nth(count(v, k) as usize / 2).unwrap();
                let st = gl_stabilizer(&u, 400_000).unwrap();
                assert_eq!(st.order() as u128, gl_stabilizer_order(v, k));
                for e in st.elements().iter().step_by(97) {
                    assert_eq!(u.transform(e).unwrap(), u);
                    assert_eq!(e.rank(), v);
                }
                let distinct: HashSet<_> = st.elements().iter().collect();
                assert_eq!(distinct.len(), st.order());
            }
        }
    }

    #[test]
    fn stabilizer_orders_of_codes() {
        let spread = SubspaceCode::from_subspaces(
            4,
            ["1000;0100", "0010;0001", "1010;0101", "1001;0111", "1011;0110"]
                .iter()
                .map(|s| Subspace::parse(4, s).unwrap()),
        )
        .unwrap();
        let gl4 = MatrixGroup::from_elements(4, general_linear(4).unwrap());
        assert_eq!(gl4.order(), 20160);
        let st = stabilizer_order(&gl4, &spread).unwrap();
        assert_eq!(st % 5, 0);
        assert_eq!(stabilizer_order(&MatrixGroup::trivial(4).unwrap(), &spread).unwrap(), 1);
    }

    #[test]
    fn generator_file_round_trip() {
        let gens = eq9_generators();
        let text = format_generators(6, &gens);
        let (v, back) = parse_generators(&text).unwrap();
        assert_eq!(v, 6);
        assert_eq!(back, gens);
        assert!(parse_generators("v=2\n11;11\n").is_err());
    }
}
