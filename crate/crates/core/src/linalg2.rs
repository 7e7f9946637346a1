//! Exact linear algebra over GF(2) and small extension fields GF(2^n).
//!
//! Row vectors are packed into machine words. Coordinate 1 (the leftmost
//! column when a matrix is printed) is the most significant of the `v` used
//! bits, so the row `1000` in width 4 is the mask `0b1000`.

use std::cmp::Ordering;
use std::fmt;

use arrayvec::ArrayVec;

use crate::error::{Error, Result};

/// Largest supported ambient dimension.
pub const MAX_V: usize = 16;

/// A packed GF(2) row of width at most [`MAX_V`].
pub type Row = u16;

fn width_mask(v: usize) -> u32 {
    if v >= 32 {
        u32::MAX
    } else {
        (1u32 << v) - 1
    }
}

/// Parses a binary row string such as `0110` into a mask of width `s.len()`.
pub fn parse_row(s: &str) -> Result<Row> {
    if s.is_empty() || s.len() > MAX_V {
        return Err(Error::Parse(format!("row `{s}` must have 1..={MAX_V} bits")));
    }
    let mut r: Row = 0;
    for ch in s.chars() {
        r = (r << 1)
            | match ch {
                '0' => 0,
                '1' => 1,
                _ => return Err(Error::Parse(format!("invalid bit `{ch}` in row `{s}`"))),
            };
    }
    Ok(r)
}

/// Formats a row as a binary string of width `v`.
pub fn format_row(r: Row, v: usize) -> String {
    (0..v)
        .map(|c| if r >> (v - 1 - c) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// In-place Gauss-Jordan elimination on `width`-bit rows. Returns the rank;
/// afterwards the first `rank` rows hold the reduced row echelon form.
pub(crate) fn rref_in_place(rows: &mut [u32], width: usize) -> usize {
    let mut rank = 0;
    for col in (0..width).rev() {
        let bit = 1u32 << col;
        let Some(p) = (rank..rows.len()).find(|&i| rows[i] & bit != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank];
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && *r & bit != 0 {
                *r ^= pivot;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Rank of a set of rows (any width up to 32) via leading-bit insertion.
pub(crate) fn rank_of(rows: impl IntoIterator<Item = u32>) -> usize {
    let mut basis = [0u32; 32];
    let mut rank = 0;
    for mut r in rows {
        while r != 0 {
            let lead = 31 - r.leading_zeros() as usize;
            if basis[lead] == 0 {
                basis[lead] = r;
                rank += 1;
                break;
            }
            r ^= basis[lead];
        }
    }
    rank
}

/// A general (possibly rank deficient) binary matrix with `v` columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    v: usize,
    rows: Vec<Row>,
}

impl BitMatrix {
    pub fn new(v: usize, rows: Vec<Row>) -> Result<Self> {
        if v == 0 || v > MAX_V {
            return Err(Error::InvalidParameter(format!(
                "matrix width {v} outside 1..={MAX_V}"
            )));
        }
        let mask = width_mask(v);
        if let Some(r) = rows.iter().find(|&&r| u32::from(r) & !mask != 0) {
            return Err(Error::InvalidParameter(format!(
                "row {r:#b} does not fit in {v} bits"
            )));
        }
        Ok(Self { v, rows })
    }

    /// Builds a matrix from binary row strings of equal length.
    pub fn from_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let v = rows
            .first()
            .map(|r| r.as_ref().len())
            .ok_or_else(|| Error::Parse("empty row list".into()))?;
        let mut out = Vec::with_capacity(rows.len());
        for r in rows {
            let r = r.as_ref();
            if r.len() != v {
                return Err(Error::Parse(format!(
                    "row `{r}` has width {} but expected {v}",
                    r.len()
                )));
            }
            out.push(parse_row(r)?);
        }
        Self::new(v, out)
    }

    pub fn identity(v: usize) -> Result<Self> {
        Self::new(v, (0..v).map(|i| 1 << (v - 1 - i)).collect())
    }

    pub fn zeros(rows: usize, v: usize) -> Result<Self> {
        Self::new(v, vec![0; rows])
    }

    pub fn width(&self) -> usize {
        self.v
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Entry at (row, col), both zero based, col 0 being coordinate 1.
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row] >> (self.v - 1 - col) & 1 == 1
    }

    pub fn rank(&self) -> usize {
        rank_of(self.rows.iter().map(|&r| u32::from(r)))
    }

    /// Row vector times matrix: XOR of the rows selected by the bits of `x`.
    /// `x` has width `num_rows()` with the first row at the top bit.
    pub fn mul_vec(&self, x: Row) -> Row {
        let n = self.rows.len();
        let mut acc = 0;
        for (i, &r) in self.rows.iter().enumerate() {
            if x >> (n - 1 - i) & 1 == 1 {
                acc ^= r;
            }
        }
        acc
    }

    /// Matrix product `self * rhs`; requires `self.width() == rhs.num_rows()`.
    pub fn mul(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        if self.v != rhs.rows.len() {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows.len(),
                self.v,
                rhs.rows.len(),
                rhs.v
            )));
        }
        BitMatrix::new(rhs.v, self.rows.iter().map(|&r| rhs.mul_vec(r)).collect())
    }

    pub fn add(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        if self.v != rhs.v || self.rows.len() != rhs.rows.len() {
            return Err(Error::DimensionMismatch("matrix shapes differ".into()));
        }
        BitMatrix::new(
            self.v,
            self.rows.iter().zip(&rhs.rows).map(|(a, b)| a ^ b).collect(),
        )
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.rows.iter().map(|&r| format_row(r, self.v)).collect()
    }

    /// Inverse of a square matrix, or `None` if it is singular.
    pub fn inverse(&self) -> Option<BitMatrix> {
        let n = self.v;
        if self.rows.len() != n {
            return None;
        }
        // augmented rows [A | I] in 2n bits
        let mut aug: Vec<u32> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, &r)| u32::from(r) << n | 1 << (n - 1 - i))
            .collect();
        if rref_in_place(&mut aug, 2 * n) < n || (aug[n - 1] >> n) != 1 {
            return None;
        }
        let mask = width_mask(n);
        Some(BitMatrix {
            v: n,
            rows: aug.iter().map(|&r| (r & mask) as Row).collect(),
        })
    }
}

/// Reduced row echelon form of `m` together with its rank.
///
/// The returned matrix contains only the `rank` nonzero rows.
pub fn rref(m: &BitMatrix) -> (BitMatrix, usize) {
    let mut rows: Vec<u32> = m.rows.iter().map(|&r| u32::from(r)).collect();
    let rank = rref_in_place(&mut rows, m.v);
    let out = rows[..rank].iter().map(|&r| r as Row).collect();
    (BitMatrix { v: m.v, rows: out }, rank)
}

/// A subspace of GF(2)^v identified by its canonical rref generator matrix.
///
/// Ordering follows the canonical subspace order used for every
/// deterministic output: ambient dimension, then dimension, then pivot
/// vector read as an integer, then the row masks lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    v: u8,
    rows: ArrayVec<Row, MAX_V>,
}

impl Subspace {
    /// Row space of arbitrary generator rows.
    pub fn span(v: usize, gens: &[Row]) -> Result<Self> {
        let m = BitMatrix::new(v, gens.to_vec())?;
        Ok(Self::from_matrix(&m))
    }

    pub fn from_matrix(m: &BitMatrix) -> Self {
        let (r, _) = rref(m);
        Self::from_rref_unchecked(m.v, &r.rows)
    }

    /// Caller guarantees `rows` are already the rref of the subspace.
    pub(crate) fn from_rref_unchecked(v: usize, rows: &[Row]) -> Self {
        debug_assert!(is_rref(rows, v));
        let mut a = ArrayVec::new();
        a.try_extend_from_slice(rows).expect("at most MAX_V rows");
        Self { v: v as u8, rows: a }
    }

    /// Parses generator rows written as `0110;1000` or `-` for the zero space.
    pub fn parse(v: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "-" {
            return Self::zero(v);
        }
        let m = BitMatrix::from_strings(&s.split(';').map(str::trim).collect::<Vec<_>>())?;
        if m.width() != v {
            return Err(Error::Parse(format!(
                "row width {} does not match ambient dimension {v}",
                m.width()
            )));
        }
        Ok(Self::from_matrix(&m))
    }

    pub fn zero(v: usize) -> Result<Self> {
        Self::span(v, &[])
    }

    pub fn full(v: usize) -> Result<Self> {
        Ok(Self::from_matrix(&BitMatrix::identity(v)?))
    }

    /// Row space of the lifted matrix `(I_k | m)` for a k x n matrix `m`.
    pub fn lift(m: &BitMatrix) -> Result<Self> {
        let k = m.num_rows();
        let v = k + m.width();
        if v > MAX_V {
            return Err(Error::InvalidParameter(format!("lifted width {v} exceeds {MAX_V}")));
        }
        let n = m.width();
        let rows: Vec<Row> = m
            .rows()
            .iter()
            .enumerate()
            .map(|(j, &r)| (1 << (v - 1 - j)) | r)
            .collect();
        debug_assert!(n + k == v);
        Ok(Self::from_rref_unchecked(v, &rows))
    }

    pub fn ambient(&self) -> usize {
        usize::from(self.v)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn matrix(&self) -> BitMatrix {
        BitMatrix {
            v: self.ambient(),
            rows: self.rows.to_vec(),
        }
    }

    /// Pivot vector as a mask: bit set for each pivot column.
    pub fn pivot_mask(&self) -> Row {
        self.rows
            .iter()
            .fold(0, |acc, &r| acc | (1 << (15 - r.leading_zeros())))
    }

    pub fn pivot_vector(&self) -> String {
        format_row(self.pivot_mask(), self.ambient())
    }

    /// True if vector `x` lies in the subspace.
    pub fn contains_vector(&self, mut x: Row) -> bool {
        for &r in &self.rows {
            let lead = 1 << (15 - r.leading_zeros());
            if x & lead != 0 {
                x ^= r;
            }
        }
        x == 0
    }

    /// True if `self` is a subspace of `other`.
    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.v == other.v
            && self.dim() <= other.dim()
            && self.rows.iter().all(|&r| other.contains_vector(r))
    }

    /// All nonzero vectors of the subspace, in increasing coefficient order.
    pub fn vectors(&self) -> impl Iterator<Item = Row> + '_ {
        let k = self.dim();
        (1u32..(1u32 << k)).map(move |c| {
            let mut x = 0;
            for (i, &r) in self.rows.iter().enumerate() {
                if c >> (k - 1 - i) & 1 == 1 {
                    x ^= r;
                }
            }
            x
        })
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.v != other.v {
            return Err(Error::DimensionMismatch(format!(
                "ambient dimensions {} and {} differ",
                self.v, other.v
            )));
        }
        Ok(())
    }

    /// Applies `g` (acting on row vectors from the right) to the subspace.
    pub fn transform(&self, g: &BitMatrix) -> Result<Subspace> {
        if g.width() != self.ambient() || g.num_rows() != self.ambient() {
            return Err(Error::DimensionMismatch(
                "transform matrix must be v x v".into(),
            ));
        }
        Ok(self.transform_unchecked(g))
    }

    /// [`Subspace::transform`] for a square matrix of matching size.
    pub(crate) fn transform_unchecked(&self, g: &BitMatrix) -> Subspace {
        let mut imgs: ArrayVec<u32, MAX_V> =
            self.rows.iter().map(|&r| u32::from(g.mul_vec(r))).collect();
        let rank = rref_in_place(&mut imgs, self.ambient());
        let rows: ArrayVec<Row, MAX_V> = imgs[..rank].iter().map(|&r| r as Row).collect();
        Subspace { v: self.v, rows }
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.v
            .cmp(&other.v)
            .then(self.dim().cmp(&other.dim()))
            .then(self.pivot_mask().cmp(&other.pivot_mask()))
            .then_with(|| self.rows.as_slice().cmp(other.rows.as_slice()))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace({})", self)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows.is_empty() {
            return f.write_str("-");
        }
        let v = self.ambient();
        let parts: Vec<String> = self.rows.iter().map(|&r| format_row(r, v)).collect();
        f.write_str(&parts.join(";"))
    }
}

fn is_rref(rows: &[Row], v: usize) -> bool {
    let mask = width_mask(v);
    let mut prev_lead: Option<u32> = None;
    let mut pivots = 0u32;
    for &r in rows {
        if r == 0 || u32::from(r) & !mask != 0 {
            return false;
        }
        let lead = 15 - r.leading_zeros();
        if let Some(p) = prev_lead {
            if lead >= p {
                return false;
            }
        }
        prev_lead = Some(lead);
        pivots |= 1 << lead;
    }
    rows.iter()
        .all(|&r| (u32::from(r) & pivots).count_ones() == 1)
}

/// Intersection of two subspaces (Zassenhaus).
pub fn meet(x: &Subspace, y: &Subspace) -> Result<Subspace> {
    x.check_ambient(y)?;
    let v = x.ambient();
    let mut rows: Vec<u32> = x
        .rows
        .iter()
        .map(|&r| (u32::from(r) << v) | u32::from(r))
        .chain(y.rows.iter().map(|&r| u32::from(r) << v))
        .collect();
    let rank = rref_in_place(&mut rows, 2 * v);
    let low = width_mask(v);
    let gens: Vec<Row> = rows[..rank]
        .iter()
        .filter(|&&r| r >> v == 0)
        .map(|&r| (r & low) as Row)
        .collect();
    Subspace::span(v, &gens)
}

/// Sum of two subspaces.
pub fn join(x: &Subspace, y: &Subspace) -> Result<Subspace> {
    x.check_ambient(y)?;
    let gens: Vec<Row> = x.rows.iter().chain(y.rows.iter()).copied().collect();
    Subspace::span(x.ambient(), &gens)
}

/// Dimension of `x + y` without building the rref.
pub fn join_dim(x: &Subspace, y: &Subspace) -> usize {
    rank_of(x.rows.iter().chain(y.rows.iter()).map(|&r| u32::from(r)))
}

/// Dimension of `x ∩ y`.
pub fn meet_dim(x: &Subspace, y: &Subspace) -> usize {
    x.dim() + y.dim() - join_dim(x, y)
}

/// Subspace distance `dim(x + y) - dim(x ∩ y)`.
pub fn subspace_distance(x: &Subspace, y: &Subspace) -> Result<usize> {
    x.check_ambient(y)?;
    Ok(distance_unchecked(x, y))
}

/// Subspace distance for operands known to share their ambient space.
pub(crate) fn distance_unchecked(x: &Subspace, y: &Subspace) -> usize {
    2 * join_dim(x, y) - x.dim() - y.dim()
}

/// Orthogonal complement with respect to the standard inner product.
pub fn dual(s: &Subspace) -> Subspace {
    let v = s.ambient();
    let pivots = s.pivot_mask();
    let mut gens = Vec::with_capacity(v - s.dim());
    for col in 0..v {
        let bit: Row = 1 << (v - 1 - col);
        if pivots & bit != 0 {
            continue;
        }
        // Kernel vector: 1 at the free column, and at each pivot column the
        // entry of the corresponding rref row in the free column.
        let mut x = bit;
        for &r in &s.rows {
            if r & bit != 0 {
                x |= 1 << (15 - r.leading_zeros());
            }
        }
        gens.push(x);
    }
    Subspace::span(v, &gens).expect("dual rows fit in ambient width")
}

/// Rank distance `rank(a - b)` between two matrices of equal shape.
pub fn rank_distance(a: &BitMatrix, b: &BitMatrix) -> Result<usize> {
    Ok(a.add(b)?.rank())
}

/// Context for arithmetic in GF(2^n) = GF(2)[x] / (modulus).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtFieldCtx {
    n: usize,
    modulus: u32,
}

/// Degree of a nonzero polynomial given as a bitmask.
fn poly_degree(p: u32) -> usize {
    31 - p.leading_zeros() as usize
}

fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = poly_degree(b);
    while a != 0 && poly_degree(a) >= db {
        a ^= b << (poly_degree(a) - db);
    }
    a
}

/// Exhaustive irreducibility test: no factor of degree 1..=deg/2.
pub fn is_irreducible(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let d = poly_degree(p);
    (2u32..(1 << (d / 2 + 1))).all(|f| poly_degree(f) > d / 2 || poly_rem(p, f) != 0)
}

/// Lexicographically smallest irreducible polynomial of degree `n`.
///
/// For n = 1..=8 this yields x, x^2+x+1, x^3+x+1, x^4+x+1, x^5+x^2+1,
/// x^6+x+1, x^7+x+1 and x^8+x^4+x^3+x+1.
pub fn default_modulus(n: usize) -> u32 {
    ((1u32 << n)..(1u32 << (n + 1)))
        .find(|&p| is_irreducible(p))
        .expect("irreducible polynomials exist in every degree")
}

impl ExtFieldCtx {
    pub const MAX_DEGREE: usize = 8;

    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > Self::MAX_DEGREE {
            return Err(Error::InvalidParameter(format!(
                "extension degree {n} outside 1..={}",
                Self::MAX_DEGREE
            )));
        }
        Self::with_modulus(n, default_modulus(n))
    }

    pub fn with_modulus(n: usize, modulus: u32) -> Result<Self> {
        if n == 0 || n > Self::MAX_DEGREE || modulus < 2 || poly_degree(modulus) != n {
            return Err(Error::InvalidParameter(format!(
                "modulus {modulus:#b} is not of degree {n}"
            )));
        }
        if !is_irreducible(modulus) {
            return Err(Error::InvalidParameter(format!(
                "modulus {modulus:#b} is reducible"
            )));
        }
        Ok(Self { n, modulus })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> u32 {
        1 << self.n
    }

    fn check(&self, a: u32) -> Result<()> {
        if a >= self.order() {
            return Err(Error::InvalidParameter(format!(
                "element {a:#b} outside GF(2^{})",
                self.n
            )));
        }
        Ok(())
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let mut acc = 0u32;
        for i in 0..self.n {
            if b >> i & 1 == 1 {
                acc ^= a << i;
            }
        }
        poly_rem(acc, self.modulus)
    }

    /// The class of x, i.e. the generator of the power basis.
    pub fn alpha(&self) -> u32 {
        poly_rem(0b10, self.modulus)
    }

    pub fn pow(&self, a: u32, mut e: u32) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Evaluates the linearized polynomial `sum_i coeffs[i] * x^(2^i)`.
    pub fn linpoly_eval(&self, coeffs: &[u32], x: u32) -> Result<u32> {
        self.check(x)?;
        for &a in coeffs {
            self.check(a)?;
        }
        if coeffs.len() > self.n {
            return Err(Error::InvalidParameter(format!(
                "linearized polynomial has {} terms but the field degree is {}",
                coeffs.len(),
                self.n
            )));
        }
        Ok(self.linpoly_eval_unchecked(coeffs, x))
    }

    pub(crate) fn linpoly_eval_unchecked(&self, coeffs: &[u32], x: u32) -> u32 {
        let mut frob = x;
        let mut acc = 0;
        for &a in coeffs {
            acc ^= self.mul(a, frob);
            frob = self.mul(frob, frob);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_subspaces(v: usize) -> Vec<Subspace> {
        // Independent of the grassmann module: span every 4-tuple of vectors.
        let n = 1u32 << v;
        let mut seen = std::collections::BTreeSet::new();
        for a in 0..n {
            for b in a..n {
                for c in b..n {
                    for d in c..n {
                        seen.insert(Subspace::span(v, &[a as Row, b as Row, c as Row, d as Row]).unwrap());
                    }
                }
            }
        }
        seen.into_iter().collect()
    }

    #[test]
    fn rref_examples() {
        let id = BitMatrix::identity(3).unwrap();
        assert_eq!(rref(&id), (id.clone(), 3));

        let m = BitMatrix::from_strings(&["011", "110"]).unwrap();
        let (r, rank) = rref(&m);
        assert_eq!(rank, 2);
        assert_eq!(r.to_strings(), vec!["101", "011"]);

        let z = BitMatrix::zeros(2, 4).unwrap();
        let (r, rank) = rref(&z);
        assert_eq!(rank, 0);
        assert_eq!(r.num_rows(), 0);
    }

    #[test]
    fn rref_is_idempotent_and_canonical() {
        // Two matrices have equal row spaces iff their rrefs coincide.
        let v = 3;
        let mats: Vec<BitMatrix> = (0u32..512)
            .map(|c| {
                BitMatrix::new(v, vec![(c & 7) as Row, (c >> 3 & 7) as Row, (c >> 6 & 7) as Row])
                    .unwrap()
            })
            .collect();
        let rowspace = |m: &BitMatrix| -> u32 {
            let mut set = 1u32; // zero vector
            for c in 0..8u32 {
                set |= 1 << m.mul_vec(c as Row);
            }
            set
        };
        for a in &mats {
            let (ra, _) = rref(a);
            assert_eq!(rref(&ra).0, ra);
            for b in mats.iter().step_by(7) {
                let (rb, _) = rref(b);
                assert_eq!(ra == rb, rowspace(a) == rowspace(b));
            }
        }
    }

    #[test]
    fn pivot_vectors() {
        let lifted = Subspace::lift(&BitMatrix::from_strings(&["1010", "0110", "1111", "0001"]).unwrap()).unwrap();
        assert_eq!(lifted.pivot_vector(), "11110000");
        assert_eq!(Subspace::zero(8).unwrap().pivot_vector(), "00000000");
        let s = Subspace::parse(8, "01000011;00001010;00000101").unwrap();
        assert_eq!(s.pivot_vector(), "01001100");
        for u in all_subspaces(4) {
            assert_eq!(u.pivot_mask().count_ones() as usize, u.dim());
        }
    }

    #[test]
    fn meet_join_examples() {
        let l1 = Subspace::parse(4, "1000;0100").unwrap();
        let l2 = Subspace::parse(4, "1000;0010").unwrap();
        assert_eq!(meet(&l1, &l1).unwrap(), l1);
        assert_eq!(join(&l1, &l1).unwrap(), l1);
        let m = meet(&l1, &l2).unwrap();
        assert_eq!(m, Subspace::parse(4, "1000").unwrap());
        assert_eq!(join(&l1, &l2).unwrap().dim(), 3);

        let s1 = Subspace::parse(8, "00001000;00000100;00000010;00000001").unwrap();
        let s2 = Subspace::parse(8, "10000000;01000000;00100000;00010000").unwrap();
        assert_eq!(meet(&s1, &s2).unwrap().dim(), 0);
        assert_eq!(join(&s1, &s2).unwrap().dim(), 8);

        assert!(meet(&l1, &s1).is_err());
    }

    #[test]
    fn modular_law_and_metric_exhaustive_v4() {
        let subs = all_subspaces(4);
        assert_eq!(subs.len(), 67);
        for x in &subs {
            for y in &subs {
                let m = meet(x, y).unwrap();
                let j = join(x, y).unwrap();
                assert_eq!(j.dim(), x.dim() + y.dim() - m.dim());
                assert!(m.is_subspace_of(x) && m.is_subspace_of(y));
                assert!(x.is_subspace_of(&j) && y.is_subspace_of(&j));
                let d = subspace_distance(x, y).unwrap();
                // The three forms of the distance agree.
                assert_eq!(d, j.dim() - m.dim());
                assert_eq!(d, x.dim() + y.dim() - 2 * m.dim());
                assert_eq!(d, subspace_distance(y, x).unwrap());
                assert_eq!(d == 0, x == y);
            }
        }
        for x in subs.iter().step_by(3) {
            for y in &subs {
                for z in subs.iter().step_by(2) {
                    let xy = distance_unchecked(x, y);
                    let yz = distance_unchecked(y, z);
                    assert!(distance_unchecked(x, z) <= xy + yz);
                }
            }
        }
    }

    #[test]
    fn distance_examples() {
        let line = Subspace::parse(4, "1000;0100").unwrap();
        let plane = Subspace::parse(4, "1000;0100;0010").unwrap();
        let other = Subspace::parse(4, "0010;0001").unwrap();
        assert_eq!(subspace_distance(&line, &line).unwrap(), 0);
        assert_eq!(subspace_distance(&line, &other).unwrap(), 4);
        assert_eq!(subspace_distance(&line, &plane).unwrap(), 1);
    }

    #[test]
    fn dual_is_isometric_involution() {
        let subs = all_subspaces(4);
        for x in &subs {
            let dx = dual(x);
            assert_eq!(dx.dim(), 4 - x.dim());
            assert_eq!(dual(&dx), *x);
            for r in dx.rows() {
                for s in x.rows() {
                    assert_eq!((r & s).count_ones() % 2, 0);
                }
            }
            for y in &subs {
                assert_eq!(
                    distance_unchecked(x, y),
                    distance_unchecked(&dx, &dual(y))
                );
            }
        }
        assert_eq!(dual(&Subspace::full(5).unwrap()).dim(), 0);
        let h = Subspace::parse(4, "1001;0101;0011").unwrap();
        assert_eq!(dual(&h), Subspace::parse(4, "1111").unwrap());
        let lifted = Subspace::lift(&BitMatrix::from_strings(&["1010", "0110", "1111", "0001"]).unwrap()).unwrap();
        assert_eq!(dual(&lifted).pivot_mask().count_ones(), 4);
    }

    #[test]
    fn default_moduli() {
        let expect = [0b10, 0b111, 0b1011, 0b10011, 0b100101, 0b1000011, 0b10000011, 0x11b];
        for (i, &m) in expect.iter().enumerate() {
            assert_eq!(default_modulus(i + 1), m, "degree {}", i + 1);
        }
        assert!(ExtFieldCtx::with_modulus(4, 0b10101).is_err());
        assert!(ExtFieldCtx::new(9).is_err());
    }

    #[test]
    fn linpoly_identity_and_frobenius() {
        let ctx = ExtFieldCtx::new(4).unwrap();
        for x in 0..16 {
            assert_eq!(ctx.linpoly_eval(&[1], x).unwrap(), x);
        }
        let images: std::collections::BTreeSet<u32> =
            (0..16).map(|x| ctx.linpoly_eval(&[0, 1], x).unwrap()).collect();
        assert_eq!(images.len(), 16);
        for x in 0..16 {
            for y in 0..16 {
                assert_eq!(
                    ctx.linpoly_eval(&[0, 1], x ^ y).unwrap(),
                    ctx.linpoly_eval(&[0, 1], x).unwrap() ^ ctx.linpoly_eval(&[0, 1], y).unwrap()
                );
                // Frobenius is multiplicative.
                assert_eq!(
                    ctx.linpoly_eval(&[0, 1], ctx.mul(x, y)).unwrap(),
                    ctx.mul(ctx.mul(x, x), ctx.mul(y, y))
                );
            }
        }
        assert!(ctx.linpoly_eval(&[16], 1).is_err());
        assert!(ctx.linpoly_eval(&[1], 16).is_err());
    }

    #[test]
    fn linpoly_kernel_small_for_l1() {
        let ctx = ExtFieldCtx::new(4).unwrap();
        for a0 in 0..16 {
            for a1 in 0..16 {
                if a0 == 0 && a1 == 0 {
                    continue;
                }
                let kernel = (0..16)
                    .filter(|&x| ctx.linpoly_eval(&[a0, a1], x).unwrap() == 0)
                    .count();
                // Kernel is a subspace of dimension at most 1.
                assert!(kernel == 1 || kernel == 2, "a0={a0} a1={a1} kernel={kernel}");
            }
        }
    }

    #[test]
    fn transform_and_mul() {
        let g = BitMatrix::from_strings(&["0100", "1000", "0010", "0001"]).unwrap();
        let p = Subspace::parse(4, "1000").unwrap();
        assert_eq!(p.transform(&g).unwrap(), Subspace::parse(4, "0100").unwrap());
        let gg = g.mul(&g).unwrap();
        assert_eq!(gg, BitMatrix::identity(4).unwrap());
    }
}
