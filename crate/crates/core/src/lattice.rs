//! Exact integer and rational linear algebra over Z^n and Q^n.
//!
//! Everything is arbitrary precision. Row-style normal forms are used
//! throughout: `H = U * M` for Hermite and `S = U * M * V` for Smith.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

use crate::error::{Error, Result};

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A vector in Z^n.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(Vec<BigInt>);

impl fmt::Debug for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl IntVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntVector(entries)
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        IntVector(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        IntVector(vec![BigInt::zero(); dim])
    }

    /// The `i`-th standard basis vector of Z^dim.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = BigInt::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn dot_rational(&self, other: &RationalVector) -> BigRational {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(other.entries())
            .map(|(a, b)| b * a)
            .fold(BigRational::zero(), |acc, x| acc + x)
    }

    /// gcd of the entries; zero for the zero vector.
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn scale(&self, k: &BigInt) -> IntVector {
        IntVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn add(&self, other: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> IntVector {
        IntVector(self.0.iter().map(|x| -x).collect())
    }

    /// Append one coordinate.
    pub fn lift(&self, last: BigInt) -> IntVector {
        let mut v = self.0.clone();
        v.push(last);
        IntVector(v)
    }

    /// Drop the last coordinate.
    pub fn truncate(&self) -> IntVector {
        IntVector(self.0[..self.0.len() - 1].to_vec())
    }

    pub fn last(&self) -> &BigInt {
        self.0.last().expect("non-empty vector")
    }

    pub fn to_rational(&self) -> RationalVector {
        RationalVector(self.0.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(|x| x.to_string()).collect()
    }
}

impl std::ops::Index<usize> for IntVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

/// Divide out the content. Fails on the zero vector.
pub fn primitive_part(v: &IntVector) -> Result<IntVector> {
    let g = v.content();
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(IntVector(v.0.iter().map(|x| x / &g).collect()))
}

/// A vector in Q^n, always stored in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(Vec<BigRational>);

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl RationalVector {
    pub fn new(entries: Vec<BigRational>) -> Self {
        RationalVector(entries)
    }

    pub fn zero(dim: usize) -> Self {
        RationalVector(vec![BigRational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    pub fn to_int_vector(&self) -> Option<IntVector> {
        if self.is_integral() {
            Some(IntVector(self.0.iter().map(|x| x.to_integer()).collect()))
        } else {
            None
        }
    }

    pub fn dot(&self, other: &RationalVector) -> BigRational {
        self.0
            .iter()
            .zip(&other.0)
            .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn add(&self, other: &RationalVector) -> RationalVector {
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RationalVector) -> RationalVector {
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &BigRational) -> RationalVector {
        RationalVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn neg(&self) -> RationalVector {
        RationalVector(self.0.iter().map(|x| -x).collect())
    }

    pub fn common_denominator(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
    }

    /// The integer vector `k * self` for the least positive `k` making it
    /// integral, together with `k`.
    pub fn clear_denominators(&self) -> (IntVector, BigInt) {
        let k = self.common_denominator();
        let kr = BigRational::from_integer(k.clone());
        let v = self.0.iter().map(|x| (x * &kr).to_integer()).collect();
        (IntVector(v), k)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(|x| x.to_string()).collect()
    }
}

impl std::ops::Index<usize> for RationalVector {
    type Output = BigRational;
    fn index(&self, i: usize) -> &BigRational {
        &self.0[i]
    }
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Build from row vectors of equal length `cols`.
    pub fn from_rows(rows: &[IntVector], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.dim(), cols, "row length mismatch");
            data.extend(r.entries().iter().cloned());
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let vs: Vec<IntVector> = rows.iter().map(|r| IntVector::from_i64s(r)).collect();
        Self::from_rows(&vs, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> IntVector {
        IntVector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn row_vectors(&self) -> Vec<IntVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn column(&self, j: usize) -> IntVector {
        IntVector((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &IntVector) -> IntVector {
        assert_eq!(self.cols, v.dim());
        IntVector((0..self.rows).map(|i| self.row(i).dot(v)).collect())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(dst, j) + k * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, dst) + k * self.get(i, src);
            self.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    /// Determinant of a square matrix by fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m.get(i, k).is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                m.swap_rows(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1)
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<BigRational>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| BigRational::from_integer(self.get(i, j).clone())).collect())
            .collect();
        rational_rank(&rows)
    }
}

/// Rank of a list of integer vectors.
pub fn rank_of(vectors: &[IntVector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    IntMatrix::from_rows(vectors, vectors[0].dim()).rank()
}

/// Hermite normal form `H = U * M`, row style: the nonzero rows of `H` come
/// first, pivots are positive and strictly increase in column, and entries
/// above a pivot lie in `[0, pivot)`. `U` is unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Column index of the pivot of each nonzero row.
    pub pivots: Vec<usize>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn hermite_normal_form(m: &IntMatrix) -> Hnf {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for j in 0..h.cols {
        if r == h.rows {
            break;
        }
        loop {
            // Smallest nonzero |entry| in column j at or below row r.
            let mut best: Option<usize> = None;
            for i in r..h.rows {
                if h.get(i, j).is_zero() {
                    continue;
                }
                if best.map_or(true, |b| h.get(i, j).abs() < h.get(b, j).abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(r, b);
            u.swap_rows(r, b);
            let mut done = true;
            for i in r + 1..h.rows {
                if h.get(i, j).is_zero() {
                    continue;
                }
                let q = -(h.get(i, j).div_floor(h.get(r, j)));
                h.add_row(i, r, &q);
                u.add_row(i, r, &q);
                if !h.get(i, j).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < h.rows && !h.get(r, j).is_zero() {
            if h.get(r, j).is_negative() {
                h.negate_row(r);
                u.negate_row(r);
            }
            let p = h.get(r, j).clone();
            for i in 0..r {
                let q = -(h.get(i, j).div_floor(&p));
                h.add_row(i, r, &q);
                u.add_row(i, r, &q);
            }
            pivots.push(j);
            r += 1;
        }
    }
    Hnf { h, u, pivots }
}

/// Smith normal form `S = U * M * V` with `U`, `V` unimodular, `S` diagonal
/// with non-negative entries and `s_i | s_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols)).map(|i| self.s.get(i, i).clone()).collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let mut s = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let n = m.rows.min(m.cols);
    for t in 0..n {
        // Pick the smallest nonzero entry of the trailing block as pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..s.rows {
            for j in t..s.cols {
                let x = s.get(i, j);
                if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < s.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        s.swap_rows(t, bi);
        u.swap_rows(t, bi);
        s.swap_cols(t, bj);
        v.swap_cols(t, bj);
        loop {
            let mut changed = false;
            for i in t + 1..s.rows {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let q = -(s.get(i, t).div_floor(s.get(t, t)));
                s.add_row(i, t, &q);
                u.add_row(i, t, &q);
                if !s.get(i, t).is_zero() {
                    s.swap_rows(t, i);
                    u.swap_rows(t, i);
                    changed = true;
                }
            }
            for j in t + 1..s.cols {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let q = -(s.get(t, j).div_floor(s.get(t, t)));
                s.add_col(j, t, &q);
                v.add_col(j, t, &q);
                if !s.get(t, j).is_zero() {
                    s.swap_cols(t, j);
                    v.swap_cols(t, j);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // Row and column are clear; enforce divisibility of the block.
            let p = s.get(t, t).clone();
            let bad = (t + 1..s.rows)
                .flat_map(|i| (t + 1..s.cols).map(move |j| (i, j)))
                .find(|&(i, j)| !s.get(i, j).is_multiple_of(&p));
            match bad {
                Some((i, _)) => {
                    let one = BigInt::one();
                    s.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    Snf { s, u, v }
}

/// Reduced row echelon form over Q; returns the nonzero rows.
pub fn rref(rows: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for j in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][j].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][j].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][j].is_zero() {
                let f = m[i][j].clone();
                for k in 0..ncols {
                    let d = &m[r][k] * &f;
                    m[i][k] -= d;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    m
}

pub fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    rref(rows).len()
}

/// Solve the square system `A x = b` over Q. `None` if `A` is singular.
pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let red = rref(&aug);
    if red.len() < n || (0..n).any(|i| !red[i][i].is_one()) {
        return None;
    }
    Some(red.iter().map(|r| r[n].clone()).collect())
}

/// Inverse of a square integer matrix over Q.
pub fn inverse_rational(m: &IntMatrix) -> Option<Vec<Vec<BigRational>>> {
    let n = m.rows;
    assert_eq!(n, m.cols);
    let aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut r: Vec<BigRational> =
                (0..n).map(|j| BigRational::from_integer(m.get(i, j).clone())).collect();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    let red = rref(&aug);
    if red.len() < n || (0..n).any(|i| !red[i][i].is_one()) {
        return None;
    }
    Some(red.iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of the integer kernel `{x in Z^c : M x = 0}`, as rows in Hermite
/// normal form. The basis spans the full saturated kernel lattice.
pub fn integer_kernel(m: &IntMatrix) -> Vec<IntVector> {
    let hnf = hermite_normal_form(&m.transpose());
    let k = hnf.rank();
    let basis: Vec<IntVector> = (k..hnf.u.rows).map(|i| hnf.u.row(i)).collect();
    if basis.is_empty() {
        return basis;
    }
    let canon = hermite_normal_form(&IntMatrix::from_rows(&basis, m.cols));
    (0..canon.rank()).map(|i| canon.h.row(i)).collect()
}

/// Invariant factors greater than one of `Z^ambient / span(rows)`.
pub fn quotient_invariants(generators: &[IntVector], ambient: usize) -> Result<Vec<BigInt>> {
    if let Some(g) = generators.iter().find(|g| g.dim() != ambient) {
        return Err(Error::DimensionMismatch { expected: ambient, got: g.dim() });
    }
    if ambient == 0 {
        return Ok(Vec::new());
    }
    let snf = smith_normal_form(&IntMatrix::from_rows(generators, ambient));
    let diag = snf.diagonal();
    let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
    if nonzero < ambient {
        return Err(Error::NotFiniteIndex(ambient));
    }
    Ok(diag.into_iter().filter(|d| !d.is_one()).collect())
}

/// Index `[Z^ambient : span(rows)]` of a full-rank sublattice.
pub fn lattice_index(generators: &[IntVector], ambient: usize) -> Result<BigInt> {
    Ok(quotient_invariants(generators, ambient)?.into_iter().product())
}

/// Saturated integer basis of a rational subspace spanned by `vectors`,
/// canonical for the subspace: the reduced echelon rows scaled to primitive.
pub fn canonical_subspace_basis(vectors: &[IntVector]) -> Vec<IntVector> {
    let rows: Vec<Vec<BigRational>> = vectors.iter().map(|v| v.to_rational().0).collect();
    rref(&rows)
        .into_iter()
        .map(|r| {
            let (iv, _) = RationalVector(r).clear_denominators();
            primitive_part(&iv).expect("rref rows are nonzero")
        })
        .collect()
}

/// Project `v` onto the orthogonal complement of `span(basis)` and scale the
/// result back to a primitive integer vector. `None` if `v` lies in the span.
pub fn reduce_modulo(v: &IntVector, basis: &[IntVector]) -> Option<IntVector> {
    if basis.is_empty() {
        return primitive_part(v).ok();
    }
    // Gram-Schmidt over Q.
    let mut ortho: Vec<RationalVector> = Vec::new();
    for b in basis {
        let mut w = b.to_rational();
        for o in &ortho {
            let c = w.dot(o) / o.dot(o);
            w = w.sub(&o.scale(&c));
        }
        if w.entries().iter().any(|x| !x.is_zero()) {
            ortho.push(w);
        }
    }
    let mut w = v.to_rational();
    for o in &ortho {
        let c = w.dot(o) / o.dot(o);
        w = w.sub(&o.scale(&c));
    }
    let (iv, _) = w.clear_denominators();
    primitive_part(&iv).ok()
}
