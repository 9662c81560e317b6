//! Exact linear algebra over the rationals.
//!
//! Matrices are exposed as sparse maps but reduced densely: every caller in
//! this crate works with desk-scale systems (a few hundred rows at most).
//! Pivoting is deterministic (leftmost nonzero column, smallest row index),
//! so kernels, particular solutions and complements are reproducible.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Dense rational vector.
pub type Vector = Vec<Rational>;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index ({row}, {col}) out of range for {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("vector does not lie in the ambient subspace")]
    NotInSpace,
    #[error("sub is not contained in space")]
    NotASubspace,
}

/// Sparse rational matrix; zero entries are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rational>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries.insert((i, i), Rational::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vector]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.entries.insert((i, j), v.clone());
                }
            }
        }
        m
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, v) in c.iter().enumerate() {
                if !v.is_zero() {
                    m.entries.insert((i, j), v.clone());
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Rational {
        self.entries
            .get(&(row, col))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) -> Result<(), LinalgError> {
        if row >= self.rows || col >= self.cols {
            return Err(LinalgError::IndexOutOfRange {
                row,
                col,
                rows: self.rows,
                cols: self.cols,
            });
        }
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
        Ok(())
    }

    /// Adds `value` to the entry at `(row, col)`; panics on out-of-range indices.
    pub fn add_to(&mut self, row: usize, col: usize, value: &Rational) {
        assert!(row < self.rows && col < self.cols);
        let e = self.entries.entry((row, col)).or_insert_with(Rational::zero);
        *e += value;
        if e.is_zero() {
            self.entries.remove(&(row, col));
        }
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Rational)> {
        self.entries.iter()
    }

    pub fn to_dense(&self) -> Vec<Vector> {
        let mut d = vec![vec![Rational::zero(); self.cols]; self.rows];
        for (&(i, j), v) in &self.entries {
            d[i][j] = v.clone();
        }
        d
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vector, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let mut out = vec![Rational::zero(); self.rows];
        for (&(i, j), a) in &self.entries {
            if !v[j].is_zero() {
                out[i] += a * &v[j];
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = SparseMatrix::zeros(self.rows, other.cols);
        for (&(i, k), a) in &self.entries {
            for (&(_, j), b) in other.entries.range((k, 0)..(k + 1, 0)) {
                out.add_to(i, j, &(a * b));
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> SparseMatrix {
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self
                .entries
                .iter()
                .map(|(&(i, j), v)| ((j, i), v.clone()))
                .collect(),
        }
    }

    pub fn rank(&self) -> usize {
        Echelon::reduce(self.to_dense(), self.cols).pivots.len()
    }
}

/// Reduced row echelon form with the pivot column of each nonzero row.
struct Echelon {
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Echelon {
    /// Reduces the first `ncols` columns; trailing columns (an augmented
    /// right-hand side) are carried along but never chosen as pivots.
    fn reduce(mut rows: Vec<Vector>, ncols: usize) -> Self {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = rows[r][c].recip();
            for v in rows[r].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { rows, pivots }
    }
}

/// Basis of a subspace of `ℚ^ambient_dim`; vectors are linearly independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    vectors: Vec<Vector>,
}

impl SubspaceBasis {
    pub fn zero(ambient_dim: usize) -> Self {
        SubspaceBasis {
            ambient_dim,
            vectors: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let vectors = (0..ambient_dim).map(|i| unit_vector(ambient_dim, i)).collect();
        SubspaceBasis {
            ambient_dim,
            vectors,
        }
    }

    /// Extracts an independent subset spanning the same space, keeping
    /// earlier vectors in preference to later ones.
    pub fn span(ambient_dim: usize, vectors: impl IntoIterator<Item = Vector>) -> Self {
        let mut basis = SubspaceBasis::zero(ambient_dim);
        let mut echelon: Vec<Vector> = Vec::new();
        for v in vectors {
            assert_eq!(v.len(), ambient_dim, "vector length mismatch");
            let mut w = v.clone();
            reduce_against(&mut w, &echelon);
            if w.iter().any(|x| !x.is_zero()) {
                echelon.push(w);
                basis.vectors.push(v);
            }
        }
        basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_zero(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        let m = SparseMatrix::from_columns(self.ambient_dim, &self.vectors);
        solve(&m, v).map(|s| s.is_some()).unwrap_or(false)
    }

    pub fn contains_subspace(&self, other: &SubspaceBasis) -> bool {
        other.vectors.iter().all(|v| self.contains(v))
    }

    pub fn same_subspace(&self, other: &SubspaceBasis) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.dim() == other.dim()
            && self.contains_subspace(other)
    }
}

// Each row of `echelon` is zero at the leading positions of all earlier rows,
// so one pass clears every leading position of `w`.
fn reduce_against(w: &mut Vector, echelon: &[Vector]) {
    for e in echelon {
        let lead = e.iter().position(|x| !x.is_zero()).expect("nonzero row");
        if w[lead].is_zero() {
            continue;
        }
        let f = &w[lead] / &e[lead];
        for (x, y) in w.iter_mut().zip(e) {
            if !y.is_zero() {
                *x -= &f * y;
            }
        }
    }
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Basis of `{v : m·v = 0}`, one vector per free column.
pub fn kernel_basis(m: &SparseMatrix) -> SubspaceBasis {
    let cols = m.cols();
    let ech = Echelon::reduce(m.to_dense(), cols);
    let mut pivot_row = vec![None; cols];
    for (r, &c) in ech.pivots.iter().enumerate() {
        pivot_row[c] = Some(r);
    }
    let mut vectors = Vec::new();
    for free in (0..cols).filter(|&c| pivot_row[c].is_none()) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (r, &c) in ech.pivots.iter().enumerate() {
            let a = &ech.rows[r][free];
            if !a.is_zero() {
                v[c] = -a;
            }
        }
        vectors.push(v);
    }
    SubspaceBasis {
        ambient_dim: cols,
        vectors,
    }
}

/// Basis of the column space of `m`, taken from its pivot columns.
pub fn image_basis(m: &SparseMatrix) -> SubspaceBasis {
    let ech = Echelon::reduce(m.to_dense(), m.cols());
    let dense = m.to_dense();
    let vectors = ech
        .pivots
        .iter()
        .map(|&c| dense.iter().map(|row| row[c].clone()).collect())
        .collect();
    SubspaceBasis {
        ambient_dim: m.rows(),
        vectors,
    }
}

/// Solves `m·x = b`. Returns `Ok(None)` when `b` is not in the image; free
/// variables of the particular solution are set to zero.
pub fn solve(m: &SparseMatrix, b: &[Rational]) -> Result<Option<Vector>, LinalgError> {
    if b.len() != m.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows(),
            found: b.len(),
        });
    }
    let cols = m.cols();
    let mut dense = m.to_dense();
    for (row, rhs) in dense.iter_mut().zip(b) {
        row.push(rhs.clone());
    }
    let ech = Echelon::reduce(dense, cols);
    let rank = ech.pivots.len();
    if ech.rows[rank..].iter().any(|row| !row[cols].is_zero()) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in ech.pivots.iter().enumerate() {
        x[c] = ech.rows[r][cols].clone();
    }
    Ok(Some(x))
}

/// Coordinates of `v` in a fixed complement of `sub` inside `space`.
///
/// The complement consists of those basis vectors of `space` that are not
/// in the span of `sub` together with the earlier ones. The result is zero
/// exactly when `v ∈ sub`.
pub fn quotient_coordinates(
    space: &SubspaceBasis,
    sub: &SubspaceBasis,
    v: &[Rational],
) -> Result<Vector, LinalgError> {
    let q = Quotient::new(space, sub)?;
    q.coordinates(v)
}

/// Precomputed quotient `space / sub` with a chosen complement basis.
#[derive(Debug, Clone)]
pub struct Quotient {
    ambient_dim: usize,
    sub_dim: usize,
    complement: Vec<Vector>,
    // columns: sub basis followed by complement
    frame: SparseMatrix,
}

impl Quotient {
    pub fn new(space: &SubspaceBasis, sub: &SubspaceBasis) -> Result<Self, LinalgError> {
        if space.ambient_dim != sub.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                expected: space.ambient_dim,
                found: sub.ambient_dim,
            });
        }
        if !space.contains_subspace(sub) {
            return Err(LinalgError::NotASubspace);
        }
        let n = space.ambient_dim;
        let joined = SubspaceBasis::span(
            n,
            sub.vectors.iter().cloned().chain(space.vectors.iter().cloned()),
        );
        let complement: Vec<Vector> = joined.vectors[sub.dim()..].to_vec();
        let columns: Vec<Vector> = sub.vectors.iter().chain(&complement).cloned().collect();
        Ok(Quotient {
            ambient_dim: n,
            sub_dim: sub.dim(),
            complement,
            frame: SparseMatrix::from_columns(n, &columns),
        })
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    /// Complement vectors, one per quotient coordinate.
    pub fn complement(&self) -> &[Vector] {
        &self.complement
    }

    pub fn coordinates(&self, v: &[Rational]) -> Result<Vector, LinalgError> {
        if v.len() != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient_dim,
                found: v.len(),
            });
        }
        match solve(&self.frame, v)? {
            Some(x) => Ok(x[self.sub_dim..].to_vec()),
            None => Err(LinalgError::NotInSpace),
        }
    }

    /// Vector in `space` with the given quotient coordinates.
    pub fn lift(&self, coords: &[Rational]) -> Vector {
        let mut v = vec![Rational::zero(); self.ambient_dim];
        for (c, w) in coords.iter().zip(&self.complement) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(w) {
                *x += c * y;
            }
        }
        v
    }
}

pub fn scale_vector(v: &[Rational], c: &Rational) -> Vector {
    v.iter().map(|x| x * c).collect()
}

pub fn add_vectors(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn abs_max(v: &[Rational]) -> Rational {
    v.iter().map(Signed::abs).max().unwrap_or_else(Rational::zero)
}
