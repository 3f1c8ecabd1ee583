//! Exact dense linear algebra, plus a sparse row eliminator for the large
//! homogeneous systems that hom-space computations produce.

mod sparse;

use std::fmt;

use crate::field::{Field, Rational};

pub use sparse::SparseEliminator;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("columns are linearly dependent")]
    DependentColumns,
    #[error("matrix is not invertible")]
    NotInvertible,
}

/// A dense row-major matrix over an exact field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F = Rational> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = F::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from row-major data. Panics if the length is wrong.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows * cols");
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from explicit rows; `cols` is needed for the 0-row case.
    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Result<Self, LinalgError> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: format!("{cols} columns"),
                    found: format!("{} columns", row.len()),
                });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: r, cols, data })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols);
                r.iter().map(|&x| F::from_i64(x))
            })
            .collect();
        Matrix { rows: rows.len(), cols, data }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(columns: &[Vec<F>], rows: usize) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Matrix product. Panics on incompatible shapes.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "incompatible shapes for product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let cell = &mut out.data[i * rhs.cols + j];
                        *cell = cell.add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "incompatible vector length");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(F::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "incompatible shapes for sum");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a.add(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "incompatible shapes for difference");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a.sub(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &F) -> Self {
        let data = self.data.iter().map(|a| a.mul(c)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Self {
        let data = self.data.iter().map(F::neg).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// `[self | rhs]`
    pub fn hstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "hstack needs equal row counts");
        Self::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                rhs.get(i, j - self.cols).clone()
            }
        })
    }

    /// `[self ; rhs]`
    pub fn vstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.cols, "vstack needs equal column counts");
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        Matrix { rows: self.rows + rhs.rows, cols: self.cols, data }
    }

    /// `[[a, b], [c, d]]` as one matrix.
    pub fn block(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        a.hstack(b).vstack(&c.hstack(d))
    }

    pub fn block_diag(a: &Self, b: &Self) -> Self {
        Self::block(a, &Self::zeros(a.rows, b.cols), &Self::zeros(b.rows, a.cols), b)
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    /// Sub-block of rows `r0..r1` and columns `c0..c1`.
    pub fn slice(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let (rows, cols) = self.shape();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = self.get(r, c).inv().expect("pivot is nonzero");
            for j in c..cols {
                let v = self.get(r, j).mul(&inv);
                self.set(r, j, v);
            }
            let pivot_row: Vec<F> = self.row(r).to_vec();
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for (j, p) in pivot_row.iter().enumerate().skip(c) {
                    if !p.is_zero() {
                        self.data[i * cols + j].sub_mul_assign(&factor, p);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns form a basis of the null space. The basis vector attached to
    /// the free column `f` has a 1 at `f` and zeros at the other free columns.
    pub fn kernel_basis(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(self.cols, free.len());
        for (col, &f) in free.iter().enumerate() {
            k.set(f, col, F::one());
            for (row, &p) in pivots.iter().enumerate() {
                k.set(p, col, r.get(row, f).neg());
            }
        }
        k
    }

    /// One particular solution of `self * x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[F]) -> Result<Option<Vec<F>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: format!("right-hand side of length {}", self.rows),
                found: format!("length {}", b.len()),
            });
        }
        let aug = self.hstack(&Self::from_fn(self.rows, 1, |i, _| b[i].clone()));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![F::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.get(row, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Columns extending the (independent) columns of `sub` to a basis of
    /// the ambient space: the first standard basis vectors outside the
    /// running span, in index order.
    pub fn complement_basis(sub: &Self, ambient: usize) -> Result<Self, LinalgError> {
        if sub.rows != ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: format!("vectors of length {ambient}"),
                found: format!("length {}", sub.rows),
            });
        }
        if sub.rank() != sub.cols {
            return Err(LinalgError::DependentColumns);
        }
        let (_, pivots) = sub.hstack(&Self::identity(ambient)).rref();
        let picked: Vec<usize> = pivots.into_iter().filter(|&p| p >= sub.cols).map(|p| p - sub.cols).collect();
        Ok(Self::identity(ambient).select_columns(&picked))
    }

    /// Basis of the column space: the columns of `self` at the rref pivots.
    pub fn column_space(&self) -> Self {
        let (_, pivots) = self.rref();
        self.select_columns(&pivots)
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotInvertible);
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(&Self::identity(n)).rref();
        if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
            return Err(LinalgError::NotInvertible);
        }
        Ok(r.slice(0, n, n, 2 * n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn determinant(&self) -> F {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return F::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = det.neg();
            }
            let pivot = m.get(c, c).clone();
            det = det.mul(&pivot);
            let inv = pivot.inv().expect("pivot is nonzero");
            for i in c + 1..n {
                let factor = m.get(i, c).mul(&inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(c, j).clone();
                    m.data[i * n + j].sub_mul_assign(&factor, &v);
                }
            }
        }
        det
    }

    /// Some `X` with `X * self = I`, for a matrix of full column rank.
    pub fn left_inverse(&self) -> Result<Self, LinalgError> {
        let (_, rows) = self.transpose().rref();
        if rows.len() != self.cols {
            return Err(LinalgError::NotInvertible);
        }
        let inv = self.select_rows(&rows).inverse()?;
        let mut out = Self::zeros(self.cols, self.rows);
        for (k, &r) in rows.iter().enumerate() {
            for i in 0..self.cols {
                out.set(i, r, inv.get(i, k).clone());
            }
        }
        Ok(out)
    }

    /// Some `X` with `self * X = I`, for a matrix of full row rank.
    pub fn right_inverse(&self) -> Result<Self, LinalgError> {
        Ok(self.transpose().left_inverse()?.transpose())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:?}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

/// Free-function forms of the core operations.
pub fn rref<F: Field>(m: &Matrix<F>) -> (Matrix<F>, Vec<usize>) {
    m.rref()
}

pub fn kernel_basis<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    m.kernel_basis()
}

pub fn solve<F: Field>(m: &Matrix<F>, b: &[F]) -> Result<Option<Vec<F>>, LinalgError> {
    m.solve(b)
}

pub fn complement_basis<F: Field>(sub: &Matrix<F>, ambient: usize) -> Result<Matrix<F>, LinalgError> {
    Matrix::complement_basis(sub, ambient)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use proptest::prelude::*;

    type M = Matrix<Rational>;

    fn m(rows: &[&[i64]]) -> M {
        Matrix::from_i64_rows(rows)
    }

    #[test]
    fn empty_inverses() {
        assert_eq!(M::identity(0).inverse().unwrap(), M::identity(0));
        assert_eq!(M::zeros(3, 0).left_inverse().unwrap(), M::zeros(0, 3));
        assert_eq!(M::zeros(0, 2).right_inverse().unwrap(), M::zeros(2, 0));
    }

    #[test]
    fn rref_examples() {
        assert_eq!(M::identity(2).rref(), (M::identity(2), vec![0, 1]));
        assert_eq!(M::zeros(3, 2).rref(), (M::zeros(3, 2), vec![]));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rref(), (m(&[&[1, 2], &[0, 0]]), vec![0]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(M::identity(2).kernel_basis().cols(), 0);
        assert_eq!(M::zeros(2, 2).kernel_basis(), M::identity(2));
        assert_eq!(m(&[&[1, 1]]).kernel_basis(), m(&[&[-1], &[1]]));
    }

    #[test]
    fn solve_examples() {
        let b = vec![Rational::from(3), Rational::from(-4)];
        assert_eq!(M::identity(2).solve(&b).unwrap(), Some(b.clone()));
        assert_eq!(M::zeros(2, 2).solve(&b).unwrap(), None);
        assert_eq!(m(&[&[2]]).solve(&[Rational::one()]).unwrap(), Some(vec![Rational::new(1, 2)]));
        assert!(matches!(M::identity(2).solve(&[Rational::one()]), Err(LinalgError::DimensionMismatch { .. })));
    }

    #[test]
    fn complement_examples() {
        let e1 = m(&[&[1], &[0]]);
        assert_eq!(M::complement_basis(&e1, 2).unwrap(), m(&[&[0], &[1]]));
        assert_eq!(M::complement_basis(&M::zeros(2, 0), 2).unwrap(), M::identity(2));
        let diag = m(&[&[1], &[1]]);
        assert_eq!(M::complement_basis(&diag, 2).unwrap(), m(&[&[1], &[0]]));
        let dep = m(&[&[1, 2], &[1, 2]]);
        assert_eq!(M::complement_basis(&dep, 2), Err(LinalgError::DependentColumns));
    }

    #[test]
    fn inverses_and_determinants() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.mul(&a.inverse().unwrap()), M::identity(2));
        assert_eq!(a.determinant(), Rational::one());
        assert_eq!(m(&[&[1, 2], &[2, 4]]).inverse(), Err(LinalgError::NotInvertible));
        let tall = m(&[&[1, 0], &[2, 1], &[0, 3]]);
        assert_eq!(tall.left_inverse().unwrap().mul(&tall), M::identity(2));
        let wide = tall.transpose();
        assert_eq!(wide.mul(&wide.right_inverse().unwrap()), M::identity(2));
    }

    #[test]
    fn prime_field_rank_can_drop() {
        let a: Matrix<Fp<3>> = Matrix::from_i64_rows(&[&[1, 1], &[1, 4]]);
        assert_eq!(a.rank(), 1);
        let b: M = m(&[&[1, 1], &[1, 4]]);
        assert_eq!(b.rank(), 2);
    }

    fn small_matrix() -> impl Strategy<Value = M> {
        (0usize..5, 0usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..=3, r * c)
                .prop_map(move |v| Matrix::from_vec(r, c, v.into_iter().map(Rational::from).collect()))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(a in small_matrix()) {
            let k = a.kernel_basis();
            prop_assert_eq!(a.rank() + k.cols(), a.cols());
            prop_assert!(a.mul(&k).is_zero());
        }

        #[test]
        fn rref_idempotent(a in small_matrix()) {
            let (r, p) = a.rref();
            prop_assert_eq!(r.rref(), (r.clone(), p));
        }

        #[test]
        fn solve_is_exact(a in small_matrix(), seed in proptest::collection::vec(-3i64..=3, 5)) {
            let x0: Vec<Rational> = (0..a.cols()).map(|i| Rational::from(seed[i])).collect();
            let b = a.mul_vec(&x0);
            let x = a.solve(&b).unwrap().expect("consistent by construction");
            prop_assert_eq!(a.mul_vec(&x), b);
        }

        #[test]
        fn complement_fills_ambient_space(a in small_matrix()) {
            let sub = a.column_space();
            let comp = M::complement_basis(&sub, a.rows()).unwrap();
            prop_assert_eq!(sub.hstack(&comp).rank(), a.rows());
            prop_assert_eq!(sub.cols() + comp.cols(), a.rows());
        }
    }
}
