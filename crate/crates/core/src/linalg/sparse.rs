use std::collections::BTreeMap;

use crate::field::Field;

/// Incremental echelon form for sparse homogeneous systems.
///
/// Rows are reduced against the stored pivot rows on insertion, so the
/// stored rows are in (non-reduced) echelon form with leading coefficient 1.
/// The pivot set equals the pivot set of the reduced row echelon form of the
/// rows pushed so far, and [`SparseEliminator::kernel_basis`] returns the
/// same basis as [`super::Matrix::kernel_basis`] on the dense system.
#[derive(Debug, Clone)]
pub struct SparseEliminator<F> {
    cols: usize,
    pivots: BTreeMap<usize, Vec<(usize, F)>>,
}

fn normalize<F: Field>(mut row: Vec<(usize, F)>) -> Vec<(usize, F)> {
    row.sort_by_key(|(c, _)| *c);
    let mut out: Vec<(usize, F)> = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv = lv.add(&v),
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

/// `a - factor * b` for sorted sparse rows.
fn axpy<F: Field>(a: &[(usize, F)], factor: &F, b: &[(usize, F)]) -> Vec<(usize, F)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, b[j].1.mul(factor).neg()));
            j += 1;
        } else {
            let mut v = a[i].1.clone();
            v.sub_mul_assign(factor, &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl<F: Field> SparseEliminator<F> {
    pub fn new(cols: usize) -> Self {
        SparseEliminator { cols, pivots: BTreeMap::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Adds one equation given as `(column, coefficient)` pairs; repeated
    /// columns are summed. Returns true if the rank increased.
    pub fn push_row(&mut self, row: Vec<(usize, F)>) -> bool {
        let mut row = normalize(row);
        debug_assert!(row.iter().all(|(c, _)| *c < self.cols));
        loop {
            let Some((lead, coeff)) = row.first().cloned() else {
                return false;
            };
            match self.pivots.get(&lead) {
                Some(p) => row = axpy(&row, &coeff, p),
                None => {
                    let inv = coeff.inv().expect("leading coefficient is nonzero");
                    for (_, v) in row.iter_mut() {
                        *v = v.mul(&inv);
                    }
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.cols).filter(|c| !self.pivots.contains_key(c)).collect()
    }

    /// The unique vector congruent to `row` modulo the row space with zero
    /// entries at every pivot column.
    pub fn reduce(&self, row: Vec<(usize, F)>) -> Vec<(usize, F)> {
        let mut row = normalize(row);
        let mut i = 0;
        while i < row.len() {
            let (c, v) = row[i].clone();
            match self.pivots.get(&c) {
                // pivot rows start at `c`, so entries before `i` are untouched
                Some(p) => row = axpy(&row, &v, p),
                None => i += 1,
            }
        }
        row
    }

    /// Basis of the solution space, one dense vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut x = vec![F::zero(); self.cols];
                x[f] = F::one();
                // back substitution, highest pivot first
                for (&p, row) in self.pivots.iter().rev() {
                    let mut acc = F::zero();
                    for (c, v) in row.iter().skip(1) {
                        if !x[*c].is_zero() {
                            acc.sub_mul_assign(v, &x[*c]);
                        }
                    }
                    x[p] = acc;
                }
                x
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::linalg::Matrix;
    use proptest::prelude::*;

    fn dense_to_sparse(m: &Matrix<Rational>) -> SparseEliminator<Rational> {
        let mut e = SparseEliminator::new(m.cols());
        for i in 0..m.rows() {
            e.push_row(m.row(i).iter().cloned().enumerate().collect());
        }
        e
    }

    #[test]
    fn repeated_columns_are_summed() {
        let mut e = SparseEliminator::<Rational>::new(2);
        assert!(!e.push_row(vec![(0, Rational::one()), (0, Rational::from(-1))]));
        assert!(e.push_row(vec![(1, Rational::from(2)), (0, Rational::one())]));
        assert_eq!(e.kernel_basis(), vec![vec![Rational::from(-2), Rational::one()]]);
    }

    proptest! {
        #[test]
        fn agrees_with_dense_kernel(r in 0usize..6, c in 0usize..6,
                                    v in proptest::collection::vec(-2i64..=2, 36)) {
            let m = Matrix::from_fn(r, c, |i, j| Rational::from(v[i * 6 + j]));
            let e = dense_to_sparse(&m);
            prop_assert_eq!(e.rank(), m.rank());
            let dense = m.kernel_basis();
            prop_assert_eq!(e.kernel_basis(), dense.columns());
        }
    }
}
