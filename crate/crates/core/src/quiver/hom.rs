use std::sync::Arc;

use crate::error::Result;
use crate::field::Field;
use crate::linalg::{Matrix, SparseEliminator};

use super::{Rep, RepMorphism};

/// `Hom(X, Y)` as the solution space of the intertwining equations.
///
/// Unknowns are the entries of the components `h_v`, row-major within each
/// vertex, with the vertices in topological order (sources first) so that
/// elimination pivots on source-side unknowns and stays local to each arrow.
/// Basis element `k` has coordinate 1 at the `k`-th free unknown and 0 at
/// the others, so coordinates of any morphism can be read off.
#[derive(Debug, Clone)]
pub struct HomSpace<F: Field> {
    source: Arc<Rep<F>>,
    target: Arc<Rep<F>>,
    layout: Layout,
    free: Vec<usize>,
    basis: Vec<RepMorphism<F>>,
}

/// Position of each vertex block of unknowns `h_v` (shape `ys[v] x xs[v]`).
#[derive(Debug, Clone)]
struct Layout {
    starts: Vec<usize>,
    xs: Vec<usize>,
    ys: Vec<usize>,
    total: usize,
}

impl Layout {
    fn new<F: Field>(x: &Rep<F>, y: &Rep<F>) -> Self {
        let q = x.quiver();
        let xs: Vec<usize> = x.dims().iter().collect();
        let ys: Vec<usize> = y.dims().iter().collect();
        let order = q.topological_order().expect("quivers are acyclic");
        let mut starts = vec![0; xs.len()];
        let mut total = 0;
        for v in order {
            starts[v] = total;
            total += xs[v] * ys[v];
        }
        Layout { starts, xs, ys, total }
    }

    fn var(&self, v: usize, i: usize, j: usize) -> usize {
        self.starts[v] + i * self.xs[v] + j
    }

    fn block(&self, v: usize) -> std::ops::Range<usize> {
        self.starts[v]..self.starts[v] + self.xs[v] * self.ys[v]
    }

    /// `(v, i, j)` for an unknown index.
    fn locate(&self, c: usize) -> (usize, usize, usize) {
        let v = (0..self.xs.len()).find(|&v| self.block(v).contains(&c)).expect("index in range");
        let k = c - self.starts[v];
        (v, k / self.xs[v], k % self.xs[v])
    }
}

/// Eliminator holding the intertwining equations `h_t X_a - Y_a h_s = 0`.
fn intertwining_system<F: Field>(x: &Rep<F>, y: &Rep<F>) -> (SparseEliminator<F>, Layout) {
    let layout = Layout::new(x, y);
    let (xs, ys) = (&layout.xs, &layout.ys);
    let mut elim = SparseEliminator::new(layout.total);
    for (idx, a) in x.quiver().arrows().iter().enumerate() {
        let (s, t) = (a.source, a.target);
        let xa = x.map(idx);
        let ya = y.map(idx);
        for i in 0..ys[t] {
            for j in 0..xs[s] {
                let mut row = Vec::new();
                for k in 0..xs[t] {
                    let c = xa.get(k, j);
                    if !c.is_zero() {
                        row.push((layout.var(t, i, k), c.clone()));
                    }
                }
                for k in 0..ys[s] {
                    let c = ya.get(i, k);
                    if !c.is_zero() {
                        row.push((layout.var(s, k, j), c.neg()));
                    }
                }
                elim.push_row(row);
            }
        }
    }
    (elim, layout)
}

impl<F: Field> HomSpace<F> {
    pub fn new(x: &Arc<Rep<F>>, y: &Arc<Rep<F>>) -> Result<Self> {
        x.check_quiver(y)?;
        let (elim, layout) = intertwining_system(x, y);
        let free = elim.free_columns();
        let basis = elim
            .kernel_basis()
            .into_iter()
            .map(|vec| Self::unflatten_with(x, y, &layout, &vec))
            .collect::<Result<Vec<_>>>()?;
        Ok(HomSpace { source: x.clone(), target: y.clone(), layout, free, basis })
    }

    fn unflatten_with(x: &Arc<Rep<F>>, y: &Arc<Rep<F>>, layout: &Layout, vec: &[F]) -> Result<RepMorphism<F>> {
        let components = (0..x.quiver().vertex_count())
            .map(|v| Matrix::from_vec(y.dim(v), x.dim(v), vec[layout.block(v)].to_vec()))
            .collect();
        RepMorphism::new_unchecked(x.clone(), y.clone(), components)
    }

    pub fn source(&self) -> &Arc<Rep<F>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Rep<F>> {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RepMorphism<F>] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<RepMorphism<F>> {
        self.basis
    }

    /// Number of scalar unknowns, `sum_v dim Y_v * dim X_v`.
    pub fn ambient_dim(&self) -> usize {
        self.layout.total
    }

    /// Coordinates of `h` in [`HomSpace::basis`]. `h` must be a morphism
    /// between the same representations.
    pub fn coordinates(&self, h: &RepMorphism<F>) -> Vec<F> {
        self.free
            .iter()
            .map(|&c| {
                let (v, i, j) = self.layout.locate(c);
                h.component(v).get(i, j).clone()
            })
            .collect()
    }

    pub fn combination(&self, coeffs: &[F]) -> RepMorphism<F> {
        assert_eq!(coeffs.len(), self.dim());
        RepMorphism::linear_combination(&self.basis, coeffs)
            .unwrap_or_else(|| RepMorphism::zero(self.source.clone(), self.target.clone()).expect("same quiver"))
    }
}

/// A basis of `Hom(X, Y)`.
pub fn hom_basis<F: Field>(x: &Arc<Rep<F>>, y: &Arc<Rep<F>>) -> Result<Vec<RepMorphism<F>>> {
    Ok(HomSpace::new(x, y)?.into_basis())
}

/// `[X, Y] = dim Hom(X, Y)`, without materializing a basis.
pub fn hom_dim<F: Field>(x: &Rep<F>, y: &Rep<F>) -> Result<usize> {
    x.check_quiver(y)?;
    Ok(intertwining_system(x, y).0.nullity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::quiver::{DimVector, Quiver};

    fn kron(a: i64, b: i64) -> Arc<Rep<Rational>> {
        let q = Arc::new(Quiver::kronecker());
        Arc::new(
            Rep::new(q, DimVector(vec![1, 1]), vec![Matrix::from_i64_rows(&[&[a]]), Matrix::from_i64_rows(&[&[b]])])
                .unwrap(),
        )
    }

    #[test]
    fn kronecker_homs() {
        assert_eq!(hom_dim(&kron(1, 0), &kron(0, 1)).unwrap(), 0);
        assert_eq!(hom_dim(&kron(1, 0), &kron(1, 0)).unwrap(), 1);
        assert_eq!(hom_dim(&kron(1, 0), &kron(2, 0)).unwrap(), 1);
        let basis = hom_basis(&kron(1, 1), &kron(1, 1)).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0], RepMorphism::identity(kron(1, 1)));
    }

    #[test]
    fn basis_elements_intertwine_and_coordinates_round_trip() {
        let q = Arc::new(Quiver::star(3));
        let x = Arc::new(Rep::<Rational>::simple(q.clone(), 0));
        let m = Arc::new(
            Rep::new(
                q,
                DimVector(vec![2, 1, 1, 1]),
                vec![
                    Matrix::from_i64_rows(&[&[1], &[0]]),
                    Matrix::from_i64_rows(&[&[0], &[1]]),
                    Matrix::from_i64_rows(&[&[1], &[1]]),
                ],
            )
            .unwrap(),
        );
        let space = HomSpace::new(&x, &m).unwrap();
        assert_eq!(space.dim(), 2);
        for (k, h) in space.basis().iter().enumerate() {
            let checked = RepMorphism::new(h.source().clone(), h.target().clone(), h.components().to_vec());
            assert!(checked.is_ok());
            let mut e = vec![Rational::zero(); 2];
            e[k] = Rational::one();
            assert_eq!(space.coordinates(h), e);
        }
    }
}
