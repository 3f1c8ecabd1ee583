use std::sync::Arc;

use crate::error::Result;
use crate::field::Field;
use crate::linalg::Matrix;

use super::{Rep, RepMorphism};

/// `X ⊕ Y` with its canonical injections and projections.
#[derive(Debug, Clone)]
pub struct DirectSum<F: Field> {
    pub sum: Arc<Rep<F>>,
    pub injections: [RepMorphism<F>; 2],
    pub projections: [RepMorphism<F>; 2],
}

pub fn direct_sum<F: Field>(x: &Arc<Rep<F>>, y: &Arc<Rep<F>>) -> Result<DirectSum<F>> {
    x.check_quiver(y)?;
    let q = x.quiver().clone();
    let dims = x.dims() + y.dims();
    let maps = x.maps().iter().zip(y.maps()).map(|(a, b)| Matrix::block_diag(a, b)).collect();
    let sum = Arc::new(Rep::new(q.clone(), dims, maps)?);
    let n = q.vertex_count();
    let inj = |first: bool| -> Vec<Matrix<F>> {
        (0..n)
            .map(|v| {
                let (dx, dy) = (x.dim(v), y.dim(v));
                if first {
                    Matrix::identity(dx).vstack(&Matrix::zeros(dy, dx))
                } else {
                    Matrix::zeros(dx, dy).vstack(&Matrix::identity(dy))
                }
            })
            .collect()
    };
    let i1 = inj(true);
    let i2 = inj(false);
    let p1 = i1.iter().map(Matrix::transpose).collect();
    let p2 = i2.iter().map(Matrix::transpose).collect();
    Ok(DirectSum {
        injections: [
            RepMorphism::new_unchecked(x.clone(), sum.clone(), i1)?,
            RepMorphism::new_unchecked(y.clone(), sum.clone(), i2)?,
        ],
        projections: [
            RepMorphism::new_unchecked(sum.clone(), x.clone(), p1)?,
            RepMorphism::new_unchecked(sum.clone(), y.clone(), p2)?,
        ],
        sum,
    })
}

/// Iterated direct sum, left to right. Panics on an empty list.
pub fn direct_sum_all<F: Field>(parts: &[Arc<Rep<F>>]) -> Result<Arc<Rep<F>>> {
    let mut acc = parts.first().expect("at least one summand").clone();
    for p in &parts[1..] {
        acc = direct_sum(&acc, p)?.sum;
    }
    Ok(acc)
}

/// Vertex-wise kernel with the induced arrow maps and the inclusion.
pub fn kernel_rep<F: Field>(h: &RepMorphism<F>) -> Result<(Arc<Rep<F>>, RepMorphism<F>)> {
    let x = h.source();
    let q = x.quiver().clone();
    let bases: Vec<Matrix<F>> = h.components().iter().map(Matrix::kernel_basis).collect();
    let mut maps = Vec::with_capacity(q.arrows().len());
    for (i, a) in q.arrows().iter().enumerate() {
        let kt = &bases[a.target];
        let image = x.map(i).mul(&bases[a.source]);
        let map =
            if kt.cols() == 0 { Matrix::zeros(0, bases[a.source].cols()) } else { kt.left_inverse()?.mul(&image) };
        maps.push(map);
    }
    let dims = super::DimVector(bases.iter().map(Matrix::cols).collect());
    let k = Arc::new(Rep::new(q, dims, maps)?);
    let inclusion = RepMorphism::new_unchecked(k.clone(), x.clone(), bases)?;
    Ok((k, inclusion))
}

/// Vertex-wise cokernel. At each vertex the quotient basis is the image of
/// the first standard vectors outside the image of `h` (rref pivot rule).
pub fn cokernel_rep<F: Field>(h: &RepMorphism<F>) -> Result<(Arc<Rep<F>>, RepMorphism<F>)> {
    let y = h.target();
    let q = y.quiver().clone();
    let mut lifts = Vec::with_capacity(q.vertex_count());
    let mut projections = Vec::with_capacity(q.vertex_count());
    for (v, hv) in h.components().iter().enumerate() {
        let image = hv.column_space();
        let comp = Matrix::complement_basis(&image, y.dim(v))?;
        let inv = image.hstack(&comp).inverse()?;
        projections.push(inv.slice(image.cols(), y.dim(v), 0, y.dim(v)));
        lifts.push(comp);
    }
    let maps =
        q.arrows().iter().enumerate().map(|(i, a)| projections[a.target].mul(y.map(i)).mul(&lifts[a.source])).collect();
    let dims = super::DimVector(lifts.iter().map(Matrix::cols).collect());
    let c = Arc::new(Rep::new(q, dims, maps)?);
    let projection = RepMorphism::new_unchecked(y.clone(), c.clone(), projections)?;
    Ok((c, projection))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::quiver::{DimVector, Quiver};

    type R = Rational;

    fn kron_rep(a: i64, b: i64) -> Arc<Rep<R>> {
        let q = Arc::new(Quiver::kronecker());
        Arc::new(
            Rep::new(q, DimVector(vec![1, 1]), vec![Matrix::from_i64_rows(&[&[a]]), Matrix::from_i64_rows(&[&[b]])])
                .unwrap(),
        )
    }

    #[test]
    fn direct_sum_with_zero() {
        let x = kron_rep(1, 0);
        let z = Arc::new(Rep::zero(x.quiver().clone()));
        let s = direct_sum(&x, &z).unwrap();
        assert_eq!(*s.sum, *x);
        let id = s.projections[0].compose(&s.injections[0]).unwrap();
        assert_eq!(id, RepMorphism::identity(x.clone()));
        assert!(s.projections[1].compose(&s.injections[0]).unwrap().is_zero());
    }

    #[test]
    fn kernel_and_cokernel_of_identity_and_zero() {
        let x = kron_rep(1, 2);
        let id = RepMorphism::identity(x.clone());
        assert!(kernel_rep(&id).unwrap().0.is_zero());
        assert!(cokernel_rep(&id).unwrap().0.is_zero());
        let zero = RepMorphism::zero(x.clone(), x.clone()).unwrap();
        assert_eq!(*kernel_rep(&zero).unwrap().0, *x);
        assert_eq!(*cokernel_rep(&zero).unwrap().0, *x);
    }

    #[test]
    fn kronecker_kernel_of_epi_onto_source_simple() {
        // R(1,0) -> S1 is onto; its kernel is the simple at the sink
        let r = kron_rep(1, 0);
        let s1 = Arc::new(Rep::simple(r.quiver().clone(), 0));
        let epi = RepMorphism::new(r, s1, vec![Matrix::identity(1), Matrix::zeros(0, 1)]).unwrap();
        let (k, inc) = kernel_rep(&epi).unwrap();
        assert_eq!(*k, Rep::simple(k.quiver().clone(), 1));
        assert!(epi.compose(&inc).unwrap().is_zero());
        let (c, p) = cokernel_rep(&inc).unwrap();
        assert_eq!(c.dims(), &DimVector(vec![1, 0]));
        assert!(p.compose(&inc).unwrap().is_zero());
    }
}
