use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::linalg::Matrix;

use super::{DimVector, Quiver};

/// A representation: one vector space dimension per vertex and one matrix
/// per arrow.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rep<F = Rational> {
    quiver: Arc<Quiver>,
    dims: DimVector,
    maps: Vec<Matrix<F>>,
}

impl<F: Field> Rep<F> {
    pub fn new(quiver: Arc<Quiver>, dims: DimVector, maps: Vec<Matrix<F>>) -> Result<Self> {
        if dims.len() != quiver.vertex_count() {
            return Err(Error::DimVectorLength { expected: quiver.vertex_count(), found: dims.len() });
        }
        if maps.len() != quiver.arrows().len() {
            return Err(Error::ShapeMismatch {
                location: "arrow list".into(),
                expected: (quiver.arrows().len(), 1),
                found: (maps.len(), 1),
            });
        }
        for (a, m) in quiver.arrows().iter().zip(&maps) {
            let expected = (dims[a.target], dims[a.source]);
            if m.shape() != expected {
                return Err(Error::ShapeMismatch { location: format!("arrow {}", a.name), expected, found: m.shape() });
            }
        }
        Ok(Rep { quiver, dims, maps })
    }

    pub fn zero(quiver: Arc<Quiver>) -> Self {
        let n = quiver.vertex_count();
        let maps = quiver.arrows().iter().map(|_| Matrix::zeros(0, 0)).collect();
        Rep { quiver, dims: DimVector::zero(n), maps }
    }

    /// The simple representation at vertex `v`.
    pub fn simple(quiver: Arc<Quiver>, v: usize) -> Self {
        let mut dims = DimVector::zero(quiver.vertex_count());
        dims.0[v] = 1;
        let maps = quiver.arrows().iter().map(|a| Matrix::zeros(dims[a.target], dims[a.source])).collect();
        Rep { quiver, dims, maps }
    }

    pub fn simples(quiver: &Arc<Quiver>) -> Vec<Self> {
        (0..quiver.vertex_count()).map(|v| Self::simple(quiver.clone(), v)).collect()
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn dim(&self, v: usize) -> usize {
        self.dims[v]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.total()
    }

    pub fn maps(&self) -> &[Matrix<F>] {
        &self.maps
    }

    pub fn map(&self, arrow: usize) -> &Matrix<F> {
        &self.maps[arrow]
    }

    pub fn is_zero(&self) -> bool {
        self.dims.total() == 0
    }

    pub fn same_quiver(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.quiver, &other.quiver) || self.quiver == other.quiver
    }

    pub(crate) fn check_quiver(&self, other: &Self) -> Result<()> {
        if self.same_quiver(other) {
            Ok(())
        } else {
            Err(Error::QuiverMismatch)
        }
    }

    /// Changes basis at every vertex: arrow maps become `P_t A P_s^-1`.
    pub fn conjugate(&self, bases: &[Matrix<F>]) -> Result<Self> {
        let inverses = bases.iter().map(Matrix::inverse).collect::<Result<Vec<_>, _>>()?;
        let maps = self
            .quiver
            .arrows()
            .iter()
            .zip(&self.maps)
            .map(|(a, m)| bases[a.target].mul(m).mul(&inverses[a.source]))
            .collect();
        Rep::new(self.quiver.clone(), self.dims.clone(), maps)
    }

    /// Image under a field homomorphism (e.g. reduction modulo a prime).
    pub fn map_field<G: Field>(&self, f: impl Fn(&F) -> Option<G>) -> Option<Rep<G>> {
        let mut maps = Vec::with_capacity(self.maps.len());
        for m in &self.maps {
            let entries = m.entries().iter().map(&f).collect::<Option<Vec<G>>>()?;
            maps.push(Matrix::from_vec(m.rows(), m.cols(), entries));
        }
        Some(Rep { quiver: self.quiver.clone(), dims: self.dims.clone(), maps })
    }
}

/// A family of linear maps `h_v: X_v -> Y_v` with `h_t X_a = Y_a h_s` for
/// every arrow `a: s -> t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RepMorphism<F = Rational> {
    source: Arc<Rep<F>>,
    target: Arc<Rep<F>>,
    components: Vec<Matrix<F>>,
}

/// Pointer equality, falling back to structural equality.
pub(crate) fn same_rep<F: Field>(a: &Arc<Rep<F>>, b: &Arc<Rep<F>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<F: Field> RepMorphism<F> {
    /// Validates shapes and the intertwining equations.
    pub fn new(source: Arc<Rep<F>>, target: Arc<Rep<F>>, components: Vec<Matrix<F>>) -> Result<Self> {
        let h = Self::with_shapes(source, target, components)?;
        for (i, a) in h.source.quiver().arrows().iter().enumerate() {
            let lhs = h.components[a.target].mul(h.source.map(i));
            let rhs = h.target.map(i).mul(&h.components[a.source]);
            if lhs != rhs {
                return Err(Error::NotIntertwining(a.name.clone()));
            }
        }
        Ok(h)
    }

    fn with_shapes(source: Arc<Rep<F>>, target: Arc<Rep<F>>, components: Vec<Matrix<F>>) -> Result<Self> {
        source.check_quiver(&target)?;
        let q = source.quiver();
        if components.len() != q.vertex_count() {
            return Err(Error::DimVectorLength { expected: q.vertex_count(), found: components.len() });
        }
        for (v, c) in components.iter().enumerate() {
            let expected = (target.dim(v), source.dim(v));
            if c.shape() != expected {
                return Err(Error::ShapeMismatch {
                    location: format!("vertex {}", q.vertex_name(v)),
                    expected,
                    found: c.shape(),
                });
            }
        }
        Ok(RepMorphism { source, target, components })
    }

    /// Checks shapes only; for maps that intertwine by construction.
    pub(crate) fn new_unchecked(source: Arc<Rep<F>>, target: Arc<Rep<F>>, components: Vec<Matrix<F>>) -> Result<Self> {
        let h = Self::with_shapes(source, target, components)?;
        #[cfg(debug_assertions)]
        for (i, a) in h.source.quiver().arrows().iter().enumerate() {
            debug_assert_eq!(
                h.components[a.target].mul(h.source.map(i)),
                h.target.map(i).mul(&h.components[a.source]),
                "unchecked morphism fails to intertwine at {}",
                a.name
            );
        }
        Ok(h)
    }

    pub fn identity(x: Arc<Rep<F>>) -> Self {
        let components = x.dims().iter().map(Matrix::identity).collect();
        RepMorphism { source: x.clone(), target: x, components }
    }

    pub fn zero(source: Arc<Rep<F>>, target: Arc<Rep<F>>) -> Result<Self> {
        source.check_quiver(&target)?;
        let components =
            (0..source.quiver().vertex_count()).map(|v| Matrix::zeros(target.dim(v), source.dim(v))).collect();
        Ok(RepMorphism { source, target, components })
    }

    pub fn source(&self) -> &Arc<Rep<F>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Rep<F>> {
        &self.target
    }

    pub fn components(&self) -> &[Matrix<F>] {
        &self.components
    }

    pub fn component(&self, v: usize) -> &Matrix<F> {
        &self.components[v]
    }

    fn vertex_name(&self, v: usize) -> String {
        self.source.quiver().vertex_name(v).to_string()
    }

    /// `self ∘ rhs`
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if !same_rep(&rhs.target, &self.source) {
            return Err(Error::NotComposable("target of the right factor differs from source of the left".into()));
        }
        let components = self.components.iter().zip(&rhs.components).map(|(a, b)| a.mul(b)).collect();
        Ok(RepMorphism { source: rhs.source.clone(), target: self.target.clone(), components })
    }

    fn check_parallel(&self, rhs: &Self) -> Result<()> {
        if !same_rep(&self.source, &rhs.source) || !same_rep(&self.target, &rhs.target) {
            return Err(Error::NotComposable("morphisms are not parallel".into()));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_parallel(rhs)?;
        let components = self.components.iter().zip(&rhs.components).map(|(a, b)| a.add(b)).collect();
        Ok(RepMorphism { source: self.source.clone(), target: self.target.clone(), components })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_parallel(rhs)?;
        let components = self.components.iter().zip(&rhs.components).map(|(a, b)| a.sub(b)).collect();
        Ok(RepMorphism { source: self.source.clone(), target: self.target.clone(), components })
    }

    pub fn scale(&self, c: &F) -> Self {
        let components = self.components.iter().map(|m| m.scale(c)).collect();
        RepMorphism { source: self.source.clone(), target: self.target.clone(), components }
    }

    /// `sum_i coeffs[i] * basis[i]`; all basis elements must be parallel.
    pub fn linear_combination(basis: &[Self], coeffs: &[F]) -> Option<Self> {
        let first = basis.first()?;
        let mut acc = first.scale(&coeffs[0]);
        for (b, c) in basis.iter().zip(coeffs).skip(1) {
            acc = acc.add(&b.scale(c)).ok()?;
        }
        Some(acc)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Matrix::is_zero)
    }

    pub fn is_injective(&self) -> bool {
        self.first_non_injective().is_none()
    }

    pub(crate) fn first_non_injective(&self) -> Option<String> {
        (0..self.components.len())
            .find(|&v| self.components[v].rank() != self.source.dim(v))
            .map(|v| self.vertex_name(v))
    }

    pub fn is_surjective(&self) -> bool {
        self.first_non_surjective().is_none()
    }

    pub(crate) fn first_non_surjective(&self) -> Option<String> {
        (0..self.components.len())
            .find(|&v| self.components[v].rank() != self.target.dim(v))
            .map(|v| self.vertex_name(v))
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.dims() == self.target.dims() && self.components.iter().all(Matrix::is_invertible)
    }

    pub fn rank_vector(&self) -> DimVector {
        DimVector(self.components.iter().map(Matrix::rank).collect())
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Result<Self> {
        let components = self.components.iter().map(Matrix::inverse).collect::<Result<Vec<_>, _>>()?;
        Ok(RepMorphism { source: self.target.clone(), target: self.source.clone(), components })
    }

    /// Entries of all components, vertex by vertex, row-major.
    pub fn flatten(&self) -> Vec<F> {
        self.components.iter().flat_map(|m| m.entries().iter().cloned()).collect()
    }

    /// Same maps between the given (equal) endpoints. Used when a morphism
    /// was built against a structurally equal copy of a representation.
    pub fn rebase(&self, source: Arc<Rep<F>>, target: Arc<Rep<F>>) -> Result<Self> {
        if !same_rep(&source, &self.source) || !same_rep(&target, &self.target) {
            return Err(Error::NotComposable("rebase onto different representations".into()));
        }
        Ok(RepMorphism { source, target, components: self.components.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kron() -> Arc<Quiver> {
        Arc::new(Quiver::kronecker())
    }

    #[test]
    fn shape_is_validated() {
        let q = kron();
        let bad =
            Rep::<Rational>::new(q.clone(), DimVector(vec![1, 1]), vec![Matrix::identity(1), Matrix::zeros(2, 1)]);
        assert!(matches!(bad, Err(Error::ShapeMismatch { ref location, .. }) if location == "arrow b"));
    }

    #[test]
    fn intertwining_is_validated() {
        let q = kron();
        let r10 = Arc::new(
            Rep::<Rational>::new(q.clone(), DimVector(vec![1, 1]), vec![Matrix::identity(1), Matrix::zeros(1, 1)])
                .unwrap(),
        );
        let s1 = Arc::new(Rep::simple(q, 0));
        let ok = RepMorphism::new(r10.clone(), s1.clone(), vec![Matrix::identity(1), Matrix::zeros(0, 1)]);
        assert!(ok.is_ok());
        let bad = RepMorphism::new(s1, r10, vec![Matrix::identity(1), Matrix::zeros(1, 0)]);
        assert_eq!(bad.unwrap_err(), Error::NotIntertwining("a".into()));
    }
}
