//! `Ext^1(V, U)` as the cokernel of the coboundary map
//! `⊕_v Hom(V_v, U_v) -> ⊕_a Hom(V_{s(a)}, U_{t(a)})`,
//! `(h_v) ↦ (U_a h_{s(a)} - h_{t(a)} V_a)`.
//!
//! A cocycle on the path algebra is determined by its values on arrows, and
//! for an acyclic quiver every choice of values is a cocycle.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Matrix, SparseEliminator};
use crate::quiver::{same_rep, Rep, RepMorphism};

use super::ses::{make_ses, ShortExactSeq};

/// Cocycles modulo coboundaries for a pair `(V, U)`.
#[derive(Debug, Clone)]
pub struct ExtSpace<F: Field> {
    v: Arc<Rep<F>>,
    u: Arc<Rep<F>>,
    /// Offsets of the per-arrow blocks `Z_a` (shape `dim U_t x dim V_s`).
    offsets: Vec<usize>,
    coboundaries: SparseEliminator<F>,
    free: Vec<usize>,
}

/// An element of `Ext^1(V, U)`, stored as the canonical cocycle of its coset.
#[derive(Clone)]
pub struct ExtClass<F: Field> {
    space: Arc<ExtSpace<F>>,
    cocycle: Vec<Matrix<F>>,
}

impl<F: Field> ExtSpace<F> {
    pub fn new(v: &Arc<Rep<F>>, u: &Arc<Rep<F>>) -> Result<Arc<Self>> {
        v.check_quiver(u)?;
        let q = v.quiver();
        let mut offsets = vec![0];
        for a in q.arrows() {
            offsets.push(offsets.last().unwrap() + u.dim(a.target) * v.dim(a.source));
        }
        let total = *offsets.last().unwrap();
        let entry = |arrow: usize, i: usize, j: usize| offsets[arrow] + i * v.dim(q.arrows()[arrow].source) + j;

        let mut coboundaries = SparseEliminator::new(total);
        for w in 0..q.vertex_count() {
            for i in 0..u.dim(w) {
                for j in 0..v.dim(w) {
                    // image of the elementary map E_ij : V_w -> U_w
                    let mut row = Vec::new();
                    for (idx, a) in q.arrows().iter().enumerate() {
                        if a.source == w {
                            // U_a E_ij: column j is column i of U_a
                            let ua = u.map(idx);
                            for k in 0..ua.rows() {
                                let c = ua.get(k, i);
                                if !c.is_zero() {
                                    row.push((entry(idx, k, j), c.clone()));
                                }
                            }
                        }
                        if a.target == w {
                            // -E_ij V_a: row i is minus row j of V_a
                            let va = v.map(idx);
                            for l in 0..va.cols() {
                                let c = va.get(j, l);
                                if !c.is_zero() {
                                    row.push((entry(idx, i, l), c.neg()));
                                }
                            }
                        }
                    }
                    coboundaries.push_row(row);
                }
            }
        }
        let free = coboundaries.free_columns();
        Ok(Arc::new(ExtSpace { v: v.clone(), u: u.clone(), offsets, coboundaries, free }))
    }

    /// The right-hand term `V`.
    pub fn v(&self) -> &Arc<Rep<F>> {
        &self.v
    }

    /// The left-hand term `U`.
    pub fn u(&self) -> &Arc<Rep<F>> {
        &self.u
    }

    pub fn cocycle_dim(&self) -> usize {
        self.coboundaries.cols()
    }

    pub fn coboundary_rank(&self) -> usize {
        self.coboundaries.rank()
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    fn flatten(&self, cocycle: &[Matrix<F>]) -> Vec<(usize, F)> {
        cocycle
            .iter()
            .zip(&self.offsets)
            .flat_map(|(z, &off)| {
                z.entries().iter().enumerate().filter(|(_, x)| !x.is_zero()).map(move |(k, x)| (off + k, x.clone()))
            })
            .collect()
    }

    fn unflatten(&self, sparse: &[(usize, F)]) -> Vec<Matrix<F>> {
        let q = self.v.quiver();
        let mut out: Vec<Matrix<F>> =
            q.arrows().iter().map(|a| Matrix::zeros(self.u.dim(a.target), self.v.dim(a.source))).collect();
        for (c, x) in sparse {
            let arrow = self.offsets.partition_point(|&o| o <= *c) - 1;
            let cols = out[arrow].cols();
            let k = c - self.offsets[arrow];
            out[arrow].set(k / cols, k % cols, x.clone());
        }
        out
    }

    fn shapes_match(&self, cocycle: &[Matrix<F>]) -> Result<()> {
        let q = self.v.quiver();
        if cocycle.len() != q.arrows().len() {
            return Err(Error::DimensionMismatch(format!(
                "{} cocycle components for {} arrows",
                cocycle.len(),
                q.arrows().len()
            )));
        }
        for (a, z) in q.arrows().iter().zip(cocycle) {
            let expected = (self.u.dim(a.target), self.v.dim(a.source));
            if z.shape() != expected {
                return Err(Error::ShapeMismatch { location: format!("arrow {}", a.name), expected, found: z.shape() });
            }
        }
        Ok(())
    }

    /// The class of a cocycle given by one matrix `Z_a` per arrow.
    pub fn class(self: &Arc<Self>, cocycle: &[Matrix<F>]) -> Result<ExtClass<F>> {
        self.shapes_match(cocycle)?;
        let reduced = self.coboundaries.reduce(self.flatten(cocycle));
        Ok(ExtClass { space: self.clone(), cocycle: self.unflatten(&reduced) })
    }

    pub fn zero(self: &Arc<Self>) -> ExtClass<F> {
        ExtClass { space: self.clone(), cocycle: self.unflatten(&[]) }
    }

    /// Basis classes: the standard cocycles at the non-pivot coordinates.
    pub fn basis(self: &Arc<Self>) -> Vec<ExtClass<F>> {
        self.free.iter().map(|&c| ExtClass { space: self.clone(), cocycle: self.unflatten(&[(c, F::one())]) }).collect()
    }

    pub fn from_coordinates(self: &Arc<Self>, coords: &[F]) -> ExtClass<F> {
        assert_eq!(coords.len(), self.dim());
        let sparse: Vec<(usize, F)> =
            self.free.iter().zip(coords).filter(|(_, x)| !x.is_zero()).map(|(&c, x)| (c, x.clone())).collect();
        ExtClass { space: self.clone(), cocycle: self.unflatten(&sparse) }
    }
}

impl<F: Field> ExtClass<F> {
    pub fn space(&self) -> &Arc<ExtSpace<F>> {
        &self.space
    }

    /// Canonical representative: zero at every pivot coordinate of the
    /// coboundary space.
    pub fn cocycle(&self) -> &[Matrix<F>] {
        &self.cocycle
    }

    pub fn is_zero(&self) -> bool {
        self.cocycle.iter().all(Matrix::is_zero)
    }

    /// Coordinates in [`ExtSpace::basis`].
    pub fn coordinates(&self) -> Vec<F> {
        let flat: Vec<F> = self.cocycle.iter().flat_map(|z| z.entries().iter().cloned()).collect();
        self.space.free.iter().map(|&c| flat[c].clone()).collect()
    }

    fn check_same_space(&self, rhs: &Self) -> Result<()> {
        if !same_rep(&self.space.v, &rhs.space.v) || !same_rep(&self.space.u, &rhs.space.u) {
            return Err(Error::DimensionMismatch("classes live in different Ext groups".into()));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_space(rhs)?;
        let cocycle = self.cocycle.iter().zip(&rhs.cocycle).map(|(a, b)| a.add(b)).collect();
        Ok(ExtClass { space: self.space.clone(), cocycle })
    }

    pub fn scale(&self, c: &F) -> Self {
        ExtClass { space: self.space.clone(), cocycle: self.cocycle.iter().map(|z| z.scale(c)).collect() }
    }
}

impl<F: Field> PartialEq for ExtClass<F> {
    fn eq(&self, other: &Self) -> bool {
        self.check_same_space(other).is_ok() && self.cocycle == other.cocycle
    }
}

impl<F: Field> Eq for ExtClass<F> {}

impl<F: Field> fmt::Debug for ExtClass<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExtClass").field("coordinates", &self.coordinates()).finish()
    }
}

/// A basis of `Ext^1(V, U)` and its dimension.
pub fn ext1_basis<F: Field>(v: &Arc<Rep<F>>, u: &Arc<Rep<F>>) -> Result<(Vec<ExtClass<F>>, usize)> {
    let space = ExtSpace::new(v, u)?;
    let basis = space.basis();
    let n = basis.len();
    Ok((basis, n))
}

/// `dim Ext^1(V, U)`
pub fn ext1_dim<F: Field>(v: &Arc<Rep<F>>, u: &Arc<Rep<F>>) -> Result<usize> {
    Ok(ExtSpace::new(v, u)?.dim())
}

/// The extension with middle maps `[[U_a, Z_a], [0, V_a]]`.
pub fn ses_from_ext<F: Field>(e: &ExtClass<F>) -> Result<ShortExactSeq<F>> {
    let (u, v) = (e.space.u(), e.space.v());
    let q = u.quiver().clone();
    let maps = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let lower = Matrix::zeros(v.dim(a.target), u.dim(a.source));
            Matrix::block(u.map(i), &e.cocycle[i], &lower, v.map(i))
        })
        .collect();
    let m = Arc::new(Rep::new(q.clone(), u.dims() + v.dims(), maps)?);
    let n = q.vertex_count();
    let f = (0..n).map(|w| Matrix::identity(u.dim(w)).vstack(&Matrix::zeros(v.dim(w), u.dim(w)))).collect();
    let g = (0..n).map(|w| Matrix::zeros(v.dim(w), u.dim(w)).hstack(&Matrix::identity(v.dim(w)))).collect();
    make_ses(RepMorphism::new_unchecked(u.clone(), m.clone(), f)?, RepMorphism::new_unchecked(m, v.clone(), g)?)
}

/// The class of `σ`: with a vertex-wise section `s` of `g` and retraction `r`
/// of `f`, `Z_a = r_{t(a)} (M_a s_{s(a)} - s_{t(a)} V_a)`.
pub fn ext_from_ses<F: Field>(sigma: &ShortExactSeq<F>) -> Result<ExtClass<F>> {
    let space = ExtSpace::new(sigma.right(), sigma.left())?;
    let sections = sigma.g().components().iter().map(Matrix::right_inverse).collect::<Result<Vec<_>, _>>()?;
    let retractions = sigma.f().components().iter().map(Matrix::left_inverse).collect::<Result<Vec<_>, _>>()?;
    ext_from_ses_with(sigma, &space, &sections, &retractions)
}

/// [`ext_from_ses`] with caller-chosen sections and retractions.
pub fn ext_from_ses_with<F: Field>(
    sigma: &ShortExactSeq<F>,
    space: &Arc<ExtSpace<F>>,
    sections: &[Matrix<F>],
    retractions: &[Matrix<F>],
) -> Result<ExtClass<F>> {
    let (m, v) = (sigma.middle(), sigma.right());
    let cocycle: Vec<Matrix<F>> = m
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let defect = m.map(i).mul(&sections[a.source]).sub(&sections[a.target].mul(v.map(i)));
            retractions[a.target].mul(&defect)
        })
        .collect();
    space.class(&cocycle)
}

/// `Ext^1(V, h)`: the cocycle `Z_a ↦ h_{t(a)} Z_a`.
pub fn ext_pushforward<F: Field>(e: &ExtClass<F>, h: &RepMorphism<F>) -> Result<ExtClass<F>> {
    if !same_rep(h.source(), e.space.u()) {
        return Err(Error::NotComposable("source of h differs from the left term of the class".into()));
    }
    let space = ExtSpace::new(e.space.v(), h.target())?;
    pushforward_into(e, h, &space)
}

/// [`ext_pushforward`] into an already computed `Ext^1(V, X)`.
pub fn pushforward_into<F: Field>(
    e: &ExtClass<F>,
    h: &RepMorphism<F>,
    space: &Arc<ExtSpace<F>>,
) -> Result<ExtClass<F>> {
    let q = h.source().quiver();
    let cocycle: Vec<Matrix<F>> =
        q.arrows().iter().zip(&e.cocycle).map(|(a, z)| h.component(a.target).mul(z)).collect();
    space.class(&cocycle)
}
