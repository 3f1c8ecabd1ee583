use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::quiver::{direct_sum, hom_dim, same_rep, Rep, RepMorphism};

/// A short exact sequence `0 -> U -f-> M -g-> V -> 0`.
#[derive(Debug, Clone)]
pub struct ShortExactSeq<F: Field> {
    f: RepMorphism<F>,
    g: RepMorphism<F>,
}

/// Validates `0 -> U -f-> M -g-> V -> 0`, reporting the first offending vertex.
pub fn make_ses<F: Field>(f: RepMorphism<F>, g: RepMorphism<F>) -> Result<ShortExactSeq<F>> {
    if !same_rep(f.target(), g.source()) {
        return Err(Error::NotComposable("target of f differs from source of g".into()));
    }
    if let Some(v) = f.first_non_injective() {
        return Err(Error::NotInjective(v));
    }
    if let Some(v) = g.first_non_surjective() {
        return Err(Error::NotSurjective(v));
    }
    // with f injective and g surjective, exactness at v means g_v f_v = 0
    // and dim M_v = dim U_v + dim V_v
    let m = f.target();
    for v in 0..m.quiver().vertex_count() {
        let composite_zero = g.component(v).mul(f.component(v)).is_zero();
        if !composite_zero || m.dim(v) != f.source().dim(v) + g.target().dim(v) {
            return Err(Error::NotExact(m.quiver().vertex_name(v).to_string()));
        }
    }
    Ok(ShortExactSeq { f, g })
}

impl<F: Field> ShortExactSeq<F> {
    /// `0 -> U -> U ⊕ V -> V -> 0` with the canonical maps.
    pub fn split(u: &Arc<Rep<F>>, v: &Arc<Rep<F>>) -> Result<Self> {
        let s = direct_sum(u, v)?;
        let [i, _] = s.injections;
        let [_, p] = s.projections;
        make_ses(i, p)
    }

    pub fn f(&self) -> &RepMorphism<F> {
        &self.f
    }

    pub fn g(&self) -> &RepMorphism<F> {
        &self.g
    }

    /// `U`
    pub fn left(&self) -> &Arc<Rep<F>> {
        self.f.source()
    }

    /// `M`
    pub fn middle(&self) -> &Arc<Rep<F>> {
        self.f.target()
    }

    /// `V`
    pub fn right(&self) -> &Arc<Rep<F>> {
        self.g.target()
    }

    pub fn into_parts(self) -> (RepMorphism<F>, RepMorphism<F>) {
        (self.f, self.g)
    }
}

fn defect(ends: usize, middle: usize) -> Result<usize> {
    ends.checked_sub(middle).ok_or(Error::NegativeDefect)
}

/// `δ_σ(X) = [U, X] + [V, X] - [M, X]`
pub fn delta<F: Field>(sigma: &ShortExactSeq<F>, x: &Rep<F>) -> Result<usize> {
    let ends = hom_dim(sigma.left(), x)? + hom_dim(sigma.right(), x)?;
    defect(ends, hom_dim(sigma.middle(), x)?)
}

/// `δ'_σ(X) = [X, U] + [X, V] - [X, M]`
pub fn delta_prime<F: Field>(sigma: &ShortExactSeq<F>, x: &Rep<F>) -> Result<usize> {
    let ends = hom_dim(x, sigma.left())? + hom_dim(x, sigma.right())?;
    defect(ends, hom_dim(x, sigma.middle())?)
}

/// `δ_σ(U) = 0`, cross-checked against `δ'_σ(V) = 0`.
pub fn is_split<F: Field>(sigma: &ShortExactSeq<F>) -> Result<bool> {
    let d = delta(sigma, sigma.left())?;
    let dp = delta_prime(sigma, sigma.right())?;
    if (d == 0) != (dp == 0) {
        return Err(Error::SplitCriteriaDisagree { delta: d, delta_prime: dp });
    }
    Ok(d == 0)
}

/// Probe set for δ-profiles: the three terms of the sequence and every simple.
pub fn default_probes<F: Field>(sigma: &ShortExactSeq<F>) -> Vec<Arc<Rep<F>>> {
    let mut probes = vec![sigma.left().clone(), sigma.middle().clone(), sigma.right().clone()];
    probes.extend(Rep::simples(sigma.left().quiver()).into_iter().map(Arc::new));
    probes
}

/// `(δ_σ(X), δ'_σ(X))` for each probe `X`.
pub fn delta_profile<F: Field>(sigma: &ShortExactSeq<F>, probes: &[Arc<Rep<F>>]) -> Result<Vec<(usize, usize)>> {
    probes.iter().map(|x| Ok((delta(sigma, x)?, delta_prime(sigma, x)?))).collect()
}
