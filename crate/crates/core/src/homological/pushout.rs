use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::quiver::{cokernel_rep, direct_sum, same_rep, RepMorphism};

use super::ses::{make_ses, ShortExactSeq};

/// The pushout of `σ: 0 -> U -> M -> V -> 0` along `h: U -> X`.
#[derive(Debug, Clone)]
pub struct Pushout<F: Field> {
    /// `0 -> X -> W -> V -> 0`
    pub sigma: ShortExactSeq<F>,
    /// `M -> W`
    pub j: RepMorphism<F>,
    /// `0 -> U -> M ⊕ X -> W -> 0`
    pub tau: ShortExactSeq<F>,
}

/// `W = coker(u ↦ (f u, -h u))` inside `M ⊕ X`, with the induced maps.
pub fn pushout<F: Field>(sigma: &ShortExactSeq<F>, h: &RepMorphism<F>) -> Result<Pushout<F>> {
    if !same_rep(h.source(), sigma.left()) {
        return Err(Error::NotComposable("source of h differs from the left term of the sequence".into()));
    }
    let (m, x) = (sigma.middle(), h.target());
    let sum = direct_sum(m, x)?;
    let n = m.quiver().vertex_count();
    let f = sigma.f();

    let glue = (0..n).map(|v| f.component(v).vstack(&h.component(v).neg())).collect();
    let glue = RepMorphism::new_unchecked(sigma.left().clone(), sum.sum.clone(), glue)?;
    let (w, pi) = cokernel_rep(&glue)?;

    let [inj_m, inj_x] = &sum.injections;
    let j = pi.compose(inj_m)?;
    let f_new = pi.compose(inj_x)?;
    // g∘p_M kills the glued subspace, so any vertex-wise section of π works
    let g_pm = sigma.g().compose(&sum.projections[0])?;
    let g_new = (0..n)
        .map(|v| Ok(g_pm.component(v).mul(&pi.component(v).right_inverse()?)))
        .collect::<Result<Vec<Matrix<F>>>>()?;
    let g_new = RepMorphism::new_unchecked(w.clone(), sigma.right().clone(), g_new)?;
    let sigma_new = make_ses(f_new, g_new)?;

    let mono = (0..n).map(|v| f.component(v).vstack(h.component(v))).collect();
    let mono = RepMorphism::new_unchecked(sigma.left().clone(), sum.sum.clone(), mono)?;
    let epi = (0..n)
        .map(|v| {
            let k = x.dim(v);
            let flip = Matrix::block_diag(&Matrix::identity(m.dim(v)), &Matrix::identity(k).neg());
            pi.component(v).mul(&flip)
        })
        .collect();
    let epi = RepMorphism::new_unchecked(sum.sum.clone(), w, epi)?;
    let tau = make_ses(mono, epi)?;

    Ok(Pushout { sigma: sigma_new, j, tau })
}
