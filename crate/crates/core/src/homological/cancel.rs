use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::quiver::{direct_sum_all, hom_basis, kernel_rep, DimVector, Rep, RepMorphism};

use super::ses::{delta, make_ses, ShortExactSeq};

/// Reads `U` off a block-diagonal source laid out as `U ⊕ Y ⊕ ... ⊕ Y`.
fn split_off_copies<F: Field>(source: &Rep<F>, y: &Rep<F>, copies: usize) -> Result<Arc<Rep<F>>> {
    let layout = |reason: String| Error::SummandLayout { copies, reason };
    let q = source.quiver();
    let mut udims = Vec::with_capacity(q.vertex_count());
    for v in 0..q.vertex_count() {
        let need = copies * y.dim(v);
        if source.dim(v) < need {
            return Err(layout(format!("vertex {} is too small", q.vertex_name(v))));
        }
        udims.push(source.dim(v) - need);
    }
    let mut umaps = Vec::with_capacity(q.arrows().len());
    for (i, a) in q.arrows().iter().enumerate() {
        let (s, t) = (a.source, a.target);
        let map = source.map(i);
        let top = map.slice(0, udims[t], 0, map.cols());
        let mut ys = Matrix::zeros(0, 0);
        for _ in 0..copies {
            ys = Matrix::block_diag(&ys, y.map(i));
        }
        let block = Matrix::block_diag(&top.slice(0, udims[t], 0, udims[s]), &ys);
        if block != *map {
            return Err(layout(format!("arrow {} is not block diagonal with {} copies of Y", a.name, copies)));
        }
        umaps.push(top.slice(0, udims[t], 0, udims[s]));
    }
    Ok(Arc::new(Rep::new(q.clone(), DimVector(udims), umaps)?))
}

/// Inclusion of `U ⊕ Y^(i-1)` into `U ⊕ Y^i` skipping copy `skip` (0-based).
fn inclusion_skipping<F: Field>(
    small: &Arc<Rep<F>>,
    big: &Arc<Rep<F>>,
    u: &Rep<F>,
    y: &Rep<F>,
    copies: usize,
    skip: usize,
) -> Result<RepMorphism<F>> {
    let n = u.quiver().vertex_count();
    let components = (0..n)
        .map(|v| {
            let (du, dy) = (u.dim(v), y.dim(v));
            let mut m = Matrix::zeros(big.dim(v), small.dim(v));
            for k in 0..du {
                m.set(k, k, F::one());
            }
            let mut col = du;
            for c in (0..copies).filter(|&c| c != skip) {
                for k in 0..dy {
                    m.set(du + c * dy + k, col + k, F::one());
                }
                col += dy;
            }
            m
        })
        .collect();
    RepMorphism::new_unchecked(small.clone(), big.clone(), components)
}

/// Projection of `U ⊕ Y^i` onto copy `k` of `Y`.
fn copy_projection<F: Field>(big: &Arc<Rep<F>>, y: &Arc<Rep<F>>, udims: &[usize], k: usize) -> Result<RepMorphism<F>> {
    let components = (0..udims.len())
        .map(|v| {
            let dy = y.dim(v);
            let mut m = Matrix::zeros(dy, big.dim(v));
            for r in 0..dy {
                m.set(r, udims[v] + k * dy + r, F::one());
            }
            m
        })
        .collect();
    RepMorphism::new_unchecked(big.clone(), y.clone(), components)
}

/// Given `σ: 0 -> U ⊕ Y^i -> W -> V -> 0` with `δ_σ(Y) < i`, splits a copy of
/// `Y` off both the source and the middle term: `W ≅ W' ⊕ Y` and
/// `σ': 0 -> U ⊕ Y^(i-1) -> W' -> V -> 0` has the same δ-profile as `σ`.
///
/// The source of `σ` must be laid out block-diagonally with `U` first.
pub fn cancel_summand<F: Field>(sigma: &ShortExactSeq<F>, y: &Arc<Rep<F>>, copies: usize) -> Result<ShortExactSeq<F>> {
    let d = delta(sigma, y)?;
    if d >= copies {
        return Err(Error::CancelPrecondition { delta: d, copies });
    }
    if y.is_zero() {
        return Err(Error::SummandLayout { copies, reason: "Y is zero".into() });
    }
    let big = sigma.left();
    let u = split_off_copies(big, y, copies)?;
    let udims: Vec<usize> = u.dims().iter().collect();
    let f = sigma.f();
    let w = sigma.middle();

    // find phi in Hom(W, Y) and lambda != 0 with phi∘f = sum_k lambda_k p_k
    let phis = hom_basis(w, y)?;
    let projections = (0..copies).map(|k| copy_projection(big, y, &udims, k)).collect::<Result<Vec<_>>>()?;
    let mut columns: Vec<Vec<F>> = phis.iter().map(|phi| Ok(phi.compose(f)?.flatten())).collect::<Result<_>>()?;
    columns.extend(projections.iter().map(|p| p.flatten().iter().map(F::neg).collect::<Vec<_>>()));
    let rows = columns.first().map_or(0, Vec::len);
    let system = Matrix::from_columns(&columns, rows);
    let kernel = system.kernel_basis();
    let solution = (0..kernel.cols())
        .map(|c| kernel.column(c))
        .find(|x| x[phis.len()..].iter().any(|l| !l.is_zero()))
        .ok_or_else(|| Error::Precondition("no morphism through f hits the Y summands".into()))?;
    let (c, lambda) = solution.split_at(phis.len());
    let skip = lambda.iter().position(|l| !l.is_zero()).expect("some lambda is nonzero");

    let phi = RepMorphism::linear_combination(&phis, c).expect("Hom(W, Y) is nonzero");
    let rho = phi.scale(&lambda[skip].inv().expect("nonzero"));
    // e = f∘ι_skip is a section of rho
    let section = f.compose(&transposed(&projections[skip])?)?;
    let (w_small, kappa) = kernel_rep(&rho)?;
    let idem = RepMorphism::identity(w.clone()).sub(&section.compose(&rho)?)?;
    let proj = (0..udims.len())
        .map(|v| Ok(kappa.component(v).left_inverse()?.mul(idem.component(v))))
        .collect::<Result<Vec<Matrix<F>>>>()?;
    let proj = RepMorphism::new_unchecked(w.clone(), w_small.clone(), proj)?;

    let mut parts = vec![u.clone()];
    parts.extend(std::iter::repeat_n(y.clone(), copies - 1));
    let small = direct_sum_all(&parts)?;
    let incl = inclusion_skipping(&small, big, &u, y, copies, skip)?;
    let f_new = proj.compose(&f.compose(&incl)?)?;
    let g_new = sigma.g().compose(&kappa)?;
    make_ses(f_new, g_new)
}

/// The coordinate inclusion matching a coordinate projection.
fn transposed<F: Field>(p: &RepMorphism<F>) -> Result<RepMorphism<F>> {
    let components = p.components().iter().map(Matrix::transpose).collect();
    RepMorphism::new_unchecked(p.target().clone(), p.source().clone(), components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::homological::{default_probes, delta_profile, ext_from_ses, ses_from_ext, ExtSpace};
    use crate::quiver::{direct_sum, is_isomorphic, Quiver};

    fn kron(a: i64, b: i64) -> Arc<Rep<Rational>> {
        let q = Arc::new(Quiver::kronecker());
        Arc::new(
            Rep::new(q, DimVector(vec![1, 1]), vec![Matrix::from_i64_rows(&[&[a]]), Matrix::from_i64_rows(&[&[b]])])
                .unwrap(),
        )
    }

    /// `σ0 ⊕ (0 -> Y -> Y -> 0 -> 0)` laid out with `U` first in the source.
    fn with_trivial_copy(sigma0: &ShortExactSeq<Rational>, y: &Arc<Rep<Rational>>) -> ShortExactSeq<Rational> {
        let src = direct_sum(sigma0.left(), y).unwrap().sum;
        let mid = direct_sum(sigma0.middle(), y).unwrap().sum;
        let n = y.quiver().vertex_count();
        let f = (0..n).map(|v| Matrix::block_diag(sigma0.f().component(v), &Matrix::identity(y.dim(v)))).collect();
        let g =
            (0..n).map(|v| sigma0.g().component(v).hstack(&Matrix::zeros(sigma0.right().dim(v), y.dim(v)))).collect();
        make_ses(
            RepMorphism::new(src, mid.clone(), f).unwrap(),
            RepMorphism::new(mid, sigma0.right().clone(), g).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn trivial_summand_is_cancelled() {
        let (v, u) = (kron(1, 0), kron(1, 0));
        let sigma0 = ses_from_ext(&ExtSpace::new(&v, &u).unwrap().basis()[0]).unwrap();
        let y = kron(1, 1);
        assert_eq!(delta(&sigma0, &y).unwrap(), 0);
        let sigma = with_trivial_copy(&sigma0, &y);
        let out = cancel_summand(&sigma, &y, 1).unwrap();
        assert_eq!(**out.left(), **sigma0.left());
        assert!(is_isomorphic(out.middle(), sigma0.middle(), 0).unwrap());
        let probes = default_probes(&sigma);
        assert_eq!(delta_profile(&out, &probes).unwrap(), delta_profile(&sigma, &probes).unwrap());
        assert_eq!(ext_from_ses(&out).unwrap().is_zero(), ext_from_ses(&sigma0).unwrap().is_zero());
    }

    #[test]
    fn precondition_is_enforced() {
        // δ(U) = 1 for a nonsplit sequence, so one copy of U cannot be cancelled
        let (v, u) = (kron(1, 0), kron(1, 0));
        let sigma = ses_from_ext(&ExtSpace::new(&v, &u).unwrap().basis()[0]).unwrap();
        let err = cancel_summand(&sigma, &u, 1).unwrap_err();
        assert_eq!(err, Error::CancelPrecondition { delta: 1, copies: 1 });
    }
}
