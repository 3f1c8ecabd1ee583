//! Orbit codimension, necessary hom-order conditions, and sufficient
//! exact-sequence certificates for degenerations `M ⇝ N`.
//!
//! There is no decision procedure here: [`hom_order_check`] can only refute a
//! degeneration, and a verified [`DegenerationPair`] witness can only confirm one.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::homological::{make_ses, ShortExactSeq};
use crate::linalg::Matrix;
use crate::quiver::{direct_sum, hom_dim, is_isomorphic, Rep, RepMorphism};

/// A sequence `0 -> Z -> Z ⊕ M -> N -> 0` certifying `M ⇝ N`.
#[derive(Debug, Clone)]
pub struct Witness<F: Field> {
    pub z: Arc<Rep<F>>,
    pub sigma: ShortExactSeq<F>,
}

/// A candidate degeneration `M ⇝ N`, optionally certified.
#[derive(Debug, Clone)]
pub struct DegenerationPair<F: Field> {
    m: Arc<Rep<F>>,
    n: Arc<Rep<F>>,
    witness: Option<Witness<F>>,
}

fn check_dims<F: Field>(m: &Rep<F>, n: &Rep<F>) -> Result<()> {
    m.check_quiver(n)?;
    if m.dims() != n.dims() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", m.dims(), n.dims())));
    }
    Ok(())
}

impl<F: Field> DegenerationPair<F> {
    pub fn new(m: Arc<Rep<F>>, n: Arc<Rep<F>>) -> Result<Self> {
        check_dims(&m, &n)?;
        Ok(DegenerationPair { m, n, witness: None })
    }

    /// Attaches a witness without checking it; see [`verify_witness`].
    pub fn with_witness(m: Arc<Rep<F>>, n: Arc<Rep<F>>, witness: Witness<F>) -> Result<Self> {
        check_dims(&m, &n)?;
        Ok(DegenerationPair { m, n, witness: Some(witness) })
    }

    pub fn m(&self) -> &Arc<Rep<F>> {
        &self.m
    }

    pub fn n(&self) -> &Arc<Rep<F>> {
        &self.n
    }

    pub fn witness(&self) -> Option<&Witness<F>> {
        self.witness.as_ref()
    }
}

/// `[N, N] - [M, M]`, the codimension of the orbit of `N` in the closure of
/// the orbit of `M` when `M ⇝ N`.
pub fn codim<F: Field>(m: &Rep<F>, n: &Rep<F>) -> Result<i64> {
    check_dims(m, n)?;
    Ok(hom_dim(n, n)? as i64 - hom_dim(m, m)? as i64)
}

/// Both hom-order inequalities at one probe `Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeResult {
    pub probe: String,
    /// `[M, Y]`
    pub m_to: usize,
    /// `[N, Y]`
    pub n_to: usize,
    /// `[Y, M]`
    pub to_m: usize,
    /// `[Y, N]`
    pub to_n: usize,
}

impl ProbeResult {
    /// `[M, Y] <= [N, Y]` and `[Y, M] <= [Y, N]`
    pub fn holds(&self) -> bool {
        self.m_to <= self.n_to && self.to_m <= self.to_n
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomOrderReport {
    pub probes: Vec<ProbeResult>,
}

impl HomOrderReport {
    /// False means `N` is certainly not a degeneration of `M`.
    pub fn holds(&self) -> bool {
        self.probes.iter().all(ProbeResult::holds)
    }

    pub fn violations(&self) -> impl Iterator<Item = &ProbeResult> {
        self.probes.iter().filter(|p| !p.holds())
    }
}

/// Default probes: every simple, `M`, `N`, and the given summands, without
/// structural duplicates.
pub fn default_probes<F: Field>(
    m: &Arc<Rep<F>>,
    n: &Arc<Rep<F>>,
    summands: &[(String, Arc<Rep<F>>)],
) -> Vec<(String, Arc<Rep<F>>)> {
    let q = m.quiver();
    let mut out: Vec<(String, Arc<Rep<F>>)> = Vec::new();
    let simples =
        Rep::simples(q).into_iter().enumerate().map(|(v, s)| (format!("S({})", q.vertex_name(v)), Arc::new(s)));
    let ends = [("M".to_string(), m.clone()), ("N".to_string(), n.clone())];
    for (name, rep) in simples.chain(ends).chain(summands.iter().cloned()) {
        if !out.iter().any(|(_, r)| **r == *rep) {
            out.push((name, rep));
        }
    }
    out
}

pub fn hom_order_check<F: Field>(m: &Rep<F>, n: &Rep<F>, probes: &[(String, Arc<Rep<F>>)]) -> Result<HomOrderReport> {
    check_dims(m, n)?;
    let probes = probes
        .iter()
        .map(|(name, y)| {
            Ok(ProbeResult {
                probe: name.clone(),
                m_to: hom_dim(m, y)?,
                n_to: hom_dim(n, y)?,
                to_m: hom_dim(y, m)?,
                to_n: hom_dim(y, n)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(HomOrderReport { probes })
}

/// `(M, U ⊕ V)` for `σ: 0 -> U -> M -> V -> 0`, certified by the sum of `σ`
/// with `0 -> 0 -> U -> U -> 0`: `0 -> U -> U ⊕ M -> U ⊕ V -> 0`,
/// `u ↦ (0, f u)` and `(u', m) ↦ (u', g m)`.
pub fn degeneration_from_ses<F: Field>(sigma: &ShortExactSeq<F>) -> Result<DegenerationPair<F>> {
    let (u, m, v) = (sigma.left(), sigma.middle(), sigma.right());
    let n = direct_sum(u, v)?.sum;
    let zm = direct_sum(u, m)?.sum;
    let verts = 0..u.quiver().vertex_count();
    let mono = verts.clone().map(|w| Matrix::zeros(u.dim(w), u.dim(w)).vstack(sigma.f().component(w))).collect();
    let epi = verts.map(|w| Matrix::block_diag(&Matrix::identity(u.dim(w)), sigma.g().component(w))).collect();
    let witness_seq = make_ses(
        RepMorphism::new_unchecked(u.clone(), zm.clone(), mono)?,
        RepMorphism::new_unchecked(zm, n.clone(), epi)?,
    )?;
    DegenerationPair::with_witness(m.clone(), n, Witness { z: u.clone(), sigma: witness_seq })
}

/// The first clause of a witness that fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessFailure {
    Missing,
    NotExact(String),
    LeftTermMismatch,
    MiddleTermMismatch,
    RightTermMismatch,
}

impl fmt::Display for WitnessFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessFailure::Missing => write!(f, "no witness"),
            WitnessFailure::NotExact(e) => write!(f, "sequence is not exact: {e}"),
            WitnessFailure::LeftTermMismatch => write!(f, "left term mismatch"),
            WitnessFailure::MiddleTermMismatch => write!(f, "middle term mismatch"),
            WitnessFailure::RightTermMismatch => write!(f, "right term mismatch"),
        }
    }
}

/// Re-checks exactness and the three terms `Z`, `Z ⊕ M`, `N` up to isomorphism.
pub fn verify_witness<F: Field>(pair: &DegenerationPair<F>, seed: u64) -> Result<Result<(), WitnessFailure>> {
    let Some(w) = &pair.witness else {
        return Ok(Err(WitnessFailure::Missing));
    };
    let sigma = match make_ses(w.sigma.f().clone(), w.sigma.g().clone()) {
        Ok(s) => s,
        Err(e) => return Ok(Err(WitnessFailure::NotExact(e.to_string()))),
    };
    let same = |a: &Arc<Rep<F>>, b: &Arc<Rep<F>>| -> Result<bool> {
        Ok(a.same_quiver(b) && a.dims() == b.dims() && is_isomorphic(a, b, seed)?)
    };
    if !same(sigma.left(), &w.z)? {
        return Ok(Err(WitnessFailure::LeftTermMismatch));
    }
    if !same(sigma.middle(), &direct_sum(&w.z, &pair.m)?.sum)? {
        return Ok(Err(WitnessFailure::MiddleTermMismatch));
    }
    if !same(sigma.right(), &pair.n)? {
        return Ok(Err(WitnessFailure::RightTermMismatch));
    }
    Ok(Ok(()))
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

    fn almost_split() -> ShortExactSeq<Rational> {
        let r = kron(1, 0);
        let q = r.quiver().clone();
        let s1 = Arc::new(Rep::simple(q.clone(), 0));
        let s2 = Arc::new(Rep::simple(q, 1));
        let f = RepMorphism::new(s2, r.clone(), vec![Matrix::zeros(1, 0), Matrix::identity(1)]).unwrap();
        let g = RepMorphism::new(r, s1, vec![Matrix::identity(1), Matrix::zeros(0, 1)]).unwrap();
        make_ses(f, g).unwrap()
    }

    #[test]
    fn codim_examples() {
        let r = kron(1, 0);
        assert_eq!(codim(&r, &r).unwrap(), 0);
        let pair = degeneration_from_ses(&almost_split()).unwrap();
        assert_eq!(codim(pair.m(), pair.n()).unwrap(), 1);
        let s1 = Rep::simple(r.quiver().clone(), 0);
        assert!(matches!(codim(&r, &s1), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn hom_order_refutes_kronecker_pair() {
        let (m, n) = (kron(1, 0), kron(0, 1));
        let report = hom_order_check(&m, &n, &[("Y".into(), m.clone())]).unwrap();
        assert!(!report.holds());
        assert_eq!(report.probes[0].m_to, 1);
        assert_eq!(report.probes[0].n_to, 0);
        let same = hom_order_check(&m, &m, &default_probes(&m, &m, &[])).unwrap();
        assert!(same.probes.iter().all(|p| p.m_to == p.n_to && p.to_m == p.to_n));
    }

    #[test]
    fn witnesses_verify_and_tampering_is_caught() {
        let sigma = almost_split();
        let pair = degeneration_from_ses(&sigma).unwrap();
        assert_eq!(verify_witness(&pair, 0).unwrap(), Ok(()));
        let probes = default_probes(pair.m(), pair.n(), &[("U".into(), sigma.left().clone())]);
        assert!(hom_order_check(pair.m(), pair.n(), &probes).unwrap().holds());

        // claim the degeneration starts from N instead of M
        let w = pair.witness().unwrap().clone();
        let tampered = DegenerationPair::with_witness(pair.n().clone(), pair.n().clone(), w).unwrap();
        let failure = verify_witness(&tampered, 0).unwrap().unwrap_err();
        assert_eq!(failure, WitnessFailure::MiddleTermMismatch);
        assert_eq!(failure.to_string(), "middle term mismatch");
    }

    #[test]
    fn trivial_witness() {
        let m = kron(1, 2);
        let z = Arc::new(Rep::zero(m.quiver().clone()));
        let sigma =
            make_ses(RepMorphism::zero(z.clone(), m.clone()).unwrap(), RepMorphism::identity(m.clone())).unwrap();
        let pair = DegenerationPair::with_witness(m.clone(), m, Witness { z, sigma }).unwrap();
        assert_eq!(verify_witness(&pair, 0).unwrap(), Ok(()));
    }
}
