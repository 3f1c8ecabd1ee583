//! The pushout chain of a codimension-two degeneration `M ⇝ U ⊕ V` and the
//! degree `r` of the rational normal curve whose cone gives its singularity.
//!
//! Starting from `σ1: 0 -> U0 -> U1 -> V -> 0` (with `U0 = U`, `U1 = M`) and a
//! morphism `g1: U0 -> U1` outside the image of `Hom(f1, U1)`, each
//! `σ(i+1)` is the pushout of `σi` along `gi`, and `g(i+1)` is the induced
//! map `Ui -> U(i+1)`. The first split sequence has index `r + 2`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::degeneration::codim;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::homological::{
    delta, delta_prime, ext1_dim, ext_from_ses, make_ses, pushforward_into, pushout, ExtClass, ExtSpace, ShortExactSeq,
};
use crate::linalg::Matrix;
use crate::quiver::{
    cokernel_rep, direct_sum, find_isomorphism, hom_dim, DimVector, HomSpace, IsoSchedule, Rep, RepMorphism,
};

/// Either a smooth point or the cone over a rational normal curve.
/// `Reg` and `ConeOverRnc { degree: 1 }` compare equal.
#[derive(Debug, Clone, Copy)]
pub enum SingularityType {
    Reg,
    ConeOverRnc { degree: usize },
}

impl SingularityType {
    /// The cone degree, with `Reg` read as degree 1.
    pub fn degree(&self) -> usize {
        match self {
            SingularityType::Reg => 1,
            SingularityType::ConeOverRnc { degree } => *degree,
        }
    }
}

impl PartialEq for SingularityType {
    fn eq(&self, other: &Self) -> bool {
        self.degree() == other.degree()
    }
}

impl Eq for SingularityType {}

impl Hash for SingularityType {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.degree().hash(state);
    }
}

impl fmt::Display for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularityType::Reg => write!(f, "Reg"),
            SingularityType::ConeOverRnc { degree } => write!(f, "ConeOverRNC(degree={degree})"),
        }
    }
}

/// One clause of the hypothesis check: `lhs == rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub name: &'static str,
    pub lhs: i64,
    pub rhs: i64,
}

impl Clause {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisReport {
    pub clauses: Vec<Clause>,
}

impl HypothesisReport {
    pub fn holds(&self) -> bool {
        self.clauses.iter().all(Clause::holds)
    }
}

/// With `N = U ⊕ V`: `[U, M] = [U, N]`, `[M, V] = [N, V]` and
/// `[N, N] - [M, M] = 2`.
pub fn check_hypotheses<F: Field>(m: &Arc<Rep<F>>, u: &Arc<Rep<F>>, v: &Arc<Rep<F>>) -> Result<HypothesisReport> {
    m.check_quiver(u)?;
    m.check_quiver(v)?;
    if *m.dims() != u.dims() + v.dims() {
        return Err(Error::DimensionMismatch(format!(
            "dim M = {} but dim U + dim V = {}",
            m.dims(),
            u.dims() + v.dims()
        )));
    }
    let n = direct_sum(u, v)?.sum;
    let h = |x: &Rep<F>, y: &Rep<F>| -> Result<i64> { Ok(hom_dim(x, y)? as i64) };
    Ok(HypothesisReport {
        clauses: vec![
            Clause { name: "[U,M] = [U,N]", lhs: h(u, m)?, rhs: h(u, &n)? },
            Clause { name: "[M,V] = [N,V]", lhs: h(m, v)?, rhs: h(&n, v)? },
            Clause { name: "[N,N] - [M,M] = 2", lhs: codim(m, &n)?, rhs: 2 },
        ],
    })
}

/// Coefficient ranges for random elements of a hom space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplingSchedule {
    /// Inclusive ranges, tried in order.
    pub ranges: Vec<(i64, i64)>,
    pub tries_per_range: usize,
}

impl Default for SamplingSchedule {
    /// The same ranges as [`IsoSchedule::default`].
    fn default() -> Self {
        let iso = IsoSchedule::default();
        SamplingSchedule { ranges: iso.ranges, tries_per_range: iso.tries_per_range }
    }
}

impl SamplingSchedule {
    /// Wide ranges, so that repeated samples land on many projective points.
    pub fn wide() -> Self {
        SamplingSchedule { ranges: vec![(-16, 16), (-256, 256)], tries_per_range: 16 }
    }

    pub fn budget(&self) -> usize {
        self.ranges.len() * self.tries_per_range
    }
}

/// `σ: 0 -> U -> M -> V -> 0` with middle term `M` itself, found by sampling
/// monomorphisms `f: U -> M` whose cokernel is isomorphic to `V`.
pub fn find_start_sequence<F: Field>(
    u: &Arc<Rep<F>>,
    m: &Arc<Rep<F>>,
    v: &Arc<Rep<F>>,
    seed: u64,
) -> Result<ShortExactSeq<F>> {
    Ok(find_start_sequence_with(u, m, v, seed, &SamplingSchedule::default())?.0)
}

/// [`find_start_sequence`] with an explicit schedule; also returns the number
/// of samples drawn.
pub fn find_start_sequence_with<F: Field>(
    u: &Arc<Rep<F>>,
    m: &Arc<Rep<F>>,
    v: &Arc<Rep<F>>,
    seed: u64,
    schedule: &SamplingSchedule,
) -> Result<(ShortExactSeq<F>, usize)> {
    u.check_quiver(m)?;
    u.check_quiver(v)?;
    if *m.dims() != u.dims() + v.dims() {
        return Err(Error::Precondition(format!("dim M = {} but dim U + dim V = {}", m.dims(), u.dims() + v.dims())));
    }
    let space = HomSpace::new(u, m)?;
    let dim = space.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tries = 0;
    if dim == 0 && !u.is_zero() {
        return Err(Error::NoStartSequence { tries });
    }
    for &(lo, hi) in &schedule.ranges {
        if lo == 0 && hi == 0 && dim > 0 {
            continue;
        }
        for _ in 0..schedule.tries_per_range {
            let coeffs: Vec<F> = loop {
                let c: Vec<i64> = (0..dim).map(|_| rng.gen_range(lo..=hi)).collect();
                if dim == 0 || c.iter().any(|&x| x != 0) {
                    break c.into_iter().map(F::from_i64).collect();
                }
            };
            tries += 1;
            let f = space.combination(&coeffs);
            if !f.is_injective() {
                continue;
            }
            let (c, p) = cokernel_rep(&f)?;
            if let Some(phi) = find_isomorphism(&c, v, seed.wrapping_add(tries as u64), &IsoSchedule::default())? {
                let g = phi.compose(&p)?;
                return Ok((make_ses(f, g)?, tries));
            }
        }
    }
    Err(Error::NoStartSequence { tries })
}

/// The plane spanned by `fi` and `gi` in `Hom(U(i-1), Ui)`.
#[derive(Debug, Clone)]
pub struct HSpace<F: Field> {
    basis: [RepMorphism<F>; 2],
}

impl<F: Field> HSpace<F> {
    pub fn new(f: RepMorphism<F>, g: RepMorphism<F>) -> Result<Self> {
        if !f.source().same_quiver(g.source())
            || f.source().dims() != g.source().dims()
            || f.target().dims() != g.target().dims()
        {
            return Err(Error::NotComposable("f and g are not parallel".into()));
        }
        let (a, b) = (f.flatten(), g.flatten());
        let rank = Matrix::from_columns(&[a.clone(), b], a.len()).rank();
        if rank != 2 {
            return Err(Error::Precondition(format!("f and g span a space of dimension {rank}, not 2")));
        }
        Ok(HSpace { basis: [f, g] })
    }

    pub fn basis(&self) -> &[RepMorphism<F>; 2] {
        &self.basis
    }
}

/// `g1`: the first basis vector of `Hom(U0, U1)` outside the image of
/// `h ↦ h ∘ f1`, in hom-space coordinates.
pub fn choose_g<F: Field>(sigma: &ShortExactSeq<F>) -> Result<RepMorphism<F>> {
    let (u0, u1) = (sigma.left(), sigma.middle());
    let target = HomSpace::new(u0, u1)?;
    let endos = HomSpace::new(u1, u1)?;
    let columns =
        endos.basis().iter().map(|h| Ok(target.coordinates(&h.compose(sigma.f())?))).collect::<Result<Vec<_>>>()?;
    let image = Matrix::from_columns(&columns, target.dim()).column_space();
    let comp = Matrix::complement_basis(&image, target.dim())?;
    if comp.cols() == 0 {
        return Err(Error::Precondition("every morphism U0 -> U1 factors through f1 (δ(U1) = 0)".into()));
    }
    Ok(target.combination(&comp.column(0)))
}

/// Defects recorded at one step of the chain.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ChainStep {
    /// 1-based index `i` of `σi`.
    pub index: usize,
    /// `δ_σi(V)`
    pub delta_v: usize,
    /// `δ'_σi(V)`
    pub delta_prime_v: usize,
    /// `δ_σi(U(i-1))`, zero exactly when `σi` splits.
    pub delta_left: usize,
    pub split: bool,
    /// Dimension vector of the middle term `Ui`.
    pub middle_dims: DimVector,
}

#[derive(Debug, Clone)]
pub struct ChainReport<F: Field> {
    /// `σ1, ..., σ(r+2)`
    pub sequences: Vec<ShortExactSeq<F>>,
    /// `g1, ..., g(r+1)`
    pub links: Vec<RepMorphism<F>>,
    pub split_index: usize,
    pub degree: usize,
    pub delta_log: Vec<ChainStep>,
    pub seed: Option<u64>,
}

impl<F: Field> ChainReport<F> {
    pub fn u0(&self) -> &Arc<Rep<F>> {
        self.sequences[0].left()
    }

    pub fn v(&self) -> &Arc<Rep<F>> {
        self.sequences[0].right()
    }

    pub fn m(&self) -> &Arc<Rep<F>> {
        self.sequences[0].middle()
    }

    /// `H1 = span(f1, g1)`
    pub fn h_space(&self) -> Result<HSpace<F>> {
        HSpace::new(self.sequences[0].f().clone(), self.links[0].clone())
    }

    /// Checks the defect pattern, the splitting pattern and the growth of
    /// the middle terms.
    pub fn validate(&self) -> Result<()> {
        let fail = |index: usize, reason: String| Err(Error::ChainInvariant { index, reason });
        let s = self.split_index;
        if self.sequences.len() != s || self.delta_log.len() != s || self.links.len() + 1 != s {
            return fail(s, "log lengths disagree with the split index".into());
        }
        if s < 3 || self.degree != s - 2 {
            return fail(s, format!("split index {s} does not give a positive degree"));
        }
        let (u0, v) = (self.u0().dims(), self.v().dims());
        for step in &self.delta_log {
            let i = step.index;
            let expected = u0 + &v.scaled(i);
            if step.middle_dims != expected {
                return fail(i, format!("middle term has dimension {}, expected {expected}", step.middle_dims));
            }
            if i < s {
                if step.split || step.delta_v != 0 || step.delta_prime_v != 1 {
                    return fail(
                        i,
                        format!(
                            "expected a nonsplit sequence with δ(V) = 0, δ'(V) = 1; found split = {}, δ(V) = {}, δ'(V) = {}",
                            step.split, step.delta_v, step.delta_prime_v
                        ),
                    );
                }
            } else if !step.split || step.delta_prime_v != 0 {
                return fail(
                    i,
                    format!("expected a split sequence with δ'(V) = 0, found δ'(V) = {}", step.delta_prime_v),
                );
            }
        }
        Ok(())
    }
}

fn record<F: Field>(sigma: &ShortExactSeq<F>, index: usize) -> Result<ChainStep> {
    let v = sigma.right();
    let delta_left = delta(sigma, sigma.left())?;
    let delta_prime_v = delta_prime(sigma, v)?;
    if (delta_left == 0) != (delta_prime_v == 0) {
        return Err(Error::SplitCriteriaDisagree { delta: delta_left, delta_prime: delta_prime_v });
    }
    Ok(ChainStep {
        index,
        delta_v: delta(sigma, v)?,
        delta_prime_v,
        delta_left,
        split: delta_left == 0,
        middle_dims: sigma.middle().dims().clone(),
    })
}

/// The default iteration cap, `dim Ext^1(V, U0) + 2` sequences.
pub fn default_cap<F: Field>(sigma1: &ShortExactSeq<F>) -> Result<usize> {
    Ok(ext1_dim(sigma1.right(), sigma1.left())? + 2)
}

/// Pushes `σ1` forward along `g1`, then along the induced maps, until a
/// sequence splits. `cap` bounds the number of sequences.
pub fn run_chain<F: Field>(sigma1: &ShortExactSeq<F>, g1: &RepMorphism<F>, cap: usize) -> Result<ChainReport<F>> {
    let first = record(sigma1, 1)?;
    let d_u1 = delta(sigma1, sigma1.middle())?;
    if d_u1 != 1 || first.delta_v != 0 || first.delta_prime_v != 1 {
        return Err(Error::Precondition(format!(
            "chain needs δ(U1) = 1, δ(V) = 0, δ'(V) = 1; found {d_u1}, {}, {}",
            first.delta_v, first.delta_prime_v
        )));
    }
    let mut sequences = vec![sigma1.clone()];
    let mut links = vec![g1.clone()];
    let mut delta_log = vec![first];
    loop {
        let i = sequences.len();
        if delta_log[i - 1].split {
            break;
        }
        if i >= cap {
            return Err(Error::CapExceeded { cap });
        }
        let p = pushout(&sequences[i - 1], &links[i - 1])?;
        let step = record(&p.sigma, i + 1)?;
        let split = step.split;
        sequences.push(p.sigma);
        delta_log.push(step);
        if !split {
            links.push(p.j);
        }
    }
    let split_index = sequences.len();
    let report =
        ChainReport { degree: split_index.saturating_sub(2), sequences, links, split_index, delta_log, seed: None };
    report.validate()?;
    Ok(report)
}

/// The singularity type of `M ⇝ U ⊕ V`, with the chain that determines it.
pub fn singularity_type<F: Field>(
    m: &Arc<Rep<F>>,
    u: &Arc<Rep<F>>,
    v: &Arc<Rep<F>>,
    seed: u64,
    cap: Option<usize>,
) -> Result<(SingularityType, Option<ChainReport<F>>)> {
    let hyp = check_hypotheses(m, u, v)?;
    if let Some(c) = hyp.clauses.iter().find(|c| !c.holds()) {
        return Err(Error::Precondition(format!("hypothesis {} fails: {} vs {}", c.name, c.lhs, c.rhs)));
    }
    let sigma = find_start_sequence(u, m, v, seed)?;
    if delta(&sigma, m)? == 0 {
        return Ok((SingularityType::Reg, None));
    }
    let g1 = choose_g(&sigma)?;
    let cap = match cap {
        Some(c) => c,
        None => default_cap(&sigma)?,
    };
    let mut report = run_chain(&sigma, &g1, cap)?;
    report.seed = Some(seed);
    Ok((SingularityType::ConeOverRnc { degree: report.degree }, Some(report)))
}

/// Classes `[σ]` of sequences `0 -> U0 -> M -> V -> 0` drawn with seeds
/// `seed, seed + 1, ...`.
pub fn sample_classes<F: Field>(
    report: &ChainReport<F>,
    samples: usize,
    seed: u64,
    schedule: &SamplingSchedule,
) -> Result<Vec<ExtClass<F>>> {
    (0..samples as u64)
        .map(|k| {
            let (sigma, _) =
                find_start_sequence_with(report.u0(), report.m(), report.v(), seed.wrapping_add(k), schedule)?;
            ext_from_ses(&sigma)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankOneReport {
    /// Rank of `F'1(e)` for each sample.
    pub ranks: Vec<usize>,
    /// Rank of `F'1` on a basis of `Ext^1(V, U0)`.
    pub injectivity_rank: usize,
    pub ext1_dim: usize,
}

fn f1_prime<F: Field>(e: &ExtClass<F>, h: &HSpace<F>, target: &Arc<ExtSpace<F>>) -> Result<Vec<Vec<F>>> {
    h.basis().iter().map(|b| Ok(pushforward_into(e, b, target)?.coordinates())).collect()
}

/// Every sampled nonzero class `e` has `rank F'1(e) = 1`, and `F'1` is
/// injective on `Ext^1(V, U0)`.
pub fn verify_rank_one<F: Field>(report: &ChainReport<F>, samples: usize, seed: u64) -> Result<RankOneReport> {
    if samples == 0 {
        return Err(Error::InsufficientSamples);
    }
    let h = report.h_space()?;
    let u1 = report.sequences[0].middle();
    let target = ExtSpace::new(report.v(), u1)?;
    let source = ExtSpace::new(report.v(), report.u0())?;

    let mut ranks = Vec::with_capacity(samples);
    for (k, e) in sample_classes(report, samples, seed, &SamplingSchedule::wide())?.into_iter().enumerate() {
        if e.is_zero() {
            continue;
        }
        let cols = f1_prime(&e, &h, &target)?;
        let rank = Matrix::from_columns(&cols, target.dim()).rank();
        if rank != 1 {
            return Err(Error::RankOne { sample: k, rank, class: format!("{:?}", e.coordinates()) });
        }
        ranks.push(rank);
    }

    // F'1 as a matrix from Ext^1(V, U0) to Ext^1(V, U1)^2
    let columns = source.basis().iter().map(|e| Ok(f1_prime(e, &h, &target)?.concat())).collect::<Result<Vec<_>>>()?;
    let injectivity_rank = Matrix::from_columns(&columns, 2 * target.dim()).rank();
    if injectivity_rank != source.dim() {
        return Err(Error::PushforwardNotInjective { rank: injectivity_rank, expected: source.dim() });
    }
    Ok(RankOneReport { ranks, injectivity_rank, ext1_dim: source.dim() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanReport {
    pub samples: usize,
    pub span_dim: usize,
    pub expected: usize,
    pub ext1_dim: usize,
}

/// The sampled classes of sequences with middle term `M` span a subspace of
/// `Ext^1(V, U0)` of dimension `degree + 1`.
pub fn verify_span<F: Field>(report: &ChainReport<F>, samples: usize, seed: u64) -> Result<SpanReport> {
    if samples == 0 {
        return Err(Error::InsufficientSamples);
    }
    let classes = sample_classes(report, samples, seed, &SamplingSchedule::wide())?;
    let ext1 = ext1_dim(report.v(), report.u0())?;
    let columns: Vec<Vec<F>> = classes.iter().map(ExtClass::coordinates).collect();
    let span_dim = Matrix::from_columns(&columns, ext1).rank();
    let expected = report.degree + 1;
    if span_dim != expected {
        return Err(Error::SpanMismatch { expected, found: span_dim });
    }
    Ok(SpanReport { samples, span_dim, expected, ext1_dim: ext1 })
}
