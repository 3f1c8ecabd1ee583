use crate::linalg::LinalgError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),

    #[error("quiver must be acyclic")]
    CyclicQuiver,
    #[error("duplicate {kind} name {name:?}")]
    DuplicateName { kind: &'static str, name: String },
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("representations live over different quivers")]
    QuiverMismatch,
    #[error("dimension vector has {found} entries, quiver has {expected} vertices")]
    DimVectorLength { expected: usize, found: usize },
    #[error("shape mismatch at {location}: expected {expected:?}, found {found:?}")]
    ShapeMismatch { location: String, expected: (usize, usize), found: (usize, usize) },
    #[error("morphism does not intertwine at arrow {0}")]
    NotIntertwining(String),
    #[error("morphisms do not compose: {0}")]
    NotComposable(String),

    #[error("not injective at vertex {0}")]
    NotInjective(String),
    #[error("not surjective at vertex {0}")]
    NotSurjective(String),
    #[error("not exact at vertex {0}: image of f differs from kernel of g")]
    NotExact(String),
    #[error("split criteria disagree: delta(U) = {delta}, delta'(V) = {delta_prime}")]
    SplitCriteriaDisagree { delta: usize, delta_prime: usize },
    #[error("negative hom-dimension defect; the sequence is not exact")]
    NegativeDefect,
    #[error("cancellation needs delta(Y) < {copies}, found {delta}")]
    CancelPrecondition { delta: usize, copies: usize },
    #[error("source is not presented as U + Y^{copies}: {reason}")]
    SummandLayout { copies: usize, reason: String },

    #[error("dimension vectors differ: {0}")]
    DimensionMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no monomorphism with cokernel V found after {tries} samples")]
    NoStartSequence { tries: usize },
    #[error("pushout chain did not split within the cap of {cap} sequences")]
    CapExceeded { cap: usize },
    #[error("chain invariant violated at sequence {index}: {reason}")]
    ChainInvariant { index: usize, reason: String },
    #[error("sample {sample}: pushforward map has rank {rank}, expected 1 (class {class})")]
    RankOne { sample: usize, rank: usize, class: String },
    #[error("pushforward map on Ext(V, U0) has rank {rank}, expected {expected}")]
    PushforwardNotInjective { rank: usize, expected: usize },
    #[error("sampled classes span dimension {found}, expected {expected}")]
    SpanMismatch { expected: usize, found: usize },
    #[error("insufficient samples")]
    InsufficientSamples,
}
