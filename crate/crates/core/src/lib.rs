//! Exact homological algebra for representations of finite acyclic quivers.
//!
//! The crate computes hom spaces, `Ext^1` through cocycles and coboundaries,
//! the hom-dimension defects of short exact sequences, pushouts, and the
//! pushout chain that determines the degree `r` for which a codimension-two
//! degeneration `M ⇝ U ⊕ V` has the singularity type of the affine cone over
//! the rational normal curve of degree `r`.

pub mod degeneration;
pub mod error;
pub mod field;
pub mod homological;
pub mod linalg;
pub mod quiver;
pub mod rnc_chain;
pub mod workspace;

pub use error::{Error, Result};
pub use field::{Field, Fp, Rational};
pub use linalg::Matrix;
pub use quiver::{DimVector, Quiver, Rep, RepMorphism};
