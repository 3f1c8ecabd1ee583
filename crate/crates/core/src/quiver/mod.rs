//! Finite acyclic quivers, their representations and morphisms.
//!
//! A representation assigns a dimension to each vertex and a matrix to each
//! arrow `a: s -> t` of shape `dims[t] x dims[s]`, acting on column vectors.

mod hom;
mod iso;
mod ops;
mod rep;

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Index};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use hom::{hom_basis, hom_dim, HomSpace};
pub use iso::{find_isomorphism, is_isomorphic, IsoSchedule};
pub use ops::{cokernel_rep, direct_sum, direct_sum_all, kernel_rep, DirectSum};
pub(crate) use rep::same_rep;
pub use rep::{Rep, RepMorphism};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A finite quiver without oriented cycles.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Builds a quiver from vertex names and `(name, source, target)` arrows.
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S, S)]) -> Result<Self> {
        let vertices: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        let mut seen = HashSet::new();
        for v in &vertices {
            if !seen.insert(v.as_str()) {
                return Err(Error::DuplicateName { kind: "vertex", name: v.clone() });
            }
        }
        let index =
            |name: &str| vertices.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVertex(name.to_string()));
        let mut names = HashSet::new();
        let mut out = Vec::with_capacity(arrows.len());
        for (name, s, t) in arrows {
            let name = name.as_ref().to_string();
            if !names.insert(name.clone()) {
                return Err(Error::DuplicateName { kind: "arrow", name });
            }
            out.push(Arrow { name, source: index(s.as_ref())?, target: index(t.as_ref())? });
        }
        let q = Quiver { vertices, arrows: out };
        if q.topological_order().is_none() {
            return Err(Error::CyclicQuiver);
        }
        Ok(q)
    }

    /// The Kronecker quiver: two arrows from vertex `1` to vertex `2`.
    pub fn kronecker() -> Self {
        Quiver::new(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).expect("acyclic")
    }

    /// Vertex `v0` with `n` arrows `ai: vi -> v0`.
    pub fn star(n: usize) -> Self {
        let vertices: Vec<String> = (0..=n).map(|i| format!("v{i}")).collect();
        let arrows: Vec<(String, String, String)> =
            (1..=n).map(|i| (format!("a{i}"), format!("v{i}"), "v0".to_string())).collect();
        Quiver::new(&vertices, &arrows).expect("stars are acyclic")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// Kahn's algorithm; `None` when an oriented cycle exists.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.target] += 1;
        }
        let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop() {
            order.push(v);
            for a in self.arrows.iter().filter(|a| a.source == v) {
                indeg[a.target] -= 1;
                if indeg[a.target] == 0 {
                    ready.push(a.target);
                }
            }
        }
        (order.len() == n).then_some(order)
    }
}

/// One nonnegative count per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimVector(pub Vec<usize>);

impl DimVector {
    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn scaled(&self, k: usize) -> Self {
        DimVector(self.0.iter().map(|d| d * k).collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

impl Index<usize> for DimVector {
    type Output = usize;
    fn index(&self, v: usize) -> &usize {
        &self.0[v]
    }
}

impl Add for &DimVector {
    type Output = DimVector;
    fn add(self, rhs: &DimVector) -> DimVector {
        assert_eq!(self.len(), rhs.len(), "dimension vectors of different length");
        DimVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// The Euler form `<d, e> = sum_v d_v e_v - sum_a d_s(a) e_t(a)`. For an
/// acyclic quiver it equals `[X, Y] - dim Ext^1(X, Y)` whenever `d` and `e`
/// are the dimension vectors of `X` and `Y`.
pub fn euler_form(q: &Quiver, d: &DimVector, e: &DimVector) -> i64 {
    assert_eq!(d.len(), q.vertex_count());
    assert_eq!(e.len(), q.vertex_count());
    let vertex: i64 = d.iter().zip(e.iter()).map(|(a, b)| (a * b) as i64).sum();
    let arrow: i64 = q.arrows().iter().map(|a| (d[a.source] * e[a.target]) as i64).sum();
    vertex - arrow
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_cycles_and_duplicates() {
        assert_eq!(Quiver::new(&["x"], &[("l", "x", "x")]), Err(Error::CyclicQuiver));
        assert_eq!(Quiver::new(&["x", "y"], &[("a", "x", "y"), ("b", "y", "x")]), Err(Error::CyclicQuiver));
        assert!(matches!(Quiver::new(&["x", "x"], &[]), Err(Error::DuplicateName { kind: "vertex", .. })));
        assert!(matches!(
            Quiver::new(&["x", "y"], &[("a", "x", "y"), ("a", "x", "y")]),
            Err(Error::DuplicateName { kind: "arrow", .. })
        ));
        assert_eq!(Quiver::new(&["x"], &[("a", "x", "z")]), Err(Error::UnknownVertex("z".into())));
    }

    #[test]
    fn euler_form_examples() {
        let k = Quiver::kronecker();
        assert_eq!(euler_form(&k, &DimVector::zero(2), &DimVector(vec![3, 1])), 0);
        assert_eq!(euler_form(&k, &DimVector(vec![1, 1]), &DimVector(vec![1, 1])), 0);
        let star = Quiver::star(3);
        let dim_v = DimVector(vec![1, 1, 1, 1]);
        let dim_u = DimVector(vec![1, 0, 0, 0]);
        assert_eq!(euler_form(&star, &dim_v, &dim_u), -2);
    }
}
