//! A TOML document holding one quiver, named representations and named
//! morphisms.
//!
//! ```toml
//! [quiver]
//! vertices = ["v0", "v1"]
//! arrows = [{ name = "a1", source = "v1", target = "v0" }]
//!
//! [reps.M]
//! dims = [2, 1]
//! maps = { a1 = [["1"], ["1/2"]] }
//!
//! [morphisms.f]
//! source = "U"
//! target = "M"
//! components = { v0 = [["1"], ["0"]], v1 = [] }
//! ```
//!
//! The matrix of an arrow `a: s -> t` has `dims[t]` rows and `dims[s]`
//! columns and acts on column vectors. Entries are exact rational literals
//! `"p"` or `"p/q"`. Vertices with dimension zero give matrices `[]` or
//! `[[], ...]`.

use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::field::{Field, Rational};
use crate::linalg::Matrix;
use crate::quiver::{direct_sum, DimVector, Quiver, Rep, RepMorphism};

#[derive(Debug, thiserror::Error)]
pub enum WorkspaceError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("quiver: {0}")]
    Quiver(Error),
    #[error("representation {name}: {source}")]
    Rep { name: String, source: Error },
    #[error("morphism {name}: {source}")]
    Morphism { name: String, source: Error },
    #[error("invalid rational literal {literal:?} in {location}")]
    Literal { literal: String, location: String },
    #[error("unknown representation {0:?}")]
    UnknownRep(String),
    #[error("entry of {location} is not defined over {field}")]
    Field { location: String, field: String },
    #[error("{0}")]
    Generator(String),
    #[error("cannot serialize workspace: {0}")]
    Emit(String),
}

/// A quiver with named representations and morphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Workspace<F: Field = Rational> {
    pub quiver: Arc<Quiver>,
    pub reps: IndexMap<String, Arc<Rep<F>>>,
    pub morphisms: IndexMap<String, RepMorphism<F>>,
}

type RawMatrix = Vec<Vec<String>>;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArrow {
    name: String,
    source: String,
    target: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuiver {
    vertices: Vec<String>,
    #[serde(default)]
    arrows: Vec<RawArrow>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRep {
    dims: Vec<usize>,
    #[serde(default)]
    maps: IndexMap<String, RawMatrix>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMorphism {
    source: String,
    target: String,
    #[serde(default)]
    components: IndexMap<String, RawMatrix>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWorkspace {
    quiver: RawQuiver,
    #[serde(default)]
    reps: IndexMap<String, RawRep>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    morphisms: IndexMap<String, RawMorphism>,
}

/// 1-based line and column of a byte offset.
fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn read_matrix(raw: &RawMatrix, shape: (usize, usize), location: &str) -> Result<Matrix, WorkspaceError> {
    let (rows, cols) = shape;
    let mismatch = |found: (usize, usize)| WorkspaceError::Rep {
        name: String::new(),
        source: Error::ShapeMismatch { location: location.to_string(), expected: shape, found },
    };
    // an empty list stands for any matrix with no entries
    let found_rows = if raw.is_empty() && cols == 0 { rows } else { raw.len() };
    let found_cols = raw.first().map_or(cols, Vec::len);
    if found_rows != rows || raw.iter().any(|r| r.len() != cols) || (raw.is_empty() && rows * cols != 0) {
        return Err(mismatch((found_rows, if raw.is_empty() { 0 } else { found_cols })));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for literal in raw.iter().flatten() {
        let x = literal
            .parse::<Rational>()
            .map_err(|_| WorkspaceError::Literal { literal: literal.clone(), location: location.to_string() })?;
        data.push(x);
    }
    Ok(Matrix::from_vec(rows, cols, data))
}

fn name_error(err: WorkspaceError, name: &str, morphism: bool) -> WorkspaceError {
    match err {
        WorkspaceError::Rep { source, .. } if morphism => WorkspaceError::Morphism { name: name.to_string(), source },
        WorkspaceError::Rep { source, .. } => WorkspaceError::Rep { name: name.to_string(), source },
        other => other,
    }
}

/// Parses and validates a workspace document.
pub fn parse_workspace(text: &str) -> Result<Workspace, WorkspaceError> {
    let raw: RawWorkspace = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| position(text, s.start));
        WorkspaceError::Syntax { line, column, message: e.message().trim().to_string() }
    })?;

    let arrows: Vec<(&str, &str, &str)> =
        raw.quiver.arrows.iter().map(|a| (a.name.as_str(), a.source.as_str(), a.target.as_str())).collect();
    let vertices: Vec<&str> = raw.quiver.vertices.iter().map(String::as_str).collect();
    let quiver = Arc::new(Quiver::new(&vertices, &arrows).map_err(WorkspaceError::Quiver)?);

    let mut reps = IndexMap::new();
    for (name, r) in &raw.reps {
        let rep_err = |source: Error| WorkspaceError::Rep { name: name.clone(), source };
        if r.dims.len() != quiver.vertex_count() {
            return Err(rep_err(Error::DimVectorLength { expected: quiver.vertex_count(), found: r.dims.len() }));
        }
        if let Some(extra) = r.maps.keys().find(|k| quiver.arrow_index(k).is_none()) {
            return Err(rep_err(Error::Precondition(format!("unknown arrow {extra:?}"))));
        }
        let mut maps = Vec::with_capacity(quiver.arrows().len());
        for a in quiver.arrows() {
            let shape = (r.dims[a.target], r.dims[a.source]);
            let location = format!("arrow {}", a.name);
            let m = match r.maps.get(&a.name) {
                Some(raw) => read_matrix(raw, shape, &location).map_err(|e| name_error(e, name, false))?,
                None if shape.0 * shape.1 == 0 => Matrix::zeros(shape.0, shape.1),
                None => return Err(rep_err(Error::Precondition(format!("missing map for arrow {}", a.name)))),
            };
            maps.push(m);
        }
        let rep = Rep::new(quiver.clone(), DimVector(r.dims.clone()), maps).map_err(rep_err)?;
        reps.insert(name.clone(), Arc::new(rep));
    }

    let mut morphisms = IndexMap::new();
    for (name, m) in &raw.morphisms {
        let lookup = |n: &str| reps.get(n).cloned().ok_or_else(|| WorkspaceError::UnknownRep(n.to_string()));
        let (source, target) = (lookup(&m.source)?, lookup(&m.target)?);
        let hom_err = |source: Error| WorkspaceError::Morphism { name: name.clone(), source };
        if let Some(extra) = m.components.keys().find(|k| quiver.vertex_index(k).is_none()) {
            return Err(hom_err(Error::UnknownVertex(extra.clone())));
        }
        let mut components = Vec::with_capacity(quiver.vertex_count());
        for (v, vname) in quiver.vertices().iter().enumerate() {
            let shape = (target.dim(v), source.dim(v));
            let location = format!("vertex {vname}");
            let c = match m.components.get(vname) {
                Some(raw) => read_matrix(raw, shape, &location).map_err(|e| name_error(e, name, true))?,
                None if shape.0 * shape.1 == 0 => Matrix::zeros(shape.0, shape.1),
                None => return Err(hom_err(Error::Precondition(format!("missing component at vertex {vname}")))),
            };
            components.push(c);
        }
        morphisms.insert(name.clone(), RepMorphism::new(source, target, components).map_err(hom_err)?);
    }
    Ok(Workspace { quiver, reps, morphisms })
}

fn write_matrix<F: Field>(m: &Matrix<F>) -> RawMatrix {
    m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

/// Serializes a workspace; [`parse_workspace`] reads it back unchanged.
pub fn emit<F: Field>(ws: &Workspace<F>) -> Result<String, WorkspaceError> {
    let q = &ws.quiver;
    let raw = RawWorkspace {
        quiver: RawQuiver {
            vertices: q.vertices().to_vec(),
            arrows: q
                .arrows()
                .iter()
                .map(|a| RawArrow {
                    name: a.name.clone(),
                    source: q.vertex_name(a.source).to_string(),
                    target: q.vertex_name(a.target).to_string(),
                })
                .collect(),
        },
        reps: ws
            .reps
            .iter()
            .map(|(name, r)| {
                let maps = q.arrows().iter().zip(r.maps()).map(|(a, m)| (a.name.clone(), write_matrix(m))).collect();
                (name.clone(), RawRep { dims: r.dims().0.clone(), maps })
            })
            .collect(),
        morphisms: ws
            .morphisms
            .iter()
            .map(|(name, h)| {
                let find = |rep: &Arc<Rep<F>>| {
                    ws.reps.iter().find(|(_, r)| ***r == **rep).map(|(n, _)| n.clone()).ok_or_else(|| {
                        WorkspaceError::Emit(format!("morphism {name} refers to an unnamed representation"))
                    })
                };
                let components =
                    q.vertices().iter().zip(h.components()).map(|(v, c)| (v.clone(), write_matrix(c))).collect();
                Ok((name.clone(), RawMorphism { source: find(h.source())?, target: find(h.target())?, components }))
            })
            .collect::<Result<_, WorkspaceError>>()?,
    };
    toml::to_string(&raw).map_err(|e| WorkspaceError::Emit(e.to_string()))
}

impl<F: Field> Workspace<F> {
    pub fn rep(&self, name: &str) -> Result<&Arc<Rep<F>>, WorkspaceError> {
        self.reps.get(name).ok_or_else(|| WorkspaceError::UnknownRep(name.to_string()))
    }
}

impl Workspace<Rational> {
    /// The same workspace over another field, e.g. reduced modulo a prime.
    pub fn to_field<G: Field>(&self) -> Result<Workspace<G>, WorkspaceError> {
        let field = G::label();
        let mut reps = IndexMap::new();
        for (name, r) in &self.reps {
            let mapped = r.map_field(G::from_rational).ok_or_else(|| WorkspaceError::Field {
                location: format!("representation {name}"),
                field: field.clone(),
            })?;
            reps.insert(name.clone(), Arc::new(mapped));
        }
        let mut morphisms = IndexMap::new();
        for (name, h) in &self.morphisms {
            let endpoint = |rep: &Arc<Rep<Rational>>| {
                self.reps.iter().position(|(_, r)| Arc::ptr_eq(r, rep) || **r == **rep).map(|i| reps[i].clone())
            };
            let (Some(source), Some(target)) = (endpoint(h.source()), endpoint(h.target())) else {
                return Err(WorkspaceError::UnknownRep(format!("endpoint of morphism {name}")));
            };
            let components = h
                .components()
                .iter()
                .map(|c| {
                    let entries = c.entries().iter().map(G::from_rational).collect::<Option<Vec<G>>>()?;
                    Some(Matrix::from_vec(c.rows(), c.cols(), entries))
                })
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| WorkspaceError::Field { location: format!("morphism {name}"), field: field.clone() })?;
            let mapped = RepMorphism::new(source, target, components)
                .map_err(|source| WorkspaceError::Morphism { name: name.clone(), source })?;
            morphisms.insert(name.clone(), mapped);
        }
        Ok(Workspace { quiver: self.quiver.clone(), reps, morphisms })
    }
}

/// Default points `(1:0), (0:1), (1:1), (1:2), ..., (1:n-2)`.
pub fn default_star_points(n: usize) -> Vec<(Rational, Rational)> {
    let mut p = vec![(Rational::one(), Rational::zero()), (Rational::zero(), Rational::one())];
    p.extend((1..=n.saturating_sub(2) as i64).map(|k| (Rational::one(), Rational::integer(k))));
    p.truncate(n);
    p
}

fn proportional(p: &(Rational, Rational), q: &(Rational, Rational)) -> bool {
    p.0.clone() * q.1.clone() == p.1.clone() * q.0.clone()
}

/// The star quiver with `n` arms and the representations
/// `U` (simple at the center), `V` (one-dimensional everywhere, identity
/// maps), `M` (arm `i` maps by `(a_i, b_i)^T` into a plane) and `N = U ⊕ V`,
/// with a monomorphism `f: U -> M` and its cokernel map `g: M -> V`.
pub fn gen_star(n: usize, points: &[(Rational, Rational)]) -> Result<Workspace, WorkspaceError> {
    let generr = |m: String| WorkspaceError::Generator(m);
    if n < 3 {
        return Err(generr(format!("need at least 3 arms, got {n}")));
    }
    if points.len() != n {
        return Err(generr(format!("need {n} points, got {}", points.len())));
    }
    for (i, p) in points.iter().enumerate() {
        if p.0.is_zero() && p.1.is_zero() {
            return Err(generr(format!("point {} is (0:0)", i + 1)));
        }
        if let Some(j) = points[..i].iter().position(|q| proportional(p, q)) {
            return Err(generr(format!("points {} and {} coincide in P^1", j + 1, i + 1)));
        }
    }
    let q = Arc::new(Quiver::star(n));
    fn invalid(name: &'static str) -> impl Fn(Error) -> WorkspaceError {
        move |source| WorkspaceError::Rep { name: name.to_string(), source }
    }

    let u = Arc::new(Rep::simple(q.clone(), 0));
    let ones = DimVector(vec![1; n + 1]);
    let v = Arc::new(Rep::new(q.clone(), ones.clone(), vec![Matrix::identity(1); n]).map_err(invalid("V"))?);
    let mut mdims = ones.0.clone();
    mdims[0] = 2;
    let maps = points.iter().map(|(a, b)| Matrix::from_vec(2, 1, vec![a.clone(), b.clone()])).collect();
    let m = Arc::new(Rep::new(q.clone(), DimVector(mdims), maps).map_err(invalid("M"))?);
    let nn = direct_sum(&u, &v).map_err(invalid("N"))?.sum;

    // f has center column (a, b), the first (1:k) avoiding every point
    let (a, b) = (0..)
        .map(|k| (Rational::one(), Rational::integer(k)))
        .find(|c| !points.iter().any(|p| proportional(c, p)))
        .expect("finitely many points");
    let mut f = vec![Matrix::from_vec(2, 1, vec![a.clone(), b.clone()])];
    f.extend((0..n).map(|_| Matrix::zeros(1, 0)));
    let f = RepMorphism::new(u.clone(), m.clone(), f)
        .map_err(|source| WorkspaceError::Morphism { name: "f".into(), source })?;
    // g kills (a, b) at the center; on arm i it is b a_i - a b_i
    let mut g = vec![Matrix::from_vec(1, 2, vec![b.clone(), -a.clone()])];
    g.extend(
        points.iter().map(|(ai, bi)| Matrix::from_vec(1, 1, vec![b.clone() * ai.clone() - a.clone() * bi.clone()])),
    );
    let g = RepMorphism::new(m.clone(), v.clone(), g)
        .map_err(|source| WorkspaceError::Morphism { name: "g".into(), source })?;

    let reps = [("U", u), ("V", v), ("M", m), ("N", nn)].into_iter().map(|(k, r)| (k.to_string(), r)).collect();
    let morphisms = [("f", f), ("g", g)].into_iter().map(|(k, h)| (k.to_string(), h)).collect();
    Ok(Workspace { quiver: q, reps, morphisms })
}
