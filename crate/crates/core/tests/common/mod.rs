//! Seeded generators for random acyclic quivers, representations with small
//! integer entries, and short exact sequences in general position.
#![allow(dead_code)]

use std::sync::Arc;

use quiverkit::homological::{make_ses, ses_from_ext, ExtSpace, ShortExactSeq};
use quiverkit::quiver::hom_basis;
use quiverkit::{DimVector, Field, Matrix, Quiver, Rational, Rep, RepMorphism};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type R = Rational;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn entry(rng: &mut ChaCha8Rng) -> R {
    R::integer(rng.gen_range(-3..=3))
}

/// At most five vertices; arrows go forward in a random vertex order, so
/// the quiver is acyclic but its vertex list is not topologically sorted.
pub fn quiver(rng: &mut ChaCha8Rng) -> Arc<Quiver> {
    let n = rng.gen_range(1..=5);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let arrows = if n == 1 { 0 } else { rng.gen_range(n - 1..=6) };
    let names: Vec<String> = (0..n).map(|v| format!("v{v}")).collect();
    let mut arrow_list = Vec::new();
    for k in 0..arrows {
        let i = rng.gen_range(0..n - 1);
        let j = rng.gen_range(i + 1..n);
        arrow_list.push((format!("a{k}"), names[order[i]].clone(), names[order[j]].clone()));
    }
    Arc::new(Quiver::new(&names, &arrow_list).unwrap())
}

pub fn rep(rng: &mut ChaCha8Rng, q: &Arc<Quiver>, max_dim: usize) -> Arc<Rep<R>> {
    let dims: Vec<usize> = (0..q.vertex_count()).map(|_| rng.gen_range(0..=max_dim)).collect();
    let maps = q.arrows().iter().map(|a| Matrix::from_fn(dims[a.target], dims[a.source], |_, _| entry(rng))).collect();
    Arc::new(Rep::new(q.clone(), DimVector(dims), maps).unwrap())
}

pub fn nonzero_rep(rng: &mut ChaCha8Rng, q: &Arc<Quiver>, max_dim: usize) -> Arc<Rep<R>> {
    loop {
        let r = rep(rng, q, max_dim);
        if !r.is_zero() {
            return r;
        }
    }
}

/// A random integer combination of a basis of `Hom(x, y)`.
pub fn morphism(rng: &mut ChaCha8Rng, x: &Arc<Rep<R>>, y: &Arc<Rep<R>>) -> RepMorphism<R> {
    let basis = hom_basis(x, y).unwrap();
    let coeffs: Vec<R> = basis.iter().map(|_| entry(rng)).collect();
    RepMorphism::linear_combination(&basis, &coeffs).unwrap_or_else(|| RepMorphism::zero(x.clone(), y.clone()).unwrap())
}

fn invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix<R> {
    loop {
        let p = Matrix::from_fn(n, n, |_, _| entry(rng));
        if p.is_invertible() {
            return p;
        }
    }
}

/// The same sequence after a random change of basis in the middle term.
pub fn scramble(rng: &mut ChaCha8Rng, sigma: &ShortExactSeq<R>) -> ShortExactSeq<R> {
    let m = sigma.middle();
    let bases: Vec<Matrix<R>> = (0..m.quiver().vertex_count()).map(|v| invertible(rng, m.dim(v))).collect();
    let w = Arc::new(m.conjugate(&bases).unwrap());
    let f = (0..bases.len()).map(|v| bases[v].mul(sigma.f().component(v))).collect();
    let g = (0..bases.len()).map(|v| sigma.g().component(v).mul(&bases[v].inverse().unwrap())).collect();
    make_ses(
        RepMorphism::new(sigma.left().clone(), w.clone(), f).unwrap(),
        RepMorphism::new(w, sigma.right().clone(), g).unwrap(),
    )
    .unwrap()
}

/// A random class of `Ext^1(v, u)` with coordinates in `-3..=3`.
pub fn class(rng: &mut ChaCha8Rng, v: &Arc<Rep<R>>, u: &Arc<Rep<R>>) -> quiverkit::homological::ExtClass<R> {
    let space = ExtSpace::new(v, u).unwrap();
    let coords: Vec<R> = (0..space.dim()).map(|_| entry(rng)).collect();
    space.from_coordinates(&coords)
}

/// A sequence `0 -> u -> ? -> v -> 0` with a random class, scrambled.
pub fn sequence(rng: &mut ChaCha8Rng, v: &Arc<Rep<R>>, u: &Arc<Rep<R>>) -> ShortExactSeq<R> {
    let e = class(rng, v, u);
    scramble(rng, &ses_from_ext(&e).unwrap())
}

pub fn is_zero_class(sigma: &ShortExactSeq<R>) -> bool {
    quiverkit::homological::ext_from_ses(sigma).unwrap().coordinates().iter().all(Field::is_zero)
}
