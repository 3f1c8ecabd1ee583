//! Isomorphism testing by sampling the hom space.
//!
//! `X ≅ Y` iff some element of `Hom(X, Y)` is invertible at every vertex,
//! iff the polynomial `P(c) = prod_v det(sum_i c_i h_{i,v})` in the
//! coordinates `c` of a hom-space basis is not identically zero. `P` has
//! rational coefficients, so if an invertible intertwiner exists over an
//! algebraic closure then `P` is nonzero and has a rational point: the answer
//! over `Q` is the answer over `Q̄`.
//!
//! Positive answers carry an explicit isomorphism. Negative answers come from
//! (a) a hom-dimension disproof, (b) exhaustive evaluation of `P` on a grid
//! `{0..D}^m` with `D = deg P`, which is exact since a nonzero polynomial of
//! degree `D` cannot vanish on such a grid, or (c) when the grid is too large,
//! repeated evaluation at random points from a range of size `> 4D`, where
//! each round misses a nonzero `P` with probability below 1/4.
//!
//! Over a prime field the grid is taken modulo `p`, so (b) is exact only
//! when `p > D`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::field::Field;

use super::{hom_dim, HomSpace, Rep, RepMorphism};

/// Retry schedule for random sampling of hom-space elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoSchedule {
    /// Inclusive coefficient ranges, tried in order.
    pub ranges: Vec<(i64, i64)>,
    pub tries_per_range: usize,
    /// Largest grid `(D+1)^m` evaluated exhaustively.
    pub grid_budget: usize,
    pub random_rounds: usize,
}

impl Default for IsoSchedule {
    fn default() -> Self {
        IsoSchedule { ranges: vec![(0, 1), (-2, 2), (-8, 8)], tries_per_range: 8, grid_budget: 4096, random_rounds: 64 }
    }
}

fn grid_size(side: usize, m: usize) -> Option<usize> {
    (0..m).try_fold(1usize, |acc, _| acc.checked_mul(side))
}

/// An explicit isomorphism `X -> Y`, if one exists.
pub fn find_isomorphism<F: Field>(
    x: &Arc<Rep<F>>,
    y: &Arc<Rep<F>>,
    seed: u64,
    schedule: &IsoSchedule,
) -> Result<Option<RepMorphism<F>>> {
    x.check_quiver(y)?;
    if x.dims() != y.dims() {
        return Ok(None);
    }
    if x.is_zero() {
        return Ok(Some(RepMorphism::zero(x.clone(), y.clone())?));
    }
    let space = HomSpace::new(x, y)?;
    let m = space.dim();
    if m == 0 || hom_dim(y, x)? != m || hom_dim(x, x)? != m || hom_dim(y, y)? != m {
        return Ok(None);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attempt = |coeffs: Vec<i64>| -> Option<RepMorphism<F>> {
        let c: Vec<F> = coeffs.into_iter().map(F::from_i64).collect();
        let h = space.combination(&c);
        h.is_isomorphism().then_some(h)
    };

    for &(lo, hi) in &schedule.ranges {
        for _ in 0..schedule.tries_per_range {
            let coeffs = (0..m).map(|_| rng.gen_range(lo..=hi)).collect();
            if let Some(h) = attempt(coeffs) {
                return Ok(Some(h));
            }
        }
    }

    let degree = x.total_dim();
    match grid_size(degree + 1, m) {
        Some(n) if n <= schedule.grid_budget => {
            let mut point = vec![0i64; m];
            for _ in 0..n {
                if let Some(h) = attempt(point.clone()) {
                    return Ok(Some(h));
                }
                for c in point.iter_mut() {
                    *c += 1;
                    if *c as usize <= degree {
                        break;
                    }
                    *c = 0;
                }
            }
            Ok(None)
        }
        _ => {
            let r = (2 * degree as i64).max(64);
            for _ in 0..schedule.random_rounds {
                let coeffs = (0..m).map(|_| rng.gen_range(-r..=r)).collect();
                if let Some(h) = attempt(coeffs) {
                    return Ok(Some(h));
                }
            }
            Ok(None)
        }
    }
}

/// Whether `X ≅ Y`; see the module docs for how negatives are certified.
pub fn is_isomorphic<F: Field>(x: &Arc<Rep<F>>, y: &Arc<Rep<F>>, seed: u64) -> Result<bool> {
    Ok(find_isomorphism(x, y, seed, &IsoSchedule::default())?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::linalg::Matrix;
    use crate::quiver::{direct_sum, DimVector, Quiver};

    fn kron(a: i64, b: i64) -> Arc<Rep<Rational>> {
        let q = Arc::new(Quiver::kronecker());
        Arc::new(
            Rep::new(q, DimVector(vec![1, 1]), vec![Matrix::from_i64_rows(&[&[a]]), Matrix::from_i64_rows(&[&[b]])])
                .unwrap(),
        )
    }

    #[test]
    fn basic_answers() {
        let x = kron(1, 0);
        assert!(is_isomorphic(&x, &x, 0).unwrap());
        assert!(!is_isomorphic(&x, &kron(0, 1), 0).unwrap());
        assert!(is_isomorphic(&x, &kron(3, 0), 0).unwrap());
        let s1 = Arc::new(Rep::simple(x.quiver().clone(), 0));
        assert!(!is_isomorphic(&x, &s1, 0).unwrap());
    }

    #[test]
    fn conjugated_sum_is_recognized() {
        let x = kron(1, 2);
        let y = kron(1, -1);
        let s = direct_sum(&x, &y).unwrap().sum;
        let p: Matrix<Rational> = Matrix::from_i64_rows(&[&[2, 1], &[1, 1]]);
        let q: Matrix<Rational> = Matrix::from_i64_rows(&[&[1, 3], &[0, 1]]);
        let conj = Arc::new(s.conjugate(&[p, q]).unwrap());
        let h = find_isomorphism(&s, &conj, 5, &IsoSchedule::default()).unwrap().unwrap();
        assert!(h.is_isomorphism());
        // R(1,2) + R(1,2) has the same dimension vector but is not isomorphic
        let other = direct_sum(&x, &x).unwrap().sum;
        assert!(!is_isomorphic(&s, &other, 5).unwrap());
        assert!(!is_isomorphic(&other, &s, 5).unwrap());
    }

    #[test]
    fn grid_certification_finds_sparse_isomorphisms() {
        // no random tries: only the exhaustive grid can answer
        let schedule = IsoSchedule { ranges: vec![], ..IsoSchedule::default() };
        let x = kron(1, 1);
        let s = direct_sum(&x, &kron(1, 0)).unwrap().sum;
        assert!(find_isomorphism(&s, &s, 0, &schedule).unwrap().is_some());
    }
}
