//! Brute-force reference implementations for desk-scale cross-checks.
//!
//! Nothing here calls into the block form, cocycle or automorphism code;
//! the overlap with the main algorithms is the `Relation` container and
//! the field arithmetic.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::StructMatrix;
use crate::automorphism::{enumerate_relation_automorphisms, AutomorphismSpec, DEFAULT_ENUMERATION_BOUND};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::perm::Permutation;
use crate::relation::Relation;
use crate::transitive::{cocycle_rank, ScalingVector, TransitiveFn};

pub const BRUTE_AUTOMORPHISM_BOUND: usize = 8;
pub const BRUTE_COCYCLE_BOUND: usize = 6;
pub const QUASIORDER_BOUND: usize = 4;

/// Every permutation `τ` of `{0..n}` with `(i,j) ∈ ρ ⟺ (τi,τj) ∈ ρ`, in
/// lexicographic order of image vectors.
pub fn brute_relation_automorphisms(rel: &Relation) -> Result<Vec<Permutation>> {
    let n = rel.n();
    if n > BRUTE_AUTOMORPHISM_BOUND {
        return Err(Error::BoundExceeded { n, bound: BRUTE_AUTOMORPHISM_BOUND });
    }
    let mut out = Vec::new();
    let mut image: Vec<usize> = (0..n).collect();
    loop {
        let preserves = (0..n).all(|i| (0..n).all(|j| rel.contains(i, j) == rel.contains(image[i], image[j])));
        if preserves {
            out.push(Permutation::from_images(image.clone()).expect("a permutation"));
        }
        if !next_permutation(&mut image) {
            break;
        }
    }
    Ok(out)
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("a larger suffix element");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Dimension of additive cocycles on ρ modulo coboundaries, from the full
/// system: one unknown per pair (diagonal included), one equation
/// `x(i,j) + x(j,k) − x(i,k) = 0` per composable pair of pairs.
pub fn brute_cocycle_rank(rel: &Relation) -> Result<usize> {
    let n = rel.n();
    if n > BRUTE_COCYCLE_BOUND {
        return Err(Error::BoundExceeded { n, bound: BRUTE_COCYCLE_BOUND });
    }
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| rel.contains(i, j)).collect();
    let index = |i: usize, j: usize| pairs.iter().position(|&p| p == (i, j)).expect("pair in ρ");

    let mut equations = Vec::new();
    for &(i, j) in &pairs {
        for &(j2, k) in &pairs {
            if j2 != j {
                continue;
            }
            let mut row = vec![BigRational::zero(); pairs.len()];
            row[index(i, j)] += BigRational::one();
            row[index(j, k)] += BigRational::one();
            row[index(i, k)] -= BigRational::one();
            equations.push(row);
        }
    }
    let solution_dim = pairs.len() - rational_rank(equations);

    // image of y ↦ (y_i − y_j) over the pairs
    let coboundary: Vec<Vec<BigRational>> = pairs
        .iter()
        .map(|&(i, j)| {
            let mut row = vec![BigRational::zero(); n];
            row[i] += BigRational::one();
            row[j] -= BigRational::one();
            row
        })
        .collect();
    let coboundary_dim = rational_rank(coboundary);
    Ok(solution_dim - coboundary_dim)
}

fn rational_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let Some(cols) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in rank + 1..rows.len() {
            if rows[r][c].is_zero() {
                continue;
            }
            let factor = &rows[r][c] / &pivot;
            let (top, rest) = rows.split_at_mut(r);
            for (x, p) in rest[0][c..].iter_mut().zip(&top[rank][c..]) {
                *x -= &factor * p;
            }
        }
        rank += 1;
    }
    rank
}

/// All reflexive transitive relations on `n` points, filtered from every
/// subset of the off-diagonal pairs.
pub fn enumerate_quasiorders(n: usize) -> Result<Vec<Relation>> {
    if n == 0 || n > QUASIORDER_BOUND {
        return Err(Error::BoundExceeded { n, bound: QUASIORDER_BOUND });
    }
    let off: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| i != j).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << off.len()) {
        let mut m = vec![vec![false; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = true;
        }
        for (bit, &(i, j)) in off.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                m[i][j] = true;
            }
        }
        let transitive =
            (0..n).all(|i| (0..n).all(|j| !m[i][j] || (0..n).all(|k| !m[j][k] || m[i][k])));
        if transitive {
            let pairs = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| m[i][j])
                .map(|(i, j)| (i + 1, j + 1));
            out.push(Relation::from_pairs(n, pairs)?);
        }
    }
    Ok(out)
}

/// The three factors drawn by [`random_factored_automorphism`].
#[derive(Debug, Clone)]
pub struct RandomFactors {
    pub a: StructMatrix,
    pub g: TransitiveFn,
    pub tau: Permutation,
}

impl RandomFactors {
    pub fn spec(&self) -> AutomorphismSpec {
        AutomorphismSpec::factored(self.a.clone(), self.g.clone(), self.tau.clone())
            .expect("factors are valid by construction")
    }
}

fn random_entry(rng: &mut ChaCha8Rng, field: Field) -> Scalar {
    match field {
        Field::Rational => field.from_i64(rng.random_range(-3..=3)),
        Field::Prime(p) => field.from_i64(rng.random_range(0..p) as i64),
    }
}

fn random_nonzero(rng: &mut ChaCha8Rng, field: Field) -> Scalar {
    match field {
        Field::Rational => {
            let num = rng.random_range(1..=3) * if rng.random_bool(0.5) { 1 } else { -1 };
            field.from_ratio(num, rng.random_range(1..=3)).expect("nonzero denominator")
        }
        Field::Prime(p) => field.from_i64(rng.random_range(1..p) as i64),
    }
}

/// Random invertible in-pattern `A`, uniform relation automorphism `τ`,
/// and `g` = random powers of the canonical generators times a random
/// coboundary. Deterministic in `seed`.
pub fn random_factors(rel: &Arc<Relation>, field: Field, seed: u64) -> Result<RandomFactors> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rel.n();
    let pairs = rel.pairs();

    let a = loop {
        let mut a = StructMatrix::zero(Arc::clone(rel), field);
        for &(i, j) in &pairs {
            a.set(i, j, random_entry(&mut rng, field))?;
        }
        if a.invert().is_ok() {
            break a;
        }
    };

    let autos = enumerate_relation_automorphisms(rel, DEFAULT_ENUMERATION_BOUND.max(n))?;
    let tau = autos[rng.random_range(0..autos.len())].clone();

    let basis = cocycle_rank(rel)?;
    let powers: Vec<(Scalar, i64)> = (0..basis.rank)
        .map(|_| (random_nonzero(&mut rng, field), rng.random_range(-3..=3)))
        .collect();
    let cocycle = basis.power_function(Arc::clone(rel), field, &powers)?;
    let s = ScalingVector::new((0..n).map(|_| random_nonzero(&mut rng, field)).collect())?;
    let g = cocycle.product(&TransitiveFn::coboundary(Arc::clone(rel), &s)?)?;

    Ok(RandomFactors { a, g, tau })
}

pub fn random_factored_automorphism(rel: &Arc<Relation>, field: Field, seed: u64) -> Result<AutomorphismSpec> {
    Ok(random_factors(rel, field, seed)?.spec())
}
