//! Seeded random instances and exhaustive enumerations.
//!
//! Random bits come from ChaCha8 seeded with a 64-bit seed, one fair coin
//! per bit in row order. Forcing an answer is a fix-up applied afterwards,
//! drawing any further randomness from the same generator.

use itertools::Itertools;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitVector;
use crate::ov::{DisjointnessInstance, OvInstance};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Which answer a generated instance must have.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum Force {
    /// Leave the coin flips alone.
    #[default]
    Any,
    /// Intersecting sets, or an orthogonal pair.
    Yes,
    /// Disjoint sets, or no orthogonal pair.
    No,
}

pub fn random_bits(len: usize, rng: &mut impl Rng) -> BitVector {
    BitVector::new((0..len).map(|_| rng.gen_bool(0.5)).collect())
}

/// A random disjointness instance over `[n]`. `Yes` sets `x[k] = y[k] = 1`
/// at a random `k` if the sets are disjoint; `No` clears `y[k]` wherever
/// both are set.
pub fn random_disjointness(n: usize, force: Force, rng: &mut impl Rng) -> DisjointnessInstance {
    let mut x = random_bits(n, rng);
    let mut y = random_bits(n, rng);
    match force {
        Force::Any => {}
        Force::Yes => {
            if (0..n).all(|k| !(x.get(k) && y.get(k))) {
                let k = rng.gen_range(0..n);
                x.set(k, true);
                y.set(k, true);
            }
        }
        Force::No => {
            for k in 0..n {
                if x.get(k) && y.get(k) {
                    y.set(k, false);
                }
            }
        }
    }
    DisjointnessInstance::new(x, y).expect("both sides have length n")
}

/// A random OV instance with `n` vectors per side in dimension `d`. `Yes`
/// clears from a random `r_j` every coordinate set in a random `l_i` if no
/// pair is orthogonal; `No` sets a random shared coordinate for each
/// orthogonal pair in turn until none remains.
pub fn random_ov(n: usize, d: usize, force: Force, rng: &mut impl Rng) -> OvInstance {
    let mut left: Vec<BitVector> = (0..n).map(|_| random_bits(d, rng)).collect();
    let mut right: Vec<BitVector> = (0..n).map(|_| random_bits(d, rng)).collect();
    let orthogonal = |l: &BitVector, r: &BitVector| l.is_orthogonal_to(r).expect("same dimension");
    match force {
        Force::Any => {}
        Force::Yes => {
            let has_pair = left.iter().any(|l| right.iter().any(|r| orthogonal(l, r)));
            if !has_pair {
                let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
                for k in 0..d {
                    if left[i].get(k) {
                        right[j].set(k, false);
                    }
                }
            }
        }
        Force::No => {
            for a in left.iter_mut() {
                for b in right.iter_mut() {
                    if orthogonal(a, b) {
                        let k = rng.gen_range(0..d);
                        a.set(k, true);
                        b.set(k, true);
                    }
                }
            }
        }
    }
    OvInstance::new(left, right).expect("generated rows are well formed")
}

/// All `4^n` disjointness instances over `[n]`, `x` varying slowest.
pub fn all_disjointness(n: usize) -> impl Iterator<Item = DisjointnessInstance> {
    let words = 1u64 << n;
    (0..words).cartesian_product(0..words).map(move |(x, y)| {
        DisjointnessInstance::new(BitVector::from_uint(x, n), BitVector::from_uint(y, n))
            .expect("same length")
    })
}

/// Every OV instance with sorted sides: the distinct instances up to
/// reordering the vectors within each side.
pub fn ov_multisets(n: usize, d: usize) -> Vec<OvInstance> {
    let sides: Vec<Vec<BitVector>> = (0..1u64 << d)
        .combinations_with_replacement(n)
        .map(|words| {
            words
                .into_iter()
                .map(|w| BitVector::from_uint(w, d))
                .collect()
        })
        .collect();
    sides
        .iter()
        .cartesian_product(&sides)
        .map(|(l, r)| OvInstance::new(l.clone(), r.clone()).expect("well formed"))
        .collect()
}

/// Canonical form under reordering vectors, permuting coordinates and
/// swapping the sides. Each of these maps a gadget to an isomorphic one.
pub fn symmetry_canonical(inst: &OvInstance) -> OvInstance {
    let d = inst.dimension();
    let permute =
        |v: &BitVector, perm: &[usize]| BitVector::new(perm.iter().map(|&k| v.get(k)).collect());
    let mut best: Option<(Vec<BitVector>, Vec<BitVector>)> = None;
    for perm in (0..d).permutations(d) {
        let mut l: Vec<BitVector> = inst.left().iter().map(|v| permute(v, &perm)).collect();
        let mut r: Vec<BitVector> = inst.right().iter().map(|v| permute(v, &perm)).collect();
        l.sort();
        r.sort();
        for cand in [(l.clone(), r.clone()), (r, l)] {
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    let (l, r) = best.expect("at least one permutation");
    OvInstance::new(l, r).expect("well formed")
}

/// One instance per symmetry class of [`ov_multisets`].
pub fn ov_representatives(n: usize, d: usize) -> Vec<OvInstance> {
    ov_multisets(n, d)
        .into_iter()
        .filter(|inst| symmetry_canonical(inst) == *inst)
        .collect()
}
