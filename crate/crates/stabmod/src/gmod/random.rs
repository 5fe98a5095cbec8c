//! Seeded pseudo-random modules: quotients of small free modules by random
//! action-closed subspaces. Deterministic per seed, used for property tests.

use super::{FreeModule, GradedModule};
use crate::hopf::AlgebraRef;
use crate::linalg2::BitVec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random quotient of a free module on one to three generators in degrees
/// zero through five, by the closure of up to four random vectors. The same
/// seed always yields the same module.
pub fn random_module(algebra: &AlgebraRef, seed: u64) -> GradedModule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_gens = rng.random_range(1..=3);
    let gens: Vec<i64> = (0..n_gens).map(|_| rng.random_range(0..=5)).collect();
    let free = FreeModule::new(algebra.clone(), gens).into_module();
    let n_rels = rng.random_range(0..=4);
    let mut seeds: Vec<(i64, BitVec)> = Vec::new();
    for _ in 0..n_rels {
        // bias relation degrees upward so quotients keep their bottom classes
        let d = rng.random_range(free.lo() + 1..=free.hi());
        let n = free.dim(d);
        if n == 0 {
            continue;
        }
        let mut v = BitVec::zeros(n);
        for i in 0..n {
            if rng.random::<bool>() {
                v.set(i, true);
            }
        }
        if !v.is_zero() {
            seeds.push((d, v));
        }
    }
    let subs = free.close_under_action(&seeds).expect("seeds live in the module");
    let (q, _) = free.quotient_induced(&subs).expect("closed by construction");
    q
}
