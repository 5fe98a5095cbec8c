//! Isomorphism testing and direct-sum decomposition.
//!
//! An isomorphism, if one exists, is a unit in the space of degree-zero
//! maps. The search scans the computed basis of that space, then all of its
//! combinations when the basis is small, then seeded random combinations.
//! For indecomposable modules the non-invertible maps form a proper
//! subspace, so random combinations succeed quickly; the final fallback
//! decomposes both sides and matches factors.
//!
//! Decomposition uses stabilized powers: when an endomorphism's rank stops
//! dropping under squaring, its image and kernel split the module.

use super::{hom_space, same_algebra, GradedModule, ModuleMap};
use crate::linalg2::BitMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXHAUSTIVE_LIMIT: usize = 16;
const RANDOM_TRIALS: usize = 200;
const SPLIT_TRIALS: usize = 50;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Verdict {
    Yes,
    No,
    Unknown,
}

fn degreewise_mats(m: &GradedModule, f: &ModuleMap) -> Vec<BitMatrix> {
    m.degrees().map(|d| f.mat(d)).collect()
}

fn all_invertible(mats: &[BitMatrix]) -> bool {
    mats.iter().all(BitMatrix::is_invertible)
}

/// Search for an invertible element in the span of `basis`, scanning single
/// elements, then all combinations (small bases), then random ones.
fn find_unit(a: &GradedModule, basis: &[ModuleMap]) -> Verdict {
    for f in basis {
        if f.is_bijective() {
            return Verdict::Yes;
        }
    }
    let mats: Vec<Vec<BitMatrix>> = basis.iter().map(|f| degreewise_mats(a, f)).collect();
    let zero: Vec<BitMatrix> =
        a.degrees().map(|d| BitMatrix::zeros(a.dim(d), a.dim(d))).collect();
    if basis.len() <= EXHAUSTIVE_LIMIT {
        // walk combinations in Gray-code order: one basis summand toggles
        // per step
        let mut cur = zero;
        let mut prev = 0u64;
        for i in 1..(1u64 << basis.len()) {
            let gray = i ^ (i >> 1);
            let toggled = (gray ^ prev).trailing_zeros() as usize;
            prev = gray;
            for (c, b) in cur.iter_mut().zip(&mats[toggled]) {
                *c = c.add(b);
            }
            if all_invertible(&cur) {
                return Verdict::Yes;
            }
        }
        Verdict::No
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5AB1E);
        for _ in 0..RANDOM_TRIALS {
            let mut cur = zero.clone();
            let mut any = false;
            for m in &mats {
                if rng.random::<bool>() {
                    any = true;
                    for (c, b) in cur.iter_mut().zip(m) {
                        *c = c.add(b);
                    }
                }
            }
            if any && all_invertible(&cur) {
                return Verdict::Yes;
            }
        }
        Verdict::Unknown
    }
}

fn direct_verdict(a: &GradedModule, b: &GradedModule) -> Verdict {
    if !same_algebra(a.algebra(), b.algebra()) {
        return Verdict::No;
    }
    if a.is_zero() && b.is_zero() {
        return Verdict::Yes;
    }
    if a.lo() != b.lo() || a.dims_list() != b.dims_list() {
        return Verdict::No;
    }
    let h = match hom_space(a, b, 0) {
        Ok(h) => h,
        Err(_) => return Verdict::No,
    };
    if h.is_empty() {
        return Verdict::No;
    }
    find_unit(a, &h)
}

/// Whether two modules over the same algebra are isomorphic.
pub fn is_isomorphic(a: &GradedModule, b: &GradedModule) -> bool {
    match direct_verdict(a, b) {
        Verdict::Yes => true,
        Verdict::No => false,
        Verdict::Unknown => {
            let fa = decompose(a);
            let fb = decompose(b);
            if fa.len() != fb.len() {
                return false;
            }
            if fa.len() <= 1 {
                // could not split either side; the randomized search above
                // already failed overwhelmingly often for genuine isos
                return false;
            }
            let mut used = vec![false; fb.len()];
            'outer: for x in &fa {
                for (j, y) in fb.iter().enumerate() {
                    if !used[j] && direct_verdict(x, y) == Verdict::Yes {
                        used[j] = true;
                        continue 'outer;
                    }
                }
                return false;
            }
            true
        }
    }
}

/// Total rank of a degree-zero endomorphism.
fn total_rank(m: &GradedModule, f: &ModuleMap) -> usize {
    m.degrees().map(|d| f.mat(d).rank()).sum()
}

/// If repeated squaring of `f` stabilizes at partial rank, return the
/// resulting image/kernel splitting.
fn fitting_split(m: &GradedModule, f: &ModuleMap) -> Option<(GradedModule, GradedModule)> {
    let total = m.total_dim();
    let mut g = f.clone();
    let mut r = total_rank(m, &g);
    loop {
        if r == 0 || r == total {
            return None;
        }
        let g2 = g.compose(&g).expect("endomorphism composes with itself");
        let r2 = total_rank(m, &g2);
        if r2 == r {
            let (im, _) = g2.image();
            let (ker, _) = g2.kernel();
            debug_assert_eq!(im.total_dim() + ker.total_dim(), total);
            return Some((im, ker));
        }
        g = g2;
        r = r2;
    }
}

fn sort_key(m: &GradedModule) -> (i64, usize, Vec<(i64, usize)>) {
    (m.lo(), m.total_dim(), m.dims_list())
}

/// Split into direct summands, recursively, via stabilized endomorphisms.
/// Factors come back in a deterministic order; a module that no candidate
/// endomorphism splits is returned whole.
pub fn decompose(m: &GradedModule) -> Vec<GradedModule> {
    if m.is_zero() {
        return Vec::new();
    }
    let endos = hom_space(m, m, 0).expect("endomorphisms of a module");
    let mut split = None;
    for f in &endos {
        if let Some(parts) = fitting_split(m, f) {
            split = Some(parts);
            break;
        }
    }
    if split.is_none() && endos.len() > 1 {
        let mats: Vec<Vec<BitMatrix>> = endos.iter().map(|f| degreewise_mats(m, f)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(0xF177);
        for _ in 0..SPLIT_TRIALS {
            let mut cur: Vec<BitMatrix> =
                m.degrees().map(|d| BitMatrix::zeros(m.dim(d), m.dim(d))).collect();
            for fm in &mats {
                if rng.random::<bool>() {
                    for (c, b) in cur.iter_mut().zip(fm) {
                        *c = c.add(b);
                    }
                }
            }
            let f = ModuleMap::assemble(m.clone(), m.clone(), 0, cur);
            if let Some(parts) = fitting_split(m, &f) {
                split = Some(parts);
                break;
            }
        }
    }
    match split {
        Some((x, y)) => {
            let mut out = decompose(&x);
            out.extend(decompose(&y));
            out.sort_by_key(sort_key);
            out
        }
        None => vec![m.clone()],
    }
}
