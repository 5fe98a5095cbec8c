//! The stable module category: projective covers, syzygies, free-summand
//! stripping, and stable comparison of maps and modules.
//!
//! Over a connected finite-dimensional Hopf algebra the free, projective and
//! injective modules coincide, so the stable category is obtained by killing
//! free summands. Two facts drive the algorithms here. First, minimal covers
//! come from the head: `M / rad M` names the generators, and the cover is
//! the induced map out of the matching free module. Second, the integral
//! detects freeness: its action on a module has rank exactly the number of
//! free summands, and any vector it does not kill generates a free summand
//! that splits off. Syzygy functors are the kernels and cokernels of covers
//! and hulls, with free parts stripped.

mod ext;

pub use ext::{resolve, stable_ext, yoneda_action, ExtClass, Resolution, StableExtChart};

use crate::gmod::{hom_space, is_isomorphic, FreeModule, GmodError, GradedModule, HomSystem, ModuleMap};
use crate::hopf::preset;
use crate::linalg2::{BitVec, Subspace};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StableError {
    #[error("the zero module has no projective cover")]
    ZeroModule,
    #[error(transparent)]
    Module(#[from] GmodError),
}

/// The minimal projective cover onto the head, with generators listed in
/// degree order. Optionally only covers head classes in degrees `<= t_cut`,
/// which keeps truncated resolutions exact in all degrees up to the cutoff.
pub(crate) fn cover_through_degree(
    m: &GradedModule,
    t_cut: i64,
) -> Result<(FreeModule, ModuleMap), StableError> {
    let rad = m.rad_subspaces();
    let mut gens = Vec::new();
    let mut images = Vec::new();
    for (off, sub) in rad.iter().enumerate() {
        let d = m.lo() + off as i64;
        if d > t_cut {
            continue;
        }
        let reps = Subspace::full(m.dim(d)).quotient_basis(sub).expect("rad is a subspace");
        for rep in reps {
            gens.push(d);
            images.push(rep);
        }
    }
    let free = FreeModule::new(m.algebra().clone(), gens);
    let q = free.hom_to(m, 0, &images)?;
    Ok((free, q))
}

/// The projective cover: the free module on the head together with the
/// surjection whose kernel lies in the radical.
pub fn projective_cover(m: &GradedModule) -> Result<(FreeModule, ModuleMap), StableError> {
    if m.is_zero() {
        return Err(StableError::ZeroModule);
    }
    let (p, q) = cover_through_degree(m, m.hi())?;
    debug_assert!(q.is_surjective(), "cover of the head must be onto");
    Ok((p, q))
}

/// The injective hull, built as the dual of the projective cover of the
/// dual module.
pub fn injective_hull(m: &GradedModule) -> Result<(GradedModule, ModuleMap), StableError> {
    let (p, q) = projective_cover(&m.dual())?;
    Ok((p.module().dual(), q.dual_map()))
}

/// The syzygy: kernel of the projective cover, free summands stripped.
/// Returns the zero module for zero or free input.
pub fn omega(m: &GradedModule) -> GradedModule {
    let (reduced, _) = strip_free(m);
    if reduced.is_zero() {
        return reduced;
    }
    let (_, q) = projective_cover(&reduced).expect("nonzero after stripping");
    let (k, _) = q.kernel();
    strip_free(&k).0
}

/// The cosyzygy: cokernel of the injective hull, free summands stripped.
pub fn omega_inv(m: &GradedModule) -> GradedModule {
    omega(&m.dual()).dual()
}

/// Split off free summands greedily and return the reduced module along with
/// the generator-degree multiset of the removed free part.
///
/// A vector the integral does not kill generates a free rank-one submodule,
/// which is injective and therefore a direct summand; the complement is the
/// kernel of any retraction. The loop ends exactly when the integral acts as
/// zero everywhere, and the number of summands found always equals the total
/// rank of the integral action on the input.
pub fn strip_free(m: &GradedModule) -> (GradedModule, BTreeMap<i64, usize>) {
    let (reduced, _, _, ranks) = strip_free_full(m);
    (reduced, ranks)
}

/// Like [`strip_free`], but also returns the split pair realizing the
/// summand decomposition: an inclusion `reduced -> m` and a retraction
/// `m -> reduced` with `retr . incl = id`.
pub fn strip_free_maps(m: &GradedModule) -> (GradedModule, ModuleMap, ModuleMap) {
    let (reduced, incl, retr, _) = strip_free_full(m);
    (reduced, incl, retr)
}

fn strip_free_full(
    m: &GradedModule,
) -> (GradedModule, ModuleMap, ModuleMap, BTreeMap<i64, usize>) {
    let expected: usize = m.degrees().map(|d| m.integral_action(d).rank()).sum();
    let mut cur = m.clone();
    let mut incl_acc = ModuleMap::identity(m);
    let mut retr_acc = ModuleMap::identity(m);
    let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
    'strip: loop {
        for d in cur.lo()..=cur.hi() {
            let t_act = cur.integral_action(d);
            if t_act.is_zero() {
                continue;
            }
            let col = (0..t_act.cols())
                .find(|&c| (0..t_act.rows()).any(|r| t_act.get(r, c)))
                .expect("nonzero matrix has a nonzero column");
            let v = BitVec::unit(cur.dim(d), col);
            let free = FreeModule::new(cur.algebra().clone(), vec![d]);
            let incl = free.hom_to(&cur, 0, &[v]).expect("generator image in range");
            debug_assert!(incl.is_injective(), "integral-detected generators embed freely");
            let mut sys =
                HomSystem::new(&cur, free.module(), 0).expect("same algebra");
            sys.require_pre(&incl, &ModuleMap::identity(free.module()))
                .expect("constraint shapes agree");
            let r = sys.solve_one().expect("free submodules are split");
            let (complement, compl_incl) = r.kernel();
            // the projector onto the complement along the free summand is
            // id + incl . r; its corestriction is the step retraction
            let proj_mats: Vec<_> = cur
                .degrees()
                .map(|e| {
                    let p = crate::linalg2::BitMatrix::identity(cur.dim(e))
                        .add(&incl.mat(e).mul(&r.mat(e)));
                    compl_incl
                        .mat(e)
                        .solve_matrix(&p)
                        .expect("ambient dimensions agree")
                        .expect("the projector lands in the complement")
                })
                .collect();
            let step_retr =
                ModuleMap::assemble(cur.clone(), complement.clone(), 0, proj_mats);
            incl_acc = incl_acc.compose(&compl_incl).expect("chain of inclusions");
            retr_acc = step_retr.compose(&retr_acc).expect("chain of retractions");
            *ranks.entry(d).or_insert(0) += 1;
            cur = complement;
            continue 'strip;
        }
        break;
    }
    debug_assert_eq!(
        ranks.values().sum::<usize>(),
        expected,
        "integral rank must count the free summands"
    );
    (cur, incl_acc, retr_acc, ranks)
}

/// Whether a map factors through a projective module; equivalently, whether
/// it lifts through the projective cover of its target.
pub fn is_stably_trivial(f: &ModuleMap) -> bool {
    if f.is_zero_map() || f.source().is_zero() || f.target().is_zero() {
        return true;
    }
    let (p, q) = projective_cover(f.target()).expect("nonzero target");
    let mut sys = HomSystem::new(f.source(), p.module(), f.shift()).expect("same algebra");
    sys.require_post(&q, f).expect("constraint shapes agree");
    sys.solve_one().is_some()
}

/// Stable isomorphism: literal isomorphism of the stripped representatives.
pub fn is_stably_iso(m: &GradedModule, n: &GradedModule) -> bool {
    let (rm, _) = strip_free(m);
    let (rn, _) = strip_free(n);
    is_isomorphic(&rm, &rn)
}

/// Dimension of the space of degree-preserving maps `m -> n` modulo those
/// factoring through projectives.
pub fn stable_hom_dim(m: &GradedModule, n: &GradedModule) -> usize {
    let h = match hom_space(m, n, 0) {
        Ok(h) => h,
        Err(_) => return 0,
    };
    if h.is_empty() {
        return h.len();
    }
    if n.is_zero() || m.is_zero() {
        return 0;
    }
    // the maps factoring through projectives form the image of composition
    // with the cover of n; subtract its rank
    let (p, q) = projective_cover(n).expect("nonzero");
    let lifts = hom_space(m, p.module(), 0).expect("same algebra");
    let flatten = |f: &ModuleMap| -> BitVec {
        let mut out = BitVec::zeros(0);
        for d in m.lo()..=m.hi() {
            let mat = f.mat(d);
            for r in 0..mat.rows() {
                out = out.concat(&mat.row(r));
            }
        }
        out
    };
    let width = flatten(&h[0]).len();
    let factoring: Vec<BitVec> = lifts
        .iter()
        .map(|g| flatten(&q.compose(g).expect("cover composes with lifts")))
        .collect();
    let rank = crate::linalg2::BitMatrix::from_rows(&factoring, width).rank();
    h.len() - rank
}

/// The degree-two stable cohomology generator over `A(1)`, as an honest
/// module map from the syzygy of the unit to a shifted unit. Its stable
/// class is eta; tensoring with an identity map gives the eta-action on any
/// module.
pub fn eta_representative() -> ModuleMap {
    let a = preset("A1").expect("built-in preset");
    let u = crate::gmod::unit_module(&a);
    let (_, q) = projective_cover(&u).expect("unit is nonzero");
    let (w, _) = q.kernel();
    let h = hom_space(&w, &u.shift(2), 0).expect("same algebra");
    assert_eq!(h.len(), 1, "one functional on the degree-two head class");
    let f = h.into_iter().next().expect("nonempty");
    debug_assert!(!is_stably_trivial(&f));
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmod::{decompose, induced_cell, joker, random_module, unit_module};
    use crate::hopf::AlgebraRef;

    fn a1() -> AlgebraRef {
        preset("A1").unwrap()
    }

    #[test]
    fn the_cover_of_the_unit_is_the_augmentation() {
        let u = unit_module(&a1());
        let (p, q) = projective_cover(&u).unwrap();
        assert_eq!(p.gens(), &[0]);
        assert!(q.is_surjective());
        let (k, _) = q.kernel();
        assert_eq!(
            k.dims_list(),
            vec![(1, 1), (2, 1), (3, 2), (4, 1), (5, 1), (6, 1)]
        );
    }

    #[test]
    fn the_cover_of_a_free_module_is_an_isomorphism() {
        let f = FreeModule::new(a1(), vec![0, 2]).into_module();
        let (p, q) = projective_cover(&f).unwrap();
        assert_eq!(p.gens(), &[0, 2]);
        assert!(q.is_bijective());
    }

    #[test]
    fn the_cover_of_the_joker_has_the_expected_kernel() {
        let j = joker();
        let (p, q) = projective_cover(&j).unwrap();
        assert_eq!(p.gens(), &[0]);
        let (k, _) = q.kernel();
        assert_eq!(k.dims_list(), vec![(3, 1), (4, 0), (5, 1), (6, 1)]);
    }

    #[test]
    fn covers_error_on_the_zero_module() {
        let z = GradedModule::zero(a1());
        assert!(matches!(projective_cover(&z), Err(StableError::ZeroModule)));
    }

    #[test]
    fn the_hull_embeds_the_unit_into_a_shifted_free_module() {
        let u = unit_module(&a1());
        let (i, j) = injective_hull(&u).unwrap();
        assert_eq!(i.lo(), -6);
        assert_eq!(i.total_dim(), 8);
        assert!(j.is_injective());
        assert!(j.source().strict_eq(&u));
    }

    #[test]
    fn omega_kills_projectives() {
        let f = FreeModule::new(a1(), vec![0, 3]).into_module();
        assert!(omega(&f).is_zero());
        assert!(omega(&GradedModule::zero(a1())).is_zero());
    }

    #[test]
    fn omega_of_the_unit_over_exterior_algebras_is_a_shifted_unit() {
        for (name, shift) in [("lambda(0)", 1), ("lambda(1)", 3)] {
            let a = preset(name).unwrap();
            let u = unit_module(&a);
            let w = omega(&u);
            assert_eq!(w.dims_list(), vec![(shift, 1)], "over {name}");
            assert!(is_isomorphic(&w, &u.shift(shift)));
        }
    }

    #[test]
    fn omega_and_omega_inv_are_mutually_inverse_on_random_modules() {
        let a = a1();
        for seed in 0..100 {
            let m = random_module(&a, seed);
            let (rm, _) = strip_free(&m);
            let back = omega_inv(&omega(&m));
            assert!(is_isomorphic(&back, &rm), "seed {seed}");
        }
    }

    #[test]
    fn omega_inv_then_omega_returns_small_modules() {
        for m in [unit_module(&a1()), joker(), induced_cell(&a1(), 2).unwrap()] {
            let round = omega(&omega_inv(&m));
            assert!(is_isomorphic(&round, &strip_free(&m).0));
        }
    }

    #[test]
    fn stripping_a_free_module_leaves_nothing() {
        let f = FreeModule::new(a1(), vec![0]).into_module();
        let (reduced, ranks) = strip_free(&f);
        assert!(reduced.is_zero());
        assert_eq!(ranks, BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn stripping_is_additive_over_free_summands() {
        let j = joker();
        let f3 = FreeModule::new(a1(), vec![3]).into_module();
        let (reduced, ranks) = strip_free(&j.direct_sum(&f3).unwrap());
        assert!(is_isomorphic(&reduced, &j));
        assert_eq!(ranks, BTreeMap::from([(3, 1)]));
    }

    #[test]
    fn stripping_the_double_joker_agrees_with_decomposition() {
        let j = joker();
        let jj = j.tensor(&j).unwrap();
        let (reduced, ranks) = strip_free(&jj);
        let stripped: usize = ranks.values().sum();
        assert_eq!(reduced.total_dim() + 8 * stripped, 25);
        let factors = decompose(&jj);
        let free_factors: Vec<_> =
            factors.iter().filter(|f| strip_free(f).0.is_zero()).collect();
        assert_eq!(free_factors.len(), stripped);
        let rest = factors
            .iter()
            .filter(|f| !strip_free(f).0.is_zero())
            .try_fold(GradedModule::zero(a1()), |acc, f| acc.direct_sum(f))
            .unwrap();
        assert!(is_isomorphic(&reduced, &rest));
    }

    #[test]
    fn strip_maps_split_off_the_reduced_part() {
        let j = joker();
        let f3 = FreeModule::new(a1(), vec![3]).into_module();
        let sum = j.direct_sum(&f3).unwrap();
        let (reduced, incl, retr) = strip_free_maps(&sum);
        assert!(is_isomorphic(&reduced, &j));
        assert!(incl.is_injective());
        assert!(retr.is_surjective());
        let round = retr.compose(&incl).unwrap();
        assert!(round.map_eq(&ModuleMap::identity(&reduced)));
    }

    #[test]
    fn integral_rank_counts_free_summands_on_random_modules() {
        let a = a1();
        for seed in 0..30 {
            let m = random_module(&a, seed);
            let rank: usize = m.degrees().map(|d| m.integral_action(d).rank()).sum();
            let (reduced, ranks) = strip_free(&m);
            assert_eq!(ranks.values().sum::<usize>(), rank, "seed {seed}");
            let reduced_rank: usize =
                reduced.degrees().map(|d| reduced.integral_action(d).rank()).sum();
            assert_eq!(reduced_rank, 0, "seed {seed}");
        }
    }

    #[test]
    fn identity_of_a_free_module_is_stably_trivial() {
        let f = FreeModule::new(a1(), vec![0]).into_module();
        assert!(is_stably_trivial(&ModuleMap::identity(&f)));
        let j = joker();
        assert!(!is_stably_trivial(&ModuleMap::identity(&j)));
    }

    #[test]
    fn stable_isomorphism_ignores_free_summands() {
        let j = joker();
        let f = FreeModule::new(a1(), vec![2]).into_module();
        assert!(is_stably_iso(&j, &j.direct_sum(&f).unwrap()));
        assert!(!is_stably_iso(&j, &unit_module(&a1())));
        assert!(is_stably_iso(&f, &GradedModule::zero(a1())));
    }

    #[test]
    fn the_eta_representative_is_stably_essential() {
        let eta = eta_representative();
        assert_eq!(eta.source().dims_list()[..2], [(1, 1), (2, 1)]);
        assert!(!is_stably_trivial(&eta));
        // eta acts trivially on any free module
        let f = FreeModule::new(a1(), vec![0]).into_module();
        let on_free = eta.tensor_with(&ModuleMap::identity(&f));
        assert!(is_stably_trivial(&on_free));
    }

    #[test]
    fn stable_hom_of_the_unit_with_itself_is_one_dimensional() {
        let u = unit_module(&a1());
        assert_eq!(stable_hom_dim(&u, &u), 1);
        let f = FreeModule::new(a1(), vec![0]).into_module();
        assert_eq!(stable_hom_dim(&f, &f), 0);
        assert_eq!(stable_hom_dim(&u, &f), 0);
    }
}
