//! Support at desk scale. The computable shadow of a module's support is its
//! concentration profile — which Margolis operations see it — and the open
//! sets that matter are the segmental ones, generated by contiguous blocks
//! of operation indices. This module packages the profile-level support
//! calculus (union, intersection, extension bounds), recognizes the covers
//! given by partitions into segments, and, for the two-operation algebra
//! `A1`, decides membership in each of the three points of its spectrum.
//!
//! The membership test for the generic point asks whether tensoring the
//! degree-raising extension class with the module kills it stably; the
//! underlying theory only pins this down modulo nilpotence, so a returned
//! set that fails to be closed under specialization is a reportable finding
//! rather than an impossibility.

use crate::gmod::{GradedModule, ModuleMap};
use crate::margolis::{concentration, margolis_homology, CheckReport, ConcentrationProfile};
use crate::stable::{eta_representative, is_stably_trivial};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectrumError {
    #[error("point membership requires the A1 preset, got {0}")]
    NotA1(String),
    #[error("invalid segment {0}:{1} over {2} operations")]
    BadSegment(usize, usize, usize),
}

/// The open set attached to a contiguous block `[a, b]` of operation
/// indices: the complement of the closed set of modules whose profile
/// avoids the block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SegmentalOpen {
    a: usize,
    b: usize,
    n_ops: usize,
}

impl SegmentalOpen {
    pub fn new(a: usize, b: usize, n_ops: usize) -> Result<SegmentalOpen, SpectrumError> {
        if a < 1 || a > b || b > n_ops {
            return Err(SpectrumError::BadSegment(a, b, n_ops));
        }
        Ok(SegmentalOpen { a, b, n_ops })
    }

    pub fn segment(&self) -> (usize, usize) {
        (self.a, self.b)
    }

    pub fn n_ops(&self) -> usize {
        self.n_ops
    }

    /// Whether the support of a module with this profile meets the open:
    /// true exactly when the profile intersects the segment.
    pub fn sees(&self, profile: &ConcentrationProfile) -> bool {
        profile.meets_segment(self.a, self.b)
    }
}

/// The support shadow of `m`: the set of operation indices whose Margolis
/// homology is nonzero. Identical to the concentration profile; the name
/// records that at this level profiles are how support is observed.
pub fn support_profile(m: &GradedModule) -> ConcentrationProfile {
    concentration(m)
}

/// Whether the given segments form a cover: a partition of `1..=n_ops`
/// into contiguous blocks, in any order.
pub fn is_cover(n_ops: usize, segments: &[(usize, usize)]) -> bool {
    if n_ops == 0 || segments.is_empty() {
        return false;
    }
    if segments.iter().any(|&(a, b)| a < 1 || a > b || b > n_ops) {
        return false;
    }
    let mut sorted = segments.to_vec();
    sorted.sort_unstable();
    let mut next = 1;
    for (a, b) in sorted {
        if a != next {
            return false;
        }
        next = b + 1;
    }
    next == n_ops + 1
}

/// Check the profile-level support calculus on samples: direct sums take
/// unions, tensor products take intersections, and the middle of a short
/// exact sequence stays inside the union of the ends.
pub fn support_lattice_checks(
    pairs: &[(GradedModule, GradedModule)],
    extensions: &[(ModuleMap, ModuleMap)],
) -> CheckReport {
    let mut report = CheckReport::passing(None);
    report.dims.insert("pairs".into(), pairs.len());
    report.dims.insert("extensions".into(), extensions.len());
    for (i, (m, n)) in pairs.iter().enumerate() {
        let pm = support_profile(m);
        let pn = support_profile(n);
        match m.direct_sum(n) {
            Ok(sum) if support_profile(&sum) == pm.union(&pn) => {}
            Ok(_) => report.fail(format!("pair {i}: sum profile is not the union")),
            Err(e) => report.fail(format!("pair {i}: {e}")),
        }
        match m.tensor(n) {
            Ok(t) if support_profile(&t) == pm.intersect(&pn) => {}
            Ok(_) => report.fail(format!("pair {i}: tensor profile is not the intersection")),
            Err(e) => report.fail(format!("pair {i}: {e}")),
        }
    }
    for (i, (incl, proj)) in extensions.iter().enumerate() {
        let y = incl.target();
        let sound = proj.compose(incl).map(|c| c.is_zero_map()).unwrap_or(false)
            && y.degrees().all(|d| incl.source().dim(d) + proj.target().dim(d) == y.dim(d));
        if !sound {
            report.fail(format!("extension {i}: not a short exact sequence"));
            continue;
        }
        let bound = support_profile(incl.source()).union(&support_profile(proj.target()));
        if !support_profile(y).is_subset(&bound) {
            report.fail(format!("extension {i}: middle support exceeds the union of the ends"));
        }
    }
    report
}

/// A subset of the three points of the `A1` spectrum. `s0` and `s1` are the
/// closed points, `s01` the generic one; a subset closed under
/// specialization contains both closed points whenever it contains `s01`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct A1Support {
    pub s0: bool,
    pub s1: bool,
    pub s01: bool,
}

impl A1Support {
    pub fn empty() -> A1Support {
        A1Support { s0: false, s1: false, s01: false }
    }

    pub fn full() -> A1Support {
        A1Support { s0: true, s1: true, s01: true }
    }

    pub fn is_empty(&self) -> bool {
        !(self.s0 || self.s1 || self.s01)
    }

    pub fn is_full(&self) -> bool {
        self.s0 && self.s1 && self.s01
    }

    pub fn is_closed(&self) -> bool {
        !self.s01 || (self.s0 && self.s1)
    }

    pub fn points(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.s0 {
            out.push("S0");
        }
        if self.s1 {
            out.push("S1");
        }
        if self.s01 {
            out.push("S01");
        }
        out
    }
}

/// The support of `m` inside the three-point spectrum of `A1`.
///
/// The module misses the point `S1` when its first Margolis homology
/// vanishes, misses `S0` when the second vanishes, and misses the generic
/// point when tensoring the eta representative with its identity is stably
/// trivial. The returned set should be closed; callers treat a non-closed
/// set as a finding.
pub fn a1_membership(m: &GradedModule) -> Result<A1Support, SpectrumError> {
    if m.algebra().name() != "A1" {
        return Err(SpectrumError::NotA1(m.algebra().name().to_string()));
    }
    let s1 = !margolis_homology(m, 1).expect("A1 has two operations").is_zero();
    let s0 = !margolis_homology(m, 2).expect("A1 has two operations").is_zero();
    let eta_m = eta_representative().tensor_with(&ModuleMap::identity(m));
    let s01 = !is_stably_trivial(&eta_m);
    Ok(A1Support { s0, s1, s01 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmod::{induced_cell, joker, random_module, unit_module, FreeModule};
    use crate::hopf::preset;
    use crate::linalg2::BitVec;

    fn a1() -> crate::hopf::AlgebraRef {
        preset("A1").unwrap()
    }

    #[test]
    fn segments_validate_their_bounds() {
        assert!(SegmentalOpen::new(1, 2, 2).is_ok());
        assert!(matches!(SegmentalOpen::new(0, 1, 2), Err(SpectrumError::BadSegment(0, 1, 2))));
        assert!(SegmentalOpen::new(2, 1, 2).is_err());
        assert!(SegmentalOpen::new(1, 3, 2).is_err());
        assert_eq!(SegmentalOpen::new(1, 1, 2).unwrap().segment(), (1, 1));
    }

    #[test]
    fn the_unit_meets_every_open_and_frees_meet_none() {
        let a = a1();
        let unit = support_profile(&unit_module(&a));
        let free = support_profile(FreeModule::new(a.clone(), vec![0]).module());
        for (x, y) in [(1, 1), (2, 2), (1, 2)] {
            let open = SegmentalOpen::new(x, y, 2).unwrap();
            assert!(open.sees(&unit));
            assert!(!open.sees(&free));
        }
    }

    #[test]
    fn cover_detection_matches_exhaustive_coverage_counting() {
        for n in 1..=5usize {
            let mut segments = Vec::new();
            for a in 1..=n {
                for b in a..=n {
                    segments.push((a, b));
                }
            }
            for mask in 0u32..(1 << segments.len()) {
                let chosen: Vec<(usize, usize)> = segments
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &s)| s)
                    .collect();
                let mut counts = vec![0usize; n + 1];
                for &(a, b) in &chosen {
                    for k in a..=b {
                        counts[k] += 1;
                    }
                }
                let expected = !chosen.is_empty() && (1..=n).all(|k| counts[k] == 1);
                assert_eq!(is_cover(n, &chosen), expected, "n={n} segments {chosen:?}");
            }
        }
    }

    #[test]
    fn the_two_block_cover_is_accepted_in_any_order() {
        assert!(is_cover(2, &[(1, 1), (2, 2)]));
        assert!(is_cover(2, &[(2, 2), (1, 1)]));
        assert!(is_cover(2, &[(1, 2)]));
        assert!(!is_cover(2, &[(1, 1)]));
        assert!(!is_cover(2, &[(1, 1), (1, 2)]));
        assert!(!is_cover(2, &[]));
    }

    #[test]
    fn lattice_rules_hold_on_explicit_and_seeded_pairs() {
        let a = a1();
        let free = FreeModule::new(a.clone(), vec![1]).module().clone();
        let unit = unit_module(&a);
        let j = joker();
        assert!(support_profile(&j.tensor(&free).unwrap()).is_empty());
        assert_eq!(support_profile(&unit.tensor(&j).unwrap()), support_profile(&j));

        let pairs: Vec<(GradedModule, GradedModule)> = (0..20u64)
            .map(|s| (random_module(&a, 3 * s), random_module(&a, 3 * s + 1)))
            .chain([(j.clone(), free.clone()), (unit.clone(), j.clone())])
            .collect();
        let report = support_lattice_checks(&pairs, &[]);
        assert!(report.pass, "{:?}", report.first_failure);
        assert_eq!(report.dims.get("pairs"), Some(&22));
    }

    #[test]
    fn extension_supports_stay_inside_the_union() {
        let a = a1();
        let mut extensions = Vec::new();
        for seed in 0..20u64 {
            let m = random_module(&a, seed);
            let d = m.lo() + (m.hi() - m.lo()) / 2;
            if m.dim(d) == 0 {
                continue;
            }
            let subs = m.close_under_action(&[(d, BitVec::unit(m.dim(d), 0))]).unwrap();
            let (_, incl) = m.submodule_induced(&subs).unwrap();
            let (_, proj) = m.quotient_induced(&subs).unwrap();
            extensions.push((incl, proj));
        }
        assert!(extensions.len() >= 10);
        let report = support_lattice_checks(&[], &extensions);
        assert!(report.pass, "{:?}", report.first_failure);
    }

    #[test]
    fn broken_extensions_are_reported_not_accepted() {
        let u = unit_module(&a1());
        let id = ModuleMap::identity(&u);
        let report = support_lattice_checks(&[], &[(id.clone(), id)]);
        assert!(!report.pass);
        assert!(report.first_failure.as_deref().unwrap().contains("not a short exact"));
    }

    #[test]
    fn the_unit_sits_at_all_three_points_and_frees_at_none() {
        let a = a1();
        let supp = a1_membership(&unit_module(&a)).unwrap();
        assert!(supp.is_full());
        assert_eq!(supp.points(), vec!["S0", "S1", "S01"]);
        let free = FreeModule::new(a, vec![0, 2]).module().clone();
        assert!(a1_membership(&free).unwrap().is_empty());
    }

    #[test]
    fn membership_requires_the_a1_preset() {
        let e1 = preset("E1").unwrap();
        assert!(matches!(a1_membership(&unit_module(&e1)), Err(SpectrumError::NotA1(_))));
    }

    #[test]
    fn induced_cells_sit_at_their_single_closed_point() {
        let a = a1();
        let c0 = induced_cell(&a, 1).unwrap();
        assert_eq!(a1_membership(&c0).unwrap(), A1Support { s0: false, s1: true, s01: false });
        let c1 = induced_cell(&a, 2).unwrap();
        assert_eq!(a1_membership(&c1).unwrap(), A1Support { s0: true, s1: false, s01: false });
    }

    #[test]
    fn the_joker_has_full_support() {
        assert!(a1_membership(&joker()).unwrap().is_full());
    }

    #[test]
    fn membership_sets_are_closed_on_a_corpus() {
        let a = a1();
        let mut corpus = vec![
            unit_module(&a),
            joker(),
            induced_cell(&a, 1).unwrap(),
            induced_cell(&a, 2).unwrap(),
            FreeModule::new(a.clone(), vec![0]).module().clone(),
        ];
        corpus.extend((0..10).map(|s| random_module(&a, s)));
        for (i, m) in corpus.iter().enumerate() {
            let supp = a1_membership(m).unwrap();
            assert!(supp.is_closed(), "module {i} gave a non-closed set {supp:?}");
        }
    }

    #[test]
    fn closedness_recognizes_exactly_the_five_allowed_sets() {
        let mut closed = 0;
        for mask in 0..8u8 {
            let supp =
                A1Support { s0: mask & 1 != 0, s1: mask & 2 != 0, s01: mask & 4 != 0 };
            if supp.is_closed() {
                closed += 1;
            }
        }
        assert_eq!(closed, 5);
    }
}
