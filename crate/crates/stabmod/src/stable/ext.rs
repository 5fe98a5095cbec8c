//! Minimal free resolutions, bigraded stable Ext charts over all integer
//! homological degrees, and composition products.
//!
//! Resolutions are truncated at an internal-degree cutoff: each cover only
//! hits head classes up to the cutoff, which keeps every stage exact in
//! degrees at or below it while never computing the unbounded part. Charts
//! remember the rectangle they were computed on, so a missing entry is never
//! confused with a zero.
//!
//! For positive homological degree the chart entry at `(s, t)` is the
//! cohomology of homs from the resolution into the shifted target. Degrees
//! `s <= 0` use the Tate convention: the entry is the first Ext group of the
//! `(s-1)`-st cosyzygy. Products are computed by lifting a cocycle to a
//! chain self-map of the resolution and composing.

use super::{cover_through_degree, omega_inv, strip_free};
use crate::gmod::{unit_module, FreeModule, GradedModule, ModuleMap};
use crate::linalg2::{BitMatrix, BitVec};
use std::collections::BTreeMap;
use std::ops::RangeInclusive;

/// A truncated minimal free resolution `... -> P_1 -> P_0 -> M`.
pub struct Resolution {
    module: GradedModule,
    t_cut: i64,
    frees: Vec<FreeModule>,
    /// `maps[0]` is the cover `P_0 -> M`; `maps[s]` is `P_s -> P_{s-1}`.
    maps: Vec<ModuleMap>,
}

/// Resolve (the stripped part of) `m` through homological degree `stages`,
/// covering head classes of internal degree at most `t_cut`.
pub fn resolve(m: &GradedModule, stages: usize, t_cut: i64) -> Resolution {
    let (reduced, _) = strip_free(m);
    let mut frees = Vec::with_capacity(stages + 1);
    let mut maps = Vec::with_capacity(stages + 1);
    let mut cur = reduced.clone();
    let mut incl_prev: Option<ModuleMap> = None;
    for _ in 0..=stages {
        let (p, q) = cover_through_degree(&cur, t_cut).expect("internally shaped cover");
        let d = match &incl_prev {
            None => q.clone(),
            Some(incl) => incl.compose(&q).expect("kernel inclusion composes"),
        };
        let (k, incl) = q.kernel();
        frees.push(p);
        maps.push(d);
        cur = k;
        incl_prev = Some(incl);
    }
    Resolution { module: reduced, t_cut, frees, maps }
}

impl Resolution {
    /// The module actually resolved (free summands of the input stripped).
    pub fn module(&self) -> &GradedModule {
        &self.module
    }

    pub fn t_cut(&self) -> i64 {
        self.t_cut
    }

    /// Largest homological degree with a computed stage.
    pub fn stages(&self) -> usize {
        self.frees.len() - 1
    }

    pub fn free(&self, s: usize) -> &FreeModule {
        &self.frees[s]
    }

    pub fn cover(&self) -> &ModuleMap {
        &self.maps[0]
    }

    /// The differential `P_s -> P_{s-1}` for `s >= 1`.
    pub fn differential(&self, s: usize) -> &ModuleMap {
        assert!(s >= 1, "the map out of stage zero is the cover");
        &self.maps[s]
    }

    /// Number of stage-`s` generators of internal degree `t`.
    pub fn gen_count(&self, s: usize, t: i64) -> usize {
        self.frees[s].gens().iter().filter(|&&d| d == t).count()
    }

    /// Indices of stage-`s` generators of internal degree `t`.
    pub fn gens_of_degree(&self, s: usize, t: i64) -> Vec<usize> {
        self.frees[s]
            .gens()
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == t)
            .map(|(i, _)| i)
            .collect()
    }

    /// Every differential image lies in the radical of its target.
    pub fn is_minimal(&self) -> bool {
        (1..=self.stages()).all(|s| {
            let target = self.frees[s - 1].module();
            let rad = target.rad_subspaces();
            self.maps[s]
                .image_subspaces()
                .iter()
                .zip(&rad)
                .all(|(im, r)| r.contains_subspace(im))
        })
    }

    /// The standard basis of chart classes at `(s, t)`, one per generator.
    pub fn basis_classes(&self, s: usize, t: i64) -> Vec<ExtClass> {
        let n = self.gen_count(s, t);
        (0..n)
            .map(|i| ExtClass { s, t, coords: BitVec::unit(n, i) })
            .collect()
    }

    /// The cocycle of a class as an honest map `P_s -> unit shifted by t`:
    /// the functional reading off the chosen generator coefficients.
    fn class_map(&self, c: &ExtClass) -> ModuleMap {
        let free = &self.frees[c.s];
        let src = free.module().clone();
        let target = unit_module(src.algebra()).shift(c.t);
        let gens = self.gens_of_degree(c.s, c.t);
        assert_eq!(c.coords.len(), gens.len(), "class width matches generator count");
        let mats: Vec<BitMatrix> = src
            .degrees()
            .map(|d| {
                let mut mat = BitMatrix::zeros(target.dim(d), src.dim(d));
                if d == c.t {
                    for (k, &gi) in gens.iter().enumerate() {
                        if c.coords.get(k) {
                            mat.set(0, free.copy_offset(gi, d), true);
                        }
                    }
                }
                mat
            })
            .collect();
        ModuleMap::assemble(src, target, 0, mats)
    }

    /// The composition product of two chart classes over the unit.
    ///
    /// Requires the resolved module to be the unit and enough stages:
    /// `a.s + b.s <= stages()`.
    pub fn product(&self, a: &ExtClass, b: &ExtClass) -> ExtClass {
        assert_eq!(
            self.module.dims_list(),
            vec![(0, 1)],
            "products are computed over the unit"
        );
        assert!(a.s + b.s <= self.stages(), "resolution too short for this product");
        let fb = self.class_map(b);
        // chain maps g_k: P_{b.s + k} -> P_k shifted by b.t, lifting fb
        let mut g: Option<ModuleMap> = None;
        for k in 0..=a.s {
            let src_free = &self.frees[b.s + k];
            let target = self.frees[k].module().shift(b.t);
            let lift_against = self.maps[k].shifted(b.t);
            let rhs: Box<dyn Fn(i64, &BitVec) -> BitVec> = match &g {
                None => Box::new(|d, v| fb.apply(d, v)),
                Some(prev) => {
                    let step = prev
                        .compose(&self.maps[b.s + k])
                        .expect("chain maps compose with the differential");
                    Box::new(move |d, v| step.apply(d, v))
                }
            };
            let images: Vec<BitVec> = (0..src_free.gens().len())
                .map(|j| {
                    let (deg, gv) = src_free.generator_vector(j);
                    let val = rhs(deg, &gv);
                    lift_against
                        .mat(deg)
                        .solve(&val)
                        .expect("shapes agree")
                        .expect("cocycles lift within the exact range")
                })
                .collect();
            g = Some(
                src_free.hom_to(&target, 0, &images).expect("generator images define the lift"),
            );
        }
        let g_top = g.expect("at least one lifting step");
        let comp = self
            .class_map(a)
            .shifted(b.t)
            .compose(&g_top)
            .expect("lift composes with the cocycle");
        let s = a.s + b.s;
        let t = a.t + b.t;
        let gens = self.gens_of_degree(s, t);
        let mut coords = BitVec::zeros(gens.len());
        for (k, &gi) in gens.iter().enumerate() {
            let (deg, gv) = self.frees[s].generator_vector(gi);
            if comp.apply(deg, &gv).get(0) {
                coords.set(k, true);
            }
        }
        ExtClass { s, t, coords }
    }
}

impl std::fmt::Debug for Resolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Resolution(of {:?}, stages {}, degree cutoff {})",
            self.module,
            self.stages(),
            self.t_cut
        )
    }
}

/// A chart class: a choice of generator coefficients at position `(s, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtClass {
    pub s: usize,
    pub t: i64,
    pub coords: BitVec,
}

impl ExtClass {
    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }
}

/// Dimension of homs out of stage `s` into the target shifted by `t`.
fn hom_dim(res: &Resolution, n: &GradedModule, s: usize, t: i64) -> usize {
    res.frees[s].gens().iter().map(|&ti| n.dim(ti - t)).sum()
}

/// The matrix of precomposition with the differential:
/// homs out of stage `s` to homs out of stage `s + 1`, target shifted by `t`.
fn hom_complex_delta(res: &Resolution, n: &GradedModule, t: i64, s: usize) -> BitMatrix {
    let src = &res.frees[s];
    let dst = &res.frees[s + 1];
    let algebra = res.module.algebra().clone();
    let offsets = |free: &FreeModule| -> Vec<usize> {
        let mut out = Vec::with_capacity(free.gens().len());
        let mut acc = 0;
        for &ti in free.gens() {
            out.push(acc);
            acc += n.dim(ti - t);
        }
        out
    };
    let col_offs = offsets(src);
    let row_offs = offsets(dst);
    let rows = hom_dim(res, n, s + 1, t);
    let cols = hom_dim(res, n, s, t);
    let mut mat = BitMatrix::zeros(rows, cols);
    let d = &res.maps[s + 1];
    for (j, &uj) in dst.gens().iter().enumerate() {
        if n.dim(uj - t) == 0 {
            continue;
        }
        let (deg, gv) = dst.generator_vector(j);
        let vj = d.apply(deg, &gv);
        for (i, &ti) in src.gens().iter().enumerate() {
            if n.dim(ti - t) == 0 {
                continue;
            }
            let adeg = uj - ti;
            if adeg < 0 || adeg > algebra.top() as i64 {
                continue;
            }
            let off = src.copy_offset(i, uj);
            let width = algebra.dim(adeg as usize);
            let comp = vj.slice(off..off + width);
            for abit in comp.iter_ones() {
                let act = n.elt_action(&algebra.basis_elt(adeg as usize, abit), ti - t);
                mat.xor_block(row_offs[j], col_offs[i], &act);
            }
        }
    }
    mat
}

/// Chart entry for `s >= 1`: cohomology of the hom complex at stage `s`.
fn ext_entry(res: &Resolution, n: &GradedModule, s: usize, t: i64) -> usize {
    let c_s = hom_dim(res, n, s, t);
    if c_s == 0 {
        return 0;
    }
    let rank_out = hom_complex_delta(res, n, t, s).rank();
    let rank_in = if s == 0 { 0 } else { hom_complex_delta(res, n, t, s - 1).rank() };
    c_s - rank_out - rank_in
}

/// A bigraded table of stable Ext dimensions over an explicit rectangle.
pub struct StableExtChart {
    pub source: GradedModule,
    pub target: GradedModule,
    entries: BTreeMap<(i64, i64), usize>,
    s_range: (i64, i64),
    t_range: (i64, i64),
}

impl StableExtChart {
    /// `((s_lo, s_hi), (t_lo, t_hi))` actually computed.
    pub fn computed_region(&self) -> ((i64, i64), (i64, i64)) {
        (self.s_range, self.t_range)
    }

    pub fn in_region(&self, s: i64, t: i64) -> bool {
        s >= self.s_range.0 && s <= self.s_range.1 && t >= self.t_range.0 && t <= self.t_range.1
    }

    /// The dimension at `(s, t)`, or None outside the computed region.
    pub fn entry(&self, s: i64, t: i64) -> Option<usize> {
        if self.in_region(s, t) {
            Some(*self.entries.get(&(s, t)).expect("entries fill the region"))
        } else {
            None
        }
    }

    /// The dimension at `(s, t)`; panics outside the computed region.
    pub fn dim(&self, s: i64, t: i64) -> usize {
        self.entry(s, t)
            .unwrap_or_else(|| panic!("({s},{t}) lies outside the computed region"))
    }

    /// Nonzero entries as `(s, t, dim)`, ordered.
    pub fn nonzero(&self) -> Vec<(i64, i64, usize)> {
        self.entries
            .iter()
            .filter(|(_, &v)| v > 0)
            .map(|(&(s, t), &v)| (s, t, v))
            .collect()
    }

    pub fn to_json(&self) -> String {
        let dims = |m: &GradedModule| -> Vec<(i64, usize)> { m.dims_list() };
        let value = serde_json::json!({
            "algebra": self.source.algebra().name(),
            "source_dims": dims(&self.source),
            "target_dims": dims(&self.target),
            "s_range": [self.s_range.0, self.s_range.1],
            "t_range": [self.t_range.0, self.t_range.1],
            "entries": self.nonzero(),
        });
        serde_json::to_string_pretty(&value).expect("chart serializes")
    }
}

/// The composition product of two chart classes, evaluated by lifting the
/// second class to a chain map of the resolution and composing. A named
/// wrapper for [`Resolution::product`]; the resolution must be of the unit
/// and long enough for `a.s + b.s`.
pub fn yoneda_action(resolution: &Resolution, a: &ExtClass, b: &ExtClass) -> ExtClass {
    resolution.product(a, b)
}

/// The chart of stable Ext dimensions of `(m, n)` over the given rectangle.
///
/// Entry `(s, t)` is the dimension of the group of stable maps from the
/// `s`-th syzygy of `m` to `n` shifted by `t`; for `s >= 1` this is ordinary
/// Ext computed from a minimal resolution, and for `s <= 0` it is
/// `Ext^1` of the `(s-1)`-st cosyzygy of `m`.
pub fn stable_ext(
    m: &GradedModule,
    n: &GradedModule,
    s_range: RangeInclusive<i64>,
    t_range: RangeInclusive<i64>,
) -> StableExtChart {
    let (s_lo, s_hi) = s_range.into_inner();
    let (t_lo, t_hi) = t_range.into_inner();
    assert!(s_lo <= s_hi && t_lo <= t_hi, "empty chart rectangle");
    let (m_red, _) = strip_free(m);
    let (n_red, _) = strip_free(n);
    let mut entries = BTreeMap::new();
    for s in s_lo..=s_hi {
        for t in t_lo..=t_hi {
            entries.insert((s, t), 0usize);
        }
    }
    if !m_red.is_zero() && !n_red.is_zero() {
        let t_cut = t_hi + n_red.hi().max(0);
        if s_hi >= 1 {
            let res = resolve(&m_red, (s_hi + 1) as usize, t_cut);
            for s in s_lo.max(1)..=s_hi {
                for t in t_lo..=t_hi {
                    entries.insert((s, t), ext_entry(&res, &n_red, s as usize, t));
                }
            }
        }
        let mut w = m_red.clone();
        let mut s = 0;
        while s >= s_lo {
            w = omega_inv(&w);
            if s <= s_hi && !w.is_zero() {
                let res_w = resolve(&w, 2, t_cut);
                for t in t_lo..=t_hi {
                    entries.insert((s, t), ext_entry(&res_w, &n_red, 1, t));
                }
            }
            s -= 1;
        }
    }
    StableExtChart {
        source: m.clone(),
        target: n.clone(),
        entries,
        s_range: (s_lo, s_hi),
        t_range: (t_lo, t_hi),
    }
}
