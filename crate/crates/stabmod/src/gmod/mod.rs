//! Finitely generated graded modules over a fixed Hopf algebra.
//!
//! A module stores, for every basis element of the algebra, one action matrix
//! per degree of its support. Keeping the whole basis (not just generators)
//! makes the action of arbitrary elements — Margolis operations, integrals,
//! coproduct components — a direct lookup, and turns the module axioms into
//! a finite family of matrix identities: the action of a product of basis
//! elements must equal the composite of their actions. Construction from
//! generator matrices alone extends along the algebra's stored word
//! expressions and then verifies exactly that family.
//!
//! Degrees are signed throughout: duals and loop-functor shifts move supports
//! below zero. Supports are closed intervals, trimmed of zero ends, with
//! interior zero degrees stored explicitly.

mod hom;
mod iso;
mod random;
pub mod schema;
mod standard;

pub use hom::{hom_space, HomSystem};
pub use iso::{decompose, is_isomorphic};
pub use random::random_module;
pub use standard::{cyclic_quotient, induced_cell, joker, unit_module};

use crate::hopf::{AlgElt, AlgebraRef};
use crate::linalg2::{BitMatrix, BitVec, Subspace};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone)]
pub enum GmodError {
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("malformed module data: {0}")]
    ShapeMismatch(String),
    #[error("action does not satisfy the algebra relations: {0}")]
    NotAModule(String),
    #[error("map is not equivariant at degree {0}")]
    NotAMap(i64),
    #[error("embedding data is incomplete: {0}")]
    EmbeddingMissing(String),
    #[error("subspaces are not closed under the action at degree {0}")]
    NotClosed(i64),
}

/// A finitely generated graded module, held degreewise.
#[derive(Clone, Serialize, Deserialize)]
pub struct GradedModule {
    algebra: AlgebraRef,
    lo: i64,
    dims: Vec<usize>,
    /// `actions[bdeg][bidx][d - lo]`: the action of basis element `bidx` of
    /// algebra degree `bdeg`, as a matrix `M_d -> M_{d + bdeg}`.
    actions: Vec<Vec<Vec<BitMatrix>>>,
}

pub(crate) fn same_algebra(a: &AlgebraRef, b: &AlgebraRef) -> bool {
    std::sync::Arc::ptr_eq(a, b) || (a.name() == b.name() && a.dims() == b.dims())
}

impl GradedModule {
    /// Internal constructor. Shapes are always checked; the module axioms are
    /// verified when `validate` is set and debug-asserted otherwise.
    pub(crate) fn assemble(
        algebra: AlgebraRef,
        lo: i64,
        dims: Vec<usize>,
        actions: Vec<Vec<Vec<BitMatrix>>>,
        validate: bool,
    ) -> Result<GradedModule, GmodError> {
        let m = GradedModule { algebra, lo, dims, actions };
        m.check_shapes()?;
        let m = m.normalized();
        if validate {
            m.check_module_axioms()?;
        } else {
            debug_assert!(m.check_module_axioms().is_ok(), "internal construction broke the axioms");
        }
        Ok(m)
    }

    /// Build from raw per-basis action matrices, verifying the module axioms.
    pub fn from_basis_actions(
        algebra: AlgebraRef,
        lo: i64,
        dims: Vec<usize>,
        actions: Vec<Vec<Vec<BitMatrix>>>,
    ) -> Result<GradedModule, GmodError> {
        Self::assemble(algebra, lo, dims, actions, true)
    }

    /// Build from action matrices for the algebra generators only, extending
    /// to the whole basis along the stored word expressions, then verifying
    /// the axioms (this is where the defining relations get checked).
    pub fn from_generator_actions(
        algebra: AlgebraRef,
        lo: i64,
        dims: Vec<usize>,
        gen_mats: &[Vec<BitMatrix>],
    ) -> Result<GradedModule, GmodError> {
        if gen_mats.len() != algebra.generators().len() {
            return Err(GmodError::EmbeddingMissing(format!(
                "{} generator actions given, algebra has {}",
                gen_mats.len(),
                algebra.generators().len()
            )));
        }
        let n_deg = dims.len();
        let dim_at = |d: i64| -> usize {
            if d < lo || d >= lo + n_deg as i64 {
                0
            } else {
                dims[(d - lo) as usize]
            }
        };
        for (g, mats) in gen_mats.iter().enumerate() {
            let gdeg = algebra.generators()[g].degree as i64;
            if mats.len() != n_deg {
                return Err(GmodError::ShapeMismatch(format!(
                    "generator {g} has {} matrices for {n_deg} degrees",
                    mats.len()
                )));
            }
            for (off, m) in mats.iter().enumerate() {
                let d = lo + off as i64;
                if m.rows() != dim_at(d + gdeg) || m.cols() != dim_at(d) {
                    return Err(GmodError::ShapeMismatch(format!(
                        "generator {g} matrix at degree {d} is {}x{}",
                        m.rows(),
                        m.cols()
                    )));
                }
            }
        }
        // the action of a word is the composite of generator actions,
        // rightmost factor first
        let word_action = |word: &[usize], d: i64| -> BitMatrix {
            let mut acc = BitMatrix::identity(dim_at(d));
            let mut cur = d;
            for &g in word.iter().rev() {
                let gdeg = algebra.generators()[g].degree as i64;
                let m = if cur < lo || cur >= lo + n_deg as i64 {
                    BitMatrix::zeros(dim_at(cur + gdeg), dim_at(cur))
                } else {
                    gen_mats[g][(cur - lo) as usize].clone()
                };
                acc = m.mul(&acc);
                cur += gdeg;
            }
            acc
        };
        let mut actions: Vec<Vec<Vec<BitMatrix>>> = Vec::with_capacity(algebra.top() + 1);
        for bdeg in 0..=algebra.top() {
            let mut per_elt = Vec::with_capacity(algebra.dim(bdeg));
            for i in 0..algebra.dim(bdeg) {
                let mut per_deg = Vec::with_capacity(n_deg);
                for off in 0..n_deg {
                    let d = lo + off as i64;
                    let mut m = BitMatrix::zeros(dim_at(d + bdeg as i64), dim_at(d));
                    for word in algebra.basis_expr(bdeg, i) {
                        m = m.add(&word_action(word, d));
                    }
                    per_deg.push(m);
                }
                per_elt.push(per_deg);
            }
            actions.push(per_elt);
        }
        Self::assemble(algebra, lo, dims, actions, true)
    }

    pub fn zero(algebra: AlgebraRef) -> GradedModule {
        let actions = (0..=algebra.top()).map(|b| vec![Vec::new(); algebra.dim(b)]).collect();
        GradedModule { algebra, lo: 0, dims: Vec::new(), actions }
    }

    fn check_shapes(&self) -> Result<(), GmodError> {
        let top = self.algebra.top();
        if self.actions.len() != top + 1 {
            return Err(GmodError::ShapeMismatch("action table has wrong degree count".into()));
        }
        for bdeg in 0..=top {
            if self.actions[bdeg].len() != self.algebra.dim(bdeg) {
                return Err(GmodError::ShapeMismatch(format!(
                    "degree {bdeg} has {} action lists for {} basis elements",
                    self.actions[bdeg].len(),
                    self.algebra.dim(bdeg)
                )));
            }
            for (i, per_deg) in self.actions[bdeg].iter().enumerate() {
                if per_deg.len() != self.dims.len() {
                    return Err(GmodError::ShapeMismatch(format!(
                        "basis ({bdeg},{i}) has {} matrices for {} degrees",
                        per_deg.len(),
                        self.dims.len()
                    )));
                }
                for (off, m) in per_deg.iter().enumerate() {
                    let d = self.lo + off as i64;
                    if m.rows() != self.dim(d + bdeg as i64) || m.cols() != self.dims[off] {
                        return Err(GmodError::ShapeMismatch(format!(
                            "action of ({bdeg},{i}) at degree {d} is {}x{}",
                            m.rows(),
                            m.cols()
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_module_axioms(&self) -> Result<(), GmodError> {
        let alg = &self.algebra;
        for off in 0..self.dims.len() {
            let d = self.lo + off as i64;
            let id = BitMatrix::identity(self.dims[off]);
            if self.actions[0][0][off] != id {
                return Err(GmodError::NotAModule(format!("unit does not act as identity at degree {d}")));
            }
        }
        for adeg in 0..=alg.top() {
            for ai in 0..alg.dim(adeg) {
                for bdeg in 0..=alg.top() {
                    for bi in 0..alg.dim(bdeg) {
                        let prod = alg.multiply(&alg.basis_elt(adeg, ai), &alg.basis_elt(bdeg, bi));
                        for off in 0..self.dims.len() {
                            let d = self.lo + off as i64;
                            let composite =
                                self.action(adeg, ai, d + bdeg as i64).mul(&self.action(bdeg, bi, d));
                            let direct = self.elt_action(&prod, d);
                            if composite != direct {
                                return Err(GmodError::NotAModule(format!(
                                    "({adeg},{ai})*({bdeg},{bi}) fails at degree {d}"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Trim zero dimensions off both ends of the support.
    fn normalized(mut self) -> GradedModule {
        let first = self.dims.iter().position(|&n| n > 0);
        let Some(first) = first else {
            return GradedModule::zero(self.algebra);
        };
        let last = self.dims.iter().rposition(|&n| n > 0).expect("nonempty");
        if first == 0 && last == self.dims.len() - 1 {
            return self;
        }
        self.dims = self.dims[first..=last].to_vec();
        for per_elt in &mut self.actions {
            for per_deg in per_elt.iter_mut() {
                *per_deg = per_deg[first..=last].to_vec();
            }
        }
        self.lo += first as i64;
        self
    }

    pub fn algebra(&self) -> &AlgebraRef {
        &self.algebra
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest degree of the support; one below `lo` for the zero module.
    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn dim(&self, d: i64) -> usize {
        if d < self.lo || d > self.hi() {
            0
        } else {
            self.dims[(d - self.lo) as usize]
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi()
    }

    /// (degree, dimension) pairs over the support, including interior zeros.
    pub fn dims_list(&self) -> Vec<(i64, usize)> {
        self.degrees().map(|d| (d, self.dim(d))).collect()
    }

    /// Action of basis element `(bdeg, bidx)` on the degree-`d` piece.
    pub fn action(&self, bdeg: usize, bidx: usize, d: i64) -> BitMatrix {
        if d >= self.lo && d <= self.hi() {
            self.actions[bdeg][bidx][(d - self.lo) as usize].clone()
        } else {
            BitMatrix::zeros(self.dim(d + bdeg as i64), self.dim(d))
        }
    }

    /// Action of an arbitrary homogeneous algebra element.
    pub fn elt_action(&self, e: &AlgElt, d: i64) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.dim(d + e.degree as i64), self.dim(d));
        for i in e.coords.iter_ones() {
            m = m.add(&self.action(e.degree, i, d));
        }
        m
    }

    pub fn gen_action(&self, g: usize, d: i64) -> BitMatrix {
        let e = self.algebra.generator_elt(g);
        self.elt_action(&e, d)
    }

    /// Action of the Margolis operation `p_k` (1-based).
    pub fn margolis_action(&self, k: usize, d: i64) -> BitMatrix {
        let op = self.algebra.margolis_op(k).expect("margolis index in range");
        self.elt_action(&op.elt, d)
    }

    pub fn integral_action(&self, d: i64) -> BitMatrix {
        self.elt_action(self.algebra.integral(), d)
    }

    /// Literal equality of supports, dimensions and action matrices.
    pub fn strict_eq(&self, other: &GradedModule) -> bool {
        same_algebra(&self.algebra, &other.algebra)
            && self.lo == other.lo
            && self.dims == other.dims
            && self.actions == other.actions
    }

    /// The regrading: same matrices, support moved up by `t`.
    pub fn shift(&self, t: i64) -> GradedModule {
        let mut m = self.clone();
        m.lo += t;
        m
    }

    pub fn direct_sum(&self, other: &GradedModule) -> Result<GradedModule, GmodError> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(GmodError::AlgebraMismatch);
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let dims: Vec<usize> = (lo..=hi).map(|d| self.dim(d) + other.dim(d)).collect();
        let top = self.algebra.top();
        let mut actions = Vec::with_capacity(top + 1);
        for bdeg in 0..=top {
            let mut per_elt = Vec::with_capacity(self.algebra.dim(bdeg));
            for i in 0..self.algebra.dim(bdeg) {
                let per_deg = (lo..=hi)
                    .map(|d| {
                        let a = self.action(bdeg, i, d);
                        let b = other.action(bdeg, i, d);
                        let mut m = BitMatrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
                        m.xor_block(0, 0, &a);
                        m.xor_block(a.rows(), a.cols(), &b);
                        m
                    })
                    .collect();
                per_elt.push(per_deg);
            }
            actions.push(per_elt);
        }
        Self::assemble(self.algebra.clone(), lo, dims, actions, false)
    }

    /// Tensor product over the base field, with the algebra acting through
    /// its coproduct.
    pub fn tensor(&self, other: &GradedModule) -> Result<GradedModule, GmodError> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(GmodError::AlgebraMismatch);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(GradedModule::zero(self.algebra.clone()));
        }
        let lo = self.lo + other.lo;
        let hi = self.hi() + other.hi();
        let dims: Vec<usize> =
            (lo..=hi).map(|d| tensor_dim(self, other, d)).collect();
        let top = self.algebra.top();
        let mut actions = Vec::with_capacity(top + 1);
        for bdeg in 0..=top {
            let mut per_elt = Vec::with_capacity(self.algebra.dim(bdeg));
            for bidx in 0..self.algebra.dim(bdeg) {
                let comps = self.algebra.comult_of(&self.algebra.basis_elt(bdeg, bidx));
                let per_deg = (lo..=hi)
                    .map(|d| {
                        let src = tensor_splits(self, other, d);
                        let tgt = tensor_splits(self, other, d + bdeg as i64);
                        let rows = tgt.iter().map(|s| s.size).sum();
                        let cols = src.iter().map(|s| s.size).sum();
                        let mut m = BitMatrix::zeros(rows, cols);
                        for s in &src {
                            for (d1, d2, vec) in &comps {
                                let te = s.left + *d1 as i64;
                                let Some(t) = tgt.iter().find(|t| t.left == te) else {
                                    continue;
                                };
                                for bit in vec.iter_ones() {
                                    let (u, v) = (bit / self.algebra.dim(*d2), bit % self.algebra.dim(*d2));
                                    let a = self.action(*d1, u, s.left);
                                    let b = other.action(*d2, v, d - s.left);
                                    if a.rows() == 0 || b.rows() == 0 {
                                        continue;
                                    }
                                    m.xor_block(t.offset, s.offset, &a.kronecker(&b));
                                }
                            }
                        }
                        m
                    })
                    .collect();
                per_elt.push(per_deg);
            }
            actions.push(per_elt);
        }
        Self::assemble(self.algebra.clone(), lo, dims, actions, false)
    }

    /// Graded dual: dimensions mirrored, action transposed through the
    /// antipode. Applying it twice returns the identical module.
    pub fn dual(&self) -> GradedModule {
        if self.is_zero() {
            return self.clone();
        }
        let lo = -self.hi();
        let hi = -self.lo;
        let dims: Vec<usize> = (lo..=hi).map(|d| self.dim(-d)).collect();
        let top = self.algebra.top();
        let mut actions = Vec::with_capacity(top + 1);
        for bdeg in 0..=top {
            let mut per_elt = Vec::with_capacity(self.algebra.dim(bdeg));
            for bidx in 0..self.algebra.dim(bdeg) {
                let s = self.algebra.antipode_of(&self.algebra.basis_elt(bdeg, bidx));
                let per_deg = (lo..=hi)
                    .map(|d| {
                        let mut m = BitMatrix::zeros(self.dim(-d - bdeg as i64), self.dim(-d));
                        for j in s.coords.iter_ones() {
                            m = m.add(&self.action(bdeg, j, -d - bdeg as i64).transpose());
                        }
                        m
                    })
                    .collect();
                per_elt.push(per_deg);
            }
            actions.push(per_elt);
        }
        Self::assemble(self.algebra.clone(), lo, dims, actions, false)
            .expect("dual of a module is a module")
    }

    /// View the same graded space as a module over `sub`, whose generators
    /// act through the given elements of this module's algebra.
    pub fn restrict(&self, sub: &AlgebraRef, images: &[AlgElt]) -> Result<GradedModule, GmodError> {
        if images.len() != sub.generators().len() {
            return Err(GmodError::EmbeddingMissing(format!(
                "{} images for {} generators",
                images.len(),
                sub.generators().len()
            )));
        }
        for (g, e) in images.iter().enumerate() {
            if e.degree != sub.generators()[g].degree {
                return Err(GmodError::EmbeddingMissing(format!(
                    "generator {} has degree {}, image has degree {}",
                    sub.generators()[g].label,
                    sub.generators()[g].degree,
                    e.degree
                )));
            }
            if e.coords.len() != self.algebra.dim(e.degree) {
                return Err(GmodError::EmbeddingMissing(format!(
                    "image of generator {} has bad coordinates",
                    sub.generators()[g].label
                )));
            }
        }
        let gen_mats: Vec<Vec<BitMatrix>> = images
            .iter()
            .map(|e| self.degrees().map(|d| self.elt_action(e, d)).collect())
            .collect();
        GradedModule::from_generator_actions(sub.clone(), self.lo, self.dims.clone(), &gen_mats)
    }

    /// Degreewise radical: the span of the images of all positive-degree
    /// basis actions.
    pub fn rad_subspaces(&self) -> Vec<Subspace> {
        self.degrees()
            .map(|d| {
                let mut sub = Subspace::zero(self.dim(d));
                for bdeg in 1..=self.algebra.top() {
                    for i in 0..self.algebra.dim(bdeg) {
                        let m = self.action(bdeg, i, d - bdeg as i64);
                        if m.cols() > 0 && !m.is_zero() {
                            sub = sub.sum(&m.image());
                        }
                    }
                }
                sub
            })
            .collect()
    }

    /// Dimensions of `M / rad M` per degree: the minimal generator counts.
    pub fn head_dims(&self) -> Vec<(i64, usize)> {
        let rad = self.rad_subspaces();
        self.degrees()
            .zip(rad)
            .map(|(d, s)| (d, self.dim(d) - s.dim()))
            .filter(|&(_, n)| n > 0)
            .collect()
    }

    /// Smallest action-closed degreewise subspaces containing the seeds.
    pub fn close_under_action(&self, seeds: &[(i64, BitVec)]) -> Result<Vec<Subspace>, GmodError> {
        let n = self.dims.len();
        let mut subs: Vec<Subspace> = self.dims.iter().map(|&k| Subspace::zero(k)).collect();
        let mut queue: Vec<(i64, BitVec)> = Vec::new();
        for (d, v) in seeds {
            if v.len() != self.dim(*d) {
                return Err(GmodError::ShapeMismatch(format!(
                    "seed at degree {d} has length {}, expected {}",
                    v.len(),
                    self.dim(*d)
                )));
            }
            queue.push((*d, v.clone()));
        }
        while let Some((d, v)) = queue.pop() {
            if v.is_zero() {
                continue;
            }
            let off = (d - self.lo) as usize;
            if off >= n || subs[off].contains(&v) {
                continue;
            }
            subs[off] =
                subs[off].sum(&Subspace::from_vectors(self.dim(d), std::slice::from_ref(&v)));
            for g in 0..self.algebra.generators().len() {
                let gdeg = self.algebra.generators()[g].degree as i64;
                let w = self.gen_action(g, d).apply(&v);
                if !w.is_zero() {
                    queue.push((d + gdeg, w));
                }
            }
        }
        Ok(subs)
    }

    /// The submodule spanned by action-closed degreewise subspaces, together
    /// with its inclusion.
    pub fn submodule_induced(
        &self,
        subs: &[Subspace],
    ) -> Result<(GradedModule, ModuleMap), GmodError> {
        if subs.len() != self.dims.len() {
            return Err(GmodError::ShapeMismatch("one subspace per support degree required".into()));
        }
        for (off, s) in subs.iter().enumerate() {
            if s.ambient() != self.dims[off] {
                return Err(GmodError::ShapeMismatch(format!(
                    "subspace at offset {off} has ambient {}",
                    s.ambient()
                )));
            }
        }
        let sub_at = |d: i64| -> Option<&Subspace> {
            if d < self.lo || d > self.hi() {
                None
            } else {
                Some(&subs[(d - self.lo) as usize])
            }
        };
        let dims: Vec<usize> = subs.iter().map(Subspace::dim).collect();
        let top = self.algebra.top();
        let mut actions = Vec::with_capacity(top + 1);
        for bdeg in 0..=top {
            let mut per_elt = Vec::with_capacity(self.algebra.dim(bdeg));
            for i in 0..self.algebra.dim(bdeg) {
                let mut per_deg = Vec::with_capacity(dims.len());
                for off in 0..dims.len() {
                    let d = self.lo + off as i64;
                    let target_dim = sub_at(d + bdeg as i64).map_or(0, Subspace::dim);
                    let mut m = BitMatrix::zeros(target_dim, dims[off]);
                    let act = self.action(bdeg, i, d);
                    for (col, v) in subs[off].basis().into_iter().enumerate() {
                        let w = act.apply(&v);
                        if w.is_zero() {
                            continue;
                        }
                        let t = sub_at(d + bdeg as i64)
                            .and_then(|s| s.coords_of(&w))
                            .ok_or(GmodError::NotClosed(d))?;
                        for r in t.iter_ones() {
                            m.set(r, col, true);
                        }
                    }
                    per_deg.push(m);
                }
                per_elt.push(per_deg);
            }
            actions.push(per_elt);
        }
        let module = Self::assemble(self.algebra.clone(), self.lo, dims, actions, false)?;
        let mats = module
            .degrees()
            .map(|d| subs[(d - self.lo) as usize].basis_matrix().transpose())
            .collect();
        let incl = ModuleMap::assemble(module.clone(), self.clone(), 0, mats);
        Ok((module, incl))
    }

    /// The quotient by action-closed degreewise subspaces, together with its
    /// projection.
    pub fn quotient_induced(
        &self,
        subs: &[Subspace],
    ) -> Result<(GradedModule, ModuleMap), GmodError> {
        if subs.len() != self.dims.len() {
            return Err(GmodError::ShapeMismatch("one subspace per support degree required".into()));
        }
        let coords: Vec<CosetCoords> = subs
            .iter()
            .enumerate()
            .map(|(off, s)| {
                if s.ambient() != self.dims[off] {
                    return Err(GmodError::ShapeMismatch(format!(
                        "subspace at offset {off} has ambient {}",
                        s.ambient()
                    )));
                }
                Ok(CosetCoords::new(s.clone()))
            })
            .collect::<Result<_, _>>()?;
        let coords_at = |d: i64| -> Option<&CosetCoords> {
            if d < self.lo || d > self.hi() {
                None
            } else {
                Some(&coords[(d - self.lo) as usize])
            }
        };
        let dims: Vec<usize> = coords.iter().map(CosetCoords::dim).collect();
        let top = self.algebra.top();
        let mut actions = Vec::with_capacity(top + 1);
        for bdeg in 0..=top {
            let mut per_elt = Vec::with_capacity(self.algebra.dim(bdeg));
            for i in 0..self.algebra.dim(bdeg) {
                let mut per_deg = Vec::with_capacity(dims.len());
                for off in 0..dims.len() {
                    let d = self.lo + off as i64;
                    let target_dim = coords_at(d + bdeg as i64).map_or(0, CosetCoords::dim);
                    let mut m = BitMatrix::zeros(target_dim, dims[off]);
                    let act = self.action(bdeg, i, d);
                    for (col, rep) in coords[off].reps().iter().enumerate() {
                        let w = act.apply(rep);
                        let Some(c) = coords_at(d + bdeg as i64) else { continue };
                        // the action descends because the subspaces are closed
                        let t = c.express(&w).ok_or(GmodError::NotClosed(d))?;
                        for r in t.iter_ones() {
                            m.set(r, col, true);
                        }
                    }
                    per_deg.push(m);
                }
                per_elt.push(per_deg);
            }
            actions.push(per_elt);
        }
        let module = Self::assemble(self.algebra.clone(), self.lo, dims, actions, false)?;
        let mats = self
            .degrees()
            .map(|d| {
                let c = &coords[(d - self.lo) as usize];
                let mut m = BitMatrix::zeros(c.dim(), self.dim(d));
                for col in 0..self.dim(d) {
                    let e = BitVec::unit(self.dim(d), col);
                    if let Some(t) = c.express(&e) {
                        for r in t.iter_ones() {
                            m.set(r, col, true);
                        }
                    }
                }
                m
            })
            .collect();
        let proj = ModuleMap::assemble(self.clone(), module.clone(), 0, mats);
        Ok((module, proj))
    }
}

impl std::fmt::Debug for GradedModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "GradedModule(over {}, degrees {}..={}, dims {:?})",
            self.algebra.name(),
            self.lo,
            self.hi(),
            self.dims
        )
    }
}

/// Coset coordinates for a quotient by a fixed subspace: representatives
/// completing the subspace, plus a solver expressing any vector in them.
#[derive(Clone)]
pub(crate) struct CosetCoords {
    sub: Subspace,
    reps: Vec<BitVec>,
    reduced_cols: BitMatrix,
}

impl CosetCoords {
    pub(crate) fn new(sub: Subspace) -> CosetCoords {
        let ambient = sub.ambient();
        let reps = Subspace::full(ambient).quotient_basis(&sub).expect("sub of full");
        let reduced: Vec<BitVec> = reps.iter().map(|r| sub.reduce(r)).collect();
        let reduced_cols = BitMatrix::from_rows(&reduced, ambient).transpose();
        CosetCoords { sub, reps, reduced_cols }
    }

    pub(crate) fn dim(&self) -> usize {
        self.reps.len()
    }

    pub(crate) fn reps(&self) -> &[BitVec] {
        &self.reps
    }

    /// Coordinates of the coset of `v` in the representative basis.
    pub(crate) fn express(&self, v: &BitVec) -> Option<BitVec> {
        let r = self.sub.reduce(v);
        if self.reps.is_empty() {
            return if r.is_zero() { Some(BitVec::zeros(0)) } else { None };
        }
        self.reduced_cols.solve(&r).ok().flatten()
    }
}

#[derive(Clone, Copy, Debug)]
struct TensorSplit {
    /// Degree contributed by the left factor.
    left: i64,
    offset: usize,
    size: usize,
}

/// Block layout of `(a (x) b)` in degree `d`: left-factor degree ascending.
fn tensor_splits(a: &GradedModule, b: &GradedModule, d: i64) -> Vec<TensorSplit> {
    let mut out = Vec::new();
    let mut offset = 0;
    for e in a.lo()..=a.hi() {
        let size = a.dim(e) * b.dim(d - e);
        if size > 0 {
            out.push(TensorSplit { left: e, offset, size });
            offset += size;
        }
    }
    out
}

fn tensor_dim(a: &GradedModule, b: &GradedModule, d: i64) -> usize {
    (a.lo()..=a.hi()).map(|e| a.dim(e) * b.dim(d - e)).sum()
}

/// A free module with a remembered ordered generator list.
#[derive(Clone, Debug)]
pub struct FreeModule {
    module: GradedModule,
    gens: Vec<i64>,
}

impl FreeModule {
    /// Direct sum of shifted copies of the algebra, one per generator degree.
    pub fn new(algebra: AlgebraRef, gens: Vec<i64>) -> FreeModule {
        if gens.is_empty() {
            return FreeModule { module: GradedModule::zero(algebra), gens };
        }
        let lo = *gens.iter().min().expect("nonempty");
        let hi = *gens.iter().max().expect("nonempty") + algebra.top() as i64;
        let alg_dim = |d: i64| -> usize {
            if d < 0 {
                0
            } else {
                algebra.dim(d as usize)
            }
        };
        let dims: Vec<usize> =
            (lo..=hi).map(|d| gens.iter().map(|&t| alg_dim(d - t)).sum()).collect();
        let top = algebra.top();
        let mut actions = Vec::with_capacity(top + 1);
        for bdeg in 0..=top {
            let mut per_elt = Vec::with_capacity(algebra.dim(bdeg));
            for i in 0..algebra.dim(bdeg) {
                let e = algebra.basis_elt(bdeg, i);
                let per_deg = (lo..=hi)
                    .map(|d| {
                        let rows: usize = gens.iter().map(|&t| alg_dim(d + bdeg as i64 - t)).sum();
                        let cols: usize = gens.iter().map(|&t| alg_dim(d - t)).sum();
                        let mut m = BitMatrix::zeros(rows, cols);
                        let (mut r0, mut c0) = (0, 0);
                        for &t in &gens {
                            let (nr, nc) = (alg_dim(d + bdeg as i64 - t), alg_dim(d - t));
                            if nr > 0 && nc > 0 {
                                let block = if d - t >= 0 {
                                    algebra.left_mult_matrix(&e, (d - t) as usize)
                                } else {
                                    BitMatrix::zeros(nr, nc)
                                };
                                m.xor_block(r0, c0, &block);
                            }
                            r0 += nr;
                            c0 += nc;
                        }
                        m
                    })
                    .collect();
                per_elt.push(per_deg);
            }
            actions.push(per_elt);
        }
        let module = GradedModule::assemble(algebra, lo, dims, actions, false)
            .expect("free modules are modules");
        FreeModule { module, gens }
    }

    pub fn module(&self) -> &GradedModule {
        &self.module
    }

    pub fn into_module(self) -> GradedModule {
        self.module
    }

    pub fn gens(&self) -> &[i64] {
        &self.gens
    }

    /// Coordinate offset of generator `gi`'s copy of the algebra in degree `d`.
    pub(crate) fn copy_offset(&self, gi: usize, d: i64) -> usize {
        let algebra = self.module.algebra();
        self.gens[..gi]
            .iter()
            .map(|&t| if d - t < 0 { 0 } else { algebra.dim((d - t) as usize) })
            .sum()
    }

    /// The generator itself as a vector: degree and coordinates.
    pub fn generator_vector(&self, gi: usize) -> (i64, BitVec) {
        let d = self.gens[gi];
        let mut v = BitVec::zeros(self.module.dim(d));
        v.set(self.copy_offset(gi, d), true);
        (d, v)
    }

    /// The unique module map sending generator `i` to `images[i]`, a vector
    /// in `target` at degree `gens[i] + shift`.
    pub fn hom_to(
        &self,
        target: &GradedModule,
        shift: i64,
        images: &[BitVec],
    ) -> Result<ModuleMap, GmodError> {
        if images.len() != self.gens.len() {
            return Err(GmodError::ShapeMismatch(format!(
                "{} images for {} generators",
                images.len(),
                self.gens.len()
            )));
        }
        for (i, v) in images.iter().enumerate() {
            if v.len() != target.dim(self.gens[i] + shift) {
                return Err(GmodError::ShapeMismatch(format!(
                    "image {i} has length {}, expected {}",
                    v.len(),
                    target.dim(self.gens[i] + shift)
                )));
            }
        }
        let algebra = self.module.algebra().clone();
        let mats: Vec<BitMatrix> = self
            .module
            .degrees()
            .map(|d| {
                let mut m = BitMatrix::zeros(target.dim(d + shift), self.module.dim(d));
                for (gi, &t) in self.gens.iter().enumerate() {
                    if d - t < 0 || algebra.dim((d - t) as usize) == 0 {
                        continue;
                    }
                    let bdeg = (d - t) as usize;
                    let c0 = self.copy_offset(gi, d);
                    for a in 0..algebra.dim(bdeg) {
                        let col = target.action(bdeg, a, t + shift).apply(&images[gi]);
                        for r in col.iter_ones() {
                            m.set(r, c0 + a, true);
                        }
                    }
                }
                m
            })
            .collect();
        let map = ModuleMap::try_new(self.module.clone(), target.clone(), shift, mats)?;
        Ok(map)
    }
}

/// A degree-homogeneous module map `source_d -> target_{d + shift}`.
#[derive(Clone, Serialize, Deserialize)]
pub struct ModuleMap {
    source: GradedModule,
    target: GradedModule,
    shift: i64,
    /// Indexed by `d - source.lo()`.
    mats: Vec<BitMatrix>,
}

impl ModuleMap {
    /// Construct and verify shapes plus equivariance with every generator.
    pub fn try_new(
        source: GradedModule,
        target: GradedModule,
        shift: i64,
        mats: Vec<BitMatrix>,
    ) -> Result<ModuleMap, GmodError> {
        let map = ModuleMap { source, target, shift, mats };
        map.check_shapes()?;
        if let Some(d) = map.equivariance_failure() {
            return Err(GmodError::NotAMap(d));
        }
        Ok(map)
    }

    /// Internal constructor for maps correct by construction.
    pub(crate) fn assemble(
        source: GradedModule,
        target: GradedModule,
        shift: i64,
        mats: Vec<BitMatrix>,
    ) -> ModuleMap {
        let map = ModuleMap { source, target, shift, mats };
        debug_assert!(map.check_shapes().is_ok(), "map shapes broken");
        debug_assert!(map.equivariance_failure().is_none(), "constructed map not equivariant");
        map
    }

    fn check_shapes(&self) -> Result<(), GmodError> {
        if !same_algebra(self.source.algebra(), self.target.algebra()) {
            return Err(GmodError::AlgebraMismatch);
        }
        if self.mats.len() != self.source.dims.len() {
            return Err(GmodError::ShapeMismatch(format!(
                "{} matrices for {} source degrees",
                self.mats.len(),
                self.source.dims.len()
            )));
        }
        for (off, m) in self.mats.iter().enumerate() {
            let d = self.source.lo() + off as i64;
            if m.rows() != self.target.dim(d + self.shift) || m.cols() != self.source.dim(d) {
                return Err(GmodError::ShapeMismatch(format!(
                    "matrix at degree {d} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    self.target.dim(d + self.shift),
                    self.source.dim(d)
                )));
            }
        }
        Ok(())
    }

    /// First degree where some generator fails to commute with the map.
    fn equivariance_failure(&self) -> Option<i64> {
        for g in 0..self.source.algebra().generators().len() {
            let gdeg = self.source.algebra().generators()[g].degree as i64;
            for d in self.source.degrees() {
                let lhs = self.target.gen_action(g, d + self.shift).mul(&self.mat(d));
                let rhs = self.mat(d + gdeg).mul(&self.source.gen_action(g, d));
                if lhs != rhs {
                    return Some(d);
                }
            }
        }
        None
    }

    pub fn identity(m: &GradedModule) -> ModuleMap {
        let mats = m.degrees().map(|d| BitMatrix::identity(m.dim(d))).collect();
        ModuleMap::assemble(m.clone(), m.clone(), 0, mats)
    }

    pub fn zero_map(source: &GradedModule, target: &GradedModule, shift: i64) -> ModuleMap {
        let mats = source
            .degrees()
            .map(|d| BitMatrix::zeros(target.dim(d + shift), source.dim(d)))
            .collect();
        ModuleMap::assemble(source.clone(), target.clone(), shift, mats)
    }

    pub fn source(&self) -> &GradedModule {
        &self.source
    }

    pub fn target(&self) -> &GradedModule {
        &self.target
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// The matrix on the degree-`d` piece; properly-shaped zero off support.
    pub fn mat(&self, d: i64) -> BitMatrix {
        if d >= self.source.lo() && d <= self.source.hi() {
            self.mats[(d - self.source.lo()) as usize].clone()
        } else {
            BitMatrix::zeros(self.target.dim(d + self.shift), self.source.dim(d))
        }
    }

    pub fn apply(&self, d: i64, v: &BitVec) -> BitVec {
        self.mat(d).apply(v)
    }

    pub fn is_zero_map(&self) -> bool {
        self.mats.iter().all(BitMatrix::is_zero)
    }

    pub fn map_eq(&self, other: &ModuleMap) -> bool {
        self.shift == other.shift
            && self.source.strict_eq(&other.source)
            && self.target.strict_eq(&other.target)
            && self.source.degrees().all(|d| self.mat(d) == other.mat(d))
    }

    /// `self` after `inner`.
    pub fn compose(&self, inner: &ModuleMap) -> Result<ModuleMap, GmodError> {
        if !inner.target.strict_eq(&self.source) {
            return Err(GmodError::ShapeMismatch(
                "compose: middle modules do not match".into(),
            ));
        }
        let shift = self.shift + inner.shift;
        let mats = inner
            .source
            .degrees()
            .map(|d| self.mat(d + inner.shift).mul(&inner.mat(d)))
            .collect();
        Ok(ModuleMap::assemble(inner.source.clone(), self.target.clone(), shift, mats))
    }

    pub fn add(&self, other: &ModuleMap) -> Result<ModuleMap, GmodError> {
        if self.shift != other.shift
            || !self.source.strict_eq(&other.source)
            || !self.target.strict_eq(&other.target)
        {
            return Err(GmodError::ShapeMismatch("sum of incompatible maps".into()));
        }
        let mats = self.source.degrees().map(|d| self.mat(d).add(&other.mat(d))).collect();
        Ok(ModuleMap::assemble(self.source.clone(), self.target.clone(), self.shift, mats))
    }

    /// Kernel as an induced module plus its inclusion.
    pub fn kernel(&self) -> (GradedModule, ModuleMap) {
        let subs: Vec<Subspace> = self.source.degrees().map(|d| self.mat(d).kernel()).collect();
        self.source.submodule_induced(&subs).expect("kernel subspaces are closed")
    }

    /// Image subspaces indexed by target degree.
    pub fn image_subspaces(&self) -> Vec<Subspace> {
        self.target
            .degrees()
            .map(|d| {
                let m = self.mat(d - self.shift);
                if m.cols() == 0 {
                    Subspace::zero(self.target.dim(d))
                } else {
                    m.image()
                }
            })
            .collect()
    }

    /// Image as a submodule of the target plus its inclusion.
    pub fn image(&self) -> (GradedModule, ModuleMap) {
        self.target
            .submodule_induced(&self.image_subspaces())
            .expect("image subspaces are closed")
    }

    /// Cokernel as a quotient of the target plus its projection.
    pub fn cokernel(&self) -> (GradedModule, ModuleMap) {
        self.target
            .quotient_induced(&self.image_subspaces())
            .expect("image subspaces are closed")
    }

    pub fn is_injective(&self) -> bool {
        self.source.degrees().all(|d| self.mat(d).kernel().dim() == 0)
    }

    pub fn is_surjective(&self) -> bool {
        let im = self.image_subspaces();
        self.target.degrees().zip(im).all(|(d, s)| s.dim() == self.target.dim(d))
    }

    pub fn is_bijective(&self) -> bool {
        self.source.degrees().all(|d| self.mat(d).is_invertible())
            && self.target.degrees().all(|d| self.mat(d - self.shift).is_invertible())
    }

    /// Inverse of a degreewise-invertible map.
    pub fn inverse(&self) -> Option<ModuleMap> {
        if !self.is_bijective() {
            return None;
        }
        let mats = self
            .target
            .degrees()
            .map(|d| self.mat(d - self.shift).inverse().expect("checked invertible"))
            .collect();
        Some(ModuleMap::assemble(self.target.clone(), self.source.clone(), -self.shift, mats))
    }

    /// The dual map between dual modules, same shift.
    pub fn dual_map(&self) -> ModuleMap {
        let source = self.target.dual();
        let target = self.source.dual();
        let mats = source.degrees().map(|d| self.mat(-d - self.shift).transpose()).collect();
        ModuleMap::assemble(source, target, self.shift, mats)
    }

    /// `self (x) other` between tensor products.
    pub fn tensor_with(&self, other: &ModuleMap) -> ModuleMap {
        let source = self.source.tensor(&other.source).expect("same algebra");
        let target = self.target.tensor(&other.target).expect("same algebra");
        let shift = self.shift + other.shift;
        let mats = source
            .degrees()
            .map(|d| {
                let src = tensor_splits(&self.source, &other.source, d);
                let tgt = tensor_splits(&self.target, &other.target, d + shift);
                let rows = target.dim(d + shift);
                let cols = source.dim(d);
                let mut m = BitMatrix::zeros(rows, cols);
                for s in &src {
                    let a = self.mat(s.left);
                    let b = other.mat(d - s.left);
                    if a.rows() == 0 || b.rows() == 0 {
                        continue;
                    }
                    let te = s.left + self.shift;
                    if let Some(t) = tgt.iter().find(|t| t.left == te) {
                        m.xor_block(t.offset, s.offset, &a.kronecker(&b));
                    }
                }
                m
            })
            .collect();
        ModuleMap::assemble(source, target, shift, mats)
    }

    /// Shift both ends by `t` (the same matrices).
    pub fn shifted(&self, t: i64) -> ModuleMap {
        ModuleMap {
            source: self.source.shift(t),
            target: self.target.shift(t),
            shift: self.shift,
            mats: self.mats.clone(),
        }
    }
}

impl std::fmt::Debug for ModuleMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ModuleMap({:?} -> {:?}, shift {})",
            self.source, self.target, self.shift
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::preset;

    fn a1() -> AlgebraRef {
        preset("A1").unwrap()
    }

    #[test]
    fn unit_module_has_one_dimension_in_degree_zero() {
        let u = unit_module(&a1());
        assert_eq!(u.dims_list(), vec![(0, 1)]);
        assert!(!u.is_zero());
    }

    #[test]
    fn free_rank_one_matches_the_algebra_dims() {
        let f = FreeModule::new(a1(), vec![0]);
        assert_eq!(
            f.module().dims_list(),
            vec![(0, 1), (1, 1), (2, 1), (3, 2), (4, 1), (5, 1), (6, 1)]
        );
        let (d, v) = f.generator_vector(0);
        assert_eq!(d, 0);
        assert_eq!(v.count_ones(), 1);
    }

    #[test]
    fn joker_is_the_quotient_by_the_degree_three_ideal() {
        let j = joker();
        assert_eq!(j.dims_list(), vec![(0, 1), (1, 1), (2, 1), (3, 1), (4, 1)]);
    }

    #[test]
    fn induced_cells_have_the_expected_dimensions() {
        let a = a1();
        let c0 = induced_cell(&a, 1).unwrap();
        assert_eq!(c0.dims_list(), vec![(0, 1), (1, 0), (2, 1), (3, 1), (4, 0), (5, 1)]);
        let c1 = induced_cell(&a, 2).unwrap();
        assert_eq!(c1.dims_list(), vec![(0, 1), (1, 1), (2, 1), (3, 1)]);
    }

    #[test]
    fn tensor_with_the_unit_is_literal() {
        let j = joker();
        let u = unit_module(&a1());
        assert!(u.tensor(&j).unwrap().strict_eq(&j));
        assert!(j.tensor(&u).unwrap().strict_eq(&j));
    }

    #[test]
    fn tensor_dims_are_the_convolution() {
        let j = joker();
        let jj = j.tensor(&j).unwrap();
        let expect: Vec<(i64, usize)> =
            vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 4), (6, 3), (7, 2), (8, 1)];
        assert_eq!(jj.dims_list(), expect);
    }

    #[test]
    fn dual_is_a_literal_involution() {
        for m in [unit_module(&a1()), joker(), FreeModule::new(a1(), vec![0, 2]).into_module()] {
            let dd = m.dual().dual();
            assert!(dd.strict_eq(&m));
        }
        assert!(unit_module(&a1()).dual().strict_eq(&unit_module(&a1())));
    }

    #[test]
    fn dual_mirrors_dimensions() {
        let j = joker();
        let d = j.dual();
        assert_eq!(d.lo(), -4);
        for deg in -4..=0 {
            assert_eq!(d.dim(deg), j.dim(-deg));
        }
    }

    #[test]
    fn shift_moves_support() {
        let j = joker().shift(3);
        assert_eq!(j.lo(), 3);
        assert_eq!(j.hi(), 7);
        let back = j.shift(-3);
        assert!(back.strict_eq(&joker()));
    }

    #[test]
    fn direct_sum_adds_dimensions() {
        let j = joker();
        let u = unit_module(&a1());
        let s = j.direct_sum(&u).unwrap();
        assert_eq!(s.dim(0), 2);
        assert_eq!(s.total_dim(), 6);
    }

    #[test]
    fn restriction_to_an_exterior_subalgebra_validates() {
        let a = a1();
        let f = FreeModule::new(a.clone(), vec![0]).into_module();
        let sub = preset("lambda(0)").unwrap();
        let images = vec![a.generator_elt(0)];
        let r = f.restrict(&sub, &images).unwrap();
        assert_eq!(r.total_dim(), 8);
        assert_eq!(r.algebra().name(), "lambda(0)");
    }

    #[test]
    fn restriction_rejects_non_square_zero_images() {
        let a = a1();
        let f = FreeModule::new(a.clone(), vec![0]).into_module();
        let sub = preset("lambda(1)").unwrap();
        // Sq2 Sq1 has degree 3 but does not square to zero, so it cannot
        // carry an exterior generator's action
        let bad = a.eval_word(&[1, 0]);
        assert!(f.restrict(&sub, &[bad]).is_err());
    }

    #[test]
    fn radical_of_free_rank_one_misses_only_the_generator() {
        let f = FreeModule::new(a1(), vec![0]).into_module();
        assert_eq!(f.head_dims(), vec![(0, 1)]);
        let rad: usize = f.rad_subspaces().iter().map(Subspace::dim).sum();
        assert_eq!(rad, f.total_dim() - 1);
    }

    #[test]
    fn submodule_closure_of_the_degree_three_class() {
        let a = a1();
        let f = FreeModule::new(a.clone(), vec![0]);
        let sq3 = a.eval_word(&[0, 1]);
        let (d, v) = (3i64, {
            let mut v = BitVec::zeros(f.module().dim(3));
            for i in sq3.coords.iter_ones() {
                v.set(i, true);
            }
            v
        });
        let subs = f.module().close_under_action(&[(d, v)]).unwrap();
        let total: usize = subs.iter().map(Subspace::dim).sum();
        assert_eq!(total, 3);
        let (sub, incl) = f.module().submodule_induced(&subs).unwrap();
        assert_eq!(sub.dims_list(), vec![(3, 1), (4, 0), (5, 1), (6, 1)]);
        assert!(incl.is_injective());
    }

    #[test]
    fn quotient_projection_is_surjective_with_the_right_kernel() {
        let a = a1();
        let f = FreeModule::new(a.clone(), vec![0]);
        let q1 = a.margolis_op(2).unwrap().elt.clone();
        let mut v = BitVec::zeros(f.module().dim(3));
        for i in q1.coords.iter_ones() {
            v.set(i, true);
        }
        let subs = f.module().close_under_action(&[(3, v)]).unwrap();
        let (q, proj) = f.module().quotient_induced(&subs).unwrap();
        assert!(proj.is_surjective());
        assert_eq!(q.dims_list(), vec![(0, 1), (1, 1), (2, 1), (3, 1)]);
        let (k, _) = proj.kernel();
        assert_eq!(k.total_dim(), 4);
    }

    #[test]
    fn non_equivariant_maps_are_rejected() {
        let j = joker();
        // a degree-0 "map" sending the bottom class to itself but killing
        // everything else is not equivariant
        let mats: Vec<BitMatrix> = j
            .degrees()
            .map(|d| {
                let mut m = BitMatrix::zeros(j.dim(d), j.dim(d));
                if d == 0 {
                    m.set(0, 0, true);
                }
                m
            })
            .collect();
        assert!(matches!(
            ModuleMap::try_new(j.clone(), j.clone(), 0, mats),
            Err(GmodError::NotAMap(_))
        ));
    }

    #[test]
    fn free_hom_to_hits_a_generator_image() {
        let a = a1();
        let f = FreeModule::new(a.clone(), vec![0]);
        let j = joker();
        let mut img = BitVec::zeros(1);
        img.set(0, true);
        let q = f.hom_to(&j, 0, &[img]).unwrap();
        assert!(q.is_surjective());
        let (k, _) = q.kernel();
        assert_eq!(k.total_dim(), 3);
    }

    #[test]
    fn composition_and_identity_behave() {
        let j = joker();
        let id = ModuleMap::identity(&j);
        let z = ModuleMap::zero_map(&j, &j, 0);
        assert!(id.compose(&id).unwrap().map_eq(&id));
        assert!(id.compose(&z).unwrap().is_zero_map());
        assert!(id.is_bijective());
        assert!(id.inverse().unwrap().map_eq(&id));
    }

    #[test]
    fn dual_map_of_identity_is_identity() {
        let j = joker();
        let id = ModuleMap::identity(&j);
        let d = id.dual_map();
        assert!(d.map_eq(&ModuleMap::identity(&j.dual())));
    }

    #[test]
    fn tensor_of_maps_respects_blocks() {
        let j = joker();
        let u = unit_module(&a1());
        let id_j = ModuleMap::identity(&j);
        let id_u = ModuleMap::identity(&u);
        let t = id_j.tensor_with(&id_u);
        assert!(t.is_bijective());
        assert!(t.source().strict_eq(&j));
    }

    /// Index of basis vector `i (x) j` in the `(e, d - e)` block of `x (x) y`.
    fn tensor_index(x: &GradedModule, y: &GradedModule, d: i64, e: i64, i: usize, j: usize) -> usize {
        let s = tensor_splits(x, y, d).into_iter().find(|s| s.left == e).expect("block exists");
        s.offset + i * y.dim(d - e) + j
    }

    #[test]
    fn the_swap_permutation_is_a_module_isomorphism() {
        // cocommutativity of the coproduct makes the factor swap equivariant
        let a = a1();
        let j = joker();
        let c = induced_cell(&a, 1).unwrap();
        let jc = j.tensor(&c).unwrap();
        let cj = c.tensor(&j).unwrap();
        let mats: Vec<BitMatrix> = jc
            .degrees()
            .map(|d| {
                let mut m = BitMatrix::zeros(cj.dim(d), jc.dim(d));
                for e in j.lo()..=j.hi() {
                    for i in 0..j.dim(e) {
                        for jj in 0..c.dim(d - e) {
                            let col = tensor_index(&j, &c, d, e, i, jj);
                            let row = tensor_index(&c, &j, d, d - e, jj, i);
                            m.set(row, col, true);
                        }
                    }
                }
                m
            })
            .collect();
        let swap = ModuleMap::try_new(jc, cj, 0, mats).expect("swap is equivariant");
        assert!(swap.is_bijective());
    }

    #[test]
    fn the_regrouping_permutation_is_a_module_isomorphism() {
        let a = a1();
        let x = joker();
        let y = induced_cell(&a, 1).unwrap();
        let z = induced_cell(&a, 2).unwrap();
        let xy = x.tensor(&y).unwrap();
        let yz = y.tensor(&z).unwrap();
        let ln = xy.tensor(&z).unwrap();
        let rn = x.tensor(&yz).unwrap();
        let mats: Vec<BitMatrix> = ln
            .degrees()
            .map(|d| {
                let mut m = BitMatrix::zeros(rn.dim(d), ln.dim(d));
                for ea in x.lo()..=x.hi() {
                    for eb in y.lo()..=y.hi() {
                        let ec = d - ea - eb;
                        for u in 0..x.dim(ea) {
                            for v in 0..y.dim(eb) {
                                for w in 0..z.dim(ec) {
                                    let inner = tensor_index(&x, &y, ea + eb, ea, u, v);
                                    let col = tensor_index(&xy, &z, d, ea + eb, inner, w);
                                    let inner2 = tensor_index(&y, &z, d - ea, eb, v, w);
                                    let row = tensor_index(&x, &yz, d, ea, u, inner2);
                                    m.set(row, col, true);
                                }
                            }
                        }
                    }
                }
                m
            })
            .collect();
        let assoc = ModuleMap::try_new(ln, rn, 0, mats).expect("regrouping is equivariant");
        assert!(assoc.is_bijective());
    }

    #[test]
    fn margolis_actions_square_to_zero_on_modules() {
        let j = joker();
        for k in 1..=2 {
            for d in j.lo()..=j.hi() {
                let opdeg = j.algebra().margolis_op(k).unwrap().degree() as i64;
                let twice = j.margolis_action(k, d + opdeg).mul(&j.margolis_action(k, d));
                assert!(twice.is_zero());
            }
        }
    }

    #[test]
    fn integral_action_on_free_has_full_generator_rank() {
        let f = FreeModule::new(a1(), vec![0, 2]).into_module();
        let total: usize = f.degrees().map(|d| f.integral_action(d).rank()).sum();
        assert_eq!(total, 2);
        let j = joker();
        let jtotal: usize = j.degrees().map(|d| j.integral_action(d).rank()).sum();
        assert_eq!(jtotal, 0);
    }
}
