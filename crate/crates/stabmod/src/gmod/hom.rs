//! Spaces of module maps as solution sets of linear systems.
//!
//! The unknown is a degreewise family of matrices; its entries are the
//! variables. Commuting with every algebra generator is a linear condition,
//! and pre- or post-composition constraints against fixed maps are affine
//! ones. The solver returns a basis of the homogeneous solution space or one
//! particular solution of the full system.

use super::{same_algebra, GmodError, GradedModule, ModuleMap};
use crate::linalg2::{BitMatrix, BitVec};

/// A linear system whose solutions are module maps `source -> target` of a
/// fixed degree shift.
pub struct HomSystem {
    source: GradedModule,
    target: GradedModule,
    shift: i64,
    /// Variable offset per source-degree offset; `usize::MAX` where the
    /// degree carries no variables.
    var_offsets: Vec<usize>,
    n_vars: usize,
    rows: Vec<BitVec>,
    rhs: Vec<bool>,
}

impl HomSystem {
    /// Set up the system with the equivariance constraints already in place.
    pub fn new(source: &GradedModule, target: &GradedModule, shift: i64) -> Result<HomSystem, GmodError> {
        if !same_algebra(source.algebra(), target.algebra()) {
            return Err(GmodError::AlgebraMismatch);
        }
        let mut var_offsets = Vec::new();
        let mut n_vars = 0;
        for d in source.lo()..=source.hi() {
            let block = target.dim(d + shift) * source.dim(d);
            if block > 0 {
                var_offsets.push(n_vars);
                n_vars += block;
            } else {
                var_offsets.push(usize::MAX);
            }
        }
        let mut sys = HomSystem {
            source: source.clone(),
            target: target.clone(),
            shift,
            var_offsets,
            n_vars,
            rows: Vec::new(),
            rhs: Vec::new(),
        };
        sys.push_equivariance();
        Ok(sys)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// Variable index of entry `(r, c)` of the matrix at source degree `d`,
    /// if that degree carries variables.
    fn var(&self, d: i64, r: usize, c: usize) -> Option<usize> {
        if d < self.source.lo() || d > self.source.hi() {
            return None;
        }
        let off = self.var_offsets[(d - self.source.lo()) as usize];
        if off == usize::MAX {
            return None;
        }
        Some(off + r * self.source.dim(d) + c)
    }

    fn push_row(&mut self, row: BitVec, rhs: bool) {
        if row.is_zero() {
            // a constant constraint: unsatisfiable when rhs is set
            if rhs {
                self.rows.push(row);
                self.rhs.push(true);
            }
            return;
        }
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    /// For every generator `g`: `u (act_M g) = (act_N g) u` degreewise.
    fn push_equivariance(&mut self) {
        let algebra = self.source.algebra().clone();
        for g in 0..algebra.generators().len() {
            let gdeg = algebra.generators()[g].degree as i64;
            for d in self.source.lo()..=self.source.hi() {
                let m_g = self.source.gen_action(g, d);
                let n_g = self.target.gen_action(g, d + self.shift);
                let rows_out = self.target.dim(d + gdeg + self.shift);
                let cols_out = self.source.dim(d);
                for r in 0..rows_out {
                    for c in 0..cols_out {
                        let mut row = BitVec::zeros(self.n_vars);
                        for j in 0..self.source.dim(d + gdeg) {
                            if m_g.get(j, c) {
                                if let Some(v) = self.var(d + gdeg, r, j) {
                                    row.set(v, !row.get(v));
                                }
                            }
                        }
                        for i in 0..self.target.dim(d + self.shift) {
                            if n_g.get(r, i) {
                                if let Some(v) = self.var(d, i, c) {
                                    row.set(v, !row.get(v));
                                }
                            }
                        }
                        self.push_row(row, false);
                    }
                }
            }
        }
    }

    /// Constrain `post . u = rhs`, for `post: target -> P` and
    /// `rhs: source -> P`.
    pub fn require_post(&mut self, post: &ModuleMap, rhs: &ModuleMap) -> Result<(), GmodError> {
        if !post.source().strict_eq(&self.target)
            || !rhs.source().strict_eq(&self.source)
            || rhs.shift() != self.shift + post.shift()
        {
            return Err(GmodError::ShapeMismatch("post-composition constraint mismatch".into()));
        }
        for d in self.source.lo()..=self.source.hi() {
            let p = post.mat(d + self.shift);
            let b = rhs.mat(d);
            for r in 0..p.rows() {
                for c in 0..self.source.dim(d) {
                    let mut row = BitVec::zeros(self.n_vars);
                    for i in 0..self.target.dim(d + self.shift) {
                        if p.get(r, i) {
                            if let Some(v) = self.var(d, i, c) {
                                row.set(v, !row.get(v));
                            }
                        }
                    }
                    self.push_row(row, b.get(r, c));
                }
            }
        }
        Ok(())
    }

    /// Constrain `u . pre = rhs`, for `pre: Q -> source` and
    /// `rhs: Q -> target`.
    pub fn require_pre(&mut self, pre: &ModuleMap, rhs: &ModuleMap) -> Result<(), GmodError> {
        if !pre.target().strict_eq(&self.source)
            || !rhs.source().strict_eq(pre.source())
            || rhs.shift() != self.shift + pre.shift()
        {
            return Err(GmodError::ShapeMismatch("pre-composition constraint mismatch".into()));
        }
        for e in pre.source().lo()..=pre.source().hi() {
            let d = e + pre.shift();
            let p = pre.mat(e);
            let b = rhs.mat(e);
            for r in 0..self.target.dim(d + self.shift) {
                for c in 0..pre.source().dim(e) {
                    let mut row = BitVec::zeros(self.n_vars);
                    for j in 0..self.source.dim(d) {
                        if p.get(j, c) {
                            if let Some(v) = self.var(d, r, j) {
                                row.set(v, !row.get(v));
                            }
                        }
                    }
                    self.push_row(row, b.get(r, c));
                }
            }
        }
        Ok(())
    }

    fn constraint_matrix(&self) -> BitMatrix {
        BitMatrix::from_rows(&self.rows, self.n_vars)
    }

    fn vec_to_map(&self, v: &BitVec) -> ModuleMap {
        let mats = (self.source.lo()..=self.source.hi())
            .map(|d| {
                let rows = self.target.dim(d + self.shift);
                let cols = self.source.dim(d);
                let mut m = BitMatrix::zeros(rows, cols);
                for r in 0..rows {
                    for c in 0..cols {
                        if let Some(var) = self.var(d, r, c) {
                            if v.get(var) {
                                m.set(r, c, true);
                            }
                        }
                    }
                }
                m
            })
            .collect();
        ModuleMap::assemble(self.source.clone(), self.target.clone(), self.shift, mats)
    }

    /// Basis of the solution space of the homogeneous part. Meaningful as a
    /// solution set only when no affine constraints were added.
    pub fn solve_space(&self) -> Vec<ModuleMap> {
        assert!(
            self.rhs.iter().all(|&b| !b),
            "solve_space called on a system with affine constraints"
        );
        if self.n_vars == 0 {
            return Vec::new();
        }
        self.constraint_matrix()
            .kernel()
            .basis()
            .iter()
            .map(|v| self.vec_to_map(v))
            .collect()
    }

    /// One solution of the full affine system, if any exists.
    pub fn solve_one(&self) -> Option<ModuleMap> {
        let c = self.constraint_matrix();
        let b = BitVec::from_bits(&self.rhs);
        match c.solve(&b) {
            Ok(Some(v)) => Some(self.vec_to_map(&v)),
            _ => None,
        }
    }
}

/// Basis of the space of degree-`shift` module maps `source -> target`.
pub fn hom_space(
    source: &GradedModule,
    target: &GradedModule,
    shift: i64,
) -> Result<Vec<ModuleMap>, GmodError> {
    Ok(HomSystem::new(source, target, shift)?.solve_space())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmod::{joker, unit_module, FreeModule};
    use crate::hopf::preset;

    #[test]
    fn endomorphisms_of_the_unit_are_scalars() {
        let a = preset("A1").unwrap();
        let u = unit_module(&a);
        let h = hom_space(&u, &u, 0).unwrap();
        assert_eq!(h.len(), 1);
        assert!(h[0].is_bijective());
    }

    #[test]
    fn maps_from_a_free_module_are_the_target_fiber() {
        let a = preset("A1").unwrap();
        let f = FreeModule::new(a, vec![0]).into_module();
        let j = joker();
        for t in -2..=6 {
            let h = hom_space(&f, &j, t).unwrap();
            assert_eq!(h.len(), j.dim(t), "shift {t}");
        }
    }

    #[test]
    fn unit_maps_into_a_module_land_in_the_socle() {
        let a = preset("A1").unwrap();
        let u = unit_module(&a);
        let f = FreeModule::new(a, vec![0]).into_module();
        // maps 1 -> A of shift t are vectors killed by the whole augmentation
        // ideal: only the top class qualifies
        for t in 0..=6 {
            let h = hom_space(&u, &f, t).unwrap();
            assert_eq!(h.len(), usize::from(t == 6), "shift {t}");
        }
    }

    #[test]
    fn post_composition_constraints_cut_the_space() {
        let j = joker();
        let idj = crate::gmod::ModuleMap::identity(&j);
        let mut sys = HomSystem::new(&j, &j, 0).unwrap();
        sys.require_post(&idj, &idj).unwrap();
        let u = sys.solve_one().expect("identity solves it");
        assert!(u.map_eq(&idj));
    }

    #[test]
    fn infeasible_affine_systems_return_none() {
        let j = joker();
        let z = crate::gmod::ModuleMap::zero_map(&j, &j, 0);
        let mut sys = HomSystem::new(&j, &j, 0).unwrap();
        // ask for zero . u = id, impossible
        let idj = crate::gmod::ModuleMap::identity(&j);
        sys.require_post(&z, &idj).unwrap();
        assert!(sys.solve_one().is_none());
    }
}
