//! Finite-dimensional graded connected Hopf algebras over F2.
//!
//! An algebra is held as raw per-degree structure constants: one matrix per
//! degree pair for multiplication, one per splitting for comultiplication, a
//! per-degree antipode, a distinguished generator list, and (when present) an
//! ordered family of exterior primitives used for Margolis homology. Nothing
//! here is entered by hand: presets are produced from generator/relation data
//! by [`presentation`] and must pass [`HopfAlgebra::validate`] before being
//! served.

mod presentation;
mod presets;
pub mod schema;
mod validate;

pub use presentation::{Presentation, TensorSummand};
pub use presets::preset;
pub use validate::{AxiomFailure, ValidationReport};

use crate::linalg2::{BitMatrix, BitVec};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use std::sync::Arc;

#[derive(Debug, Error, Clone)]
pub enum HopfError {
    #[error("algebra does not vanish above the declared top degree (degree {0} has dimension {1})")]
    NotFiniteDimensional(usize, usize),
    #[error("generators do not span degree {0}")]
    GeneratorsDontSpan(usize),
    #[error("word enumeration exploded in degree {0}; not a small presentation")]
    WordExplosion(usize),
    #[error("no two-sided integral: the socle system has solution dimension {0}")]
    NoIntegral(usize),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("validation failed: {0}")]
    ValidationFailed(String),
    #[error("malformed algebra data: {0}")]
    Malformed(String),
}

/// A homogeneous element: coordinates in the chosen basis of one degree.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgElt {
    pub degree: usize,
    pub coords: BitVec,
}

impl AlgElt {
    pub fn zero(degree: usize, dim: usize) -> Self {
        AlgElt { degree, coords: BitVec::zeros(dim) }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }

    pub fn add(&self, other: &AlgElt) -> AlgElt {
        assert_eq!(self.degree, other.degree, "sum of elements of different degrees");
        let mut coords = self.coords.clone();
        coords.xor_assign(&other.coords);
        AlgElt { degree: self.degree, coords }
    }
}

impl std::fmt::Debug for AlgElt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AlgElt(deg {}, {:?})", self.degree, self.coords)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Generator {
    pub label: String,
    pub degree: usize,
    pub coords: BitVec,
}

/// One of the distinguished exterior primitives `p_1, ..., p_N`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MargolisOp {
    /// 1-based position in the family, ordered by degree.
    pub index: usize,
    pub label: String,
    pub elt: AlgElt,
}

impl MargolisOp {
    pub fn degree(&self) -> usize {
        self.elt.degree
    }
}

/// A finite-dimensional graded connected Hopf algebra over F2, given by
/// structure constants. Degree 0 is one-dimensional, spanned by the unit.
#[derive(Clone, Serialize, Deserialize)]
pub struct HopfAlgebra {
    name: String,
    dims: Vec<usize>,
    /// `mult[d1][d2]`: A_{d1} (x) A_{d2} -> A_{d1+d2}, stored for d1+d2 <= top.
    mult: Vec<Vec<BitMatrix>>,
    /// `comult[d][d1]`: the (d1, d-d1) component A_d -> A_{d1} (x) A_{d-d1}.
    comult: Vec<Vec<BitMatrix>>,
    antipode: Vec<BitMatrix>,
    generators: Vec<Generator>,
    margolis: Vec<MargolisOp>,
    /// Expression of each basis element as a sum of words in the generators;
    /// `basis_exprs[d][i]` is a list of words, each word a list of generator
    /// indices. Degree 0 holds the empty word.
    basis_exprs: Vec<Vec<Vec<Vec<usize>>>>,
    basis_labels: Vec<Vec<String>>,
    /// The two-sided integral: the unique element killed by every
    /// positive-degree element on both sides; spans the top degree.
    integral: AlgElt,
}

impl HopfAlgebra {
    /// Raw constructor used by the presentation builder and the file loader.
    /// Completes derived data (basis expressions) and checks shape sanity but
    /// not the Hopf axioms; call [`validate`](Self::validate) for those.
    pub(crate) fn assemble(
        name: String,
        dims: Vec<usize>,
        mult: Vec<Vec<BitMatrix>>,
        comult: Vec<Vec<BitMatrix>>,
        antipode: Vec<BitMatrix>,
        generators: Vec<Generator>,
        margolis: Vec<MargolisOp>,
    ) -> Result<HopfAlgebra, HopfError> {
        if dims.is_empty() || dims[0] != 1 {
            return Err(HopfError::Malformed("degree 0 must be one-dimensional".into()));
        }
        let mut alg = HopfAlgebra {
            name,
            dims,
            mult,
            comult,
            antipode,
            generators,
            margolis,
            basis_exprs: Vec::new(),
            basis_labels: Vec::new(),
            integral: AlgElt::zero(0, 1),
        };
        alg.check_shapes()?;
        alg.compute_basis_expressions()?;
        alg.integral = alg.solve_integral()?;
        Ok(alg)
    }

    fn check_shapes(&self) -> Result<(), HopfError> {
        let top = self.top();
        for d1 in 0..=top {
            for d2 in 0..=top - d1 {
                let m = &self.mult[d1][d2];
                if m.rows() != self.dim(d1 + d2) || m.cols() != self.dim(d1) * self.dim(d2) {
                    return Err(HopfError::Malformed(format!(
                        "multiplication matrix ({d1},{d2}) has shape {}x{}",
                        m.rows(),
                        m.cols()
                    )));
                }
            }
        }
        for d in 0..=top {
            for d1 in 0..=d {
                let m = &self.comult[d][d1];
                if m.rows() != self.dim(d1) * self.dim(d - d1) || m.cols() != self.dim(d) {
                    return Err(HopfError::Malformed(format!(
                        "comultiplication component ({d1},{}) of degree {d} has shape {}x{}",
                        d - d1,
                        m.rows(),
                        m.cols()
                    )));
                }
            }
            let s = &self.antipode[d];
            if s.rows() != self.dim(d) || s.cols() != self.dim(d) {
                return Err(HopfError::Malformed(format!("antipode in degree {d} is not square")));
            }
        }
        for g in &self.generators {
            if g.coords.len() != self.dim(g.degree) {
                return Err(HopfError::Malformed(format!("generator {} has bad coordinates", g.label)));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Highest degree carrying a nonzero piece.
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, d: usize) -> usize {
        self.dims.get(d).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn margolis_ops(&self) -> &[MargolisOp] {
        &self.margolis
    }

    pub fn unit(&self) -> AlgElt {
        AlgElt { degree: 0, coords: BitVec::unit(1, 0) }
    }

    pub fn basis_elt(&self, degree: usize, i: usize) -> AlgElt {
        AlgElt { degree, coords: BitVec::unit(self.dim(degree), i) }
    }

    pub fn generator_elt(&self, g: usize) -> AlgElt {
        let gen = &self.generators[g];
        AlgElt { degree: gen.degree, coords: gen.coords.clone() }
    }

    pub fn mult_matrix(&self, d1: usize, d2: usize) -> BitMatrix {
        if d1 + d2 <= self.top() {
            self.mult[d1][d2].clone()
        } else {
            BitMatrix::zeros(0, self.dim(d1) * self.dim(d2))
        }
    }

    /// The (d1, d - d1) component of the comultiplication on degree d.
    pub fn comult_component(&self, d: usize, d1: usize) -> BitMatrix {
        assert!(d1 <= d && d <= self.top());
        self.comult[d][d1].clone()
    }

    pub fn antipode_matrix(&self, d: usize) -> BitMatrix {
        if d <= self.top() {
            self.antipode[d].clone()
        } else {
            BitMatrix::zeros(0, 0)
        }
    }

    pub fn antipode_of(&self, e: &AlgElt) -> AlgElt {
        AlgElt { degree: e.degree, coords: self.antipode_matrix(e.degree).apply(&e.coords) }
    }

    pub fn counit_of(&self, e: &AlgElt) -> bool {
        e.degree == 0 && e.coords.get(0)
    }

    pub fn multiply(&self, a: &AlgElt, b: &AlgElt) -> AlgElt {
        let d = a.degree + b.degree;
        if d > self.top() {
            return AlgElt::zero(d, 0);
        }
        let coords = self.mult[a.degree][b.degree].apply(&a.coords.kronecker(&b.coords));
        AlgElt { degree: d, coords }
    }

    /// Matrix of `x -> e * x` on the piece of degree `d`.
    pub fn left_mult_matrix(&self, e: &AlgElt, d: usize) -> BitMatrix {
        let target = e.degree + d;
        let mut m = BitMatrix::zeros(self.dim(target), self.dim(d));
        for j in 0..self.dim(d) {
            let prod = self.multiply(e, &self.basis_elt(d, j));
            for i in prod.coords.iter_ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    /// Matrix of `x -> x * e` on the piece of degree `d`.
    pub fn right_mult_matrix(&self, e: &AlgElt, d: usize) -> BitMatrix {
        let target = e.degree + d;
        let mut m = BitMatrix::zeros(self.dim(target), self.dim(d));
        for j in 0..self.dim(d) {
            let prod = self.multiply(&self.basis_elt(d, j), e);
            for i in prod.coords.iter_ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    /// Full coproduct of an element, as one matrix column per splitting.
    pub fn comult_of(&self, e: &AlgElt) -> Vec<(usize, usize, BitVec)> {
        (0..=e.degree)
            .map(|d1| (d1, e.degree - d1, self.comult[e.degree][d1].apply(&e.coords)))
            .collect()
    }

    /// Expression of basis element `(d, i)` as a sum of words in generators.
    pub fn basis_expr(&self, d: usize, i: usize) -> &[Vec<usize>] {
        &self.basis_exprs[d][i]
    }

    pub fn basis_label(&self, d: usize, i: usize) -> &str {
        &self.basis_labels[d][i]
    }

    /// Human-readable form of an element using the basis labels.
    pub fn elt_string(&self, e: &AlgElt) -> String {
        let terms: Vec<&str> =
            e.coords.iter_ones().map(|i| self.basis_label(e.degree, i)).collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// Find `p_k` (1-based) among the distinguished primitives.
    pub fn margolis_op(&self, k: usize) -> Option<&MargolisOp> {
        self.margolis.iter().find(|op| op.index == k)
    }

    /// Number of distinguished primitives.
    pub fn margolis_count(&self) -> usize {
        self.margolis.len()
    }

    /// Enumerate all words in the generators of total degree `d`.
    fn words_of_degree(&self, d: usize) -> Result<Vec<Vec<usize>>, HopfError> {
        const CAP: usize = 200_000;
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
        while let Some((word, deg)) = stack.pop() {
            if deg == d {
                out.push(word);
                if out.len() > CAP {
                    return Err(HopfError::WordExplosion(d));
                }
                continue;
            }
            for (gi, g) in self.generators.iter().enumerate() {
                if g.degree > 0 && deg + g.degree <= d {
                    let mut w = word.clone();
                    w.push(gi);
                    stack.push((w, deg + g.degree));
                }
            }
        }
        Ok(out)
    }

    pub fn eval_word(&self, word: &[usize]) -> AlgElt {
        let mut acc = self.unit();
        for &g in word {
            acc = self.multiply(&acc, &self.generator_elt(g));
        }
        acc
    }

    fn word_label(&self, word: &[usize]) -> String {
        if word.is_empty() {
            "1".into()
        } else {
            word.iter().map(|&g| self.generators[g].label.as_str()).collect::<Vec<_>>().join("")
        }
    }

    /// For every degree, express each basis element as a sum of evaluated
    /// words in the generators. Fails when the generators do not span.
    fn compute_basis_expressions(&mut self) -> Result<(), HopfError> {
        let top = self.top();
        let mut exprs: Vec<Vec<Vec<Vec<usize>>>> = Vec::with_capacity(top + 1);
        let mut labels: Vec<Vec<String>> = Vec::with_capacity(top + 1);
        for d in 0..=top {
            let n = self.dim(d);
            if n == 0 {
                exprs.push(Vec::new());
                labels.push(Vec::new());
                continue;
            }
            // greedily collect word values until they span the degree
            let words = self.words_of_degree(d)?;
            let mut chosen: Vec<Vec<usize>> = Vec::new();
            let mut values: Vec<BitVec> = Vec::new();
            let mut span = crate::linalg2::Subspace::zero(n);
            for w in words {
                let v = self.eval_word(&w);
                if !v.is_zero() && !span.contains(&v.coords) {
                    span = span
                        .sum(&crate::linalg2::Subspace::from_vectors(n, std::slice::from_ref(&v.coords)));
                    chosen.push(w);
                    values.push(v.coords);
                    if span.dim() == n {
                        break;
                    }
                }
            }
            if span.dim() != n {
                return Err(HopfError::GeneratorsDontSpan(d));
            }
            // solve for each basis vector in terms of the chosen word values
            let value_cols = BitMatrix::from_rows(&values, n).transpose();
            let mut degree_exprs = Vec::with_capacity(n);
            let mut degree_labels = Vec::with_capacity(n);
            for i in 0..n {
                let sol = value_cols
                    .solve(&BitVec::unit(n, i))
                    .expect("shape is consistent")
                    .expect("span covers the basis vector");
                let expr: Vec<Vec<usize>> =
                    sol.iter_ones().map(|j| chosen[j].clone()).collect();
                let label = expr
                    .iter()
                    .map(|w| self.word_label(w))
                    .collect::<Vec<_>>()
                    .join("+");
                degree_exprs.push(expr);
                degree_labels.push(label);
            }
            exprs.push(degree_exprs);
            labels.push(degree_labels);
        }
        self.basis_exprs = exprs;
        self.basis_labels = labels;
        Ok(())
    }

    /// The two-sided integral, computed at assembly: the unique (up to
    /// scalar) element annihilated by every positive-degree element on both
    /// sides. For a valid connected algebra it spans the top degree.
    pub fn integral(&self) -> &AlgElt {
        &self.integral
    }

    fn solve_integral(&self) -> Result<AlgElt, HopfError> {
        let top = self.top();
        let mut solutions: Vec<AlgElt> = Vec::new();
        for d in 0..=top {
            let n = self.dim(d);
            if n == 0 {
                continue;
            }
            let mut rows = BitMatrix::zeros(0, n);
            for e in 1..=top {
                for i in 0..self.dim(e) {
                    let b = self.basis_elt(e, i);
                    rows = rows.vstack(&self.left_mult_matrix(&b, d));
                    rows = rows.vstack(&self.right_mult_matrix(&b, d));
                }
            }
            for v in rows.kernel().basis() {
                solutions.push(AlgElt { degree: d, coords: v });
            }
        }
        if solutions.len() != 1 {
            return Err(HopfError::NoIntegral(solutions.len()));
        }
        let t = solutions.pop().expect("checked length");
        if t.degree != top {
            return Err(HopfError::NoIntegral(0));
        }
        Ok(t)
    }

    /// Copy with one comultiplication structure constant flipped; used to
    /// exercise the validator on broken input.
    pub fn with_comult_entry_flipped(&self, d: usize, d1: usize, row: usize, col: usize) -> HopfAlgebra {
        let mut alg = self.clone();
        let cur = alg.comult[d][d1].get(row, col);
        alg.comult[d][d1].set(row, col, !cur);
        alg
    }
}

impl std::fmt::Debug for HopfAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "HopfAlgebra({}, dims {:?})", self.name, self.dims)
    }
}

/// Shared handle type; algebras are immutable once built.
pub type AlgebraRef = Arc<HopfAlgebra>;

#[cfg(test)]
mod tests {
    use super::*;

    fn a1() -> AlgebraRef {
        preset("A1").unwrap()
    }

    // words are generator-index lists: 0 = Sq1, 1 = Sq2
    #[test]
    fn a1_relations_hold_in_the_quotient() {
        let a = a1();
        assert!(a.eval_word(&[0, 0]).is_zero());
        assert_eq!(a.eval_word(&[1, 1]), a.eval_word(&[0, 1, 0]));
        // degree 5: Sq1 Sq2 Sq2 and Sq2 Sq2 Sq1 die, Sq2 Sq1 Sq2 survives
        assert!(a.eval_word(&[0, 1, 1]).is_zero());
        assert!(a.eval_word(&[1, 1, 0]).is_zero());
        assert!(!a.eval_word(&[1, 0, 1]).is_zero());
        // degree 6 collapses onto the integral
        let top = a.eval_word(&[1, 1, 1]);
        assert!(!top.is_zero());
        assert_eq!(a.eval_word(&[0, 1, 0, 1]), top);
        assert_eq!(a.eval_word(&[1, 0, 1, 0]), top);
        assert!(a.eval_word(&[0, 1, 1, 0]).is_zero());
        assert_eq!(a.integral(), &top);
    }

    #[test]
    fn a1_degree_three_basis_is_labelled_by_words() {
        let a = a1();
        let labels: Vec<&str> = (0..a.dim(3)).map(|i| a.basis_label(3, i)).collect();
        assert_eq!(labels.len(), 2);
        assert!(labels.contains(&"Sq1Sq2"));
        assert!(labels.contains(&"Sq2Sq1"));
    }

    #[test]
    fn basis_expressions_evaluate_back_to_the_basis() {
        for name in ["lambda(1)", "E1", "A1", "E2"] {
            let a = preset(name).unwrap();
            for d in 0..=a.top() {
                for i in 0..a.dim(d) {
                    let mut acc = AlgElt::zero(d, a.dim(d));
                    for w in a.basis_expr(d, i) {
                        acc = acc.add(&a.eval_word(w));
                    }
                    assert_eq!(acc, a.basis_elt(d, i), "{name} degree {d} elt {i}");
                }
            }
        }
    }

    #[test]
    fn antipode_reverses_products() {
        let a = a1();
        let xy = a.eval_word(&[0, 1]);
        let yx = a.eval_word(&[1, 0]);
        assert_eq!(a.antipode_of(&xy), yx);
        assert_eq!(a.antipode_of(&yx), xy);
        // generators are primitive, hence fixed
        for g in 0..2 {
            let e = a.generator_elt(g);
            assert_eq!(a.antipode_of(&e), e);
        }
    }

    #[test]
    fn one_sided_mult_matrices_match_multiply() {
        let a = a1();
        for g in 0..2 {
            let e = a.generator_elt(g);
            for d in 0..=a.top() {
                let lm = a.left_mult_matrix(&e, d);
                let rm = a.right_mult_matrix(&e, d);
                for j in 0..a.dim(d) {
                    let b = a.basis_elt(d, j);
                    assert_eq!(lm.apply(&b.coords), a.multiply(&e, &b).coords);
                    assert_eq!(rm.apply(&b.coords), a.multiply(&b, &e).coords);
                }
            }
        }
    }

    #[test]
    fn a1_q1_is_the_commutator() {
        let a = a1();
        let q1 = a.margolis_op(2).unwrap();
        let commutator = a.eval_word(&[0, 1]).add(&a.eval_word(&[1, 0]));
        assert_eq!(q1.elt, commutator);
        assert_eq!(a.elt_string(&q1.elt), "Sq1Sq2+Sq2Sq1");
    }

    #[test]
    fn products_beyond_the_top_degree_vanish() {
        let a = a1();
        let t = a.integral().clone();
        let prod = a.multiply(&t, &a.generator_elt(0));
        assert_eq!(prod.degree, 7);
        assert!(prod.coords.is_empty());
    }

    #[test]
    fn undeclared_relations_surface_as_nonvanishing() {
        // omitting the Adem relation makes the algebra infinite-dimensional
        let p = Presentation {
            name: "broken".into(),
            generators: vec![("Sq1".into(), 1), ("Sq2".into(), 2)],
            relations: vec![vec![vec![0, 0]]],
            coproducts: vec![
                vec![TensorSummand::new(&[0], &[]), TensorSummand::new(&[], &[0])],
                vec![
                    TensorSummand::new(&[1], &[]),
                    TensorSummand::new(&[0], &[0]),
                    TensorSummand::new(&[], &[1]),
                ],
            ],
            top: 6,
            margolis: vec![],
        };
        assert!(matches!(p.build(), Err(HopfError::NotFiniteDimensional(_, _))));
    }
}
