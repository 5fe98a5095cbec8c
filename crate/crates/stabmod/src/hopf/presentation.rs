//! Construction of a Hopf algebra from generators and relations.
//!
//! The quotient of the free associative algebra by the two-sided ideal of the
//! relations is computed degree by degree: in each degree the span of all
//! `u * r * v` with words `u, v` is eliminated from the span of all words,
//! and the surviving cosets become the basis. Comultiplication is pushed
//! through as an algebra map from its values on generators, and the antipode
//! follows from the usual recursion in a connected coalgebra.

use super::{AlgElt, Generator, HopfAlgebra, HopfError, MargolisOp};
use crate::linalg2::{BitMatrix, BitVec, Subspace};
use std::collections::HashMap;

/// One summand `left (x) right` of a coproduct, with each side a word in the
/// generators (an empty word is the unit).
#[derive(Clone, Debug)]
pub struct TensorSummand {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl TensorSummand {
    pub fn new(left: &[usize], right: &[usize]) -> Self {
        TensorSummand { left: left.to_vec(), right: right.to_vec() }
    }
}

/// Generator/relation data for one algebra.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub name: String,
    /// Labels and positive degrees.
    pub generators: Vec<(String, usize)>,
    /// Each relation is a sum of words required to vanish.
    pub relations: Vec<Vec<Vec<usize>>>,
    /// Coproduct of each generator, including the two outer terms.
    pub coproducts: Vec<Vec<TensorSummand>>,
    /// Declared top nonzero degree; construction verifies it.
    pub top: usize,
    /// Distinguished exterior primitives as sums of words, in degree order.
    pub margolis: Vec<(String, Vec<Vec<usize>>)>,
}

/// Per-degree scratch data for the word quotient.
struct DegreeData {
    words: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    ideal: Subspace,
    /// Coset representatives (vectors in word space) forming the basis.
    reps: Vec<BitVec>,
    /// Ideal-reduced representatives as columns, for coordinate solving.
    reduced_cols: BitMatrix,
}

impl DegreeData {
    fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates in the chosen basis of a vector in word space.
    fn express(&self, f: &BitVec) -> BitVec {
        let r = self.ideal.reduce(f);
        if self.reps.is_empty() {
            assert!(r.is_zero(), "nonzero element in a zero degree");
            return BitVec::zeros(0);
        }
        self.reduced_cols
            .solve(&r)
            .expect("consistent shapes")
            .expect("representatives span the quotient")
    }
}

/// Element of the tensor square of the algebra under construction, of a fixed
/// total degree; one coordinate block per splitting.
#[derive(Clone)]
struct TensorElt {
    total: usize,
    parts: Vec<BitVec>,
}

impl Presentation {
    fn max_gen_degree(&self) -> usize {
        self.generators.iter().map(|(_, d)| *d).max().unwrap_or(0)
    }

    fn words_of_degree(&self, d: usize) -> Vec<Vec<usize>> {
        // depth-first, generators in index order: a stable enumeration so the
        // chosen bases are reproducible
        let mut out = Vec::new();
        let mut word = Vec::new();
        self.words_rec(d, &mut word, &mut out);
        out
    }

    fn words_rec(&self, remaining: usize, word: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(word.clone());
            return;
        }
        for (gi, (_, deg)) in self.generators.iter().enumerate() {
            if *deg > 0 && *deg <= remaining {
                word.push(gi);
                self.words_rec(remaining - deg, word, out);
                word.pop();
            }
        }
    }

    fn word_degree(&self, w: &[usize]) -> usize {
        w.iter().map(|&g| self.generators[g].1).sum()
    }

    /// Build and return the algebra. The declared top degree is verified: the
    /// quotient must vanish strictly above it (checked through a window of one
    /// extra generator degree, which suffices for a generated algebra).
    pub fn build(&self) -> Result<HopfAlgebra, HopfError> {
        let cutoff = self.top + self.max_gen_degree().max(1);
        let mut degrees: Vec<DegreeData> = Vec::with_capacity(cutoff + 1);

        for d in 0..=cutoff {
            let words = self.words_of_degree(d);
            let index: HashMap<Vec<usize>, usize> =
                words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
            let n = words.len();

            // span of u * r * v over all bracketing words
            let mut ideal_vecs: Vec<BitVec> = Vec::new();
            for rel in &self.relations {
                let rd = self.word_degree(&rel[0]);
                debug_assert!(rel.iter().all(|w| self.word_degree(w) == rd), "inhomogeneous relation");
                if rd > d {
                    continue;
                }
                for du in 0..=(d - rd) {
                    let dv = d - rd - du;
                    for u in self.words_of_degree(du) {
                        for v in self.words_of_degree(dv) {
                            let mut vec = BitVec::zeros(n);
                            for w in rel {
                                let mut full = u.clone();
                                full.extend_from_slice(w);
                                full.extend_from_slice(&v);
                                let i = index[&full];
                                vec.set(i, !vec.get(i));
                            }
                            if !vec.is_zero() {
                                ideal_vecs.push(vec);
                            }
                        }
                    }
                }
            }
            let ideal = Subspace::from_vectors(n, &ideal_vecs);
            let reps = Subspace::full(n).quotient_basis(&ideal).expect("ideal is a subspace");
            let reduced: Vec<BitVec> = reps.iter().map(|r| ideal.reduce(r)).collect();
            let reduced_cols = BitMatrix::from_rows(&reduced, n).transpose();
            degrees.push(DegreeData { words, index, ideal, reps, reduced_cols });
        }

        for (d, data) in degrees.iter().enumerate().skip(self.top + 1) {
            if data.dim() != 0 {
                return Err(HopfError::NotFiniteDimensional(d, data.dim()));
            }
        }
        if degrees[self.top].dim() == 0 {
            return Err(HopfError::Malformed(format!(
                "declared top degree {} is zero in the quotient",
                self.top
            )));
        }

        let dims: Vec<usize> = (0..=self.top).map(|d| degrees[d].dim()).collect();

        // multiplication: concatenate representative words and re-express
        let mut mult: Vec<Vec<BitMatrix>> = Vec::with_capacity(self.top + 1);
        for d1 in 0..=self.top {
            let mut row = Vec::with_capacity(self.top - d1 + 1);
            for d2 in 0..=(self.top - d1) {
                let target = &degrees[d1 + d2];
                let (n1, n2) = (dims[d1], dims[d2]);
                let mut m = BitMatrix::zeros(dims[d1 + d2], n1 * n2);
                for i in 0..n1 {
                    for j in 0..n2 {
                        let prod = concat_product(&degrees[d1], i, &degrees[d2], j, target);
                        let coords = target.express(&prod);
                        for r in coords.iter_ones() {
                            m.set(r, i * n2 + j, true);
                        }
                    }
                }
                row.push(m);
            }
            mult.push(row);
        }

        // generator coordinates
        let mut generators = Vec::with_capacity(self.generators.len());
        for (gi, (label, deg)) in self.generators.iter().enumerate() {
            let data = &degrees[*deg];
            let mut in_words = BitVec::zeros(data.words.len());
            in_words.set(data.index[&vec![gi]], true);
            generators.push(Generator {
                label: label.clone(),
                degree: *deg,
                coords: data.express(&in_words),
            });
        }

        // a multiplication-only evaluator for the coproduct computation
        let mul_elts = |a: &AlgElt, b: &AlgElt| -> AlgElt {
            let d = a.degree + b.degree;
            if d > self.top {
                return AlgElt::zero(d, 0);
            }
            AlgElt { degree: d, coords: mult[a.degree][b.degree].apply(&a.coords.kronecker(&b.coords)) }
        };
        let eval_word = |w: &[usize]| -> AlgElt {
            let mut acc = AlgElt { degree: 0, coords: BitVec::unit(1, 0) };
            for &g in w {
                let ge = AlgElt { degree: self.generators[g].1, coords: generators[g].coords.clone() };
                acc = mul_elts(&acc, &ge);
            }
            acc
        };

        let tensor_zero = |total: usize| TensorElt {
            total,
            parts: (0..=total.min(self.top))
                .map(|d1| {
                    let d2 = total - d1;
                    let n = if d2 <= self.top { dims[d1] * dims[d2] } else { 0 };
                    BitVec::zeros(n)
                })
                .collect(),
        };
        let tensor_mul = |x: &TensorElt, y: &TensorElt| -> TensorElt {
            let total = x.total + y.total;
            let mut out = tensor_zero(total);
            if total > 2 * self.top {
                return out;
            }
            for (a1, xa) in x.parts.iter().enumerate() {
                let a2 = x.total - a1;
                if a2 > self.top || xa.is_zero() {
                    continue;
                }
                for (b1, yb) in y.parts.iter().enumerate() {
                    let b2 = y.total - b1;
                    if b2 > self.top || yb.is_zero() {
                        continue;
                    }
                    let (t1, t2) = (a1 + b1, a2 + b2);
                    if t1 > self.top || t2 > self.top {
                        continue;
                    }
                    for ix in xa.iter_ones() {
                        let (i1, i2) = (ix / dims[a2], ix % dims[a2]);
                        for iy in yb.iter_ones() {
                            let (j1, j2) = (iy / dims[b2], iy % dims[b2]);
                            let p1 = mult[a1][b1]
                                .apply(&BitVec::unit(dims[a1], i1).kronecker(&BitVec::unit(dims[b1], j1)));
                            let p2 = mult[a2][b2]
                                .apply(&BitVec::unit(dims[a2], i2).kronecker(&BitVec::unit(dims[b2], j2)));
                            let term = p1.kronecker(&p2);
                            out.parts[t1].xor_assign(&term);
                        }
                    }
                }
            }
            out
        };

        // coproducts of generators, then of every basis element
        let gen_coproduct = |gi: usize| -> TensorElt {
            let deg = self.generators[gi].1;
            let mut out = tensor_zero(deg);
            for s in &self.coproducts[gi] {
                let l = eval_word(&s.left);
                let r = eval_word(&s.right);
                if l.degree <= self.top && r.degree <= self.top {
                    let term = l.coords.kronecker(&r.coords);
                    out.parts[l.degree].xor_assign(&term);
                }
            }
            out
        };

        let mut comult: Vec<Vec<BitMatrix>> = Vec::with_capacity(self.top + 1);
        for d in 0..=self.top {
            let mut comps: Vec<BitMatrix> =
                (0..=d).map(|d1| BitMatrix::zeros(dims[d1] * dims[d - d1], dims[d])).collect();
            for i in 0..dims[d] {
                // expand the representative of basis element i word by word
                let rep = &degrees[d].reps[i];
                let mut total = tensor_zero(d);
                for wi in rep.iter_ones() {
                    let word = &degrees[d].words[wi];
                    let mut acc = {
                        let mut t = tensor_zero(0);
                        t.parts[0] = BitVec::unit(1, 0);
                        t
                    };
                    for &g in word {
                        acc = tensor_mul(&acc, &gen_coproduct(g));
                    }
                    for (d1, p) in acc.parts.iter().enumerate() {
                        if !p.is_empty() {
                            total.parts[d1].xor_assign(p);
                        }
                    }
                }
                for d1 in 0..=d {
                    for r in total.parts[d1].iter_ones() {
                        comps[d1].set(r, i, true);
                    }
                }
            }
            comult.push(comps);
        }

        // antipode by the connected-coalgebra recursion:
        // S(x) = x + sum of S(x') x'' over proper splittings of the coproduct
        let mut antipode: Vec<BitMatrix> = vec![BitMatrix::identity(1)];
        for d in 1..=self.top {
            let mut s = BitMatrix::zeros(dims[d], dims[d]);
            for i in 0..dims[d] {
                let mut acc = BitVec::zeros(dims[d]);
                // the (0, d) component contributes x itself
                for d1 in 0..d {
                    let d2 = d - d1;
                    let comp = comult[d][d1].apply(&BitVec::unit(dims[d], i));
                    for t in comp.iter_ones() {
                        let (a, b) = (t / dims[d2], t % dims[d2]);
                        let sa = AlgElt {
                            degree: d1,
                            coords: antipode[d1].apply(&BitVec::unit(dims[d1], a)),
                        };
                        let eb = AlgElt { degree: d2, coords: BitVec::unit(dims[d2], b) };
                        let prod = mul_elts(&sa, &eb);
                        acc.xor_assign(&prod.coords);
                    }
                }
                for r in acc.iter_ones() {
                    s.set(r, i, true);
                }
            }
            antipode.push(s);
        }

        let mut margolis = Vec::with_capacity(self.margolis.len());
        for (k, (label, wordsum)) in self.margolis.iter().enumerate() {
            let mut elt: Option<AlgElt> = None;
            for w in wordsum {
                let v = eval_word(w);
                elt = Some(match elt {
                    None => v,
                    Some(e) => e.add(&v),
                });
            }
            let elt = elt.ok_or_else(|| HopfError::Malformed("empty primitive".into()))?;
            margolis.push(MargolisOp { index: k + 1, label: label.clone(), elt });
        }

        HopfAlgebra::assemble(self.name.clone(), dims, mult, comult, antipode, generators, margolis)
    }
}

/// Product of two coset representatives as a vector in the word space of the
/// target degree.
fn concat_product(
    a: &DegreeData,
    i: usize,
    b: &DegreeData,
    j: usize,
    target: &DegreeData,
) -> BitVec {
    let mut out = BitVec::zeros(target.words.len());
    for wi in a.reps[i].iter_ones() {
        for wj in b.reps[j].iter_ones() {
            let mut w = a.words[wi].clone();
            w.extend_from_slice(&b.words[wj]);
            let t = target.index[&w];
            out.set(t, !out.get(t));
        }
    }
    out
}
