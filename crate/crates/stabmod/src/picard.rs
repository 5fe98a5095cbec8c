//! Invertible modules and their homological degree invariants.
//!
//! A module is invertible when, after stripping free summands, tensoring
//! with its dual leaves exactly a copy of the trivial module. Invertible
//! modules form a group under tensor-and-strip, with the dual as inverse.
//! For each Margolis operation the homology of an invertible module is
//! one-dimensional (tensoring with the dual must produce a one-dimensional
//! answer, and homology of a tensor product is the product of homologies),
//! so recording the degree where each homology sits yields a vector of
//! integers attached to every invertible module. [`detection_check`] probes
//! how well that vector separates a sample of invertible modules; any
//! collision between non-isomorphic elements is a genuine limit of the
//! degree vector as an invariant and is reported as such.

use crate::gmod::{unit_module, GmodError, GradedModule, ModuleMap};
use crate::hopf::AlgebraRef;
use crate::linalg2::BitMatrix;
use crate::margolis::{margolis_homology, CheckReport};
use crate::spectrum::is_cover;
use crate::stable::{is_stably_iso, stable_hom_dim, strip_free};
use thiserror::Error;

/// Errors from the invertibility layer.
#[derive(Debug, Error)]
pub enum PicError {
    /// A product or inverse failed to produce an invertible module.
    #[error("the module is not invertible")]
    NotInvertible,
    /// A detection partition does not cover the operation range.
    #[error("bad partition: {0}")]
    BadPartition(String),
    /// An underlying module operation failed.
    #[error(transparent)]
    Module(#[from] GmodError),
}

/// An invertible module together with the data certifying invertibility:
/// the free-stripped representative, its dual (the inverse), and an
/// isomorphism from the stripped product onto the trivial module.
#[derive(Debug, Clone)]
pub struct PicElement {
    representative: GradedModule,
    inverse_witness: GradedModule,
    iso_witness: ModuleMap,
}

impl PicElement {
    /// The free-stripped representative of the class.
    pub fn representative(&self) -> &GradedModule {
        &self.representative
    }

    /// The dual of the representative, which inverts it.
    pub fn inverse_witness(&self) -> &GradedModule {
        &self.inverse_witness
    }

    /// The isomorphism from the stripped product with the inverse onto the
    /// trivial module.
    pub fn iso_witness(&self) -> &ModuleMap {
        &self.iso_witness
    }

    /// The identity element: the trivial module.
    pub fn unit(algebra: &AlgebraRef) -> PicElement {
        is_invertible(&unit_module(algebra)).expect("the trivial module is invertible")
    }
}

/// The degree vector of an invertible module: for each Margolis operation,
/// the internal degree where its one-dimensional homology sits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalPicInvariant {
    degrees: Vec<i64>,
}

impl LocalPicInvariant {
    /// The homology degree for operation `k` (1-based).
    pub fn degree(&self, k: usize) -> i64 {
        self.degrees[k - 1]
    }

    /// All homology degrees, indexed by operation.
    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    /// The slice of degrees for the operations in the segment `a..=b`.
    pub fn block(&self, segment: (usize, usize)) -> &[i64] {
        &self.degrees[segment.0 - 1..segment.1]
    }
}

/// Decide invertibility. Strips free summands, pairs the result against its
/// dual, and accepts exactly when the stripped product is one-dimensional
/// and concentrated in degree zero. Returns the certifying data on success.
pub fn is_invertible(m: &GradedModule) -> Option<PicElement> {
    let (rep, _) = strip_free(m);
    if rep.is_zero() {
        return None;
    }
    let inv = rep.dual();
    let prod = rep.tensor(&inv).expect("a module and its dual share an algebra");
    let (core, _) = strip_free(&prod);
    if core.dims_list() != vec![(0, 1)] {
        return None;
    }
    // one-dimensional in degree zero on both sides, so the identity matrix
    // is an isomorphism of modules
    let one = unit_module(rep.algebra());
    let iso = ModuleMap::assemble(core, one, 0, vec![BitMatrix::identity(1)]);
    Some(PicElement { representative: rep, inverse_witness: inv, iso_witness: iso })
}

/// The group product: tensor the representatives and strip free summands.
pub fn pic_product(x: &PicElement, y: &PicElement) -> Result<PicElement, PicError> {
    let prod = x.representative.tensor(&y.representative)?;
    is_invertible(&prod).ok_or(PicError::NotInvertible)
}

/// The group inverse: the dual of the representative.
pub fn pic_inverse(x: &PicElement) -> PicElement {
    is_invertible(&x.inverse_witness).expect("duals of invertible modules are invertible")
}

/// The degree vector of an invertible module. Each Margolis homology of the
/// representative is one-dimensional, and the entry for operation `k` is
/// the degree carrying it.
pub fn local_invariant(x: &PicElement) -> LocalPicInvariant {
    let rep = &x.representative;
    let n = rep.algebra().margolis_count();
    let degrees = (1..=n)
        .map(|k| {
            let h = margolis_homology(rep, k).expect("operation in range");
            let degs: Vec<i64> = rep.degrees().filter(|&d| h.dim(d) > 0).collect();
            assert!(
                degs.len() == 1 && h.dim(degs[0]) == 1,
                "invertible modules have one-dimensional homology at operation {k}"
            );
            degs[0]
        })
        .collect();
    LocalPicInvariant { degrees }
}

/// The number of stable self-equivalences of the trivial module: the count
/// of nonzero classes in its stable endomorphism space. Every nonzero class
/// is represented by a degree-zero bijection of a one-dimensional module,
/// hence is an equivalence.
pub fn aut_unit(algebra: &AlgebraRef) -> usize {
    let one = unit_module(algebra);
    (1usize << stable_hom_dim(&one, &one)) - 1
}

/// Test how well the degree vector separates a sample of invertible
/// modules over a partition of the operation range into segments. Two
/// sample elements collide when every segment block of their degree
/// vectors agrees yet the representatives are not stably isomorphic; the
/// first collision is reported as a failure, explicitly flagged as a limit
/// of the vector rather than of the modules.
pub fn detection_check(
    sample: &[PicElement],
    partition: &[(usize, usize)],
) -> Result<CheckReport, PicError> {
    let mut report = CheckReport::passing(None);
    report.dims.insert("elements".into(), sample.len());
    report.dims.insert("blocks".into(), partition.len());
    if sample.is_empty() {
        return Ok(report);
    }
    let n = sample[0].representative.algebra().margolis_count();
    if !is_cover(n, partition) {
        return Err(PicError::BadPartition(format!(
            "{partition:?} does not cover operations 1..={n}"
        )));
    }
    let invariants: Vec<LocalPicInvariant> = sample.iter().map(local_invariant).collect();
    let mut separated = 0usize;
    let mut collisions = 0usize;
    for i in 0..sample.len() {
        for j in i + 1..sample.len() {
            let agree = partition
                .iter()
                .all(|&seg| invariants[i].block(seg) == invariants[j].block(seg));
            if !agree {
                separated += 1;
            } else if !is_stably_iso(&sample[i].representative, &sample[j].representative) {
                collisions += 1;
                report.fail(format!(
                    "elements {i} and {j} share the degree vector {:?} but are not \
                     stably isomorphic; the vector does not detect them",
                    invariants[i].degrees()
                ));
            }
        }
    }
    report.dims.insert("separated".into(), separated);
    report.dims.insert("collisions".into(), collisions);
    Ok(report)
}
