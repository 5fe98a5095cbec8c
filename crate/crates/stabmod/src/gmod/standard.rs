//! Stock modules: the unit, cyclic quotients of the free rank-one module,
//! and the quotients by single Margolis operations.

use super::{FreeModule, GmodError, GradedModule};
use crate::hopf::{preset, AlgElt, AlgebraRef};
use crate::linalg2::BitMatrix;

/// The one-dimensional trivial module concentrated in degree zero.
pub fn unit_module(algebra: &AlgebraRef) -> GradedModule {
    let mut actions = Vec::with_capacity(algebra.top() + 1);
    for bdeg in 0..=algebra.top() {
        let per_elt = (0..algebra.dim(bdeg))
            .map(|_| {
                if bdeg == 0 {
                    vec![BitMatrix::identity(1)]
                } else {
                    vec![BitMatrix::zeros(0, 1)]
                }
            })
            .collect();
        actions.push(per_elt);
    }
    GradedModule::assemble(algebra.clone(), 0, vec![1], actions, false)
        .expect("unit module is a module")
}

/// The quotient of the free rank-one module by the left ideal the given
/// elements generate.
pub fn cyclic_quotient(
    algebra: &AlgebraRef,
    ideal_gens: &[AlgElt],
) -> Result<GradedModule, GmodError> {
    let free = FreeModule::new(algebra.clone(), vec![0]);
    let seeds: Vec<(i64, crate::linalg2::BitVec)> = ideal_gens
        .iter()
        .map(|e| (e.degree as i64, e.coords.clone()))
        .collect();
    let subs = free.module().close_under_action(&seeds)?;
    let (q, _) = free.module().quotient_induced(&subs)?;
    Ok(q)
}

/// The quotient by the left ideal on the `k`-th Margolis operation (1-based).
pub fn induced_cell(algebra: &AlgebraRef, k: usize) -> Result<GradedModule, GmodError> {
    let op = algebra
        .margolis_op(k)
        .ok_or_else(|| GmodError::ShapeMismatch(format!("no margolis operation {k}")))?;
    let elt = op.elt.clone();
    cyclic_quotient(algebra, &[elt])
}

/// The five-dimensional quotient of the rank-one free module by `Sq3`;
/// self-dual up to a shift and not free over either exterior subalgebra.
pub fn joker() -> GradedModule {
    let a = preset("A1").expect("built-in preset");
    let sq3 = a.eval_word(&[0, 1]);
    cyclic_quotient(&a, &[sq3]).expect("quotient of the free module")
}
