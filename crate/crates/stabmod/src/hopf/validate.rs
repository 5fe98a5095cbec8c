//! Degreewise verification of the Hopf axioms as matrix identities.
//!
//! Every axiom is a finite family of matrix equations indexed by degree
//! tuples; a check reports the first failing tuple. Nothing panics on bad
//! input: the report is the result, and `all_pass` gates downstream use.

use super::HopfAlgebra;
use crate::linalg2::BitMatrix;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct AxiomFailure {
    /// The degree tuple at which the identity first failed.
    pub degrees: Vec<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub failure: Option<AxiomFailure>,
}

impl AxiomCheck {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub algebra: String,
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(AxiomCheck::passed)
    }

    pub fn check(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn summary(&self) -> String {
        if self.all_pass() {
            format!("{}: all {} axioms pass", self.algebra, self.checks.len())
        } else {
            let parts: Vec<String> = self
                .checks
                .iter()
                .filter_map(|c| {
                    c.failure.as_ref().map(|f| {
                        format!("{} fails at degrees {:?}: {}", c.axiom, f.degrees, f.detail)
                    })
                })
                .collect();
            format!("{}: {}", self.algebra, parts.join("; "))
        }
    }
}

fn fail(degrees: &[usize], detail: impl Into<String>) -> Option<AxiomFailure> {
    Some(AxiomFailure { degrees: degrees.to_vec(), detail: detail.into() })
}

/// Permutation matrix for `V (x) W -> W (x) V` with dims `n1, n2`.
fn swap_matrix(n1: usize, n2: usize) -> BitMatrix {
    let mut m = BitMatrix::zeros(n1 * n2, n1 * n2);
    for i in 0..n1 {
        for j in 0..n2 {
            m.set(j * n1 + i, i * n2 + j, true);
        }
    }
    m
}

/// Permutation matrix exchanging the middle factors of a four-fold tensor:
/// `V1 (x) V2 (x) V3 (x) V4 -> V1 (x) V3 (x) V2 (x) V4`.
fn mid_swap_matrix(n1: usize, n2: usize, n3: usize, n4: usize) -> BitMatrix {
    let n = n1 * n2 * n3 * n4;
    let mut m = BitMatrix::zeros(n, n);
    for i1 in 0..n1 {
        for i2 in 0..n2 {
            for i3 in 0..n3 {
                for i4 in 0..n4 {
                    let from = ((i1 * n2 + i2) * n3 + i3) * n4 + i4;
                    let to = ((i1 * n3 + i3) * n2 + i2) * n4 + i4;
                    m.set(to, from, true);
                }
            }
        }
    }
    m
}

impl HopfAlgebra {
    /// Run every axiom check and collect the outcomes.
    pub fn validate(&self) -> ValidationReport {
        let checks = vec![
            AxiomCheck { axiom: "connectedness", failure: self.check_connected() },
            AxiomCheck { axiom: "unitality", failure: self.check_unitality() },
            AxiomCheck { axiom: "associativity", failure: self.check_associativity() },
            AxiomCheck { axiom: "counitality", failure: self.check_counitality() },
            AxiomCheck { axiom: "coassociativity", failure: self.check_coassociativity() },
            AxiomCheck { axiom: "cocommutativity", failure: self.check_cocommutativity() },
            AxiomCheck { axiom: "bialgebra", failure: self.check_bialgebra() },
            AxiomCheck { axiom: "antipode", failure: self.check_antipode() },
            AxiomCheck { axiom: "antipode-involution", failure: self.check_antipode_involution() },
            AxiomCheck { axiom: "antipode-antihom", failure: self.check_antipode_antihom() },
            AxiomCheck { axiom: "margolis-order", failure: self.check_margolis_order() },
            AxiomCheck { axiom: "margolis-squares", failure: self.check_margolis_squares() },
            AxiomCheck { axiom: "margolis-primitive", failure: self.check_margolis_primitive() },
            AxiomCheck { axiom: "integral", failure: self.check_integral() },
        ];
        ValidationReport { algebra: self.name().to_string(), checks }
    }

    /// Degrees with a nonzero piece; all checks quantify over these only.
    fn nonzero_degrees(&self) -> Vec<usize> {
        (0..=self.top()).filter(|&d| self.dim(d) > 0).collect()
    }

    fn check_connected(&self) -> Option<AxiomFailure> {
        if self.dim(0) != 1 {
            return fail(&[0], format!("degree 0 has dimension {}", self.dim(0)));
        }
        let id1 = BitMatrix::identity(1);
        if self.mult[0][0] != id1 {
            return fail(&[0, 0], "unit times unit is not the unit");
        }
        if self.comult[0][0] != id1 {
            return fail(&[0], "coproduct of the unit is not unit tensor unit");
        }
        if self.antipode[0] != id1 {
            return fail(&[0], "antipode does not fix the unit");
        }
        None
    }

    fn check_unitality(&self) -> Option<AxiomFailure> {
        for d in self.nonzero_degrees() {
            let id = BitMatrix::identity(self.dim(d));
            if self.mult[0][d] != id {
                return fail(&[0, d], "left multiplication by the unit is not the identity");
            }
            if self.mult[d][0] != id {
                return fail(&[d, 0], "right multiplication by the unit is not the identity");
            }
        }
        None
    }

    fn check_associativity(&self) -> Option<AxiomFailure> {
        let nz = self.nonzero_degrees();
        let top = self.top();
        for &d1 in &nz {
            for &d2 in &nz {
                if d1 + d2 > top {
                    continue;
                }
                for &d3 in &nz {
                    if d1 + d2 + d3 > top {
                        continue;
                    }
                    let lhs = self.mult[d1 + d2][d3]
                        .mul(&self.mult[d1][d2].kronecker(&BitMatrix::identity(self.dim(d3))));
                    let rhs = self.mult[d1][d2 + d3]
                        .mul(&BitMatrix::identity(self.dim(d1)).kronecker(&self.mult[d2][d3]));
                    if lhs != rhs {
                        return fail(&[d1, d2, d3], "products disagree under rebracketing");
                    }
                }
            }
        }
        None
    }

    fn check_counitality(&self) -> Option<AxiomFailure> {
        for d in self.nonzero_degrees() {
            let id = BitMatrix::identity(self.dim(d));
            if self.comult[d][0] != id {
                return fail(&[0, d], "the (0, d) coproduct component is not the identity");
            }
            if self.comult[d][d] != id {
                return fail(&[d, 0], "the (d, 0) coproduct component is not the identity");
            }
        }
        None
    }

    fn check_coassociativity(&self) -> Option<AxiomFailure> {
        let nz = self.nonzero_degrees();
        let top = self.top();
        for &d1 in &nz {
            for &d2 in &nz {
                for &d3 in &nz {
                    let d = d1 + d2 + d3;
                    if d > top || self.dim(d) == 0 {
                        continue;
                    }
                    let (n1, n3) = (self.dim(d1), self.dim(d3));
                    let lhs = self.comult[d1 + d2][d1]
                        .kronecker(&BitMatrix::identity(n3))
                        .mul(&self.comult[d][d1 + d2]);
                    let rhs = BitMatrix::identity(n1)
                        .kronecker(&self.comult[d2 + d3][d2])
                        .mul(&self.comult[d][d1]);
                    if lhs != rhs {
                        return fail(&[d1, d2, d3], "coproduct components disagree under resplitting");
                    }
                }
            }
        }
        None
    }

    fn check_cocommutativity(&self) -> Option<AxiomFailure> {
        let nz = self.nonzero_degrees();
        for &d in &nz {
            for &d1 in &nz {
                if d1 > d || self.dim(d - d1) == 0 {
                    continue;
                }
                let d2 = d - d1;
                let swapped = swap_matrix(self.dim(d1), self.dim(d2)).mul(&self.comult[d][d1]);
                if swapped != self.comult[d][d2] {
                    return fail(&[d, d1, d2], "swapping tensor factors changes the coproduct");
                }
            }
        }
        None
    }

    fn check_bialgebra(&self) -> Option<AxiomFailure> {
        let nz = self.nonzero_degrees();
        let top = self.top();
        for &d1 in &nz {
            for &d2 in &nz {
                let s = d1 + d2;
                if s > top || self.dim(s) == 0 {
                    continue;
                }
                for &e1 in &nz {
                    if e1 > s || self.dim(s - e1) == 0 {
                        continue;
                    }
                    let e2 = s - e1;
                    let lhs = self.comult[s][e1].mul(&self.mult[d1][d2]);
                    let mut rhs =
                        BitMatrix::zeros(self.dim(e1) * self.dim(e2), self.dim(d1) * self.dim(d2));
                    for &a1 in &nz {
                        if a1 > d1 || a1 > e1 {
                            continue;
                        }
                        let (a2, b1) = (d1 - a1, e1 - a1);
                        let b2 = d2.checked_sub(b1);
                        let b2 = match b2 {
                            Some(v) => v,
                            None => continue,
                        };
                        if self.dim(a2) == 0 || self.dim(b1) == 0 || self.dim(b2) == 0 {
                            continue;
                        }
                        // a2 + b2 = e2 automatically
                        let split = self.comult[d1][a1].kronecker(&self.comult[d2][b1]);
                        let shuffle = mid_swap_matrix(
                            self.dim(a1),
                            self.dim(a2),
                            self.dim(b1),
                            self.dim(b2),
                        );
                        let remul = self.mult[a1][b1].kronecker(&self.mult[a2][b2]);
                        rhs = rhs.add(&remul.mul(&shuffle).mul(&split));
                    }
                    if lhs != rhs {
                        return fail(
                            &[d1, d2, e1, e2],
                            "coproduct of a product differs from the product of coproducts",
                        );
                    }
                }
            }
        }
        None
    }

    fn check_antipode(&self) -> Option<AxiomFailure> {
        let nz = self.nonzero_degrees();
        for &d in &nz {
            let n = self.dim(d);
            let mut left = BitMatrix::zeros(n, n);
            let mut right = BitMatrix::zeros(n, n);
            for &d1 in &nz {
                if d1 > d || self.dim(d - d1) == 0 {
                    continue;
                }
                let d2 = d - d1;
                let comp = &self.comult[d][d1];
                let l = self.mult[d1][d2]
                    .mul(&self.antipode[d1].kronecker(&BitMatrix::identity(self.dim(d2))))
                    .mul(comp);
                let r = self.mult[d1][d2]
                    .mul(&BitMatrix::identity(self.dim(d1)).kronecker(&self.antipode[d2]))
                    .mul(comp);
                left = left.add(&l);
                right = right.add(&r);
            }
            let expect =
                if d == 0 { BitMatrix::identity(1) } else { BitMatrix::zeros(n, n) };
            if left != expect {
                return fail(&[d], "mult(S (x) id)Delta is not unit-counit");
            }
            if right != expect {
                return fail(&[d], "mult(id (x) S)Delta is not unit-counit");
            }
        }
        None
    }

    fn check_antipode_involution(&self) -> Option<AxiomFailure> {
        for d in self.nonzero_degrees() {
            if self.antipode[d].mul(&self.antipode[d]) != BitMatrix::identity(self.dim(d)) {
                return fail(&[d], "antipode squared is not the identity");
            }
        }
        None
    }

    fn check_antipode_antihom(&self) -> Option<AxiomFailure> {
        let nz = self.nonzero_degrees();
        let top = self.top();
        for &d1 in &nz {
            for &d2 in &nz {
                let s = d1 + d2;
                if s > top || self.dim(s) == 0 {
                    continue;
                }
                let lhs = self.antipode[s].mul(&self.mult[d1][d2]);
                let rhs = self.mult[d2][d1]
                    .mul(&self.antipode[d2].kronecker(&self.antipode[d1]))
                    .mul(&swap_matrix(self.dim(d1), self.dim(d2)));
                if lhs != rhs {
                    return fail(&[d1, d2], "S(ab) differs from S(b)S(a)");
                }
            }
        }
        None
    }

    fn check_margolis_order(&self) -> Option<AxiomFailure> {
        for (pos, op) in self.margolis.iter().enumerate() {
            if op.index != pos + 1 {
                return fail(&[op.degree()], format!("operation at position {pos} has index {}", op.index));
            }
            if op.elt.is_zero() {
                return fail(&[op.degree()], format!("{} is zero", op.label));
            }
            if pos > 0 && self.margolis[pos - 1].degree() >= op.degree() {
                return fail(
                    &[self.margolis[pos - 1].degree(), op.degree()],
                    "degrees do not strictly increase",
                );
            }
        }
        None
    }

    fn check_margolis_squares(&self) -> Option<AxiomFailure> {
        for op in &self.margolis {
            if !self.multiply(&op.elt, &op.elt).is_zero() {
                return fail(&[op.degree()], format!("{} squared is nonzero", op.label));
            }
        }
        None
    }

    fn check_margolis_primitive(&self) -> Option<AxiomFailure> {
        for op in &self.margolis {
            let d = op.degree();
            for (d1, d2, comp) in self.comult_of(&op.elt) {
                let expect_coords = d1 == 0 || d2 == 0;
                if expect_coords {
                    // both outer components flatten to the element's own coordinates
                    if comp != op.elt.coords {
                        return fail(&[d, d1, d2], format!("outer coproduct term of {} is wrong", op.label));
                    }
                } else if !comp.is_zero() {
                    return fail(&[d, d1, d2], format!("{} has a middle coproduct term", op.label));
                }
            }
        }
        None
    }

    fn check_integral(&self) -> Option<AxiomFailure> {
        let t = self.integral();
        if t.degree != self.top() || t.is_zero() {
            return fail(&[t.degree], "stored integral does not span the top degree");
        }
        for e in self.nonzero_degrees() {
            if e == 0 {
                continue;
            }
            for i in 0..self.dim(e) {
                let b = self.basis_elt(e, i);
                if !self.multiply(&b, t).is_zero() || !self.multiply(t, &b).is_zero() {
                    return fail(&[e], "integral is not two-sided invariant");
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::super::preset;

    #[test]
    fn all_presets_validate() {
        for name in ["lambda(0)", "lambda(1)", "lambda(2)", "E1", "E2", "A1"] {
            let a = preset(name).unwrap();
            let report = a.validate();
            assert!(report.all_pass(), "{}", report.summary());
            assert_eq!(report.checks.len(), 14);
        }
    }

    #[test]
    fn flipped_comult_entry_breaks_coassociativity() {
        let a = preset("A1").unwrap();
        // flip the Sq1 (x) Sq1 term out of the coproduct of Sq2
        let broken = a.with_comult_entry_flipped(2, 1, 0, 0);
        let report = broken.validate();
        assert!(!report.all_pass());
        let coassoc = report.check("coassociativity").unwrap();
        assert!(!coassoc.passed(), "expected coassociativity to fail: {}", report.summary());
    }

    #[test]
    fn report_summary_mentions_failures() {
        let a = preset("A1").unwrap();
        let broken = a.with_comult_entry_flipped(2, 1, 0, 0);
        let s = broken.validate().summary();
        assert!(s.contains("fails at"), "summary was {s:?}");
    }
}
