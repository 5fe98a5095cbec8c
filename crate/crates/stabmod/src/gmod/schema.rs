//! JSON interchange format for modules.
//!
//! ```json
//! {
//!   "algebra": "A1",
//!   "dims": { "0": 1, "1": 1 },
//!   "actions": { "Sq1": { "0": [[1]] }, "Sq2": {} }
//! }
//! ```
//!
//! `dims` maps degree strings to dimensions (zeros omitted); `actions` maps
//! each generator label to its nonzero matrices by source degree, written as
//! arrays of 0/1 rows. The `algebra` field names a preset or another file;
//! resolving it is the caller's job, so decoding takes an already-loaded
//! algebra.

use super::{GmodError, GradedModule};
use crate::hopf::AlgebraRef;
use crate::linalg2::BitMatrix;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModuleFile {
    pub algebra: String,
    pub dims: BTreeMap<String, usize>,
    pub actions: BTreeMap<String, BTreeMap<String, Vec<Vec<u8>>>>,
}

fn matrix_to_rows(m: &BitMatrix) -> Vec<Vec<u8>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| u8::from(m.get(r, c))).collect())
        .collect()
}

fn rows_to_matrix(rows: &[Vec<u8>], want_rows: usize, want_cols: usize) -> Option<BitMatrix> {
    if rows.len() != want_rows || rows.iter().any(|r| r.len() != want_cols) {
        return None;
    }
    let mut m = BitMatrix::zeros(want_rows, want_cols);
    for (r, row) in rows.iter().enumerate() {
        for (c, &x) in row.iter().enumerate() {
            match x {
                0 => {}
                1 => m.set(r, c, true),
                _ => return None,
            }
        }
    }
    Some(m)
}

/// Encode a module. Only nonzero dimensions and nonzero matrices appear, so
/// re-encoding a decoded file is byte-stable.
pub fn encode(module: &GradedModule) -> ModuleFile {
    let algebra = module.algebra();
    let mut dims = BTreeMap::new();
    for d in module.lo()..=module.hi() {
        if module.dim(d) > 0 {
            dims.insert(d.to_string(), module.dim(d));
        }
    }
    let mut actions = BTreeMap::new();
    for (g, generator) in algebra.generators().iter().enumerate() {
        let mut mats = BTreeMap::new();
        for d in module.lo()..=module.hi() {
            let m = module.gen_action(g, d);
            if !m.is_zero() {
                mats.insert(d.to_string(), matrix_to_rows(&m));
            }
        }
        actions.insert(generator.label.clone(), mats);
    }
    ModuleFile { algebra: algebra.name().to_string(), dims, actions }
}

/// Decode against an already-resolved algebra, validating the result as a
/// module (so files violating the defining relations are rejected).
pub fn decode(file: &ModuleFile, algebra: &AlgebraRef) -> Result<GradedModule, GmodError> {
    let mut dim_map: BTreeMap<i64, usize> = BTreeMap::new();
    for (k, &v) in &file.dims {
        let d: i64 = k
            .trim()
            .parse()
            .map_err(|_| GmodError::ShapeMismatch(format!("bad degree key {k:?}")))?;
        if v > 0 {
            dim_map.insert(d, v);
        }
    }
    if dim_map.is_empty() {
        return Ok(GradedModule::zero(algebra.clone()));
    }
    let lo = *dim_map.keys().next().expect("nonempty");
    let hi = *dim_map.keys().next_back().expect("nonempty");
    let dims: Vec<usize> = (lo..=hi).map(|d| dim_map.get(&d).copied().unwrap_or(0)).collect();
    let dim_at = |d: i64| -> usize {
        if d < lo || d > hi {
            0
        } else {
            dims[(d - lo) as usize]
        }
    };
    let mut gen_mats: Vec<Vec<BitMatrix>> = Vec::new();
    for generator in algebra.generators() {
        let gdeg = generator.degree as i64;
        let given = file.actions.get(&generator.label);
        let mut mats = Vec::new();
        for d in lo..=hi {
            let (r, c) = (dim_at(d + gdeg), dim_at(d));
            let m = match given.and_then(|per_deg| per_deg.get(&d.to_string())) {
                Some(rows) => rows_to_matrix(rows, r, c).ok_or_else(|| {
                    GmodError::ShapeMismatch(format!(
                        "matrix for {} at degree {d} must be {r}x{c} with 0/1 entries",
                        generator.label
                    ))
                })?,
                None => BitMatrix::zeros(r, c),
            };
            mats.push(m);
        }
        gen_mats.push(mats);
    }
    for (label, per_deg) in &file.actions {
        if !algebra.generators().iter().any(|g| &g.label == label) {
            return Err(GmodError::ShapeMismatch(format!("unknown generator {label:?}")));
        }
        for k in per_deg.keys() {
            let d: i64 = k
                .trim()
                .parse()
                .map_err(|_| GmodError::ShapeMismatch(format!("bad degree key {k:?}")))?;
            if d < lo || d > hi {
                return Err(GmodError::ShapeMismatch(format!(
                    "action at degree {d} lies outside the support {lo}..={hi}"
                )));
            }
        }
    }
    GradedModule::from_generator_actions(algebra.clone(), lo, dims, &gen_mats)
}

pub fn to_json(module: &GradedModule) -> String {
    serde_json::to_string_pretty(&encode(module)).expect("module files serialize")
}

pub fn from_json(text: &str, algebra: &AlgebraRef) -> Result<GradedModule, GmodError> {
    let file: ModuleFile =
        serde_json::from_str(text).map_err(|e| GmodError::ShapeMismatch(e.to_string()))?;
    decode(&file, algebra)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmod::{joker, random_module, unit_module};
    use crate::hopf::preset;

    #[test]
    fn modules_roundtrip_through_json() {
        let a = preset("A1").unwrap();
        for m in [unit_module(&a), joker(), random_module(&a, 3)] {
            let text = to_json(&m);
            let back = from_json(&text, &a).unwrap();
            assert!(back.strict_eq(&m), "roundtrip of {m:?}");
            assert_eq!(to_json(&back), text);
        }
    }

    #[test]
    fn decode_rejects_relation_violations() {
        let a = preset("A1").unwrap();
        // Sq1 acting as the identity in two adjacent degrees violates
        // Sq1 Sq1 = 0
        let text = r#"{
            "algebra": "A1",
            "dims": { "0": 1, "1": 1, "2": 1 },
            "actions": { "Sq1": { "0": [[1]], "1": [[1]] }, "Sq2": { "0": [[1]] } }
        }"#;
        assert!(matches!(from_json(text, &a), Err(GmodError::NotAModule(_))));
    }

    #[test]
    fn decode_rejects_bad_shapes() {
        let a = preset("A1").unwrap();
        let text = r#"{
            "algebra": "A1",
            "dims": { "0": 1 },
            "actions": { "Sq1": { "0": [[1, 1]] } }
        }"#;
        assert!(matches!(from_json(text, &a), Err(GmodError::ShapeMismatch(_))));
    }

    #[test]
    fn the_zero_module_encodes_with_empty_dims() {
        let a = preset("A1").unwrap();
        let z = GradedModule::zero(a.clone());
        let back = from_json(&to_json(&z), &a).unwrap();
        assert!(back.is_zero());
    }
}
