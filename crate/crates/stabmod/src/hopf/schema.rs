//! JSON encoding of algebras.
//!
//! The on-disk form lists nonzero structure constants only: `mult` entries
//! `[d1, d2, i, j, k]` say basis element `i` of degree `d1` times `j` of
//! degree `d2` contains `k` of degree `d1+d2`; `comult` entries
//! `[d, d1, i, j, k]` say the coproduct of `i` in degree `d` contains
//! `j (x) k` in the `(d1, d-d1)` splitting. Margolis operations point into
//! the `elements` list.

use super::{AlgElt, Generator, HopfAlgebra, HopfError, MargolisOp};
use crate::linalg2::{BitMatrix, BitVec};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub name: String,
    pub dims: BTreeMap<String, usize>,
    pub generators: Vec<GeneratorFile>,
    pub mult: Vec<[usize; 5]>,
    pub comult: Vec<[usize; 5]>,
    pub antipode: BTreeMap<String, Vec<Vec<u8>>>,
    #[serde(default)]
    pub elements: Vec<ElementFile>,
    #[serde(default)]
    pub margolis: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorFile {
    pub label: String,
    pub degree: usize,
    pub coords: Vec<u8>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ElementFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub degree: usize,
    pub coords: Vec<u8>,
}

fn bits_to_vec(bits: &[u8]) -> BitVec {
    BitVec::from_bits(&bits.iter().map(|&b| b != 0).collect::<Vec<_>>())
}

fn vec_to_bits(v: &BitVec) -> Vec<u8> {
    (0..v.len()).map(|i| u8::from(v.get(i))).collect()
}

fn matrix_to_rows(m: &BitMatrix) -> Vec<Vec<u8>> {
    (0..m.rows()).map(|r| vec_to_bits(&m.row(r))).collect()
}

fn rows_to_matrix(rows: &[Vec<u8>], cols: usize) -> Result<BitMatrix, HopfError> {
    let vecs: Vec<BitVec> = rows
        .iter()
        .map(|r| {
            if r.len() != cols {
                return Err(HopfError::Malformed(format!(
                    "matrix row has length {}, expected {cols}",
                    r.len()
                )));
            }
            Ok(bits_to_vec(r))
        })
        .collect::<Result<_, _>>()?;
    Ok(BitMatrix::from_rows(&vecs, cols))
}

pub fn encode(alg: &HopfAlgebra) -> AlgebraFile {
    let top = alg.top();
    let mut dims = BTreeMap::new();
    for d in 0..=top {
        if alg.dim(d) > 0 {
            dims.insert(d.to_string(), alg.dim(d));
        }
    }
    let generators = alg
        .generators()
        .iter()
        .map(|g| GeneratorFile {
            label: g.label.clone(),
            degree: g.degree,
            coords: vec_to_bits(&g.coords),
        })
        .collect();

    let mut mult = Vec::new();
    for d1 in 0..=top {
        for d2 in 0..=top - d1 {
            let m = alg.mult_matrix(d1, d2);
            for i in 0..alg.dim(d1) {
                for j in 0..alg.dim(d2) {
                    for k in 0..alg.dim(d1 + d2) {
                        if m.get(k, i * alg.dim(d2) + j) {
                            mult.push([d1, d2, i, j, k]);
                        }
                    }
                }
            }
        }
    }

    let mut comult = Vec::new();
    for d in 0..=top {
        for d1 in 0..=d {
            let m = alg.comult_component(d, d1);
            let d2 = d - d1;
            for i in 0..alg.dim(d) {
                for j in 0..alg.dim(d1) {
                    for k in 0..alg.dim(d2) {
                        if m.get(j * alg.dim(d2) + k, i) {
                            comult.push([d, d1, i, j, k]);
                        }
                    }
                }
            }
        }
    }

    let mut antipode = BTreeMap::new();
    for d in 0..=top {
        if alg.dim(d) > 0 {
            antipode.insert(d.to_string(), matrix_to_rows(&alg.antipode_matrix(d)));
        }
    }

    let elements = alg
        .margolis_ops()
        .iter()
        .map(|op| ElementFile {
            label: Some(op.label.clone()),
            degree: op.elt.degree,
            coords: vec_to_bits(&op.elt.coords),
        })
        .collect::<Vec<_>>();
    let margolis = (0..elements.len()).collect();

    AlgebraFile {
        name: alg.name().to_string(),
        dims,
        generators,
        mult,
        comult,
        antipode,
        elements,
        margolis,
    }
}

pub fn decode(file: &AlgebraFile) -> Result<HopfAlgebra, HopfError> {
    let mut parsed: BTreeMap<usize, usize> = BTreeMap::new();
    for (key, &n) in &file.dims {
        let d: usize = key
            .parse()
            .map_err(|_| HopfError::Malformed(format!("bad degree key {key:?}")))?;
        parsed.insert(d, n);
    }
    let top = *parsed.keys().max().ok_or_else(|| HopfError::Malformed("empty dims".into()))?;
    let mut dims = vec![0usize; top + 1];
    for (d, n) in parsed {
        dims[d] = n;
    }
    let dim = |d: usize| dims.get(d).copied().unwrap_or(0);

    let mut mult: Vec<Vec<BitMatrix>> = (0..=top)
        .map(|d1| (0..=top - d1).map(|d2| BitMatrix::zeros(dim(d1 + d2), dim(d1) * dim(d2))).collect())
        .collect();
    for &[d1, d2, i, j, k] in &file.mult {
        if d1 + d2 > top || i >= dim(d1) || j >= dim(d2) || k >= dim(d1 + d2) {
            return Err(HopfError::Malformed(format!("mult entry {:?} out of range", [d1, d2, i, j, k])));
        }
        mult[d1][d2].set(k, i * dim(d2) + j, true);
    }

    let mut comult: Vec<Vec<BitMatrix>> = (0..=top)
        .map(|d| (0..=d).map(|d1| BitMatrix::zeros(dim(d1) * dim(d - d1), dim(d))).collect())
        .collect();
    for &[d, d1, i, j, k] in &file.comult {
        if d > top || d1 > d || i >= dim(d) || j >= dim(d1) || k >= dim(d - d1) {
            return Err(HopfError::Malformed(format!("comult entry {:?} out of range", [d, d1, i, j, k])));
        }
        comult[d][d1].set(j * dim(d - d1) + k, i, true);
    }

    let mut antipode: Vec<BitMatrix> = (0..=top).map(|d| BitMatrix::zeros(dim(d), dim(d))).collect();
    for (key, rows) in &file.antipode {
        let d: usize = key
            .parse()
            .map_err(|_| HopfError::Malformed(format!("bad antipode degree {key:?}")))?;
        if d > top || rows.len() != dim(d) {
            return Err(HopfError::Malformed(format!("antipode at degree {d} has wrong shape")));
        }
        antipode[d] = rows_to_matrix(rows, dim(d))?;
    }

    let generators = file
        .generators
        .iter()
        .map(|g| {
            if g.degree > top || g.coords.len() != dim(g.degree) {
                return Err(HopfError::Malformed(format!("generator {} has bad shape", g.label)));
            }
            Ok(Generator { label: g.label.clone(), degree: g.degree, coords: bits_to_vec(&g.coords) })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut margolis = Vec::new();
    for (pos, &ei) in file.margolis.iter().enumerate() {
        let e = file
            .elements
            .get(ei)
            .ok_or_else(|| HopfError::Malformed(format!("margolis index {ei} out of range")))?;
        if e.degree > top || e.coords.len() != dim(e.degree) {
            return Err(HopfError::Malformed(format!("element {ei} has bad shape")));
        }
        margolis.push(MargolisOp {
            index: pos + 1,
            label: e.label.clone().unwrap_or_else(|| format!("p{}", pos + 1)),
            elt: AlgElt { degree: e.degree, coords: bits_to_vec(&e.coords) },
        });
    }

    HopfAlgebra::assemble(file.name.clone(), dims, mult, comult, antipode, generators, margolis)
}

pub fn to_json(alg: &HopfAlgebra) -> String {
    serde_json::to_string_pretty(&encode(alg)).expect("algebra serializes")
}

pub fn from_json(s: &str) -> Result<HopfAlgebra, HopfError> {
    let file: AlgebraFile =
        serde_json::from_str(s).map_err(|e| HopfError::Malformed(format!("bad algebra JSON: {e}")))?;
    decode(&file)
}
