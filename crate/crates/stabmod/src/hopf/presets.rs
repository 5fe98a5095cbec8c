//! Built-in algebras, generated from presentations and validated on first
//! use. Nothing in here carries a hand-entered multiplication table.

use super::{AlgebraRef, HopfError, Presentation, TensorSummand};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Exterior algebra on primitives `Q_{k}` for the given `k`s (strictly
/// increasing), each of degree `2^(k+1) - 1`; every generator is a Margolis
/// operation.
pub fn exterior(name: &str, ks: &[u32]) -> Presentation {
    assert!(ks.windows(2).all(|w| w[0] < w[1]), "indices must increase");
    let gens: Vec<(String, usize)> =
        ks.iter().map(|&k| (format!("Q{k}"), (1usize << (k + 1)) - 1)).collect();
    let mut relations = Vec::new();
    for i in 0..gens.len() {
        relations.push(vec![vec![i, i]]);
        for j in i + 1..gens.len() {
            relations.push(vec![vec![i, j], vec![j, i]]);
        }
    }
    let coproducts = (0..gens.len())
        .map(|i| vec![TensorSummand::new(&[i], &[]), TensorSummand::new(&[], &[i])])
        .collect();
    let top = gens.iter().map(|(_, d)| d).sum();
    let margolis = gens.iter().enumerate().map(|(i, (l, _))| (l.clone(), vec![vec![i]])).collect();
    Presentation { name: name.to_string(), generators: gens, relations, coproducts, top, margolis }
}

/// The subalgebra of the mod-2 Steenrod algebra generated by Sq1 and Sq2,
/// with the Adem relations Sq1 Sq1 = 0 and Sq2 Sq2 = Sq1 Sq2 Sq1; Margolis
/// operations Q0 = Sq1 and the primitive commutator Q1 = Sq1 Sq2 + Sq2 Sq1.
pub fn a1_presentation() -> Presentation {
    Presentation {
        name: "A1".into(),
        generators: vec![("Sq1".into(), 1), ("Sq2".into(), 2)],
        relations: vec![vec![vec![0, 0]], vec![vec![1, 1], vec![0, 1, 0]]],
        coproducts: vec![
            vec![TensorSummand::new(&[0], &[]), TensorSummand::new(&[], &[0])],
            vec![
                TensorSummand::new(&[1], &[]),
                TensorSummand::new(&[0], &[0]),
                TensorSummand::new(&[], &[1]),
            ],
        ],
        top: 6,
        margolis: vec![("Q0".into(), vec![vec![0]]), ("Q1".into(), vec![vec![0, 1], vec![1, 0]])],
    }
}

fn build_checked(p: &Presentation) -> Result<AlgebraRef, HopfError> {
    let alg = p.build()?;
    let report = alg.validate();
    if !report.all_pass() {
        return Err(HopfError::ValidationFailed(report.summary()));
    }
    Ok(Arc::new(alg))
}

/// Parse a preset name: `A1`, `E1`, `E2`, or `lambda(k)` (also written
/// `lambdak`) for `k <= 6`. Results are cached; algebras are immutable.
pub fn preset(name: &str) -> Result<AlgebraRef, HopfError> {
    let canon = canonical_name(name).ok_or_else(|| HopfError::UnknownPreset(name.to_string()))?;
    static CACHE: OnceLock<Mutex<HashMap<String, AlgebraRef>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(alg) = cache.lock().unwrap().get(&canon) {
        return Ok(alg.clone());
    }
    let pres = match canon.as_str() {
        "A1" => a1_presentation(),
        "E1" => exterior("E1", &[0, 1]),
        "E2" => exterior("E2", &[0, 1, 2]),
        _ => {
            let k: u32 = canon[7..canon.len() - 1].parse().expect("canonical lambda form");
            exterior(&canon, &[k])
        }
    };
    let alg = build_checked(&pres)?;
    cache.lock().unwrap().insert(canon, alg.clone());
    Ok(alg)
}

fn canonical_name(name: &str) -> Option<String> {
    let t = name.trim().to_ascii_lowercase();
    match t.as_str() {
        "a1" | "a(1)" => return Some("A1".into()),
        "e1" | "e(1)" => return Some("E1".into()),
        "e2" | "e(2)" => return Some("E2".into()),
        _ => {}
    }
    let rest = t.strip_prefix("lambda")?;
    let digits = rest.trim_matches(|c| c == '(' || c == ')' || c == '_');
    let k: u32 = digits.parse().ok()?;
    // degree 2^(k+1) - 1 grows fast; keep the table sizes sane
    if k > 6 {
        return None;
    }
    Some(format!("lambda({k})"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_presets_have_two_basis_elements() {
        for k in 0..=3u32 {
            let a = preset(&format!("lambda({k})")).unwrap();
            assert_eq!(a.total_dim(), 2);
            assert_eq!(a.top(), (1 << (k + 1)) - 1);
            assert_eq!(a.dim(0), 1);
            assert_eq!(a.dim(a.top()), 1);
        }
    }

    #[test]
    fn e1_has_total_dimension_four() {
        let a = preset("E1").unwrap();
        assert_eq!(a.total_dim(), 4);
        assert_eq!(a.dims(), &[1, 1, 0, 1, 1]);
        assert_eq!(a.integral().degree, 4);
    }

    #[test]
    fn a1_has_total_dimension_eight() {
        let a = preset("A1").unwrap();
        assert_eq!(a.total_dim(), 8);
        assert_eq!(a.dims(), &[1, 1, 1, 2, 1, 1, 1]);
        let degs: Vec<usize> = a.margolis_ops().iter().map(|op| op.degree()).collect();
        assert_eq!(degs, vec![1, 3]);
        assert_eq!(a.integral().degree, 6);
    }

    #[test]
    fn e2_has_total_dimension_eight() {
        let a = preset("E2").unwrap();
        assert_eq!(a.total_dim(), 8);
        assert_eq!(a.top(), 11);
        assert_eq!(a.margolis_count(), 3);
    }

    #[test]
    fn preset_names_are_parsed_loosely() {
        assert!(preset("lambda0").is_ok());
        assert!(preset("Lambda(1)").is_ok());
        assert!(preset(" a1 ").is_ok());
        assert!(matches!(preset("B3"), Err(HopfError::UnknownPreset(_))));
        assert!(matches!(preset("lambda(9)"), Err(HopfError::UnknownPreset(_))));
    }

    #[test]
    fn presets_are_cached() {
        let a = preset("A1").unwrap();
        let b = preset("A1").unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
