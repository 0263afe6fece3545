//! Built-in models: the `br-n` family, the two 2-step abelian examples, tori
//! and an auxiliary test algebra, together with their frozen expectations and
//! candidate transverse forms.

use thiserror::Error;

use crate::forms::Form;
use crate::scalar::Scalar;
use crate::structure::{StructureEquations, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown catalog id {0:?}")]
    UnknownId(String),
    #[error("the br family needs a parameter n ≥ 2, got {0}")]
    BrParameter(usize),
    #[error("the torus family needs a dimension n ≥ 1, got {0}")]
    TorusParameter(usize),
}

/// Frozen expectations for a catalog entry, re-checked on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectedFixtures {
    /// Closed-generator index of the sorted triangular co-frame.
    pub k: usize,
    /// Whether the diagonal identity metric is balanced (when recorded).
    pub balanced_diagonal: Option<bool>,
    /// Lower bound for the degeneration step (when recorded).
    pub degeneration_step_at_least: Option<usize>,
    /// Whether an obstruction certificate construction applies.
    pub obstruction_certificate: bool,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: String,
    pub se: StructureEquations,
    pub expected: ExpectedFixtures,
}

fn term(a: i64, b: i64, c: i64) -> Term {
    Term { a, b, c: Scalar::from_int(c) }
}

/// Complex torus of dimension `n`: all generators closed.
pub fn torus(n: usize) -> Result<StructureEquations, CatalogError> {
    if n < 1 {
        return Err(CatalogError::TorusParameter(n));
    }
    Ok(StructureEquations::new(format!("torus-{n}"), n, Vec::new()).expect("torus is well-formed"))
}

/// The 6-dimensional 2-step example with `dφ³ = φ^{1 2̄}` (n = 3, k = 2).
pub fn ex_2_5() -> StructureEquations {
    StructureEquations::new("ex-2.5", 3, vec![(3, vec![term(1, -2, 1)])])
        .expect("ex-2.5 is well-formed")
}

/// The 8-dimensional 2-step example with `dφ² = dφ³ = dφ⁴ = φ^{1 1̄}`
/// (n = 4, k = 1).
pub fn ex_2_6() -> StructureEquations {
    StructureEquations::new(
        "ex-2.6",
        4,
        (2..=4).map(|j| (j, vec![term(1, -1, 1)])),
    )
    .expect("ex-2.6 is well-formed")
}

/// Auxiliary holomorphic-differential algebra `dφ³ = φ^{12}` (n = 3, k = 2);
/// exercises the `∂`-branch of the obstruction builder.
pub fn aux_del() -> StructureEquations {
    StructureEquations::new("aux-del", 3, vec![(3, vec![term(1, 2, 1)])])
        .expect("aux-del is well-formed")
}

/// The 2-step family on `4n−2` generators:
/// `dφ^j = 0` for `j < 3n−1`, `dφ^{3n−1} = φ^{2n}∧φ̄^n`, and
/// `dφ^j = φ^{j−3n+1}∧φ^{j−2n+1} + φ^{j−2n}∧φ̄^{j−n}` for `3n ≤ j ≤ 4n−2`.
pub fn catalog_br(n: usize) -> Result<StructureEquations, CatalogError> {
    if n < 2 {
        return Err(CatalogError::BrParameter(n));
    }
    let dim = 4 * n - 2;
    let mut table = vec![(3 * n - 1, vec![term(2 * n as i64, -(n as i64), 1)])];
    for j in 3 * n..=dim {
        let j_i = j as i64;
        let n_i = n as i64;
        table.push((
            j,
            vec![
                term(j_i - 3 * n_i + 1, j_i - 2 * n_i + 1, 1),
                term(j_i - 2 * n_i, -(j_i - n_i), 1),
            ],
        ));
    }
    Ok(StructureEquations::new(format!("br-{n}"), dim, table).expect("br family is well-formed"))
}

/// The candidate real transverse `(2,2)`-form of `ex-2.5`:
/// `Ω = −φ^{1 1̄ 2 2̄} − φ^{1 1̄ 3 3̄} − φ^{2 2̄ 3 3̄}`.
pub fn omega_2_5() -> Form {
    let n = 3;
    let mono = |seq: &[i64]| Form::product_of_generators(n, seq);
    mono(&[1, -1, 2, -2])
        .add(&mono(&[1, -1, 3, -3]))
        .add(&mono(&[2, -2, 3, -3]))
        .neg()
}

/// The candidate real transverse `(2,2)`-form of `ex-2.6` (six diagonal
/// pair terms and six mixed terms).
pub fn omega_2_6() -> Form {
    let n = 4;
    let mono = |seq: &[i64]| Form::product_of_generators(n, seq);
    let diagonal = mono(&[1, -1, 2, -2])
        .add(&mono(&[1, -1, 3, -3]))
        .add(&mono(&[1, -1, 4, -4]))
        .add(&mono(&[2, -2, 3, -3]))
        .add(&mono(&[2, -2, 4, -4]))
        .add(&mono(&[3, -3, 4, -4]))
        .neg();
    let mixed = mono(&[2, -2, 3, -4])
        .add(&mono(&[2, -2, 4, -3]))
        .add(&mono(&[2, -4, 3, -3]))
        .add(&mono(&[4, -2, 3, -3]))
        .add(&mono(&[2, -3, 4, -4]))
        .add(&mono(&[3, -2, 4, -4]));
    diagonal.add(&mixed)
}

/// Candidate transverse form and its degree for a catalog id, when one is
/// recorded.
pub fn candidate_pkahler(id: &str) -> Option<(usize, Form)> {
    match id {
        "ex-2.5" => Some((2, omega_2_5())),
        "ex-2.6" => Some((2, omega_2_6())),
        _ => None,
    }
}

/// The claimed power constant for `ex-2.5`: the recorded claim is
/// `ω² = Ω` for `ω = i(φ^{1 1̄}+φ^{2 2̄}+φ^{3 3̄})`; the engine computes the
/// actual proportionality constant and reports both.
pub fn ex_2_5_claimed_power_constant() -> Scalar {
    Scalar::one()
}

/// All catalog entries with frozen fixtures. (`br-n` and `torus-n` for other
/// `n` remain addressable through [`lookup`].)
pub fn catalog_examples() -> Vec<CatalogEntry> {
    let entry = |id: &str, se: StructureEquations, expected: ExpectedFixtures| CatalogEntry {
        id: id.to_string(),
        se,
        expected,
    };
    vec![
        entry(
            "torus-1",
            torus(1).unwrap(),
            ExpectedFixtures {
                k: 1,
                balanced_diagonal: None,
                degeneration_step_at_least: Some(1),
                obstruction_certificate: false,
            },
        ),
        entry(
            "torus-2",
            torus(2).unwrap(),
            ExpectedFixtures {
                k: 2,
                balanced_diagonal: Some(true),
                degeneration_step_at_least: Some(1),
                obstruction_certificate: false,
            },
        ),
        entry(
            "torus-3",
            torus(3).unwrap(),
            ExpectedFixtures {
                k: 3,
                balanced_diagonal: Some(true),
                degeneration_step_at_least: Some(1),
                obstruction_certificate: false,
            },
        ),
        entry(
            "ex-2.5",
            ex_2_5(),
            ExpectedFixtures {
                k: 2,
                balanced_diagonal: Some(true),
                degeneration_step_at_least: None,
                obstruction_certificate: true,
            },
        ),
        entry(
            "ex-2.6",
            ex_2_6(),
            ExpectedFixtures {
                k: 1,
                balanced_diagonal: Some(false),
                degeneration_step_at_least: None,
                obstruction_certificate: true,
            },
        ),
        entry(
            "aux-del",
            aux_del(),
            ExpectedFixtures {
                k: 2,
                balanced_diagonal: None,
                degeneration_step_at_least: None,
                obstruction_certificate: true,
            },
        ),
        entry(
            "br-2",
            catalog_br(2).unwrap(),
            ExpectedFixtures {
                k: 4,
                balanced_diagonal: Some(true),
                degeneration_step_at_least: Some(3),
                obstruction_certificate: true,
            },
        ),
        entry(
            "br-3",
            catalog_br(3).unwrap(),
            ExpectedFixtures {
                k: 7,
                balanced_diagonal: Some(true),
                degeneration_step_at_least: None,
                obstruction_certificate: true,
            },
        ),
    ]
}

/// Resolve a catalog id (`"br-N"`, `"torus-N"`, `"ex-2.5"`, `"ex-2.6"`,
/// `"aux-del"`) to its structure equations.
pub fn lookup(id: &str) -> Result<StructureEquations, CatalogError> {
    if let Some(param) = id.strip_prefix("br-") {
        let n: usize = param.parse().map_err(|_| CatalogError::UnknownId(id.to_string()))?;
        return catalog_br(n);
    }
    if let Some(param) = id.strip_prefix("torus-") {
        let n: usize = param.parse().map_err(|_| CatalogError::UnknownId(id.to_string()))?;
        return torus(n);
    }
    match id {
        "ex-2.5" => Ok(ex_2_5()),
        "ex-2.6" => Ok(ex_2_6()),
        "aux-del" => Ok(aux_del()),
        _ => Err(CatalogError::UnknownId(id.to_string())),
    }
}

/// If the id belongs to the `br` family, its parameter `n`.
pub fn br_parameter(id: &str) -> Option<usize> {
    id.strip_prefix("br-")?.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::validate;

    #[test]
    fn br_2_matches_the_table() {
        let se = catalog_br(2).unwrap();
        assert_eq!(se.n(), 6);
        assert_eq!(se.d_terms(5), &[term(4, -2, 1)]);
        assert_eq!(se.d_terms(6), &[term(1, 3, 1), term(2, -4, 1)]);
        for j in 1..=4 {
            assert!(se.is_closed(j));
        }
    }

    #[test]
    fn br_2_dphi6_splits_by_bidegree() {
        let model = validate(&catalog_br(2).unwrap()).unwrap();
        let split = model.d_generator(6).bidegree_split();
        assert_eq!(split.len(), 2);
        assert_eq!(split[&(2, 0)], Form::product_of_generators(6, &[1, 3]));
        assert_eq!(split[&(1, 1)], Form::product_of_generators(6, &[2, -4]));
        // dφ^5 is the single (1,1) term φ^4∧φ̄^2.
        assert_eq!(model.d_generator(5), &Form::product_of_generators(6, &[4, -2]));
    }

    #[test]
    fn br_3_matches_the_table() {
        let se = catalog_br(3).unwrap();
        assert_eq!(se.n(), 10);
        assert_eq!(se.d_terms(8), &[term(6, -3, 1)]);
        assert_eq!(se.d_terms(9), &[term(1, 4, 1), term(3, -6, 1)]);
        assert_eq!(se.d_terms(10), &[term(2, 5, 1), term(4, -7, 1)]);
    }

    #[test]
    fn br_family_validates_with_expected_k() {
        for n in 2..=4 {
            let model = validate(&catalog_br(n).unwrap()).unwrap();
            assert!(model.is_triangular(), "br-{n} must be triangular");
            assert_eq!(model.k_index().unwrap(), 3 * n - 2, "br-{n} index");
            assert!(model.permutation_is_identity());
        }
        assert!(catalog_br(1).is_err());
    }

    #[test]
    fn all_entries_validate_with_frozen_k() {
        for entry in catalog_examples() {
            let model = validate(&entry.se).unwrap_or_else(|e| {
                panic!("catalog entry {} fails validation: {e}", entry.id)
            });
            assert!(model.is_triangular(), "{} must be triangular", entry.id);
            assert_eq!(model.k_index().unwrap(), entry.expected.k, "{} index", entry.id);
            assert!(model.is_nilpotent_j(), "{} must be nilpotent", entry.id);
        }
    }

    #[test]
    fn lookup_round_trip() {
        for entry in catalog_examples() {
            let se = lookup(&entry.id).unwrap();
            assert_eq!(se, entry.se, "{}", entry.id);
            let reparsed = StructureEquations::parse(&se.serialize()).unwrap();
            assert_eq!(reparsed, se, "{} emit/parse round trip", entry.id);
        }
        assert!(lookup("nope").is_err());
        assert!(lookup("br-x").is_err());
        assert_eq!(br_parameter("br-4"), Some(4));
        assert_eq!(br_parameter("torus-4"), None);
    }

    #[test]
    fn candidate_forms_are_real() {
        let (p, omega) = candidate_pkahler("ex-2.5").unwrap();
        assert_eq!(p, 2);
        assert!(omega.is_real());
        assert!(omega.is_homogeneous(2, 2));
        let (p, omega) = candidate_pkahler("ex-2.6").unwrap();
        assert_eq!(p, 2);
        assert!(omega.is_real());
        assert!(omega.is_homogeneous(2, 2));
        assert!(candidate_pkahler("torus-2").is_none());
    }
}
