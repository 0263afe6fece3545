//! Structure-equation models: parsing and validation of a left-invariant
//! co-frame `{φ^j}` with `dφ^j = Σ c·e_a∧e_b`, the operators `d`, `∂`, `∂̄`
//! on invariant forms, triangular-nilpotency diagnostics, the index of the
//! last closed generator, and the ascending series of the complex structure.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forms::{Form, MultiIndex};
use crate::linalg::{ExactMatrix, SparseVec, Subspace};
use crate::scalar::{Scalar, ScalarParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("structure file is not valid JSON: {0}")]
    Json(String),
    #[error("complex dimension must be at least 1")]
    BadDimension,
    #[error("malformed generator index {0:?}")]
    BadGeneratorIndex(String),
    #[error("index {0} out of range 1..={1}")]
    IndexOutOfRange(i64, usize),
    #[error("bad coefficient for dφ^{j}: {source}")]
    BadCoefficient { j: usize, source: ScalarParseError },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("not integrable: dφ^{j} contains the (0,2) term {term}")]
    NotIntegrable { j: usize, term: String },
    #[error("d² ≠ 0 on {generator}: residual {residual}")]
    JacobiFailure { generator: String, residual: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("model is not triangular; the closed-generator index is undefined")]
    NotTriangular,
}

/// One term `c·e_a∧e_b` of a structure equation, with `e_{+m} = φ^m` and
/// `e_{-m} = φ̄^m`, stored canonically (holomorphic before antiholomorphic,
/// ascending magnitude).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub a: i64,
    pub b: i64,
    pub c: Scalar,
}

/// Sort key putting holomorphic generators before antiholomorphic ones.
fn generator_key(x: i64) -> (bool, u64) {
    (x < 0, x.unsigned_abs())
}

fn generator_name(x: i64) -> String {
    if x > 0 {
        format!("φ^{x}")
    } else {
        format!("φ̄^{}", -x)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})·{}∧{}", self.c, generator_name(self.a), generator_name(self.b))
    }
}

/// A co-frame of `n` holomorphic generators together with the table of the
/// nonzero `dφ^j`. Only holomorphic differentials are stored; `dφ̄^j` is
/// derived by conjugation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureEquations {
    pub name: String,
    n: usize,
    d: BTreeMap<usize, Vec<Term>>,
}

#[derive(Serialize, Deserialize)]
struct RawStructureFile {
    #[serde(default)]
    name: String,
    n: usize,
    #[serde(default)]
    d: BTreeMap<String, Vec<RawTerm>>,
}

#[derive(Serialize, Deserialize)]
struct RawTerm {
    a: i64,
    b: i64,
    c: String,
}

impl StructureEquations {
    /// Build from a raw table; terms are canonicalized (ordering sign folded,
    /// duplicates combined, zero terms dropped).
    pub fn new(
        name: impl Into<String>,
        n: usize,
        table: impl IntoIterator<Item = (usize, Vec<Term>)>,
    ) -> Result<Self, ParseError> {
        if n < 1 {
            return Err(ParseError::BadDimension);
        }
        let mut d = BTreeMap::new();
        for (j, terms) in table {
            if j < 1 || j > n {
                return Err(ParseError::IndexOutOfRange(j as i64, n));
            }
            let canonical = canonicalize_terms(n, terms)?;
            if !canonical.is_empty() {
                d.insert(j, canonical);
            }
        }
        Ok(StructureEquations { name: name.into(), n, d })
    }

    /// Parse the JSON structure-file format.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let raw: RawStructureFile =
            serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
        if raw.n < 1 {
            return Err(ParseError::BadDimension);
        }
        let mut table = Vec::new();
        for (key, raw_terms) in raw.d {
            let j: usize = key
                .parse()
                .map_err(|_| ParseError::BadGeneratorIndex(key.clone()))?;
            let terms = raw_terms
                .into_iter()
                .map(|t| {
                    Ok(Term {
                        a: t.a,
                        b: t.b,
                        c: Scalar::parse(&t.c)
                            .map_err(|source| ParseError::BadCoefficient { j, source })?,
                    })
                })
                .collect::<Result<Vec<_>, ParseError>>()?;
            table.push((j, terms));
        }
        StructureEquations::new(raw.name, raw.n, table)
    }

    /// Canonical JSON serialization; `parse ∘ serialize` is the identity on
    /// canonical equations.
    pub fn serialize(&self) -> String {
        let raw = RawStructureFile {
            name: self.name.clone(),
            n: self.n,
            d: self
                .d
                .iter()
                .map(|(j, terms)| {
                    (
                        j.to_string(),
                        terms
                            .iter()
                            .map(|t| RawTerm { a: t.a, b: t.b, c: t.c.to_string() })
                            .collect(),
                    )
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("structure serialization cannot fail")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Terms of `dφ^j` (empty slice when closed).
    pub fn d_terms(&self, j: usize) -> &[Term] {
        self.d.get(&j).map_or(&[], |v| v.as_slice())
    }

    pub fn is_closed(&self, j: usize) -> bool {
        self.d_terms(j).is_empty()
    }

    pub fn closed_generators(&self) -> Vec<usize> {
        (1..=self.n).filter(|&j| self.is_closed(j)).collect()
    }
}

type TermKey = ((bool, u64), (bool, u64));

fn canonicalize_terms(n: usize, terms: Vec<Term>) -> Result<Vec<Term>, ParseError> {
    let mut acc: BTreeMap<TermKey, Scalar> = BTreeMap::new();
    for t in terms {
        for idx in [t.a, t.b] {
            let m = idx.unsigned_abs() as usize;
            if idx == 0 || m > n {
                return Err(ParseError::IndexOutOfRange(idx, n));
            }
        }
        let ka = generator_key(t.a);
        let kb = generator_key(t.b);
        if ka == kb {
            continue; // e∧e = 0
        }
        let (key, coeff) = if ka < kb { ((ka, kb), t.c) } else { ((kb, ka), -t.c) };
        let slot = acc.entry(key).or_insert_with(Scalar::zero);
        *slot = &*slot + &coeff;
    }
    Ok(acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(((na, ma), (nb, mb)), c)| Term {
            a: if na { -(ma as i64) } else { ma as i64 },
            b: if nb { -(mb as i64) } else { mb as i64 },
            c,
        })
        .collect())
}

/// A validated model: `d² = 0`, integrable, generators sorted closed-first,
/// with the differential tables materialized for all generators.
#[derive(Debug, Clone)]
pub struct StructureModel {
    se: StructureEquations,
    /// `permutation[old-1] = new` generator label (identity when the input
    /// was already sorted).
    permutation: Vec<usize>,
    triangular: bool,
    closed_count: usize,
    d_hol: Vec<Form>,
    d_anti: Vec<Form>,
}

/// Check the model invariants and normalize the generator order
/// (stable partition, closed generators first).
pub fn validate(se: &StructureEquations) -> Result<StructureModel, ValidationError> {
    let (sorted, permutation) = sort_closed_first(se);
    let n = sorted.n;

    // Integrability: no (0,2) component in any dφ^j.
    for (&j, terms) in &sorted.d {
        if let Some(term) = terms.iter().find(|t| t.a < 0 && t.b < 0) {
            return Err(ValidationError::NotIntegrable { j, term: term.to_string() });
        }
    }

    let d_hol: Vec<Form> = (1..=n).map(|j| table_form(&sorted, j)).collect();
    let d_anti: Vec<Form> = d_hol.iter().map(Form::conjugate).collect();

    // d² = 0 on every generator and conjugate generator.
    for j in 1..=n {
        for (form, label) in [(&d_hol[j - 1], j as i64), (&d_anti[j - 1], -(j as i64))] {
            let dd = d_with(&d_hol, &d_anti, form);
            if !dd.is_zero() {
                return Err(ValidationError::JacobiFailure {
                    generator: generator_name(label),
                    residual: dd.to_string(),
                });
            }
        }
    }

    let triangular = is_triangular(&sorted);
    let closed_count = sorted.closed_generators().len();

    Ok(StructureModel { se: sorted, permutation, triangular, closed_count, d_hol, d_anti })
}

/// `dφ^i ∈ Λ²⟨φ^1..φ^{i−1}, φ̄^1..φ̄^{i−1}⟩` for every `i`.
pub fn is_triangular(se: &StructureEquations) -> bool {
    se.d.iter().all(|(&j, terms)| {
        terms
            .iter()
            .all(|t| (t.a.unsigned_abs() as usize) < j && (t.b.unsigned_abs() as usize) < j)
    })
}

/// Stable partition putting closed generators first; returns the relabeled
/// equations and the applied permutation (`permutation[old-1] = new`).
pub fn sort_closed_first(se: &StructureEquations) -> (StructureEquations, Vec<usize>) {
    let n = se.n;
    let mut order: Vec<usize> = se.closed_generators();
    order.extend((1..=n).filter(|&j| !se.is_closed(j)));
    let mut permutation = vec![0usize; n];
    for (new_minus_1, &old) in order.iter().enumerate() {
        permutation[old - 1] = new_minus_1 + 1;
    }
    let relabel = |x: i64| -> i64 {
        let new = permutation[(x.unsigned_abs() as usize) - 1] as i64;
        if x < 0 {
            -new
        } else {
            new
        }
    };
    let table = se.d.iter().map(|(&j, terms)| {
        (
            permutation[j - 1],
            terms
                .iter()
                .map(|t| Term { a: relabel(t.a), b: relabel(t.b), c: t.c.clone() })
                .collect(),
        )
    });
    let sorted = StructureEquations::new(se.name.clone(), n, table)
        .expect("relabeling preserves well-formedness");
    (sorted, permutation)
}

fn table_form(se: &StructureEquations, j: usize) -> Form {
    let n = se.n;
    let mut out = Form::zero(n);
    for t in se.d_terms(j) {
        out = out.add(&Form::product_of_generators(n, &[t.a, t.b]).scale(&t.c));
    }
    out
}

/// Leibniz extension of the generator tables to arbitrary forms.
fn d_with(d_hol: &[Form], d_anti: &[Form], form: &Form) -> Form {
    let n = form.n();
    let mut out = Form::zero(n);
    for (hol, anti, coeff) in form.terms() {
        let hol_len = hol.len();
        let factor_count = hol_len + anti.len();
        for position in 0..factor_count {
            let (d_factor, rest_hol, rest_anti) = if position < hol_len {
                let idx = hol.indices()[position];
                (&d_hol[idx - 1], remove_at(hol, position), anti.clone())
            } else {
                let idx = anti.indices()[position - hol_len];
                (&d_anti[idx - 1], hol.clone(), remove_at(anti, position - hol_len))
            };
            if d_factor.is_zero() {
                continue;
            }
            let mut c = coeff.clone();
            if position % 2 == 1 {
                c = -c;
            }
            let rest = Form::monomial(n, rest_hol, rest_anti, c);
            out = out.add(&d_factor.wedge(&rest));
        }
    }
    out
}

fn remove_at(mi: &MultiIndex, position: usize) -> MultiIndex {
    let mut v = mi.indices().to_vec();
    v.remove(position);
    MultiIndex::new(v).expect("removal preserves strict ascent")
}

impl StructureModel {
    pub fn n(&self) -> usize {
        self.se.n()
    }

    pub fn name(&self) -> &str {
        &self.se.name
    }

    pub fn equations(&self) -> &StructureEquations {
        &self.se
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn permutation_is_identity(&self) -> bool {
        self.permutation.iter().enumerate().all(|(i, &p)| p == i + 1)
    }

    pub fn is_triangular(&self) -> bool {
        self.triangular
    }

    /// Number of closed generators (they come first after sorting).
    pub fn closed_count(&self) -> usize {
        self.closed_count
    }

    /// The index `k` with `dφ^i = 0` iff `i ≤ k`; defined for triangular
    /// models only.
    pub fn k_index(&self) -> Result<usize, StructureError> {
        if self.triangular {
            Ok(self.closed_count)
        } else {
            Err(StructureError::NotTriangular)
        }
    }

    /// `dφ^m` (`signed = +m`) or `dφ̄^m` (`signed = -m`).
    pub fn d_generator(&self, signed: i64) -> &Form {
        let idx = signed.unsigned_abs() as usize;
        assert!(signed != 0 && idx <= self.n(), "generator index out of range");
        if signed > 0 {
            &self.d_hol[idx - 1]
        } else {
            &self.d_anti[idx - 1]
        }
    }

    /// The invariant exterior differential.
    pub fn d(&self, form: &Form) -> Form {
        assert_eq!(form.n(), self.n(), "dimension mismatch");
        d_with(&self.d_hol, &self.d_anti, form)
    }

    /// The `(p+1, q)` part of `d` on each pure component.
    pub fn del(&self, form: &Form) -> Form {
        self.d_part(form, true)
    }

    /// The `(p, q+1)` part of `d` on each pure component.
    pub fn delbar(&self, form: &Form) -> Form {
        self.d_part(form, false)
    }

    fn d_part(&self, form: &Form, raise_holomorphic: bool) -> Form {
        let mut out = Form::zero(self.n());
        for ((p, q), component) in form.bidegree_split() {
            let image = self.d(&component);
            let part = if raise_holomorphic {
                image.component(p + 1, q)
            } else {
                image.component(p, q + 1)
            };
            out = out.add(&part);
        }
        out
    }

    /// Real dimensions of the ascending series `g_i^J`, computed on the
    /// complexified algebra (brackets recovered from the structure equations
    /// by duality). The list is strictly increasing up to stabilization.
    pub fn ascending_series(&self) -> Vec<usize> {
        let n = self.n();
        let dim = 2 * n; // complexified basis Z_1..Z_n, Z̄_1..Z̄_n
        let coord = |signed: i64| -> usize {
            let m = signed.unsigned_abs() as usize;
            if signed > 0 {
                m - 1
            } else {
                n + m - 1
            }
        };
        let signed_of = |coord: usize| -> i64 {
            if coord < n {
                (coord + 1) as i64
            } else {
                -((coord - n + 1) as i64)
            }
        };
        // brackets[u][v] = [Z_u, Z_v] = −Σ_g dE^g(Z_u, Z_v)·Z_g.
        let mut brackets: Vec<Vec<SparseVec>> = vec![vec![SparseVec::new(); dim]; dim];
        for g in 0..dim {
            let d_form = self.d_generator(signed_of(g));
            for (hol, anti, c) in d_form.terms() {
                let factors: Vec<i64> = hol
                    .indices()
                    .iter()
                    .map(|&i| i as i64)
                    .chain(anti.indices().iter().map(|&i| -(i as i64)))
                    .collect();
                debug_assert_eq!(factors.len(), 2);
                let (u, v) = (coord(factors[0]), coord(factors[1]));
                push_coeff(&mut brackets[u][v], g, &-c.clone());
                push_coeff(&mut brackets[v][u], g, c);
            }
        }
        // J multiplies the column for Z_u by i and for Z̄_u by −i.
        let j_eigen: Vec<Scalar> = (0..dim)
            .map(|u| if u < n { Scalar::i() } else { -Scalar::i() })
            .collect();

        let mut previous = Subspace::zero(dim);
        let mut dims = Vec::new();
        loop {
            // W ∈ next iff [W, e_v] and [J W, e_v] lie in `previous` for all v.
            let mut conditions = ExactMatrix::new(2 * dim * dim, dim);
            for (u, row) in brackets.iter().enumerate() {
                for (v, bracket) in row.iter().enumerate() {
                    let reduced = previous.reduce(bracket);
                    for (t, c) in &reduced {
                        conditions.set(v * dim + t, u, c.clone());
                        conditions.set(dim * dim + v * dim + t, u, &j_eigen[u] * c);
                    }
                }
            }
            let next = conditions.kernel_basis();
            let next_dim = next.dim();
            if next_dim == previous.dim() {
                break; // stabilized strictly below the full algebra
            }
            dims.push(next_dim);
            previous = next;
            if next_dim == dim {
                break;
            }
        }
        if dims.is_empty() {
            dims.push(previous.dim());
        }
        dims
    }

    /// True iff the ascending series exhausts the (real) algebra.
    pub fn is_nilpotent_j(&self) -> bool {
        self.ascending_series().last().copied() == Some(2 * self.n())
    }
}

fn push_coeff(v: &mut SparseVec, idx: usize, c: &Scalar) {
    match v.binary_search_by_key(&idx, |(i, _)| *i) {
        Ok(pos) => {
            let sum = &v[pos].1 + c;
            if sum.is_zero() {
                v.remove(pos);
            } else {
                v[pos].1 = sum;
            }
        }
        Err(pos) => {
            if !c.is_zero() {
                v.insert(pos, (idx, c.clone()));
            }
        }
    }
}
