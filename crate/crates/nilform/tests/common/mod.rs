//! Independent oracles for the integration suites. Everything here uses a
//! deliberately different representation from the engine: monomials are raw
//! signed factor sequences sorted by bubble sort (counting swaps), the
//! differential is expanded straight from the structure-equation table, and
//! ranks come from textbook dense elimination.
#![allow(dead_code)] // each test binary uses its own slice of the oracles
#![allow(clippy::needless_range_loop)] // dense elimination reads clearest with indices

pub mod suites;

use std::collections::BTreeMap;

use nilform::forms::{Form, MultiIndex};
use nilform::scalar::Scalar;
use nilform::structure::StructureEquations;

/// Sign class of a signed generator: holomorphic factors sort first.
fn factor_key(x: i64) -> (bool, u64) {
    (x < 0, x.unsigned_abs())
}

/// Bubble-sort a factor sequence into canonical order, counting swaps.
/// `None` when a factor repeats.
pub fn sort_factors(seq: &[i64]) -> Option<(Vec<i64>, bool)> {
    let mut seq = seq.to_vec();
    let mut negative = false;
    let len = seq.len();
    for i in 0..len {
        for j in 0..len.saturating_sub(1 + i) {
            match factor_key(seq[j]).cmp(&factor_key(seq[j + 1])) {
                std::cmp::Ordering::Greater => {
                    seq.swap(j, j + 1);
                    negative = !negative;
                }
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    Some((seq, negative))
}

/// A naive form: a list of (factor sequence, coefficient) monomials.
#[derive(Debug, Clone)]
pub struct NaiveForm {
    pub n: usize,
    pub terms: Vec<(Vec<i64>, Scalar)>,
}

impl NaiveForm {
    pub fn monomial(n: usize, seq: &[i64], c: Scalar) -> Self {
        NaiveForm { n, terms: vec![(seq.to_vec(), c)] }
    }

    pub fn wedge(&self, other: &NaiveForm) -> NaiveForm {
        let mut terms = Vec::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut seq = a.clone();
                seq.extend_from_slice(b);
                terms.push((seq, ca * cb));
            }
        }
        NaiveForm { n: self.n, terms }
    }

    /// Factorwise conjugation: negate each signed generator, conjugate the
    /// coefficient, no extra sign.
    pub fn conjugate(&self) -> NaiveForm {
        NaiveForm {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(seq, c)| (seq.iter().map(|x| -x).collect(), c.conj()))
                .collect(),
        }
    }

    /// Leibniz expansion of `d` straight from the structure-equation table.
    pub fn d(&self, se: &StructureEquations) -> NaiveForm {
        let mut terms = Vec::new();
        for (seq, c) in &self.terms {
            for (pos, &factor) in seq.iter().enumerate() {
                for (replacement, coeff) in d_factor_table(se, factor) {
                    let mut out = Vec::with_capacity(seq.len() + 1);
                    out.extend_from_slice(&replacement);
                    out.extend(seq.iter().enumerate().filter(|(i, _)| *i != pos).map(|(_, f)| *f));
                    let mut value = c * &coeff;
                    if pos % 2 == 1 {
                        value = -value;
                    }
                    terms.push((out, value));
                }
            }
        }
        NaiveForm { n: self.n, terms }
    }

    /// Convert into the engine representation by canonicalizing each
    /// monomial with the bubble-sort sign.
    pub fn to_form(&self) -> Form {
        Form::from_terms(
            self.n,
            self.terms.iter().filter_map(|(seq, c)| {
                let (sorted, negative) = sort_factors(seq)?;
                let hol: Vec<usize> =
                    sorted.iter().filter(|x| **x > 0).map(|x| *x as usize).collect();
                let anti: Vec<usize> =
                    sorted.iter().filter(|x| **x < 0).map(|x| (-*x) as usize).collect();
                let value = if negative { -c.clone() } else { c.clone() };
                Some((
                    MultiIndex::new(hol).expect("sorted"),
                    MultiIndex::new(anti).expect("sorted"),
                    value,
                ))
            }),
        )
    }
}

/// `d` of a single signed generator as (replacement pair, coefficient) rows,
/// read directly off the table (conjugated for antiholomorphic generators).
fn d_factor_table(se: &StructureEquations, factor: i64) -> Vec<(Vec<i64>, Scalar)> {
    if factor > 0 {
        se.d_terms(factor as usize)
            .iter()
            .map(|t| (vec![t.a, t.b], t.c.clone()))
            .collect()
    } else {
        se.d_terms((-factor) as usize)
            .iter()
            .map(|t| (vec![-t.a, -t.b], t.c.conj()))
            .collect()
    }
}

/// Textbook dense Gaussian elimination rank.
pub fn dense_rank(mut rows: Vec<Vec<Scalar>>) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut row = 0;
    for col in 0..ncols {
        let Some(pivot) = (row..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(row, pivot);
        let inv = rows[row][col].inv();
        for c in col..ncols {
            rows[row][c] = &rows[row][c] * &inv;
        }
        for r in 0..nrows {
            if r != row && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..ncols {
                    rows[r][c] = &rows[r][c] - &(&factor * &rows[row][c]);
                }
            }
        }
        row += 1;
        rank += 1;
        if row == nrows {
            break;
        }
    }
    rank
}

/// All monomials of bidegree (p, q) as naive factor sequences.
pub fn bidegree_sequences(n: usize, p: usize, q: usize) -> Vec<Vec<i64>> {
    fn subsets(n: usize, len: usize) -> Vec<Vec<usize>> {
        fn rec(n: usize, len: usize, start: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if acc.len() == len {
                out.push(acc.clone());
                return;
            }
            for i in start..=n {
                acc.push(i);
                rec(n, len, i + 1, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        if len <= n {
            rec(n, len, 1, &mut Vec::new(), &mut out);
        }
        out
    }
    let mut out = Vec::new();
    for hol in subsets(n, p) {
        for anti in subsets(n, q) {
            let mut seq: Vec<i64> = hol.iter().map(|&i| i as i64).collect();
            seq.extend(anti.iter().map(|&i| -(i as i64)));
            out.push(seq);
        }
    }
    out
}

/// Brute-force invariant Dolbeault dimensions by dense elimination of the
/// `∂̄` blocks (the `(p, q+1)` component of the naive `d`).
pub fn naive_dolbeault(se: &StructureEquations) -> BTreeMap<(usize, usize), usize> {
    let n = se.n();
    let mut rank = BTreeMap::new();
    for p in 0..=n {
        for q in 0..=n {
            let source = bidegree_sequences(n, p, q);
            let target = bidegree_sequences(n, p, q + 1);
            let target_index: BTreeMap<(MultiIndex, MultiIndex), usize> = target
                .iter()
                .enumerate()
                .map(|(i, seq)| (split_key(seq), i))
                .collect();
            let mut dense = vec![vec![Scalar::zero(); source.len()]; target.len()];
            for (j, seq) in source.iter().enumerate() {
                let image = NaiveForm::monomial(n, seq, Scalar::one()).d(se).to_form();
                for (hol, anti, c) in image.terms() {
                    if hol.len() == p && anti.len() == q + 1 {
                        let row = target_index[&(hol.clone(), anti.clone())];
                        dense[row][j] = &dense[row][j] + c;
                    }
                }
            }
            rank.insert((p, q), dense_rank(dense));
        }
    }
    let mut out = BTreeMap::new();
    for p in 0..=n {
        for q in 0..=n {
            let dim = bidegree_sequences(n, p, q).len();
            let rank_out = rank[&(p, q)];
            let rank_in = if q == 0 { 0 } else { rank[&(p, q - 1)] };
            let h = dim - rank_out - rank_in;
            if h > 0 {
                out.insert((p, q), h);
            }
        }
    }
    out
}

fn split_key(seq: &[i64]) -> (MultiIndex, MultiIndex) {
    let hol: Vec<usize> = seq.iter().filter(|x| **x > 0).map(|x| *x as usize).collect();
    let anti: Vec<usize> = seq.iter().filter(|x| **x < 0).map(|x| (-*x) as usize).collect();
    (MultiIndex::new(hol).expect("ascending"), MultiIndex::new(anti).expect("ascending"))
}

/// Basis of the full degree-`k` space as naive factor sequences.
pub fn total_degree_sequences(n: usize, k: usize) -> Vec<Vec<i64>> {
    let mut basis = Vec::new();
    for p in 0..=k.min(n) {
        let q = k - p;
        if q > n {
            continue;
        }
        basis.extend(bidegree_sequences(n, p, q));
    }
    basis
}

/// Dense-elimination rank of `d` out of total degree `k`.
pub fn naive_total_degree_rank(se: &StructureEquations, k: usize) -> usize {
    let n = se.n();
    if k >= 2 * n {
        return 0;
    }
    let source = total_degree_sequences(n, k);
    let target = total_degree_sequences(n, k + 1);
    let target_index: BTreeMap<(MultiIndex, MultiIndex), usize> = target
        .iter()
        .enumerate()
        .map(|(i, seq)| (split_key(seq), i))
        .collect();
    let mut dense = vec![vec![Scalar::zero(); source.len()]; target.len()];
    for (j, seq) in source.iter().enumerate() {
        let image = NaiveForm::monomial(n, seq, Scalar::one()).d(se).to_form();
        for (hol, anti, c) in image.terms() {
            let row = target_index[&(hol.clone(), anti.clone())];
            dense[row][j] = &dense[row][j] + c;
        }
    }
    dense_rank(dense)
}

/// Brute-force de Rham dimensions by dense elimination per total degree.
pub fn naive_de_rham(se: &StructureEquations) -> Vec<usize> {
    let n = se.n();
    let ranks: Vec<usize> = (0..=(2 * n)).map(|k| naive_total_degree_rank(se, k)).collect();
    (0..=(2 * n))
        .map(|k| {
            let rank_out = ranks[k];
            let rank_in = if k == 0 { 0 } else { ranks[k - 1] };
            total_degree_sequences(n, k).len() - rank_out - rank_in
        })
        .collect()
}
