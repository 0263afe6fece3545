//! Exact linear algebra over the Gaussian rationals: sparse matrices,
//! reduced-echelon subspaces, kernels, solving, Hermitian positive
//! definiteness, and the seeded sampler used by every randomized procedure.
//!
//! Elimination is pivot-normalized over sparse rows: inserting one vector
//! into a reduced echelon basis costs one reduction against each existing
//! pivot row, so a full echelonization of an `m × n` matrix with `z`
//! nonzeros per row is `O(m·r·(z + fill))` exact scalar operations for rank
//! `r`. The structure-equation matrices in this crate keep at most a few
//! nonzeros per column, which keeps fill-in low enough for the tens of
//! thousands of columns the larger family members produce.

use std::collections::BTreeMap;

use num_rational::BigRational;
use thiserror::Error;

use crate::forms::{Form, MultiIndex};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (entry ({0},{1}))")]
    NotHermitian(usize, usize),
    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("second subspace is not contained in the first")]
    NotASubspace,
}

/// Sparse vector: strictly ascending `(index, nonzero coefficient)` pairs.
pub type SparseVec = Vec<(usize, Scalar)>;

fn sv_get(v: &SparseVec, idx: usize) -> Scalar {
    match v.binary_search_by_key(&idx, |(i, _)| *i) {
        Ok(pos) => v[pos].1.clone(),
        Err(_) => Scalar::zero(),
    }
}

/// `a + factor·b`, merging sparse entries.
pub(crate) fn sv_add_scaled(a: &SparseVec, b: &SparseVec, factor: &Scalar) -> SparseVec {
    let mut out = SparseVec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            let c = &b[j].1 * factor;
            if !c.is_zero() {
                out.push((b[j].0, c));
            }
            j += 1;
        } else {
            let c = &a[i].1 + &(&b[j].1 * factor);
            if !c.is_zero() {
                out.push((a[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn sv_scale(v: &SparseVec, factor: &Scalar) -> SparseVec {
    if factor.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(i, c)| (*i, c * factor)).collect()
}

/// A subspace of `Q(i)^ambient`, stored as a reduced row-echelon basis
/// (unit pivots, each pivot column zero elsewhere, rows ordered by pivot).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<SparseVec>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: (0..ambient).map(|i| vec![(i, Scalar::one())]).collect(),
        }
    }

    /// Bulk construction: plain row echelon first (eliminating only leading
    /// entries), then one descending back-substitution pass to reach the
    /// reduced form. This keeps large echelonizations linear in the touched
    /// entries instead of quadratic in the rank.
    pub fn from_vectors(ambient: usize, vectors: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut echelon: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for mut v in vectors {
            loop {
                let Some((lead, coeff)) = v.first().cloned() else {
                    break;
                };
                match echelon.get(&lead) {
                    Some(row) => {
                        v = sv_add_scaled(&v, row, &-coeff);
                    }
                    None => {
                        let normalized = sv_scale(&v, &coeff.inv());
                        echelon.insert(lead, normalized);
                        break;
                    }
                }
            }
        }
        // Back pass in descending pivot order: rows with larger pivots are
        // already reduced, so each tail entry at a pivot column is cleared by
        // a single subtraction that only introduces non-pivot entries.
        let pivots: Vec<usize> = echelon.keys().copied().collect();
        for &pivot in pivots.iter().rev() {
            let mut row = echelon.remove(&pivot).expect("pivot present");
            let mut pos = 1;
            while pos < row.len() {
                let col = row[pos].0;
                if let Some(other) = echelon.get(&col) {
                    let c = row[pos].1.clone();
                    row = sv_add_scaled(&row, other, &-c);
                } else {
                    pos += 1;
                }
            }
            echelon.insert(pivot, row);
        }
        Subspace { ambient, rows: echelon.into_values().collect() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.rows
    }

    /// Canonical remainder of `v` modulo this subspace: the projection onto
    /// the non-pivot coordinates. Rows are fully reduced, so one ascending
    /// pass suffices (a subtraction never reintroduces a pivot column).
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        let mut pos = 0;
        while pos < v.len() {
            let col = v[pos].0;
            match self.rows.binary_search_by_key(&col, |row| row[0].0) {
                Ok(row_idx) => {
                    let c = v[pos].1.clone();
                    v = sv_add_scaled(&v, &self.rows[row_idx], &-c);
                    // The entry at `col` vanished; entries before `pos` are
                    // untouched (pivot rows have no entries below their own
                    // pivot column after full reduction).
                }
                Err(_) => pos += 1,
            }
        }
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// Insert a vector, keeping the reduced echelon invariant.
    /// Returns true when the dimension grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        debug_assert!(v.iter().all(|(i, c)| *i < self.ambient && !c.is_zero()));
        let v = self.reduce(&v);
        let Some((lead, lead_coeff)) = v.first().cloned() else {
            return false;
        };
        let v = sv_scale(&v, &lead_coeff.inv());
        // Back-eliminate the new pivot from existing rows.
        for row in &mut self.rows {
            let c = sv_get(row, lead);
            if !c.is_zero() {
                *row = sv_add_scaled(row, &v, &-c);
            }
        }
        let pos = self.rows.partition_point(|r| r[0].0 < lead);
        self.rows.insert(pos, v);
        true
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        Subspace::from_vectors(
            self.ambient,
            self.rows.iter().chain(&other.rows).cloned(),
        )
    }

    /// Intersection via the Zassenhaus double-block echelon.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        let shift = self.ambient;
        let doubled = self.rows.iter().map(|row| {
            let mut v = row.clone();
            v.extend(row.iter().map(|(i, c)| (i + shift, c.clone())));
            v
        });
        let block = Subspace::from_vectors(
            2 * shift,
            doubled.chain(other.rows.iter().cloned()),
        );
        Subspace::from_vectors(
            shift,
            block
                .rows
                .iter()
                .filter(|row| row[0].0 >= shift)
                .map(|row| row.iter().map(|(i, c)| (i - shift, c.clone())).collect::<SparseVec>()),
        )
    }

    /// `dim(self / other)`; requires `other ⊆ self`.
    pub fn quotient_dim(&self, other: &Subspace) -> Result<usize, LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch(self.ambient, other.ambient));
        }
        if !self.contains_subspace(other) {
            return Err(LinalgError::NotASubspace);
        }
        Ok(self.dim() - other.dim())
    }

    pub(crate) fn from_rref_rows(ambient: usize, rows: Vec<SparseVec>) -> Self {
        debug_assert!(rows.windows(2).all(|w| w[0][0].0 < w[1][0].0));
        Subspace { ambient, rows }
    }
}

/// Sparse exact matrix; only nonzero entries are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMatrix::new(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_dense(data: Vec<Vec<Scalar>>) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        let mut m = ExactMatrix::new(rows, cols);
        for (i, row) in data.into_iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    /// Columns given as sparse vectors of length `rows`.
    pub fn from_columns(rows: usize, columns: &[SparseVec]) -> Self {
        let mut m = ExactMatrix::new(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, c) in col {
                m.set(*i, j, c.clone());
            }
        }
        m
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, row: usize, col: usize, value: Scalar) {
        assert!(row < self.rows && col < self.cols, "entry out of range");
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Scalar {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn num_nonzero(&self) -> usize {
        self.entries.len()
    }

    pub fn conj_transpose(&self) -> ExactMatrix {
        let mut m = ExactMatrix::new(self.cols, self.rows);
        for (&(r, c), v) in &self.entries {
            m.set(c, r, v.conj());
        }
        m
    }

    pub fn is_hermitian(&self) -> bool {
        self.rows == self.cols && *self == self.conj_transpose()
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let other_rows = other.row_vectors();
        let mut acc: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        for (&(r, k), v) in &self.entries {
            for (c, w) in &other_rows[k] {
                let prod = v * w;
                let slot = acc.entry((r, *c)).or_insert_with(Scalar::zero);
                *slot = &*slot + &prod;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        ExactMatrix { rows: self.rows, cols: other.cols, entries: acc }
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let cols = self.col_vectors();
        let mut out = SparseVec::new();
        for (j, c) in v {
            out = sv_add_scaled(&out, &cols[*j], c);
        }
        out
    }

    pub fn row_vectors(&self) -> Vec<SparseVec> {
        let mut rows = vec![SparseVec::new(); self.rows];
        for (&(r, c), v) in &self.entries {
            rows[r].push((c, v.clone()));
        }
        rows
    }

    pub fn col_vectors(&self) -> Vec<SparseVec> {
        let mut cols = vec![SparseVec::new(); self.cols];
        for (&(r, c), v) in &self.entries {
            cols[c].push((r, v.clone()));
        }
        for col in &mut cols {
            col.sort_by_key(|(i, _)| *i);
        }
        cols
    }

    pub fn rank(&self) -> usize {
        Subspace::from_vectors(self.cols, self.row_vectors()).dim()
    }

    /// Basis of `{x : Mx = 0}` as a subspace of `Q(i)^cols`.
    pub fn kernel_basis(&self) -> Subspace {
        let rref = Subspace::from_vectors(self.cols, self.row_vectors());
        let pivot_cols: Vec<usize> = rref.basis().iter().map(|r| r[0].0).collect();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivot_cols {
            is_pivot[p] = true;
        }
        let mut kernel_rows: Vec<SparseVec> = Vec::new();
        for (free, _) in is_pivot.iter().enumerate().filter(|(_, pivot)| !**pivot) {
            let mut v: SparseVec = vec![(free, Scalar::one())];
            for row in rref.basis() {
                let c = sv_get(row, free);
                if !c.is_zero() {
                    v.push((row[0].0, -c));
                }
            }
            v.sort_by_key(|(i, _)| *i);
            kernel_rows.push(v);
        }
        Subspace::from_vectors(self.cols, kernel_rows)
    }

    /// Column space as a subspace of `Q(i)^rows`.
    pub fn image(&self) -> Subspace {
        Subspace::from_vectors(self.rows, self.col_vectors())
    }

    /// Exact solution of `Mx = b` if consistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let augmented_cols = self.cols + 1;
        let mut rows = self.row_vectors();
        for (i, row) in rows.iter_mut().enumerate() {
            if !b[i].is_zero() {
                row.push((self.cols, b[i].clone()));
            }
        }
        let rref = Subspace::from_vectors(augmented_cols, rows);
        let mut x = vec![Scalar::zero(); self.cols];
        for row in rref.basis() {
            let lead = row[0].0;
            if lead == self.cols {
                return None; // pivot in the augmented column: inconsistent
            }
            x[lead] = sv_get(row, self.cols);
        }
        Some(x)
    }
}

/// Outcome of the exact LDL* positive-definiteness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PdOutcome {
    PositiveDefinite,
    /// A vector `w` with `w*·H·w ≤ 0`.
    NotPd(Vec<Scalar>),
}

/// Exact LDL* test for a Hermitian matrix, with a certificate direction on
/// failure. Errors on non-Hermitian input.
pub fn ldl_witness(h: &ExactMatrix) -> Result<PdOutcome, LinalgError> {
    if h.num_rows() != h.num_cols() {
        return Err(LinalgError::NotSquare { rows: h.num_rows(), cols: h.num_cols() });
    }
    if !h.is_hermitian() {
        for i in 0..h.num_rows() {
            for j in 0..h.num_cols() {
                if h.get(i, j) != h.get(j, i).conj() {
                    return Err(LinalgError::NotHermitian(i, j));
                }
            }
        }
        return Err(LinalgError::NotHermitian(0, 0));
    }
    let n = h.num_rows();
    let mut a: Vec<Vec<Scalar>> = (0..n).map(|i| (0..n).map(|j| h.get(i, j)).collect()).collect();
    let mut lower: Vec<Vec<Scalar>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
        .collect();
    for k in 0..n {
        let pivot = a[k][k].clone();
        if !pivot.is_positive_real() {
            // Solve L*·w = e_k by back-substitution; then w*·H·w = pivot ≤ 0.
            let mut w = vec![Scalar::zero(); n];
            w[k] = Scalar::one();
            for i in (0..k).rev() {
                let mut acc = Scalar::zero();
                for j in (i + 1)..=k {
                    acc = &acc + &(&lower[j][i].conj() * &w[j]);
                }
                w[i] = -acc;
            }
            return Ok(PdOutcome::NotPd(w));
        }
        for i in (k + 1)..n {
            lower[i][k] = &a[i][k] / &pivot;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let delta = &(&a[i][k] * &a[k][j]) / &pivot;
                a[i][j] = &a[i][j] - &delta;
            }
        }
    }
    Ok(PdOutcome::PositiveDefinite)
}

/// True iff `h` is Hermitian positive definite (exact pivots of LDL*).
pub fn hermitian_pd(h: &ExactMatrix) -> Result<bool, LinalgError> {
    Ok(matches!(ldl_witness(h)?, PdOutcome::PositiveDefinite))
}

/// Deterministic seeded source of small exact scalars, vectors and forms.
///
/// All randomized procedures in the engine take explicit seeds and derive
/// their streams from this splitmix64 generator, so acceptance runs are
/// reproducible bit for bit.
#[derive(Debug, Clone)]
pub struct Sampler {
    state: u64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { state: seed }
    }

    /// Derive an independent stream for a sub-task (e.g. one sample of a
    /// parallel sampling loop).
    pub fn derive(&self, stream: u64) -> Sampler {
        Sampler::new(self.state ^ stream.wrapping_mul(0x9E3779B97F4A7C15).rotate_left(17) ^ 0xA5A5A5A5A5A5A5A5)
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish integer in `lo..=hi`.
    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }

    /// Rational with `|num| ≤ 10`, `1 ≤ den ≤ 10`.
    pub fn rational(&mut self) -> BigRational {
        let num = self.int_in(-10, 10);
        let den = self.int_in(1, 10);
        BigRational::new(num.into(), den.into())
    }

    pub fn scalar(&mut self) -> Scalar {
        Scalar::new(self.rational(), self.rational())
    }

    pub fn nonzero_scalar(&mut self) -> Scalar {
        loop {
            let s = self.scalar();
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// Covector of length `n`; regenerated until nonzero.
    pub fn covector(&mut self, n: usize) -> Vec<Scalar> {
        loop {
            let v: Vec<Scalar> = (0..n).map(|_| self.scalar()).collect();
            if v.iter().any(|c| !c.is_zero()) {
                return v;
            }
        }
    }

    /// `count` covectors of length `n`.
    pub fn factor_list(&mut self, n: usize, count: usize) -> Vec<Vec<Scalar>> {
        (0..count).map(|_| self.covector(n)).collect()
    }

    /// Random multi-index of the given length within `1..=n`.
    pub fn multi_index(&mut self, n: usize, len: usize) -> MultiIndex {
        debug_assert!(len <= n);
        let mut picked: Vec<usize> = (1..=n).collect();
        for i in 0..len {
            let j = i + (self.next_u64() as usize) % (n - i);
            picked.swap(i, j);
        }
        picked.truncate(len);
        MultiIndex::from_set(picked).expect("distinct indices")
    }

    /// Random form with up to `max_terms` monomials of arbitrary bidegree.
    pub fn form(&mut self, n: usize, max_terms: usize) -> Form {
        let terms = self.int_in(1, max_terms as i64) as usize;
        let mut out = Form::zero(n);
        for _ in 0..terms {
            let p = self.int_in(0, n as i64) as usize;
            let q = self.int_in(0, n as i64) as usize;
            let hol = self.multi_index(n, p);
            let anti = self.multi_index(n, q);
            out = out.add(&Form::monomial(n, hol, anti, self.nonzero_scalar()));
        }
        out
    }

    /// Random homogeneous `(p, q)`-form with up to `max_terms` monomials.
    pub fn homogeneous_form(&mut self, n: usize, p: usize, q: usize, max_terms: usize) -> Form {
        let terms = self.int_in(1, max_terms as i64) as usize;
        let mut out = Form::zero(n);
        for _ in 0..terms {
            let hol = self.multi_index(n, p);
            let anti = self.multi_index(n, q);
            out = out.add(&Form::monomial(n, hol, anti, self.nonzero_scalar()));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sc(i: i64) -> Scalar {
        Scalar::from_int(i)
    }

    #[test]
    fn rank_examples() {
        // [[1, i], [i, -1]] has rank 1 (row₂ = i·row₁).
        let m = ExactMatrix::from_dense(vec![
            vec![sc(1), Scalar::i()],
            vec![Scalar::i(), sc(-1)],
        ]);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.kernel_basis().dim(), 1);

        let id = ExactMatrix::identity(3);
        assert_eq!(id.rank(), 3);
        assert_eq!(id.kernel_basis().dim(), 0);
    }

    #[test]
    fn rank_nullity_and_conj_transpose() {
        let mut s = Sampler::new(7);
        for _ in 0..40 {
            let rows = s.int_in(1, 5) as usize;
            let cols = s.int_in(1, 5) as usize;
            let mut m = ExactMatrix::new(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    if s.int_in(0, 2) == 0 {
                        m.set(r, c, s.scalar());
                    }
                }
            }
            let rank = m.rank();
            assert_eq!(rank + m.kernel_basis().dim(), cols);
            assert_eq!(m.conj_transpose().rank(), rank);
            assert_eq!(m.image().dim(), rank);
        }
    }

    #[test]
    fn solve_examples() {
        let m = ExactMatrix::from_dense(vec![vec![sc(3)]]);
        assert_eq!(m.solve(&[sc(6)]), Some(vec![sc(2)]));

        // Inconsistent 2x1 system.
        let m = ExactMatrix::from_dense(vec![vec![sc(1)], vec![sc(1)]]);
        assert_eq!(m.solve(&[sc(1), sc(2)]), None);

        // Random consistent systems: the residual must vanish.
        let mut s = Sampler::new(11);
        for _ in 0..30 {
            let rows = s.int_in(1, 5) as usize;
            let cols = s.int_in(1, 5) as usize;
            let mut m = ExactMatrix::new(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    if s.int_in(0, 1) == 0 {
                        m.set(r, c, s.scalar());
                    }
                }
            }
            let x0: Vec<Scalar> = (0..cols).map(|_| s.scalar()).collect();
            let mut b = vec![Scalar::zero(); rows];
            for (r, c, v) in m.entries() {
                b[r] = &b[r] + &(v * &x0[c]);
            }
            let x = m.solve(&b).expect("consistent by construction");
            let mut bx = vec![Scalar::zero(); rows];
            for (r, c, v) in m.entries() {
                bx[r] = &bx[r] + &(v * &x[c]);
            }
            assert_eq!(bx, b);
        }
    }

    #[test]
    fn subspace_arithmetic() {
        let a = Subspace::from_vectors(2, vec![vec![(0, sc(1))]]);
        let b = Subspace::from_vectors(2, vec![vec![(1, sc(1))]]);
        assert_eq!(a.intersect(&b).dim(), 0);
        assert_eq!(a.sum(&b).dim(), 2);
        assert_eq!(a.quotient_dim(&a).unwrap(), 0);
        assert_eq!(a.quotient_dim(&b), Err(LinalgError::NotASubspace));

        // dim(A+B) + dim(A∩B) = dim A + dim B on random pairs.
        let mut s = Sampler::new(23);
        for _ in 0..40 {
            let ambient = s.int_in(1, 6) as usize;
            let gen = |s: &mut Sampler| {
                let count = s.int_in(0, 3) as usize;
                Subspace::from_vectors(
                    ambient,
                    (0..count).map(|_| {
                        let mut v: SparseVec = Vec::new();
                        for i in 0..ambient {
                            if s.int_in(0, 1) == 0 {
                                let c = s.scalar();
                                if !c.is_zero() {
                                    v.push((i, c));
                                }
                            }
                        }
                        v
                    }),
                )
            };
            let a = gen(&mut s);
            let b = gen(&mut s);
            assert_eq!(
                a.sum(&b).dim() + a.intersect(&b).dim(),
                a.dim() + b.dim()
            );
        }
    }

    #[test]
    fn hermitian_pd_examples() {
        assert!(hermitian_pd(&ExactMatrix::identity(3)).unwrap());
        let diag = ExactMatrix::from_dense(vec![vec![sc(1), sc(0)], vec![sc(0), sc(-1)]]);
        assert!(!hermitian_pd(&diag).unwrap());
        // [[2, i], [-i, 1]] has pivots 2 and 1/2, so it is PD.
        let m = ExactMatrix::from_dense(vec![
            vec![sc(2), Scalar::i()],
            vec![-Scalar::i(), sc(1)],
        ]);
        assert!(hermitian_pd(&m).unwrap());
        // Non-Hermitian input is an error, not a value.
        let bad = ExactMatrix::from_dense(vec![vec![sc(1), sc(2)], vec![sc(3), sc(4)]]);
        assert!(matches!(hermitian_pd(&bad), Err(LinalgError::NotHermitian(_, _))));
    }

    /// Exhaustive leading-principal-minor determinant oracle on small
    /// Hermitian matrices.
    fn pd_by_minors(h: &ExactMatrix) -> bool {
        let n = h.num_rows();
        for k in 1..=n {
            let det = dense_det(
                &(0..k)
                    .map(|i| (0..k).map(|j| h.get(i, j)).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            );
            if !det.is_positive_real() {
                return false;
            }
        }
        true
    }

    fn dense_det(a: &[Vec<Scalar>]) -> Scalar {
        let n = a.len();
        if n == 0 {
            return Scalar::one();
        }
        let mut a: Vec<Vec<Scalar>> = a.to_vec();
        let mut det = Scalar::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return Scalar::zero();
            };
            if p != k {
                a.swap(p, k);
                det = -det;
            }
            det = &det * &a[k][k].clone();
            let pivot = a[k][k].clone();
            let pivot_row = a[k].clone();
            for row in a.iter_mut().skip(k + 1) {
                let factor = &row[k] / &pivot;
                for (entry, pivot_entry) in row.iter_mut().zip(&pivot_row).skip(k) {
                    *entry = &*entry - &(&factor * pivot_entry);
                }
            }
        }
        det
    }

    #[test]
    fn pd_matches_minor_oracle_and_witness_is_valid() {
        let mut s = Sampler::new(101);
        for _ in 0..60 {
            let n = s.int_in(1, 5) as usize;
            let mut h = ExactMatrix::new(n, n);
            for i in 0..n {
                h.set(i, i, Scalar::new(s.rational(), num_traits::Zero::zero()));
                for j in (i + 1)..n {
                    let v = s.scalar();
                    h.set(i, j, v.clone());
                    h.set(j, i, v.conj());
                }
            }
            let outcome = ldl_witness(&h).unwrap();
            assert_eq!(
                matches!(outcome, PdOutcome::PositiveDefinite),
                pd_by_minors(&h),
                "LDL and minor oracle disagree on {h:?}"
            );
            if let PdOutcome::NotPd(w) = outcome {
                // w*·H·w must be ≤ 0 (real).
                let mut value = Scalar::zero();
                for i in 0..n {
                    for j in 0..n {
                        value = &value + &(&(&w[i].conj() * &h.get(i, j)) * &w[j]);
                    }
                }
                assert!(value.is_real());
                assert!(!value.is_positive_real(), "witness gives positive value {value}");
            }
        }
    }

    #[test]
    fn sampler_is_deterministic() {
        let mut a = Sampler::new(42);
        let mut b = Sampler::new(42);
        for _ in 0..100 {
            assert_eq!(a.scalar(), b.scalar());
        }
        let mut c = Sampler::new(43);
        let first: Vec<Scalar> = (0..16).map(|_| Sampler::new(42).scalar()).collect();
        let other: Vec<Scalar> = (0..16).map(|_| c.scalar()).collect();
        assert_ne!(first, other);
        // Covectors are never zero.
        let mut s = Sampler::new(5);
        for _ in 0..50 {
            assert!(s.covector(3).iter().any(|c| !c.is_zero()));
        }
    }
}
