//! Invariant Dolbeault cohomology, the spectral sequence of the holomorphic
//! filtration with its page dimensions and differential ranks, the
//! degeneration step, and the de Rham cross-check.
//!
//! Pages are computed from subspace quotients:
//! `Z_r^{p,q} = F^p A^{p+q} ∩ d⁻¹(F^{p+r} A^{p+q+1})` and
//! `E_r^{p,q} = Z_r^{p,q} / (Z_{r-1}^{p+1,q-1} + d·Z_{r-1}^{p-r+1,q+r-2})`,
//! one uniform exact-linear-algebra path for every page.

use std::collections::BTreeMap;

use crate::forms::{Form, MultiIndex};
use crate::linalg::{ExactMatrix, SparseVec, Subspace};
use crate::par;
use crate::structure::StructureModel;

/// Dimensions and outgoing differential ranks of one page. Only nonzero
/// entries are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageTable {
    pub r: usize,
    pub dims: BTreeMap<(usize, usize), usize>,
    pub diff_ranks: BTreeMap<(usize, usize), usize>,
}

impl PageTable {
    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.dims.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn diff_rank(&self, p: usize, q: usize) -> usize {
        self.diff_ranks.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn total_dim(&self, degree: usize) -> usize {
        self.dims
            .iter()
            .filter(|(&(p, q), _)| p + q == degree)
            .map(|(_, &d)| d)
            .sum()
    }

    pub fn has_nonzero_differential(&self) -> bool {
        !self.diff_ranks.is_empty()
    }

    /// Alternating sum over total degree of the page dimensions; constant
    /// across pages by exactness.
    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .map(|(&(p, q), &d)| if (p + q) % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }
}

/// Degeneration data: the first page from which every differential rank
/// vanishes, the computed pages, and the de Rham dimensions per total degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegenerationReport {
    pub step: usize,
    pub pages: Vec<PageTable>,
    pub de_rham_dims: Vec<usize>,
}

/// The full invariant complex of a model: monomial bases per total degree
/// and the sparse matrices of `d`.
pub struct CochainComplex<'a> {
    model: &'a StructureModel,
    bases: Vec<Vec<(MultiIndex, MultiIndex)>>,
    /// `d_cols[k][j]` = coordinates of `d(basis_k[j])` in `bases[k+1]`.
    d_cols: Vec<Vec<SparseVec>>,
}

fn multi_indices(n: usize, len: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (1..=len).collect();
    if len > n {
        return out;
    }
    loop {
        out.push(MultiIndex::from_set(current.iter().copied()).expect("ascending by construction"));
        // Advance to the next combination of {1..n} in lexicographic order.
        let mut i = len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < n - (len - 1 - i) {
                current[i] += 1;
                for t in (i + 1)..len {
                    current[t] = current[t - 1] + 1;
                }
                break;
            }
        }
    }
}

impl<'a> CochainComplex<'a> {
    pub fn new(model: &'a StructureModel) -> Self {
        let n = model.n();
        let mut bases = Vec::with_capacity(2 * n + 1);
        for degree in 0..=(2 * n) {
            let mut basis = Vec::new();
            for p in (0..=degree.min(n)).rev() {
                let q = degree - p;
                if q > n {
                    continue;
                }
                for hol in multi_indices(n, p) {
                    for anti in multi_indices(n, q) {
                        basis.push((hol.clone(), anti));
                    }
                }
            }
            bases.push(basis);
        }
        let index: Vec<BTreeMap<(MultiIndex, MultiIndex), usize>> = bases
            .iter()
            .map(|basis| basis.iter().enumerate().map(|(i, key)| (key.clone(), i)).collect())
            .collect();
        let d_cols: Vec<Vec<SparseVec>> = (0..=(2 * n))
            .map(|degree| {
                let images: Vec<SparseVec> = par::map_vec(
                    bases[degree].clone(),
                    |(hol, anti)| {
                        if degree == 2 * n {
                            return SparseVec::new();
                        }
                        let mono = Form::monomial(n, hol, anti, crate::scalar::Scalar::one());
                        form_coords(&model.d(&mono), &index[degree + 1])
                    },
                );
                images
            })
            .collect();
        CochainComplex { model, bases, d_cols }
    }

    pub fn n(&self) -> usize {
        self.model.n()
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.bases.get(degree).map_or(0, |b| b.len())
    }

    pub fn basis(&self, degree: usize) -> &[(MultiIndex, MultiIndex)] {
        &self.bases[degree]
    }

    /// The matrix of `d` from degree `k` to `k+1`.
    pub fn d_matrix(&self, degree: usize) -> ExactMatrix {
        let target_dim = if degree < 2 * self.n() { self.dim(degree + 1) } else { 0 };
        ExactMatrix::from_columns(target_dim, &self.d_cols[degree])
    }

    fn apply_d(&self, degree: usize, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, c) in v {
            out = crate::linalg::sv_add_scaled(&out, &self.d_cols[degree][*j], c);
        }
        out
    }

    /// Basis positions of `F^level A^degree` (holomorphic degree ≥ level).
    fn filtration_positions(&self, degree: usize, level: usize) -> Vec<usize> {
        self.bases[degree]
            .iter()
            .enumerate()
            .filter(|(_, (hol, _))| hol.len() >= level)
            .map(|(i, _)| i)
            .collect()
    }

    /// `F^level ∩ d⁻¹(F^threshold) ⊆ A^degree`, the building block of every
    /// page: elements of the filtration level whose differential lands at
    /// least `threshold` deep. `threshold ≤ level` makes the condition
    /// vacuous; `threshold > n` forces `dx = 0`.
    fn z_subspace(&self, level: usize, threshold: usize, degree: usize) -> Subspace {
        let ambient = self.dim(degree);
        if degree > 2 * self.n() || level > self.n() || level > degree {
            return Subspace::zero(ambient);
        }
        let cols = self.filtration_positions(degree, level);
        if threshold <= level || degree == 2 * self.n() {
            // d never leaves the filtration level of its argument.
            let rows = cols.iter().map(|&i| vec![(i, crate::scalar::Scalar::one())]).collect();
            return Subspace::from_rref_rows(ambient, rows);
        }
        let mut conditions = ExactMatrix::new(self.dim(degree + 1), cols.len());
        for (local, &global) in cols.iter().enumerate() {
            for (target, c) in &self.d_cols[degree][global] {
                let hol_len = self.bases[degree + 1][*target].0.len();
                if hol_len < threshold {
                    conditions.set(*target, local, c.clone());
                }
            }
        }
        let kernel = conditions.kernel_basis();
        // Scatter local column coordinates back into the ambient basis;
        // the index map is monotone, so echelon structure is preserved.
        let rows = kernel
            .basis()
            .iter()
            .map(|row| row.iter().map(|(i, c)| (cols[*i], c.clone())).collect())
            .collect();
        Subspace::from_rref_rows(ambient, rows)
    }

    fn d_image(&self, z: &Subspace, degree: usize) -> Subspace {
        let target_dim = if degree < 2 * self.n() { self.dim(degree + 1) } else { 0 };
        Subspace::from_vectors(
            target_dim,
            z.basis().iter().map(|v| self.apply_d(degree, v)),
        )
    }
}

fn form_coords(form: &Form, index: &BTreeMap<(MultiIndex, MultiIndex), usize>) -> SparseVec {
    let mut out: SparseVec = form
        .terms()
        .map(|(hol, anti, c)| (index[&(hol.clone(), anti.clone())], c.clone()))
        .collect();
    out.sort_by_key(|(i, _)| *i);
    out
}

/// All distinct filtration subspaces `F^level ∩ d⁻¹F^threshold` (and their
/// `d`-images), computed once and shared by every page. Thresholds are
/// clamped to `0..=n+1`: at or below the level the condition is vacuous,
/// above `n` it means `dx = 0`.
struct FiltrationTables {
    z: BTreeMap<(usize, usize, usize), Subspace>,
    dz: BTreeMap<(usize, usize, usize), Subspace>,
    empties: Vec<Subspace>,
}

fn filtration_tables(complex: &CochainComplex) -> FiltrationTables {
    let n = complex.n();
    let two_n = 2 * n;
    let keys: Vec<(usize, usize, usize)> = (0..=two_n)
        .flat_map(|k| {
            (0..=n).flat_map(move |level| {
                (0..=(n + 1)).map(move |threshold| (level, threshold, k))
            })
        })
        .collect();
    let computed = par::map_vec(keys, |(level, threshold, k)| {
        let z = complex.z_subspace(level, threshold, k);
        let dz = complex.d_image(&z, k);
        ((level, threshold, k), z, dz)
    });
    let mut tables = FiltrationTables {
        z: BTreeMap::new(),
        dz: BTreeMap::new(),
        empties: (0..=(two_n + 1))
            .map(|k| Subspace::zero(if k <= two_n { complex.dim(k) } else { 0 }))
            .collect(),
    };
    for (key, z, dz) in computed {
        tables.z.insert(key, z);
        tables.dz.insert(key, dz);
    }
    tables
}

impl FiltrationTables {
    /// `Z_r^{p,·}` in degree `k`, for possibly out-of-range `p`, `r`, `k`.
    fn z_at(&self, n: usize, p: i64, r: i64, k: i64) -> &Subspace {
        let two_n = 2 * n as i64;
        if k < 0 || k > two_n {
            return &self.empties[self.empties.len() - 1];
        }
        if p > n as i64 || p > k {
            return &self.empties[k as usize];
        }
        let level = p.max(0) as usize;
        let threshold = (p + r).clamp(0, n as i64 + 1) as usize;
        &self.z[&(level, threshold, k as usize)]
    }

    /// `d(Z_r^{p,·})` for `Z` in degree `k` (the image lives in `k+1`).
    fn dz_at(&self, n: usize, p: i64, r: i64, k: i64) -> &Subspace {
        let two_n = 2 * n as i64;
        let image_empty = |k: i64| -> &Subspace {
            if (0..=two_n).contains(&(k + 1)) {
                &self.empties[(k + 1) as usize]
            } else {
                &self.empties[self.empties.len() - 1]
            }
        };
        if k < 0 || k > two_n || p > n as i64 || p > k {
            return image_empty(k);
        }
        let level = p.max(0) as usize;
        let threshold = (p + r).clamp(0, n as i64 + 1) as usize;
        &self.dz[&(level, threshold, k as usize)]
    }
}

fn build_page(complex: &CochainComplex, tables: &FiltrationTables, r: i64) -> PageTable {
    let n = complex.n();
    let n_i = n as i64;
    let cells: Vec<(i64, i64)> = (0..=n_i)
        .flat_map(|p| (0..=n_i).map(move |q| (p, q)))
        .collect();
    let entries = par::map_vec(cells, |(p, q)| {
        let k = p + q;

        // Denominator at (p, q): Z_{r−1}^{p+1,q−1} + d·Z_{r−1}^{p−r+1,q+r−2}.
        let den = tables
            .z_at(n, p + 1, r - 1, k)
            .sum(tables.dz_at(n, p - r + 1, r - 1, k - 1));
        let num = tables.z_at(n, p, r, k);
        let dim = num
            .quotient_dim(&den)
            .expect("page denominator must be contained in the numerator");

        // Rank of d_r out of (p, q): image of d(Z_r) in the target quotient
        // E_r^{p+r, q−r+1}.
        let rank = if dim == 0 {
            0
        } else {
            let target_den = tables
                .z_at(n, p + r + 1, r - 1, k + 1)
                .sum(tables.dz_at(n, p + 1, r - 1, k));
            let image = tables.dz_at(n, p, r, k);
            image.sum(&target_den).dim() - target_den.dim()
        };
        ((p as usize, q as usize), dim, rank)
    });
    let mut dims = BTreeMap::new();
    let mut diff_ranks = BTreeMap::new();
    for (key, dim, rank) in entries {
        if dim > 0 {
            dims.insert(key, dim);
        }
        if rank > 0 {
            diff_ranks.insert(key, rank);
        }
    }
    PageTable { r: r as usize, dims, diff_ranks }
}

/// Per-total-degree matrices of `d` on the monomial basis.
pub fn cochain_matrices(model: &StructureModel) -> Vec<ExactMatrix> {
    let complex = CochainComplex::new(model);
    (0..=(2 * model.n())).map(|k| complex.d_matrix(k)).collect()
}

/// Pages `first..=last` of the spectral sequence.
pub fn pages_between(model: &StructureModel, first: usize, last: usize) -> Vec<PageTable> {
    let complex = CochainComplex::new(model);
    let tables = filtration_tables(&complex);
    (first..=last).map(|r| build_page(&complex, &tables, r as i64)).collect()
}

/// One page of the spectral sequence (`r ≥ 0`; page 1 is Dolbeault).
pub fn page(model: &StructureModel, r: usize) -> PageTable {
    pages_between(model, r, r).pop().expect("requested page is computed")
}

/// Invariant Dolbeault dimensions `h^{p,q}` per bidegree, computed directly
/// from the `∂̄` operator on each `(p,q)` block.
pub fn dolbeault_dims(model: &StructureModel) -> BTreeMap<(usize, usize), usize> {
    bigraded_cohomology(model, false)
}

/// Invariant `∂`-cohomology dimensions per bidegree (used for the conjugation
/// symmetry check `h^{p,q}_∂̄ = h^{q,p}_∂`).
pub fn del_cohomology_dims(model: &StructureModel) -> BTreeMap<(usize, usize), usize> {
    bigraded_cohomology(model, true)
}

fn bigraded_cohomology(model: &StructureModel, use_del: bool) -> BTreeMap<(usize, usize), usize> {
    let n = model.n();
    let cells: Vec<(usize, usize)> =
        (0..=n).flat_map(|p| (0..=n).map(move |q| (p, q))).collect();
    // rank of the operator out of each (p, q) block
    let ranks: BTreeMap<(usize, usize), usize> = par::map_vec(cells.clone(), |(p, q)| {
        ((p, q), block_operator_matrix(model, p, q, use_del).rank())
    })
    .into_iter()
    .collect();
    let mut out = BTreeMap::new();
    for (p, q) in cells {
        let dim = binomial(n, p) * binomial(n, q);
        let rank_out = ranks[&(p, q)];
        let rank_in = if use_del {
            if p == 0 { 0 } else { ranks[&(p - 1, q)] }
        } else if q == 0 {
            0
        } else {
            ranks[&(p, q - 1)]
        };
        let h = dim - rank_out - rank_in;
        if h > 0 {
            out.insert((p, q), h);
        }
    }
    out
}

fn block_operator_matrix(model: &StructureModel, p: usize, q: usize, use_del: bool) -> ExactMatrix {
    let n = model.n();
    let (tp, tq) = if use_del { (p + 1, q) } else { (p, q + 1) };
    let source: Vec<(MultiIndex, MultiIndex)> = multi_indices(n, p)
        .into_iter()
        .flat_map(|hol| multi_indices(n, q).into_iter().map(move |anti| (hol.clone(), anti)))
        .collect();
    if tp > n || tq > n {
        return ExactMatrix::new(0, source.len());
    }
    let target_index: BTreeMap<(MultiIndex, MultiIndex), usize> = multi_indices(n, tp)
        .into_iter()
        .flat_map(|hol| multi_indices(n, tq).into_iter().map(move |anti| (hol.clone(), anti)))
        .enumerate()
        .map(|(i, key)| (key, i))
        .collect();
    let mut m = ExactMatrix::new(target_index.len(), source.len());
    for (j, (hol, anti)) in source.iter().enumerate() {
        let mono = Form::monomial(n, hol.clone(), anti.clone(), crate::scalar::Scalar::one());
        let image = if use_del { model.del(&mono) } else { model.delbar(&mono) };
        for (ih, ia, c) in image.terms() {
            m.set(target_index[&(ih.clone(), ia.clone())], j, c.clone());
        }
    }
    m
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut out: u128 = 1;
    for i in 0..k {
        out = out * (n - i) as u128 / (i + 1) as u128;
    }
    out as usize
}

/// De Rham dimensions `b_k` of the invariant complex per total degree.
pub fn de_rham_dims(model: &StructureModel) -> Vec<usize> {
    let matrices = cochain_matrices(model);
    let ranks: Vec<usize> = par::map_vec(matrices, |m| m.rank());
    let complex_dims: Vec<usize> =
        (0..=(2 * model.n())).map(|k| binomial(2 * model.n(), k)).collect();
    (0..=(2 * model.n()))
        .map(|k| {
            let rank_out = ranks[k];
            let rank_in = if k == 0 { 0 } else { ranks[k - 1] };
            complex_dims[k] - rank_out - rank_in
        })
        .collect()
}

/// Compute pages `1..=r_max` (raised to at least `n+1`, which is where the
/// filtration length forces stabilization) and report the degeneration step:
/// the smallest `r ≥ 1` with no nonzero differential from page `r` on.
pub fn degeneration_step(model: &StructureModel, r_max: Option<usize>) -> DegenerationReport {
    let horizon = r_max.unwrap_or(0).max(model.n() + 1);
    let pages = pages_between(model, 1, horizon);
    let step = (1..=horizon)
        .find(|&r| pages[(r - 1)..].iter().all(|page| !page.has_nonzero_differential()))
        .expect("differentials always vanish beyond the filtration length");
    let de_rham = de_rham_dims(model);
    // Cross-check: the stable page must recover the de Rham dimensions.
    let last = pages.last().expect("at least one page");
    for (k, &b) in de_rham.iter().enumerate() {
        assert_eq!(
            last.total_dim(k),
            b,
            "stable page total dimension disagrees with de Rham in degree {k}"
        );
    }
    DegenerationReport { step, pages, de_rham_dims: de_rham }
}
