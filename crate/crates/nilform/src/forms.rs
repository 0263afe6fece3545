//! The bigraded invariant exterior algebra.
//!
//! A [`Form`] is a sparse linear combination of monomials
//! `φ^{i_1}∧…∧φ^{i_p}∧φ̄^{j_1}∧…∧φ̄^{j_q}` with Gaussian-rational
//! coefficients. Monomials are stored canonically: all holomorphic factors
//! first, each index list strictly ascending, with any reordering sign folded
//! into the coefficient. Form equality is therefore exact map equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("multi-index {0:?} is not strictly increasing within 1..=n")]
    BadMultiIndex(Vec<usize>),
    #[error("expected a homogeneous ({0},{1})-form")]
    WrongBidegree(usize, usize),
    #[error("expected a top-degree (n,n)-form, found component of bidegree ({0},{1})")]
    NotTopDegree(usize, usize),
}

/// A strictly increasing list of generator indices in `1..=n`
/// (the empty list is the degree-0 index).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    /// Build from a strictly increasing list of indices `>= 1`.
    pub fn new(indices: Vec<usize>) -> Result<Self, FormError> {
        let ok = indices.windows(2).all(|w| w[0] < w[1]) && indices.first().is_none_or(|&f| f >= 1);
        if ok {
            Ok(MultiIndex(indices))
        } else {
            Err(FormError::BadMultiIndex(indices))
        }
    }

    /// `{1, 2, …, n}`.
    pub fn full(n: usize) -> Self {
        MultiIndex((1..=n).collect())
    }

    /// Ascending range `{lo, …, hi}` (empty if `lo > hi`).
    pub fn range(lo: usize, hi: usize) -> Self {
        MultiIndex((lo..=hi).collect())
    }

    /// From any iterator of indices; sorts and rejects duplicates.
    pub fn from_set(indices: impl IntoIterator<Item = usize>) -> Result<Self, FormError> {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        MultiIndex::new(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.0.binary_search(&idx).is_ok()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    /// Indices of `1..=n` not present here.
    pub fn complement(&self, n: usize) -> MultiIndex {
        MultiIndex((1..=n).filter(|i| !self.contains(*i)).collect())
    }

    /// Copy with the given indices removed.
    pub fn without(&self, remove: &[usize]) -> MultiIndex {
        MultiIndex(self.0.iter().copied().filter(|i| !remove.contains(i)).collect())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Merge two strictly ascending index lists, tracking the permutation sign.
/// Returns `None` when they share an index (repeated 1-form factor).
fn merge_indices(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut negative = false;
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                // b[j] crosses the remaining factors of a.
                if (a.len() - i) % 2 == 1 {
                    negative = !negative;
                }
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => return None,
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, negative))
}

/// Bidegree classification of a form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bidegree {
    /// The zero form (homogeneous of every bidegree).
    Zero,
    /// All monomials share bidegree `(p, q)`.
    Pure(usize, usize),
    /// Monomials of several bidegrees are present.
    Mixed,
}

/// A sparse invariant form on an `n`-dimensional complex co-frame.
#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    n: usize,
    terms: BTreeMap<(MultiIndex, MultiIndex), Scalar>,
}

impl Form {
    pub fn zero(n: usize) -> Self {
        Form { n, terms: BTreeMap::new() }
    }

    /// The constant form `c` (empty monomial).
    pub fn scalar(n: usize, c: Scalar) -> Self {
        Form::monomial(n, MultiIndex::empty(), MultiIndex::empty(), c)
    }

    pub fn one(n: usize) -> Self {
        Form::scalar(n, Scalar::one())
    }

    /// A single canonical monomial `c·φ^I∧φ̄^J`.
    pub fn monomial(n: usize, hol: MultiIndex, anti: MultiIndex, c: Scalar) -> Self {
        assert!(
            hol.indices().iter().chain(anti.indices()).all(|&i| i >= 1 && i <= n),
            "monomial index out of range 1..={n}"
        );
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((hol, anti), c);
        }
        Form { n, terms }
    }

    /// The generator `φ^m` (`signed = +m`) or `φ̄^m` (`signed = -m`).
    pub fn generator(n: usize, signed: i64) -> Self {
        let idx = signed.unsigned_abs() as usize;
        assert!(signed != 0 && idx <= n, "generator index out of range");
        if signed > 0 {
            Form::monomial(n, MultiIndex(vec![idx]), MultiIndex::empty(), Scalar::one())
        } else {
            Form::monomial(n, MultiIndex::empty(), MultiIndex(vec![idx]), Scalar::one())
        }
    }

    /// Wedge of generators in the written order, e.g. `[2, -1, 1]` for
    /// `φ²∧φ̄¹∧φ¹`; the canonical reordering sign lands in the coefficient.
    pub fn product_of_generators(n: usize, seq: &[i64]) -> Self {
        seq.iter().fold(Form::one(n), |acc, &g| acc.wedge(&Form::generator(n, g)))
    }

    /// Sum canonical `(I, J, c)` terms (duplicates combined, zeros dropped).
    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (MultiIndex, MultiIndex, Scalar)>,
    ) -> Self {
        let mut form = Form::zero(n);
        for (hol, anti, c) in terms {
            form.add_term(hol, anti, c);
        }
        form
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &MultiIndex, &Scalar)> {
        self.terms.iter().map(|((hol, anti), c)| (hol, anti, c))
    }

    pub fn coefficient(&self, hol: &MultiIndex, anti: &MultiIndex) -> Scalar {
        self.terms
            .get(&(hol.clone(), anti.clone()))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    fn add_term(&mut self, hol: MultiIndex, anti: MultiIndex, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((hol, anti)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Form) -> Form {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut out = self.clone();
        for ((hol, anti), c) in &other.terms {
            out.add_term(hol.clone(), anti.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form {
        self.scale(&-Scalar::one())
    }

    pub fn scale(&self, factor: &Scalar) -> Form {
        if factor.is_zero() {
            return Form::zero(self.n);
        }
        Form {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c * factor))
                .collect(),
        }
    }

    /// Exterior product. Bilinear, associative, graded anticommutative.
    pub fn wedge(&self, other: &Form) -> Form {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut out = Form::zero(self.n);
        for ((hol_a, anti_a), ca) in &self.terms {
            for ((hol_b, anti_b), cb) in &other.terms {
                let Some((hol, hol_neg)) = merge_indices(hol_a.indices(), hol_b.indices()) else {
                    continue;
                };
                let Some((anti, anti_neg)) = merge_indices(anti_a.indices(), anti_b.indices())
                else {
                    continue;
                };
                // Move the holomorphic block of b across the antiholomorphic
                // block of a.
                let block_neg = (anti_a.len() * hol_b.len()) % 2 == 1;
                let mut c = ca * cb;
                if hol_neg ^ anti_neg ^ block_neg {
                    c = -c;
                }
                out.add_term(MultiIndex(hol), MultiIndex(anti), c);
            }
        }
        out
    }

    /// Complex conjugation: `conj(c·φ^I∧φ̄^J) = conj(c)·(−1)^{|I||J|}·φ^J∧φ̄^I`.
    /// An involution.
    pub fn conjugate(&self) -> Form {
        let mut out = Form::zero(self.n);
        for ((hol, anti), c) in &self.terms {
            let mut cc = c.conj();
            if (hol.len() * anti.len()) % 2 == 1 {
                cc = -cc;
            }
            out.add_term(anti.clone(), hol.clone(), cc);
        }
        out
    }

    /// True iff `conj(a) = a` exactly.
    pub fn is_real(&self) -> bool {
        self.conjugate() == *self
    }

    /// Decompose into pure-bidegree components (zero components omitted).
    pub fn bidegree_split(&self) -> BTreeMap<(usize, usize), Form> {
        let mut out: BTreeMap<(usize, usize), Form> = BTreeMap::new();
        for ((hol, anti), c) in &self.terms {
            out.entry((hol.len(), anti.len()))
                .or_insert_with(|| Form::zero(self.n))
                .add_term(hol.clone(), anti.clone(), c.clone());
        }
        out
    }

    /// The `(p, q)` component.
    pub fn component(&self, p: usize, q: usize) -> Form {
        let mut out = Form::zero(self.n);
        for ((hol, anti), c) in &self.terms {
            if hol.len() == p && anti.len() == q {
                out.add_term(hol.clone(), anti.clone(), c.clone());
            }
        }
        out
    }

    pub fn bidegree(&self) -> Bidegree {
        let mut seen: Option<(usize, usize)> = None;
        for (hol, anti) in self.terms.keys() {
            let bd = (hol.len(), anti.len());
            match seen {
                None => seen = Some(bd),
                Some(prev) if prev != bd => return Bidegree::Mixed,
                Some(_) => {}
            }
        }
        match seen {
            None => Bidegree::Zero,
            Some((p, q)) => Bidegree::Pure(p, q),
        }
    }

    /// True if every monomial has bidegree `(p, q)` (the zero form counts).
    pub fn is_homogeneous(&self, p: usize, q: usize) -> bool {
        matches!(self.bidegree(), Bidegree::Zero) || self.bidegree() == Bidegree::Pure(p, q)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((hol, anti), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if !hol.is_empty() {
                write!(f, "·φ^{{{}}}", join(hol.indices()))?;
            }
            if !anti.is_empty() {
                write!(f, "{}φ̄^{{{}}}", if hol.is_empty() { "·" } else { "∧" }, join(anti.indices()))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[n={}]({})", self.n, self)
    }
}

fn join(ix: &[usize]) -> String {
    ix.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

/// The normalization constant `σ_p = i^{p²}·2^{−p}` that makes `σ_p·ψ∧ψ̄`
/// real for simple `ψ`.
pub fn sigma_const(p: usize) -> Scalar {
    let p64 = p as u64;
    let mut half_pow = Scalar::one();
    let half = Scalar::from_ratio(1, 2);
    for _ in 0..p {
        half_pow = &half_pow * &half;
    }
    &Scalar::i_pow(p64.wrapping_mul(p64)) * &half_pow
}

/// The canonical volume form `vol = σ_n·φ^{1…n}∧φ̄^{1…n}`.
pub fn volume_form(n: usize) -> Form {
    Form::monomial(n, MultiIndex::full(n), MultiIndex::full(n), sigma_const(n))
}

/// The coefficient `c` with `a = c·vol`, for a homogeneous `(n,n)`-form
/// (zero allowed).
pub fn volume_coefficient(a: &Form) -> Result<Scalar, FormError> {
    let n = a.n();
    match a.bidegree() {
        Bidegree::Zero => Ok(Scalar::zero()),
        Bidegree::Pure(p, q) if p == n && q == n => {
            let c = a.coefficient(&MultiIndex::full(n), &MultiIndex::full(n));
            Ok(&c / &sigma_const(n))
        }
        Bidegree::Pure(p, q) => Err(FormError::NotTopDegree(p, q)),
        Bidegree::Mixed => Err(FormError::WrongBidegree(n, n)),
    }
}

/// Positivity class of a top-degree form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopClass {
    StrictlyPositive,
    Positive,
    Other,
}

/// Classify a homogeneous `(n,n)`-form by the sign of its volume coefficient.
pub fn classify_top(a: &Form) -> Result<TopClass, FormError> {
    let c = volume_coefficient(a)?;
    Ok(if c.is_positive_real() {
        TopClass::StrictlyPositive
    } else if c.is_zero() {
        TopClass::Positive
    } else {
        TopClass::Other
    })
}

/// Wedge of `(1,0)`-covectors given by coefficient vectors along `φ^1..φ^n`.
/// Zero output is allowed (dependent factors).
pub fn simple_form(n: usize, factors: &[Vec<Scalar>]) -> Form {
    let mut out = Form::one(n);
    for factor in factors {
        assert_eq!(factor.len(), n, "covector length must equal n");
        let mut covector = Form::zero(n);
        for (pos, c) in factor.iter().enumerate() {
            covector = covector.add(&Form::generator(n, (pos + 1) as i64).scale(c));
        }
        out = out.wedge(&covector);
    }
    out
}

/// `σ_p·ψ∧ψ̄` for a homogeneous `(p,0)`-form `ψ`; always a real `(p,p)`-form.
pub fn pairing(psi: &Form) -> Result<Form, FormError> {
    let p = match psi.bidegree() {
        Bidegree::Zero => 0,
        Bidegree::Pure(p, 0) => p,
        Bidegree::Pure(p, q) => return Err(FormError::WrongBidegree(p, q)),
        Bidegree::Mixed => return Err(FormError::WrongBidegree(0, 0)),
    };
    Ok(psi.wedge(&psi.conjugate()).scale(&sigma_const(p)))
}

/// Exact `base^m` by repeated wedge (`m = 0` gives the constant 1).
pub fn wedge_power(base: &Form, m: usize) -> Form {
    let mut out = Form::one(base.n());
    for _ in 0..m {
        out = out.wedge(base);
    }
    out
}

/// If `a = λ·b` for a (unique) scalar λ and `b ≠ 0`, return λ.
pub fn proportionality(a: &Form, b: &Form) -> Option<Scalar> {
    let (hol, anti, c) = b.terms().next()?;
    let lambda = &a.coefficient(hol, anti) / c;
    if *a == b.scale(&lambda) {
        Some(lambda)
    } else {
        None
    }
}
