//! Hermitian metrics and the structure checks: balanced, SKT, LCK,
//! p-Kähler (reality, closedness, transversality), obstruction certificates
//! with their verifier and builders, and the `∂∂̄`-potential solver.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog;
use crate::forms::{
    sigma_const, simple_form, volume_coefficient, Bidegree, Form, FormError, MultiIndex,
};
use crate::linalg::{hermitian_pd, ldl_witness, ExactMatrix, LinalgError, PdOutcome, Sampler};
use crate::par;
use crate::scalar::Scalar;
use crate::structure::StructureModel;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecialError {
    #[error("metric matrix must be {0}x{0}")]
    BadMetricShape(usize),
    #[error("metric matrix is not Hermitian")]
    NotHermitian,
    #[error("metric matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("expected a real form")]
    NotReal,
    #[error("expected a homogeneous ({0},{1})-form")]
    WrongBidegree(usize, usize),
    #[error("degree parameter p={p} out of range 1..={max}")]
    POutOfRange { p: usize, max: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Form(#[from] FormError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("certificate degree p={p} out of range 1..={max}")]
    POutOfRange { p: usize, max: usize },
    #[error("term {0} has {1} factors, expected n−p = {2}")]
    FactorCountMismatch(usize, usize, usize),
    #[error("term {0} has coefficient zero")]
    ZeroCoefficient(usize),
    #[error("term {0} has non-real coefficient {1}")]
    NonRealCoefficient(usize, String),
    #[error("coefficients change sign (term {0})")]
    MixedSigns(usize),
    #[error("term {0} wedges to the zero form")]
    ZeroPsi(usize),
    #[error("η is closed")]
    EtaClosed,
    #[error("the ({p},{p}) component of dη does not match the certificate: got {got}, expected {expected}")]
    ComponentMismatch { p: usize, got: String, expected: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error("model is not triangular")]
    NotTriangular,
    #[error("every generator is closed (torus): the obstruction is vacuous")]
    AllGeneratorsClosed,
    #[error("p={p} out of range 1..={max} for this family")]
    POutOfRange { p: usize, max: usize },
    #[error("family parameter must be at least 2, got {0}")]
    FamilyParameter(usize),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
}

/// A Hermitian positive-definite metric `H`, validated at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitianMetric {
    n: usize,
    h: ExactMatrix,
}

impl HermitianMetric {
    pub fn new(h: ExactMatrix) -> Result<Self, SpecialError> {
        let n = h.num_rows();
        if h.num_cols() != n || n == 0 {
            return Err(SpecialError::BadMetricShape(n.max(1)));
        }
        if !h.is_hermitian() {
            return Err(SpecialError::NotHermitian);
        }
        if !hermitian_pd(&h)? {
            return Err(SpecialError::NotPositiveDefinite);
        }
        Ok(HermitianMetric { n, h })
    }

    /// Diagonal metric with strictly positive real entries.
    pub fn diagonal(entries: &[Scalar]) -> Result<Self, SpecialError> {
        let n = entries.len();
        let mut h = ExactMatrix::new(n, n);
        for (i, v) in entries.iter().enumerate() {
            h.set(i, i, v.clone());
        }
        HermitianMetric::new(h)
    }

    pub fn identity(n: usize) -> Self {
        HermitianMetric::new(ExactMatrix::identity(n)).expect("identity metric is PD")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.h
    }

    /// The fundamental form `ω = i·Σ h_{jk̄}·φ^j∧φ̄^k`; always real (1,1).
    pub fn fundamental_form(&self) -> Form {
        let mut out = Form::zero(self.n);
        for (j, k, v) in self.h.entries() {
            out = out.add(&Form::monomial(
                self.n,
                MultiIndex::new(vec![j + 1]).expect("valid index"),
                MultiIndex::new(vec![k + 1]).expect("valid index"),
                &Scalar::i() * v,
            ));
        }
        out
    }
}

/// Result of an exact metric identity check, with the residual on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub holds: bool,
    pub residual: Form,
}

/// `d(ω^{n−1}) = 0`?
pub fn is_balanced(metric: &HermitianMetric, model: &StructureModel) -> CheckResult {
    assert_eq!(metric.n(), model.n(), "dimension mismatch");
    let omega = metric.fundamental_form();
    let power = crate::forms::wedge_power(&omega, model.n() - 1);
    let residual = model.d(&power);
    CheckResult { holds: residual.is_zero(), residual }
}

/// `∂∂̄ω = 0`?
pub fn is_skt(metric: &HermitianMetric, model: &StructureModel) -> CheckResult {
    assert_eq!(metric.n(), model.n(), "dimension mismatch");
    let omega = metric.fundamental_form();
    let residual = model.del(&model.delbar(&omega));
    CheckResult { holds: residual.is_zero(), residual }
}

/// Outcome of the locally-conformally-Kähler identity `dω = θ∧ω` with
/// `dθ = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LckCheck {
    pub theta_closed: bool,
    pub identity_holds: bool,
    pub residual: Form,
}

impl LckCheck {
    pub fn holds(&self) -> bool {
        self.theta_closed && self.identity_holds
    }
}

/// Verify `dω = θ∧ω` for a d-closed real 1-form θ.
pub fn verify_lck(
    metric: &HermitianMetric,
    theta: &Form,
    model: &StructureModel,
) -> Result<LckCheck, SpecialError> {
    assert_eq!(metric.n(), model.n(), "dimension mismatch");
    let degree_ok = theta
        .bidegree_split()
        .keys()
        .all(|&(p, q)| p + q == 1);
    if !degree_ok {
        return Err(SpecialError::WrongBidegree(1, 0));
    }
    if !theta.is_real() {
        return Err(SpecialError::NotReal);
    }
    let omega = metric.fundamental_form();
    let residual = model.d(&omega).sub(&theta.wedge(&omega));
    Ok(LckCheck {
        theta_closed: model.d(theta).is_zero(),
        identity_holds: residual.is_zero(),
        residual,
    })
}

/// Transversality verdict for a real `(p,p)`-form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transversality {
    /// The induced Hermitian pairing on `⋀^{n−p,0}` is positive definite
    /// (sufficient always; equivalent when `n−p ≤ 1`).
    TransversePd,
    /// An explicit decomposable direction with nonpositive value.
    NotTransverse { witness: Vec<Vec<Scalar>>, value: Scalar },
    /// The pairing is not PD, but every sampled decomposable was positive.
    IndeterminateSamplingPassed { samples: usize },
}

/// Full transversality report, including the pairing matrix.
#[derive(Debug, Clone)]
pub struct TransversalityReport {
    pub verdict: Transversality,
    pub pairing: ExactMatrix,
}

/// Build the Hermitian pairing `Q` with `Ω∧σ_{n−p}·α∧β̄ = Q(α,β)·vol` on the
/// monomial basis of `⋀^{n−p,0}` and decide transversality: PD is conclusive,
/// a nonpositive decomposable sample refutes, otherwise indeterminate.
pub fn transversality(
    omega: &Form,
    p: usize,
    model: &StructureModel,
    samples: usize,
    seed: u64,
) -> Result<TransversalityReport, SpecialError> {
    let n = model.n();
    assert_eq!(omega.n(), n, "dimension mismatch");
    if p < 1 || p > n {
        return Err(SpecialError::POutOfRange { p, max: n });
    }
    if !omega.is_homogeneous(p, p) {
        return Err(SpecialError::WrongBidegree(p, p));
    }
    if !omega.is_real() {
        return Err(SpecialError::NotReal);
    }
    let m = n - p;
    let sigma = sigma_const(m);
    let basis = combinations(n, m);
    let dim = basis.len();
    let mut q_matrix = ExactMatrix::new(dim, dim);
    for (row, alpha) in basis.iter().enumerate() {
        let alpha_form = Form::monomial(n, alpha.clone(), MultiIndex::empty(), Scalar::one());
        for (col, beta) in basis.iter().enumerate() {
            let beta_form = Form::monomial(n, beta.clone(), MultiIndex::empty(), Scalar::one());
            let product = omega
                .wedge(&alpha_form.wedge(&beta_form.conjugate()).scale(&sigma));
            let value = volume_coefficient(&product)?;
            q_matrix.set(row, col, value);
        }
    }

    match ldl_witness(&q_matrix)? {
        PdOutcome::PositiveDefinite => {
            return Ok(TransversalityReport { verdict: Transversality::TransversePd, pairing: q_matrix });
        }
        PdOutcome::NotPd(direction) => {
            if m <= 1 {
                // Every (≤1,0)-form is simple, so the failing direction is
                // itself a decomposable witness.
                let witness = if m == 0 {
                    Vec::new()
                } else {
                    vec![direction]
                };
                let value = evaluate_on_decomposable(omega, &witness, n, &sigma)?;
                return Ok(TransversalityReport {
                    verdict: Transversality::NotTransverse { witness, value },
                    pairing: q_matrix,
                });
            }
        }
    }

    // Exact refutation on basis monomials (they are decomposable).
    for (row, alpha) in basis.iter().enumerate() {
        let value = q_matrix.get(row, row);
        if !value.is_positive_real() {
            let witness: Vec<Vec<Scalar>> = alpha
                .indices()
                .iter()
                .map(|&i| unit_covector(n, i))
                .collect();
            return Ok(TransversalityReport {
                verdict: Transversality::NotTransverse { witness, value },
                pairing: q_matrix,
            });
        }
    }

    // Seeded decomposable sampling with per-sample derived streams.
    let master = Sampler::new(seed);
    let outcomes = par::map_vec((0..samples as u64).collect::<Vec<_>>(), |i| {
        let mut sampler = master.derive(i);
        loop {
            let factors = sampler.factor_list(n, m);
            let alpha = simple_form(n, &factors);
            if alpha.is_zero() {
                continue;
            }
            let value = evaluate_on_decomposable(omega, &factors, n, &sigma)
                .expect("homogeneous by construction");
            return (factors, value);
        }
    });
    for (factors, value) in outcomes {
        if !value.is_positive_real() {
            return Ok(TransversalityReport {
                verdict: Transversality::NotTransverse { witness: factors, value },
                pairing: q_matrix,
            });
        }
    }
    Ok(TransversalityReport {
        verdict: Transversality::IndeterminateSamplingPassed { samples },
        pairing: q_matrix,
    })
}

fn evaluate_on_decomposable(
    omega: &Form,
    factors: &[Vec<Scalar>],
    n: usize,
    sigma: &Scalar,
) -> Result<Scalar, SpecialError> {
    let alpha = simple_form(n, factors);
    let product = omega.wedge(&alpha.wedge(&alpha.conjugate()).scale(sigma));
    Ok(volume_coefficient(&product)?)
}

fn unit_covector(n: usize, index: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[index - 1] = Scalar::one();
    v
}

fn combinations(n: usize, len: usize) -> Vec<MultiIndex> {
    fn rec(n: usize, len: usize, start: usize, acc: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
        if acc.len() == len {
            out.push(MultiIndex::from_set(acc.iter().copied()).expect("ascending"));
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

/// Reason a form fails to be p-Kähler.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PKahlerFailure {
    NotReal,
    NotClosed,
    NotTransverse { witness: Vec<Vec<Scalar>>, value: Scalar },
}

/// Verdict of the p-Kähler check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PKahlerVerdict {
    Yes { transverse_pd: bool },
    No(PKahlerFailure),
    /// Real and closed; transversality could be neither certified nor
    /// refuted, but all samples were positive.
    Indeterminate { samples: usize },
}

/// Conjunction of reality, `dΩ = 0` and the transversality verdict.
pub fn is_p_kahler(
    omega: &Form,
    p: usize,
    model: &StructureModel,
    samples: usize,
    seed: u64,
) -> Result<PKahlerVerdict, SpecialError> {
    let n = model.n();
    if p < 1 || p > n {
        return Err(SpecialError::POutOfRange { p, max: n });
    }
    if !omega.is_homogeneous(p, p) {
        return Err(SpecialError::WrongBidegree(p, p));
    }
    if !omega.is_real() {
        return Ok(PKahlerVerdict::No(PKahlerFailure::NotReal));
    }
    if !model.d(omega).is_zero() {
        return Ok(PKahlerVerdict::No(PKahlerFailure::NotClosed));
    }
    Ok(match transversality(omega, p, model, samples, seed)?.verdict {
        Transversality::TransversePd => PKahlerVerdict::Yes { transverse_pd: true },
        Transversality::NotTransverse { witness, value } => {
            PKahlerVerdict::No(PKahlerFailure::NotTransverse { witness, value })
        }
        Transversality::IndeterminateSamplingPassed { samples } => {
            PKahlerVerdict::Indeterminate { samples }
        }
    })
}

/// One certificate term: a real coefficient and the factor list of a simple
/// `(n−p,0)`-form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionTerm {
    pub c: Scalar,
    pub psi_factors: Vec<Vec<Scalar>>,
}

/// A non-existence certificate for p-Kähler forms: a non-closed form `η`
/// whose `(n−p,n−p)` differential component is `Σ c_k·ψ_k∧ψ̄_k` with simple
/// `ψ_k` and same-sign real `c_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionCertificate {
    pub p: usize,
    pub eta: Form,
    pub terms: Vec<ObstructionTerm>,
}

#[derive(Serialize, Deserialize)]
struct RawCertificate {
    p: usize,
    eta: Vec<RawFormTerm>,
    terms: Vec<RawCertTerm>,
}

#[derive(Serialize, Deserialize)]
struct RawFormTerm {
    #[serde(rename = "I")]
    hol: Vec<usize>,
    #[serde(rename = "J")]
    anti: Vec<usize>,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct RawCertTerm {
    c: String,
    psi_factors: Vec<Vec<String>>,
}

impl ObstructionCertificate {
    /// Serialize to the certificate JSON format.
    pub fn to_json(&self) -> String {
        let raw = RawCertificate {
            p: self.p,
            eta: self
                .eta
                .terms()
                .map(|(hol, anti, c)| RawFormTerm {
                    hol: hol.indices().to_vec(),
                    anti: anti.indices().to_vec(),
                    c: c.to_string(),
                })
                .collect(),
            terms: self
                .terms
                .iter()
                .map(|t| RawCertTerm {
                    c: t.c.to_string(),
                    psi_factors: t
                        .psi_factors
                        .iter()
                        .map(|f| f.iter().map(|c| c.to_string()).collect())
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("certificate serialization cannot fail")
    }

    /// Parse the certificate JSON format for a model of dimension `n`.
    pub fn from_json(text: &str, n: usize) -> Result<Self, String> {
        let raw: RawCertificate = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let eta = Form::from_terms(
            n,
            raw.eta
                .into_iter()
                .map(|t| {
                    Ok((
                        MultiIndex::new(t.hol).map_err(|e| e.to_string())?,
                        MultiIndex::new(t.anti).map_err(|e| e.to_string())?,
                        Scalar::parse(&t.c).map_err(|e| e.to_string())?,
                    ))
                })
                .collect::<Result<Vec<_>, String>>()?,
        );
        let terms = raw
            .terms
            .into_iter()
            .map(|t| {
                Ok(ObstructionTerm {
                    c: Scalar::parse(&t.c).map_err(|e| e.to_string())?,
                    psi_factors: t
                        .psi_factors
                        .into_iter()
                        .map(|f| {
                            f.into_iter()
                                .map(|c| Scalar::parse(&c).map_err(|e| e.to_string()))
                                .collect()
                        })
                        .collect::<Result<Vec<_>, String>>()?,
                })
            })
            .collect::<Result<Vec<_>, String>>()?;
        Ok(ObstructionCertificate { p: raw.p, eta, terms })
    }
}

/// Verify an obstruction certificate against a model: recompute `dη`, extract
/// the `(n−p,n−p)` component and compare it exactly with `Σ c_k·ψ_k∧ψ̄_k`
/// (no σ factor), checking that the `c_k` are real, nonzero and of one sign
/// and that `η` is not closed.
pub fn verify_obstruction(
    cert: &ObstructionCertificate,
    model: &StructureModel,
) -> Result<(), CertificateError> {
    let n = model.n();
    let p = cert.p;
    if p < 1 || p >= n {
        return Err(CertificateError::POutOfRange { p, max: n - 1 });
    }
    let m = n - p;
    let mut expected = Form::zero(n);
    let mut sign: Option<bool> = None;
    for (idx, term) in cert.terms.iter().enumerate() {
        if term.psi_factors.len() != m {
            return Err(CertificateError::FactorCountMismatch(idx, term.psi_factors.len(), m));
        }
        if term.c.is_zero() {
            return Err(CertificateError::ZeroCoefficient(idx));
        }
        if !term.c.is_real() {
            return Err(CertificateError::NonRealCoefficient(idx, term.c.to_string()));
        }
        let positive = term.c.is_positive_real();
        match sign {
            None => sign = Some(positive),
            Some(s) if s != positive => return Err(CertificateError::MixedSigns(idx)),
            _ => {}
        }
        let psi = simple_form(n, &term.psi_factors);
        if psi.is_zero() {
            return Err(CertificateError::ZeroPsi(idx));
        }
        expected = expected.add(&psi.wedge(&psi.conjugate()).scale(&term.c));
    }
    let d_eta = model.d(&cert.eta);
    if d_eta.is_zero() {
        return Err(CertificateError::EtaClosed);
    }
    let got = d_eta.component(m, m);
    if got != expected {
        return Err(CertificateError::ComponentMismatch {
            p: m,
            got: got.to_string(),
            expected: expected.to_string(),
        });
    }
    Ok(())
}

/// Build the obstruction certificate for `p = n−k` on a sorted triangular
/// model with `k < n`: remove one holomorphic and one antiholomorphic factor
/// (chosen from a surviving term of `dφ^{k+1}`) from the full closed block,
/// then rescale `η` so that the single surviving coefficient is exactly `+1`.
pub fn build_eta_nilpotent(
    model: &StructureModel,
) -> Result<ObstructionCertificate, ObstructionError> {
    let n = model.n();
    if !model.is_triangular() {
        return Err(ObstructionError::NotTriangular);
    }
    let k = model.k_index().expect("triangular model has an index");
    if k == n {
        return Err(ObstructionError::AllGeneratorsClosed);
    }
    let d_next = model.d_generator((k + 1) as i64);
    let delbar_part = d_next.component(1, 1);
    let (hol_removed, anti_removed, hol_limit) = if !delbar_part.is_zero() {
        let (hol, anti, _) = delbar_part.terms().next().expect("nonzero component");
        (vec![hol.indices()[0]], vec![anti.indices()[0]], k + 1)
    } else {
        let del_part = d_next.component(2, 0);
        if del_part.is_zero() {
            return Err(ObstructionError::ConstructionFailed(format!(
                "dφ^{} has neither a (1,1) nor a (2,0) term",
                k + 1
            )));
        }
        let (hol, _, _) = del_part.terms().next().expect("nonzero component");
        (hol.indices().to_vec(), Vec::new(), k + 1)
    };
    let hol = MultiIndex::range(1, hol_limit).without(&hol_removed);
    let anti = MultiIndex::range(1, k).without(&anti_removed);
    let eta_raw = Form::monomial(n, hol, anti, Scalar::one());
    let d_eta = model.d(&eta_raw);
    let closed_block = MultiIndex::range(1, k);
    let coeff = d_eta.coefficient(&closed_block, &closed_block);
    if coeff.is_zero() || d_eta.num_terms() != 1 {
        return Err(ObstructionError::ConstructionFailed(format!(
            "dη is not the single expected monomial: {d_eta}"
        )));
    }
    let eta = eta_raw.scale(&coeff.inv());
    let cert = ObstructionCertificate {
        p: n - k,
        eta,
        terms: vec![ObstructionTerm {
            c: Scalar::one(),
            psi_factors: (1..=k).map(|i| unit_covector(n, i)).collect(),
        }],
    };
    verify_obstruction(&cert, model)?;
    Ok(cert)
}

/// Build the degree-`p` obstruction certificate on the `br-n` model
/// (`1 ≤ p ≤ 4n−4`), with the sign `ε_p ∈ {±1}` computed, never assumed.
///
/// For `p < n` the form starts from the full paired block minus
/// `φ^{2n−2}, φ̄^{3n−2}, φ̄^{4n−2}`, removing `φ^{3n−1..3n+p−3}` and their
/// conjugates for `p > 1`. For `p ≥ n` it starts from the base form on
/// `{1..3n−2}∖{2n−2} ∪ {4n−2}` / `{1..3n−3}` and strips the `p−n`
/// lowest-index factors on each side, always keeping `φ̄^{2n−2}`.
pub fn build_eta_br(n: usize, p: usize) -> Result<ObstructionCertificate, ObstructionError> {
    if n < 2 {
        return Err(ObstructionError::FamilyParameter(n));
    }
    let dim = 4 * n - 2;
    if p < 1 || p > 4 * n - 4 {
        return Err(ObstructionError::POutOfRange { p, max: 4 * n - 4 });
    }
    let model = crate::structure::validate(&catalog::catalog_br(n).expect("n ≥ 2"))
        .expect("the br family validates");

    let (hol, anti, psi): (Vec<usize>, Vec<usize>, Vec<usize>) = if p < n {
        let extra: Vec<usize> = ((3 * n - 1)..=(3 * n + p - 3)).collect();
        let mut hol_removed = vec![2 * n - 2];
        hol_removed.extend(&extra);
        let mut anti_removed = vec![3 * n - 2, 4 * n - 2];
        anti_removed.extend(&extra);
        (
            (1..=dim).filter(|i| !hol_removed.contains(i)).collect(),
            (1..=dim).filter(|i| !anti_removed.contains(i)).collect(),
            (1..=(4 * n - 3)).filter(|i| !extra.contains(i)).collect(),
        )
    } else {
        let strip = p - n;
        let hol_present: Vec<usize> = (1..=(3 * n - 2)).filter(|&i| i != 2 * n - 2).collect();
        let hol_kept: Vec<usize> = hol_present[strip..].to_vec();
        let anti_removed: Vec<usize> = (1..=(3 * n - 3))
            .filter(|&i| i != 2 * n - 2)
            .take(strip)
            .collect();
        let anti_kept: Vec<usize> =
            (1..=(3 * n - 3)).filter(|i| !anti_removed.contains(i)).collect();
        let mut hol = hol_kept.clone();
        hol.push(dim);
        let mut psi = hol_kept;
        psi.push(2 * n - 2);
        psi.sort_unstable();
        (hol, anti_kept, psi)
    };

    let eta = Form::monomial(
        dim,
        MultiIndex::from_set(hol).expect("distinct holomorphic indices"),
        MultiIndex::from_set(anti).expect("distinct antiholomorphic indices"),
        Scalar::one(),
    );
    let component = model.d(&eta).component(dim - p, dim - p);
    let psi_block = MultiIndex::from_set(psi).expect("distinct indices");
    let epsilon = component.coefficient(&psi_block, &psi_block);
    if component.num_terms() != 1
        || !(epsilon == Scalar::one() || epsilon == -Scalar::one())
    {
        return Err(ObstructionError::ConstructionFailed(format!(
            "the ({0},{0}) component of dη is not ±φ^Ψ∧φ̄^Ψ: {component}",
            dim - p
        )));
    }
    let cert = ObstructionCertificate {
        p,
        eta,
        terms: vec![ObstructionTerm {
            c: epsilon,
            psi_factors: psi_block.indices().iter().map(|&i| unit_covector(dim, i)).collect(),
        }],
    };
    verify_obstruction(&cert, &model)?;
    Ok(cert)
}

/// Solve `∂∂̄X = ψ` exactly over the `(s−1,s−1)` monomial coefficients for a
/// homogeneous `(s,s)`-form ψ; `None` when no invariant solution exists.
pub fn ddbar_potential(
    psi: &Form,
    model: &StructureModel,
) -> Result<Option<Form>, SpecialError> {
    let n = model.n();
    assert_eq!(psi.n(), n, "dimension mismatch");
    let s = match psi.bidegree() {
        Bidegree::Zero => return Ok(Some(Form::zero(n))),
        Bidegree::Pure(p, q) if p == q && p >= 1 => p,
        Bidegree::Pure(p, q) => return Err(SpecialError::WrongBidegree(p, q)),
        Bidegree::Mixed => return Err(SpecialError::WrongBidegree(0, 0)),
    };
    let unknown_basis: Vec<(MultiIndex, MultiIndex)> = combinations(n, s - 1)
        .into_iter()
        .flat_map(|hol| {
            combinations(n, s - 1).into_iter().map(move |anti| (hol.clone(), anti))
        })
        .collect();
    let target_basis: Vec<(MultiIndex, MultiIndex)> = combinations(n, s)
        .into_iter()
        .flat_map(|hol| combinations(n, s).into_iter().map(move |anti| (hol.clone(), anti)))
        .collect();
    let target_index: BTreeMap<(MultiIndex, MultiIndex), usize> = target_basis
        .iter()
        .enumerate()
        .map(|(i, key)| (key.clone(), i))
        .collect();
    let mut matrix = ExactMatrix::new(target_basis.len(), unknown_basis.len());
    let columns = par::map_vec(unknown_basis.clone(), |(hol, anti)| {
        let mono = Form::monomial(n, hol, anti, Scalar::one());
        model.del(&model.delbar(&mono))
    });
    for (j, image) in columns.iter().enumerate() {
        for (hol, anti, c) in image.terms() {
            matrix.set(target_index[&(hol.clone(), anti.clone())], j, c.clone());
        }
    }
    let mut rhs = vec![Scalar::zero(); target_basis.len()];
    for (hol, anti, c) in psi.terms() {
        rhs[target_index[&(hol.clone(), anti.clone())]] = c.clone();
    }
    Ok(matrix.solve(&rhs).map(|x| {
        Form::from_terms(
            n,
            unknown_basis
                .into_iter()
                .zip(x)
                .map(|((hol, anti), c)| (hol, anti, c)),
        )
    }))
}

/// The explicit `∂∂̄`-exact positive current data on the `br-n` model:
/// `ψ` pairs every index of `1..4n−3`, `χ` pairs `1..4n−2` with `n−1` and
/// `2n−1` omitted. The fixture verifies `∂∂̄χ = s·ψ` with `s ∈ {±1}` computed
/// exactly; a failure shows up as `sign = None`.
#[derive(Debug, Clone)]
pub struct SktFixture {
    pub psi: Form,
    pub chi: Form,
    pub ddbar_chi: Form,
    pub sign: Option<i8>,
}

pub fn skt_current_fixture(n: usize) -> Result<SktFixture, ObstructionError> {
    if n < 2 {
        return Err(ObstructionError::FamilyParameter(n));
    }
    let model = crate::structure::validate(&catalog::catalog_br(n).expect("n ≥ 2"))
        .expect("the br family validates");
    let dim = 4 * n - 2;
    let paired = MultiIndex::range(1, 4 * n - 3);
    let psi = Form::monomial(dim, paired.clone(), paired, Scalar::one());
    let chi_indices = MultiIndex::range(1, dim).without(&[n - 1, 2 * n - 1]);
    let chi = Form::monomial(dim, chi_indices.clone(), chi_indices, Scalar::one());
    let ddbar_chi = model.del(&model.delbar(&chi));
    let sign = if ddbar_chi == psi {
        Some(1)
    } else if ddbar_chi == psi.neg() {
        Some(-1)
    } else {
        None
    };
    Ok(SktFixture { psi, chi, ddbar_chi, sign })
}
