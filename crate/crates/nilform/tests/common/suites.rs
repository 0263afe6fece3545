//! Seeded property suites shared by the property tests and the acceptance
//! gate. Each suite panics on the first violation and returns the number of
//! cases it ran.

use nilform::catalog::{self, CatalogEntry};
use nilform::forms::{pairing, simple_form, wedge_power, Form};
use nilform::linalg::Sampler;
use nilform::special::{
    build_eta_br, build_eta_nilpotent, is_balanced, is_p_kahler, verify_obstruction,
    HermitianMetric, PKahlerVerdict,
};
use nilform::structure::{validate, StructureModel};

pub fn validated_catalog() -> Vec<(CatalogEntry, StructureModel)> {
    catalog::catalog_examples()
        .into_iter()
        .map(|entry| {
            let model = validate(&entry.se).expect("catalog entries validate");
            (entry, model)
        })
        .collect()
}

/// d² = 0 on generators, conjugate generators, and seeded random forms.
pub fn suite_d_squared(models: &[(CatalogEntry, StructureModel)], cases_per_model: usize) -> usize {
    let mut cases = 0;
    for (entry, model) in models {
        let n = model.n();
        for j in 1..=n as i64 {
            for signed in [j, -j] {
                assert!(
                    model.d(model.d_generator(signed)).is_zero(),
                    "{}: d² ≠ 0 on generator {signed}",
                    entry.id
                );
            }
        }
        let mut sampler = Sampler::new(0xD5 ^ n as u64);
        for _ in 0..cases_per_model {
            let form = sampler.form(n, 4);
            assert!(model.d(&model.d(&form)).is_zero(), "{}: d² ≠ 0 on {form}", entry.id);
            cases += 1;
        }
    }
    cases
}

/// The antiderivation identity d(a∧b) = da∧b + (−1)^{deg a}·a∧db on random
/// homogeneous-degree pairs.
pub fn suite_leibniz(models: &[(CatalogEntry, StructureModel)], cases_per_model: usize) -> usize {
    let mut cases = 0;
    for (entry, model) in models {
        let n = model.n();
        let mut sampler = Sampler::new(0x1E1 ^ n as u64);
        for _ in 0..cases_per_model {
            let p = sampler.int_in(0, n as i64) as usize;
            let q = sampler.int_in(0, n as i64) as usize;
            let a = sampler.homogeneous_form(n, p, q, 3);
            let b = sampler.form(n, 3);
            let lhs = model.d(&a.wedge(&b));
            let mut rhs = model.d(&a).wedge(&b);
            let signed_term = a.wedge(&model.d(&b));
            rhs = if (p + q) % 2 == 1 { rhs.sub(&signed_term) } else { rhs.add(&signed_term) };
            assert_eq!(lhs, rhs, "{}: Leibniz fails", entry.id);
            cases += 1;
        }
    }
    cases
}

/// d commutes with conjugation: d(conj a) = conj(d a).
pub fn suite_d_conj(models: &[(CatalogEntry, StructureModel)], cases_per_model: usize) -> usize {
    let mut cases = 0;
    for (entry, model) in models {
        let n = model.n();
        let mut sampler = Sampler::new(0xDC ^ n as u64);
        for _ in 0..cases_per_model {
            let form = sampler.form(n, 4);
            assert_eq!(
                model.d(&form.conjugate()),
                model.d(&form).conjugate(),
                "{}: d∘conj ≠ conj∘d",
                entry.id
            );
            cases += 1;
        }
    }
    cases
}

/// ∂² = ∂̄² = ∂∂̄ + ∂̄∂ = 0 and d = ∂ + ∂̄ on random forms.
pub fn suite_operator_split(
    models: &[(CatalogEntry, StructureModel)],
    cases_per_model: usize,
) -> usize {
    let mut cases = 0;
    for (entry, model) in models {
        let n = model.n();
        let mut sampler = Sampler::new(0x0b ^ n as u64);
        for _ in 0..cases_per_model {
            let form = sampler.form(n, 4);
            assert!(model.del(&model.del(&form)).is_zero(), "{}: ∂² ≠ 0", entry.id);
            assert!(model.delbar(&model.delbar(&form)).is_zero(), "{}: ∂̄² ≠ 0", entry.id);
            assert!(
                model
                    .del(&model.delbar(&form))
                    .add(&model.delbar(&model.del(&form)))
                    .is_zero(),
                "{}: ∂∂̄ + ∂̄∂ ≠ 0",
                entry.id
            );
            assert_eq!(
                model.d(&form),
                model.del(&form).add(&model.delbar(&form)),
                "{}: d ≠ ∂ + ∂̄",
                entry.id
            );
            cases += 1;
        }
    }
    cases
}

/// Graded anticommutativity and associativity of the wedge on random
/// homogeneous triples.
pub fn suite_wedge_algebra(n: usize, case_count: usize) -> usize {
    let mut sampler = Sampler::new(0xAC ^ n as u64);
    for _ in 0..case_count {
        let pick = |sampler: &mut Sampler| {
            let p = sampler.int_in(0, n as i64) as usize;
            let q = sampler.int_in(0, n as i64) as usize;
            sampler.homogeneous_form(n, p, q, 3)
        };
        let a = pick(&mut sampler);
        let b = pick(&mut sampler);
        let c = pick(&mut sampler);
        let deg = |f: &Form| -> usize {
            match f.bidegree() {
                nilform::forms::Bidegree::Pure(p, q) => p + q,
                _ => 0,
            }
        };
        let ab = a.wedge(&b);
        let ba = b.wedge(&a);
        let expected = if (deg(&a) * deg(&b)) % 2 == 1 { ba.neg() } else { ba };
        assert_eq!(ab, expected, "graded anticommutativity fails");
        assert_eq!(a.wedge(&b.wedge(&c)), a.wedge(&b).wedge(&c), "associativity fails");
    }
    case_count
}

/// σ_p·ψ∧ψ̄ is a real form for random simple ψ.
pub fn suite_pairing_reality(n: usize, case_count: usize) -> usize {
    let mut sampler = Sampler::new(0x5E ^ n as u64);
    for _ in 0..case_count {
        let p = sampler.int_in(1, n as i64) as usize;
        let factors = sampler.factor_list(n, p);
        let psi = simple_form(n, &factors);
        let paired = pairing(&psi).expect("simple forms are homogeneous");
        assert!(paired.is_real(), "σ_p ψ∧ψ̄ not real for {psi}");
    }
    case_count
}

/// Page dimensions shrink entrywise from page r to r+1, page 1 equals the
/// Dolbeault table, the per-page Euler characteristic is constant, and the
/// stable page recovers the de Rham dimensions.
pub fn suite_page_monotonicity(models: &[(CatalogEntry, StructureModel)]) -> usize {
    let mut cases = 0;
    for (entry, model) in models {
        // br-3 pages are the optional long-run stretch; the suite covers
        // every catalog model that fits the time budget.
        if model.n() > 6 {
            continue;
        }
        let report = nilform::frolicher::degeneration_step(model, None);
        let dolbeault = nilform::frolicher::dolbeault_dims(model);
        assert_eq!(report.pages[0].dims, dolbeault, "{}: E₁ ≠ Dolbeault", entry.id);
        let euler = report.pages[0].euler_characteristic();
        for page in &report.pages {
            for (&(p, q), &rank) in &page.diff_ranks {
                let source = page.dim(p, q);
                let target =
                    if q + 1 >= page.r { page.dim(p + page.r, q + 1 - page.r) } else { 0 };
                assert!(
                    rank <= source.min(target),
                    "{}: rank {rank} exceeds min({source},{target}) at ({p},{q}) page {}",
                    entry.id,
                    page.r
                );
            }
        }
        for window in report.pages.windows(2) {
            for (&key, &dim) in &window[1].dims {
                assert!(
                    dim <= window[0].dim(key.0, key.1),
                    "{}: dims grew at {key:?} from page {} to {}",
                    entry.id,
                    window[0].r,
                    window[1].r
                );
            }
            assert_eq!(
                window[1].euler_characteristic(),
                euler,
                "{}: Euler characteristic changed",
                entry.id
            );
        }
        // Ranks vanish beyond the filtration length.
        for page in &report.pages {
            if page.r > model.n() {
                assert!(!page.has_nonzero_differential(), "{}: d_{} ≠ 0", entry.id, page.r);
            }
        }
        if let Some(step) = entry.expected.degeneration_step_at_least {
            assert!(report.step >= step, "{}: step {} < {step}", entry.id, report.step);
        }
        cases += 1;
    }
    cases
}

/// No model may both carry a verified p-Kähler form and a verified
/// obstruction certificate for the same p.
pub fn suite_no_double_verdict(models: &[(CatalogEntry, StructureModel)]) -> usize {
    let mut cases = 0;
    for (entry, model) in models {
        let n = model.n();
        let mut obstructed: Vec<usize> = Vec::new();
        if let Ok(cert) = build_eta_nilpotent(model) {
            verify_obstruction(&cert, model).expect("builder output verifies");
            obstructed.push(cert.p);
        }
        if let Some(family) = catalog::br_parameter(&entry.id) {
            for p in 1..=(4 * family - 4) {
                let cert = build_eta_br(family, p).expect("family certificate");
                verify_obstruction(&cert, model).expect("family certificate verifies");
                obstructed.push(p);
            }
        }
        let mut confirmed: Vec<usize> = Vec::new();
        if let Some((p, omega)) = catalog::candidate_pkahler(&entry.id) {
            if let PKahlerVerdict::Yes { .. } = is_p_kahler(&omega, p, model, 64, 7).unwrap() {
                confirmed.push(p);
            }
        }
        // A balanced diagonal metric gives an (n−1)-Kähler candidate.
        if n >= 2 {
            let metric = HermitianMetric::identity(n);
            if is_balanced(&metric, model).holds {
                let power = wedge_power(&metric.fundamental_form(), n - 1);
                if let PKahlerVerdict::Yes { .. } =
                    is_p_kahler(&power, n - 1, model, 64, 7).unwrap()
                {
                    confirmed.push(n - 1);
                }
            }
        }
        for p in &confirmed {
            assert!(
                !obstructed.contains(p),
                "{}: p = {p} is both confirmed p-Kähler and obstructed",
                entry.id
            );
        }
        cases += 1 + obstructed.len() + confirmed.len();
    }
    cases
}
