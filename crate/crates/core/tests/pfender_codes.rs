mod common;

use codebound::codes::{self, embed_as_metric_code, euclidean_to_functional, generate, lipschitz_norm, Code, Family};
use codebound::gegenbauer::GegenbauerPoly;
use codebound::pfender::{double_sum, functional_pfender_check, pfender_bound, PfenderCertificate, PhiSpec, Variant, Verdict};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all_families() -> Vec<Family> {
    let mut out = vec![Family::Icosahedron, Family::D4Roots, Family::E8Roots];
    for d in 1..=8 {
        out.extend([Family::Simplex(d), Family::Orthonormal(d), Family::CrossPolytope(d)]);
    }
    out
}

#[test]
fn functional_round_trip_preserves_verdicts() {
    for family in all_families() {
        let code = generate(family);
        let a = codes::verify(&code.clone().into()).unwrap();
        let b = codes::verify(&euclidean_to_functional(&code).into()).unwrap();
        assert_eq!(a.valid, b.valid, "{family}");
        assert_eq!(a.max_offdiag, b.max_offdiag, "{family}");
    }
}

#[test]
fn metric_embeddings_have_unit_lipschitz_functions() {
    for family in all_families() {
        let code = generate(family);
        if code.vectors.len() > 60 {
            continue;
        }
        let metric = embed_as_metric_code(&code, &[]).unwrap();
        for f in &metric.functions {
            assert!((lipschitz_norm(&metric.distance, f) - 1.0).abs() <= 1e-9, "{family}");
        }
        let report = codes::verify(&metric.into()).unwrap();
        assert!(report.valid, "{family}: {:?}", report.axiom_failures);
    }
}

#[test]
fn structural_soundness_on_random_codes() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for dim in [3, 5, 8] {
        let phi = PhiSpec::gegenbauer(dim, vec![0.1, 0.5, 0.0, 2.0, 0.3, 1.0]);
        for _ in 0..100 {
            let n = rng.random_range(1..=25);
            let code = common::random_spherical_code(&mut rng, dim, n);
            let gram = Code::from(code).evaluation_matrix().unwrap();
            let sum = double_sum(&phi, &gram).unwrap();
            assert!(sum >= -1e-8 * (n * n) as f64, "dim={dim} n={n} sum={sum}");
        }
    }
}

#[test]
fn delsarte_certificates_as_pfender() {
    let cert = lp_cert(8, 0.5, 6);
    let p = PfenderCertificate::from_dgs(&cert);
    assert!((p.bound_real - cert.bound_real).abs() < 1e-9 * cert.bound_real);
    let structural = pfender_bound(&p.phi, p.c, p.cos_theta).unwrap();
    assert_eq!(structural.bound_int, 240);

    let e8: Code = euclidean_to_functional(&generate(Family::E8Roots)).into();
    let check = functional_pfender_check(&e8, &p.phi, p.c, p.cos_theta, Variant::Interval).unwrap();
    let Verdict::Holds { n, slack, .. } = check.verdict else { panic!("{:?}", check.verdict) };
    assert_eq!(n, 240);
    assert!((0.0..1e-6).contains(&slack));
}

fn lp_cert(dim: usize, cos_theta: f64, degree: usize) -> codebound::dgs::DgsCertificate {
    codebound::dgs::lp_bound(dim, cos_theta, degree, 2000).unwrap().certificate().unwrap().clone()
}

#[test]
fn special_case_clause_holds() {
    // phi(1) + c <= 1 in each case, so the bound may not exceed 1/c.
    for (phi, c, cos_theta) in [
        (PhiSpec::gegenbauer(3, vec![0.0, 0.5]), 0.5, -1.0),
        (PhiSpec::gegenbauer(5, vec![0.0, 0.25]), 0.25, -1.0),
        (PhiSpec::gegenbauer(4, vec![0.0, 0.3]), 0.2, -0.7),
    ] {
        let cert = pfender_bound(&phi, c, cos_theta).unwrap();
        assert!(cert.verification.clone().unwrap().special_case);
        assert!(cert.bound_int <= (1.0 / c + 1e-9).floor() as u64);
    }
}

#[test]
fn metric_codes_in_the_harness() {
    let certs = common::certificate_catalog();
    for family in [Family::Simplex(3), Family::Orthonormal(4), Family::Icosahedron, Family::CrossPolytope(3)] {
        let metric: Code = embed_as_metric_code(&generate(family), &[]).unwrap().into();
        for (name, phi, c, cos_theta, variant) in &certs {
            let check = functional_pfender_check(&metric, phi, *c, *cos_theta, *variant).unwrap();
            assert!(!matches!(check.verdict, Verdict::TheoremViolation { .. }), "{family} x {name}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pfender_scale_invariance(d in 2usize..20, lambda in 1e-3f64..1e3) {
        let df = d as f64;
        let phi = PhiSpec::Gegenbauer(GegenbauerPoly::basis_element(d, 1));
        let base = pfender_bound(&phi, 1.0 / df, -1.0 / df).unwrap();
        let scaled = pfender_bound(&phi.scaled(lambda), lambda / df, -1.0 / df).unwrap();
        prop_assert!((scaled.bound_real - base.bound_real).abs() <= 1e-10 * base.bound_real);
    }

    #[test]
    fn gram_double_sum_of_g1_is_squared_norm(seed in any::<u64>(), dim in 2usize..8, n in 1usize..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let code = common::random_spherical_code(&mut rng, dim, n);
        let mut total = vec![0.0; dim];
        for v in &code.vectors {
            total.iter_mut().zip(v).for_each(|(t, x)| *t += x);
        }
        let norm2: f64 = total.iter().map(|t| t * t).sum();
        let gram = Code::from(code).evaluation_matrix().unwrap();
        let sum = double_sum(&PhiSpec::Gegenbauer(GegenbauerPoly::basis_element(dim, 1)), &gram).unwrap();
        prop_assert!((sum - norm2).abs() < 1e-10 * (n * n) as f64);
    }

    #[test]
    fn random_lp_codes_never_violate(seed in any::<u64>(), p in prop::sample::select(vec![1.5, 2.0, 3.0, 4.0])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = rng.random_range(2..=5);
        let n = rng.random_range(1..=10);
        let code: Code = codes::random_lp_code(dim, n, p, &mut rng).unwrap().into();
        prop_assert!(codes::verify(&code).unwrap().valid);
        for d in 2..=5 {
            let df = d as f64;
            let phi = PhiSpec::monomial(vec![-1.0 / df, 0.0, 1.0]);
            let check = functional_pfender_check(&code, &phi, 1.0 / df, 0.0, Variant::FiniteSet).unwrap();
            prop_assert!(!matches!(check.verdict, Verdict::TheoremViolation { .. }), "violation at d={}", d);
        }
    }
}
