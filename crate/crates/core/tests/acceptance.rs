//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so every line is printed.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use codebound::codes::{self, euclidean_to_functional, generate, norming_functional, random_lp_code, Code, Family};
use codebound::dgs::{lp_bound, verify_certificate, DgsCertificate, LpBound};
use codebound::gegenbauer::{gegenbauer_eval, project_onto_basis, weighted_inner_product, GegenbauerBasis, GegenbauerPoly, MonomialPoly};
use codebound::linprog::{solve_lp, LpStatus};
use codebound::pfender::{functional_pfender_check, pfender_bound, PhiSpec, Variant, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_secs: u64) -> Result<(), String> {
    ensure(elapsed <= Duration::from_secs(limit_secs), || format!("took {elapsed:?}, limit {limit_secs} s"))
}

fn gegenbauer_suite() -> Outcome {
    let start = Instant::now();
    let mut worst_norm: f64 = 0.0;
    for n in 2..=32 {
        for k in 0..=20 {
            worst_norm = worst_norm.max((gegenbauer_eval(n, k, 1.0).unwrap() - 1.0).abs());
        }
    }
    ensure(worst_norm <= 1e-12, || format!("normalization error {worst_norm:e}"))?;

    let mut worst_orth: f64 = 0.0;
    for n in 3..=24 {
        let g: Vec<GegenbauerPoly> = (0..=20).map(|k| GegenbauerPoly::basis_element(n, k)).collect();
        let norms: Vec<f64> = g.iter().map(|p| weighted_inner_product(p, p, n).unwrap()).collect();
        for j in 0..=20 {
            for k in 0..j {
                let ip = weighted_inner_product(&g[j], &g[k], n).unwrap();
                worst_orth = worst_orth.max(ip.abs() / (norms[j] * norms[k]).sqrt());
            }
        }
    }
    ensure(worst_orth <= 1e-8, || format!("orthogonality error {worst_orth:e}"))?;

    let mut worst_table: f64 = 0.0;
    for n in 2..=32 {
        let basis = GegenbauerBasis::new(n, 20).unwrap();
        for i in 0..=200 {
            let r = -1.0 + 2.0 * i as f64 / 200.0;
            for k in 0..=20 {
                worst_table = worst_table.max((basis.eval(k, r).unwrap() - basis.eval_from_table(k, r).unwrap()).abs());
            }
        }
    }
    ensure(worst_table <= 1e-10, || format!("recursion/table disagreement {worst_table:e}"))?;
    within(start.elapsed(), 60)?;
    Ok(format!("norm {worst_norm:.1e}, orth {worst_orth:.1e}, table {worst_table:.1e}"))
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_codebound")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn field(line: &str, key: &str) -> Option<String> {
    line.split_whitespace().find_map(|kv| kv.strip_prefix(&format!("{key}=")).map(str::to_string))
}

/// `(t + 1)(t + 1/2)^2 t^2 (t - 1/2)` in monomial form.
fn e8_polynomial() -> Vec<f64> {
    let factors: [&[f64]; 6] = [&[1.0, 1.0], &[0.5, 1.0], &[0.5, 1.0], &[0.0, 1.0], &[0.0, 1.0], &[-0.5, 1.0]];
    factors.iter().fold(vec![1.0], |acc, f| {
        let mut out = vec![0.0; acc.len() + f.len() - 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in f.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        out
    })
}

fn kissing_d8() -> Outcome {
    let start = Instant::now();
    let (code, stdout) = run_cli(&["bound", "lp", "--dim", "8", "--cos-theta", "0.5", "--degree", "6"]);
    ensure(code == 0, || format!("exit code {code}: {stdout}"))?;
    let real: f64 = field(&stdout, "bound_real").and_then(|v| v.parse().ok()).ok_or("no bound_real")?;
    let int: u64 = field(&stdout, "bound_int").and_then(|v| v.parse().ok()).ok_or("no bound_int")?;
    ensure((240.0 - 1e-6..=240.001).contains(&real), || format!("bound_real = {real}"))?;
    ensure(int == 240, || format!("bound_int = {int}"))?;

    let oracle = project_onto_basis(&MonomialPoly(e8_polynomial()), 8).map_err(|e| e.to_string())?;
    let ratio = oracle.at_one() / oracle.coeffs()[0];
    ensure((ratio - 240.0).abs() <= 1e-6, || format!("explicit polynomial ratio {ratio}"))?;
    within(start.elapsed(), 30)?;
    Ok(format!("bound_real={real} bound_int={int}, explicit P(1)/a_0={ratio:.9}"))
}

fn certified(dim: usize, cos_theta: f64, degree: usize) -> Result<DgsCertificate, String> {
    match lp_bound(dim, cos_theta, degree, 2000).map_err(|e| e.to_string())? {
        LpBound::Certified { certificate, .. } if certificate.verification.passed => Ok(certificate),
        LpBound::Certified { certificate, .. } => Err(format!("unverified: {:?}", certificate.verification.failure)),
        LpBound::NoCertificate { .. } => Err(format!("no certificate for d={dim} m={degree}")),
    }
}

fn kissing_d3_d4() -> Outcome {
    let mut parts = Vec::new();
    for (dim, floor, regression) in [(3, 12.0, 13.158_329_771_6), (4, 24.0, 25.558_429_116_2)] {
        let start = Instant::now();
        let cert = certified(dim, 0.5, 10)?;
        ensure(cert.bound_real >= floor, || format!("d={dim}: {} < {floor}", cert.bound_real))?;
        ensure((cert.bound_real - regression).abs() <= 1e-6 * regression, || {
            format!("d={dim}: {} drifted from {regression}", cert.bound_real)
        })?;
        within(start.elapsed(), 60)?;
        parts.push(format!("d={dim}: {:.6}", cert.bound_real));
    }
    Ok(parts.join(", "))
}

fn kissing_d24() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for degree in [10, 11, 12] {
        let cert = certified(24, 0.5, degree)?;
        ensure(cert.bound_real >= 196_560.0, || format!("m={degree}: {}", cert.bound_real))?;
        ensure(cert.bound_int == 196_560, || format!("m={degree}: bound_int {}", cert.bound_int))?;
        parts.push(format!("m={degree}: {:.4}", cert.bound_real));
    }
    within(start.elapsed(), 300)?;
    Ok(parts.join(", "))
}

fn simplex_tightness() -> Outcome {
    for d in 2..=50 {
        let df = d as f64;
        let phi = PhiSpec::Gegenbauer(GegenbauerPoly::basis_element(d, 1));
        let cert = pfender_bound(&phi, 1.0 / df, -1.0 / df).map_err(|e| format!("d={d}: {e}"))?;
        ensure((cert.bound_real - (df + 1.0)).abs() <= 1e-12, || format!("d={d}: bound {}", cert.bound_real))?;

        let code = generate(Family::Simplex(d));
        let report = codes::verify(&code.clone().into()).map_err(|e| e.to_string())?;
        ensure(report.valid && report.n == d + 1, || format!("simplex({d}) invalid"))?;
        let check = functional_pfender_check(&euclidean_to_functional(&code).into(), &phi, 1.0 / df, -1.0 / df, Variant::Interval)
            .map_err(|e| e.to_string())?;
        match check.verdict {
            Verdict::Holds { slack, .. } if slack.abs() <= 1e-9 => {}
            other => return Err(format!("d={d}: {other:?}")),
        }
    }
    Ok("d = 2..50 meet d+1 with zero slack".into())
}

fn consistency_harness() -> Outcome {
    let certs = common::certificate_catalog();
    let mut all_codes = common::catalog_functional_codes();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..500 {
        let p = [1.5, 2.0, 3.0][i % 3];
        let dim = rng.random_range(2..=6);
        let n = rng.random_range(1..=12);
        let code = random_lp_code(dim, n, p, &mut rng).map_err(|e| e.to_string())?;
        all_codes.push((format!("random l_{p} #{i}"), code.into()));
    }
    let (mut holds, mut inapplicable, mut violations) = (0, 0, Vec::new());
    for (code_name, code) in &all_codes {
        for (cert_name, phi, c, cos_theta, variant) in &certs {
            let check = functional_pfender_check(code, phi, *c, *cos_theta, *variant)
                .map_err(|e| format!("{code_name} x {cert_name}: {e}"))?;
            match check.verdict {
                Verdict::Holds { .. } => holds += 1,
                Verdict::NotApplicable { .. } => inapplicable += 1,
                Verdict::TheoremViolation { n, bound } => {
                    violations.push(format!("{code_name} x {cert_name}: n={n} bound={bound}"))
                }
            }
        }
    }
    ensure(violations.is_empty(), || violations.join("; "))?;
    ensure(holds > 0, || "no certificate applied to any code".into())?;
    Ok(format!(
        "{} codes x {} certificates: {holds} applicable, {inapplicable} not applicable, 0 violations",
        all_codes.len(),
        certs.len()
    ))
}

fn riesz_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let dim = rng.random_range(2..=16);
        let x = common::random_unit_vector(&mut rng, dim);
        let f = norming_functional(&x, 2.0).map_err(|e| e.to_string())?;
        for (a, b) in f.iter().zip(&x) {
            worst = worst.max((a - b).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("1000 vectors, max deviation {worst:.1e}"))
}

fn orthonormal_finite_set() -> Outcome {
    for d in 2..=16 {
        let df = d as f64;
        let code: Code = euclidean_to_functional(&generate(Family::Orthonormal(d))).into();
        let phi = PhiSpec::monomial(vec![-1.0 / df, 0.0, 1.0]);
        let check = functional_pfender_check(&code, &phi, 1.0 / df, 0.0, Variant::FiniteSet).map_err(|e| e.to_string())?;
        match check.verdict {
            Verdict::Holds { n, bound, slack } if n == d && (bound - df).abs() <= 1e-12 && slack.abs() <= 1e-12 => {}
            other => return Err(format!("d={d}: {other:?}")),
        }
    }
    Ok("d = 2..16 bound d, slack 0".into())
}

fn lp_oracle_and_certificates() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut feasible = 0;
    for i in 0..100 {
        let lp = common::random_lp(&mut rng);
        let sol = solve_lp(&lp).map_err(|e| e.to_string())?;
        match common::brute_force_optimum(&lp) {
            Some(best) => {
                feasible += 1;
                ensure(sol.status == LpStatus::Optimal, || format!("LP {i}: {:?}, oracle {best}", sol.status))?;
                ensure((sol.objective_value - best).abs() <= 1e-7 * best.abs().max(1.0), || {
                    format!("LP {i}: {} vs oracle {best}", sol.objective_value)
                })?;
            }
            None => ensure(sol.status == LpStatus::Infeasible, || format!("LP {i}: {:?}, oracle infeasible", sol.status))?,
        }
    }

    let certs = common::emitted_dgs_certificates();
    for cert in &certs {
        let report = verify_certificate(cert).map_err(|e| e.to_string())?;
        ensure(report.passed, || format!("re-verification failed: {:?}", report.failure))?;
    }

    let mut mutations = 0;
    for cert in &certs {
        let poly = cert.poly();
        for k in 1..poly.coeffs().len() {
            if poly.coeffs()[k] > 1e-9 {
                let mut negated = poly.clone();
                negated.coeffs_mut()[k] = -poly.coeffs()[k];
                mutations += 1;
                let m = DgsCertificate::from_poly(&negated, cert.cos_theta).map_err(|e| e.to_string())?;
                ensure(!m.verification.passed, || format!("negated a_{k} accepted"))?;
            }
        }
        let mut shifted = poly.clone();
        shifted.coeffs_mut()[0] += 1e-6 * poly.coeffs()[0];
        mutations += 1;
        let m = DgsCertificate::from_poly(&shifted, cert.cos_theta).map_err(|e| e.to_string())?;
        ensure(!m.verification.passed, || "shifted polynomial accepted".into())?;

        let mut inflated = cert.clone();
        inflated.bound_real *= 1.01;
        inflated.bound_int = codebound::dgs::floor_bound(inflated.bound_real);
        mutations += 1;
        ensure(!verify_certificate(&inflated).map_err(|e| e.to_string())?.passed, || "inflated bound accepted".into())?;
    }
    Ok(format!(
        "100 LPs ({feasible} feasible) match the vertex oracle; {} certificates re-verified; {mutations} mutations rejected",
        certs.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Gegenbauer normalization, orthogonality, table agreement", gegenbauer_suite),
        ("kissing bound d=8", kissing_d8),
        ("kissing bounds d=3, d=4", kissing_d3_d4),
        ("kissing bound d=24", kissing_d24),
        ("simplex tightness", simplex_tightness),
        ("functional Pfender consistency harness", consistency_harness),
        ("l_2 norming functional is the vector", riesz_identity),
        ("orthonormal finite-set certificate", orthonormal_finite_set),
        ("LP oracle and certificate re-verification", lp_oracle_and_certificates),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail} ({secs:.2} s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail} ({secs:.2} s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
