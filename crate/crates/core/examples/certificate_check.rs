//! Build a Delsarte certificate from an explicit polynomial, verify it, and
//! watch the verifier reject tampered copies.

use codebound::dgs::{verify_certificate, DgsCertificate};
use codebound::gegenbauer::{project_onto_basis, MonomialPoly};

fn main() {
    // (r + 1)(r + 1/2)^2 r^2 (r - 1/2), expanded by hand.
    let mono = MonomialPoly(vec![0.0, 0.0, -0.125, -0.375, 0.25, 1.5, 1.0]);
    let poly = project_onto_basis(&mono, 8).unwrap();
    let cert = DgsCertificate::from_poly(&poly, 0.5).unwrap();
    println!("E8 certificate: bound {} ({}), passed={}", cert.bound_real, cert.bound_int, cert.verification.passed);

    let mut negated = poly.clone();
    negated.coeffs_mut()[3] *= -1.0;
    let bad = DgsCertificate::from_poly(&negated, 0.5).unwrap();
    println!("negated a_3: {}", bad.verification.failure.unwrap());

    let mut shifted = poly.clone();
    shifted.coeffs_mut()[0] += 1e-4;
    let bad = DgsCertificate::from_poly(&shifted, 0.5).unwrap();
    println!("shifted up:  {}", bad.verification.failure.unwrap());

    let mut inflated = cert.clone();
    inflated.bound_int = 241;
    println!("claims 241:  {}", verify_certificate(&inflated).unwrap().failure.unwrap());

    println!("\n{}", cert.to_json());
}
