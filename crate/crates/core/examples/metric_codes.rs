//! A spherical code viewed as a metric code on a finite pointed metric space.

use codebound::codes::{self, embed_as_metric_code, generate, lipschitz_norm, Family};

fn main() {
    let ico = generate(Family::Icosahedron);
    let metric = embed_as_metric_code(&ico, &[]).unwrap();
    println!("{} space points, base point {}", metric.distance.len(), metric.base);

    let norms: Vec<f64> = metric.functions.iter().map(|f| lipschitz_norm(&metric.distance, f)).collect();
    let spread = norms.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    println!("Lipschitz norms of f_j lie in [{}, {}]", spread.0, spread.1);

    let report = codes::verify(&metric.clone().into()).unwrap();
    println!("valid={} coherence={}", report.valid, report.max_offdiag);

    // Moving one function off the base point breaks the Lip0 condition.
    let mut broken = metric;
    broken.functions[0][0] = 0.1;
    for failure in codes::verify(&broken.into()).unwrap().axiom_failures.iter().take(3) {
        println!("{failure}");
    }
}
