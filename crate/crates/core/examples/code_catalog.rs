//! The built-in configurations and their coherence.

use codebound::codes::{self, generate, Family};

fn main() {
    let families = [
        Family::Simplex(4),
        Family::Orthonormal(4),
        Family::CrossPolytope(4),
        Family::Icosahedron,
        Family::D4Roots,
        Family::E8Roots,
    ];
    for family in families {
        let code = generate(family);
        let report = codes::verify(&code.clone().into()).unwrap();
        println!(
            "{:<18} d={} n={:<4} cos_theta={:<8.5} coherence={:.5} valid={}",
            family.to_string(),
            code.dim,
            report.n,
            code.cos_theta,
            report.max_offdiag,
            report.valid
        );
    }
}
