//! Delsarte bounds on the kissing number (cos_theta = 1/2) in dimensions
//! 3, 4, 8 and 24.

use std::time::Instant;

use codebound::dgs::{lp_bound, LpBound};

fn main() {
    for (dim, degree, known) in [(3, 10, 12), (4, 10, 24), (8, 6, 240), (24, 11, 196_560)] {
        let start = Instant::now();
        match lp_bound(dim, 0.5, degree, 2000).unwrap() {
            LpBound::Certified { certificate, rounds } => println!(
                "d={dim:>2} m={degree:>2}: n <= {:.6} ({}), best known code {known}, {rounds} refinement rounds, {:.0?}",
                certificate.bound_real,
                certificate.bound_int,
                start.elapsed()
            ),
            LpBound::NoCertificate { .. } => println!("d={dim} m={degree}: no certificate"),
        }
    }
}
