//! The Pfender bound with phi = G_1 and c = 1/d is met by the regular simplex.

use codebound::codes::{euclidean_to_functional, generate, Family};
use codebound::gegenbauer::GegenbauerPoly;
use codebound::pfender::{functional_pfender_check, pfender_bound, PhiSpec, Variant, Verdict};

fn main() {
    for d in [2, 3, 5, 10, 50] {
        let c = 1.0 / d as f64;
        let phi = PhiSpec::Gegenbauer(GegenbauerPoly::basis_element(d, 1));
        let cert = pfender_bound(&phi, c, -c).unwrap();

        let code = euclidean_to_functional(&generate(Family::Simplex(d))).into();
        let check = functional_pfender_check(&code, &phi, c, -c, Variant::Interval).unwrap();
        let Verdict::Holds { n, slack, .. } = check.verdict else { unreachable!() };
        println!("d={d:>2}: bound {} and the simplex has n={n}, slack {slack:.1e}", cert.bound_real);
    }
}
