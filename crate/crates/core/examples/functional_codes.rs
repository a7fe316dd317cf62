//! Codes in l_p: norming functionals, axioms, and the finite-set Pfender
//! bound checked against concrete codes.

use codebound::codes::{self, norming_functional, random_lp_code, Code, Exponent, FunctionalCode, Space};
use codebound::pfender::{functional_pfender_check, PhiSpec, Variant, Verdict};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let x = [2f64.powf(-0.25), 2f64.powf(-0.25)];
    println!("norming functional of {x:?} in l_4: {:?}", norming_functional(&x, 4.0).unwrap());

    // The standard basis of l_3^4 with coordinate functionals: f_j(tau_k) = 0 off the diagonal.
    let d = 4;
    let basis: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    let code: Code = FunctionalCode {
        space: Space::Lp { p: Exponent(3.0), dim: d },
        points: basis.clone(),
        functionals: basis,
        cos_theta: 0.0,
    }
    .into();
    let phi = PhiSpec::monomial(vec![-0.25, 0.0, 1.0]);
    let check = functional_pfender_check(&code, &phi, 0.25, 0.0, Variant::FiniteSet).unwrap();
    println!("standard basis of l_3^4 against r^2 - 1/4: {:?}", check.verdict);

    // Per-code certificates for random codes. With s the largest |f_j(tau_k)|
    // off the diagonal, phi = r^2 - a and c = a - s^2 satisfy condition (ii)
    // on the code's values, and a = (n + sum_{j != k} f_j(tau_k)^2) / n^2
    // makes the double sum vanish, so condition (i) holds with equality.
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for p in [1.5, 2.0, 3.0] {
        let code: Code = random_lp_code(32, 5, p, &mut rng).unwrap().into();
        let m = code.evaluation_matrix().unwrap();
        let n = m.len() as f64;
        let off = || m.iter().enumerate().flat_map(|(j, row)| row.iter().enumerate().filter(move |(k, _)| *k != j).map(|(_, v)| *v));
        let s2 = off().map(|v| v * v).fold(0.0, f64::max);
        let a = (n + off().map(|v| v * v).sum::<f64>()) / (n * n);
        if a <= s2 {
            println!("l_{p}^32 code: coherence too large for this certificate shape");
            continue;
        }
        let phi = PhiSpec::monomial(vec![-a, 0.0, 1.0]);
        let check = functional_pfender_check(&code, &phi, a - s2, 0.0, Variant::FiniteSet).unwrap();
        let valid = codes::verify(&code).unwrap().valid;
        match check.verdict {
            Verdict::Holds { n, bound, .. } => println!("l_{p}^32 code (valid={valid}): n={n} <= {bound:.4}"),
            other => println!("l_{p}^32 code: {other:?}"),
        }
    }
}
