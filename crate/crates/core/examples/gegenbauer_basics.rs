//! Evaluate the normalized Gegenbauer family, expand a polynomial in it, and
//! check orthogonality by quadrature.

use codebound::gegenbauer::{gegenbauer_eval, weighted_inner_product, GegenbauerBasis, GegenbauerPoly};

fn main() {
    let dim = 3;
    for k in 0..=4 {
        println!("G_{k}^({dim})(0.5) = {}", gegenbauer_eval(dim, k, 0.5).unwrap());
    }

    // r^2 = 1/3 G_0 + 2/3 G_2 in dimension 3.
    let basis = GegenbauerBasis::new(dim, 2).unwrap();
    let poly = basis.expand(&[0.0, 0.0, 1.0]).unwrap();
    println!("r^2 in the Gegenbauer basis: {:?}", poly.coeffs());

    let g2 = GegenbauerPoly::basis_element(8, 2);
    let g5 = GegenbauerPoly::basis_element(8, 5);
    println!("<G_2, G_5> in dimension 8 = {:e}", weighted_inner_product(&g2, &g5, 8).unwrap());
    println!("<G_2, G_2> in dimension 8 = {}", weighted_inner_product(&g2, &g2, 8).unwrap());
}
