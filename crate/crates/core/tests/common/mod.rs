//! Shared oracles and generators for the integration tests.
#![allow(dead_code)]

use codebound::codes::{self, Code, Family, SphericalCode};
use codebound::dgs::{lp_bound, DgsCertificate};
use codebound::gegenbauer::GegenbauerPoly;
use codebound::linprog::{LinearProgram, Relation};
use codebound::pfender::{PfenderCertificate, PhiSpec, Variant};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

/// Small LP with every variable boxed, so an optimum exists when feasible.
pub fn random_lp<R: Rng>(rng: &mut R) -> LinearProgram {
    let n = rng.random_range(1..=3);
    let m = rng.random_range(1..=4);
    let mut lp = LinearProgram::new((0..n).map(|_| rng.random_range(-5..=5) as f64).collect());
    for _ in 0..m {
        let row: Vec<f64> = (0..n).map(|_| rng.random_range(-4..=4) as f64).collect();
        let relation = match rng.random_range(0..10) {
            0..=5 => Relation::Le,
            6..=8 => Relation::Ge,
            _ => Relation::Eq,
        };
        lp.constrain(row, relation, rng.random_range(-4..=8) as f64);
    }
    for j in 0..n {
        let lo = if rng.random_bool(0.3) { -(rng.random_range(1..=5) as f64) } else { 0.0 };
        lp.set_bounds(j, lo, rng.random_range(1..=8) as f64);
    }
    lp
}

/// Optimum of a boxed LP by enumerating every vertex: each choice of `n`
/// linearly independent hyperplanes among the rows and bounds, solved by LU
/// and kept when feasible. `None` when no vertex is feasible.
pub fn brute_force_optimum(lp: &LinearProgram) -> Option<f64> {
    let n = lp.num_vars();
    let mut planes: Vec<(Vec<f64>, f64)> = lp.constraints.iter().map(|c| (c.row.clone(), c.rhs)).collect();
    for j in 0..n {
        let unit: Vec<f64> = (0..n).map(|i| f64::from(u8::from(i == j))).collect();
        planes.push((unit.clone(), lp.lower[j]));
        planes.push((unit, lp.upper[j]));
    }
    let mut best: Option<f64> = None;
    let mut chosen = Vec::with_capacity(n);
    subsets(planes.len(), n, 0, &mut chosen, &mut |idx| {
        let a = DMatrix::from_fn(n, n, |r, c| planes[idx[r]].0[c]);
        let b = DVector::from_fn(n, |r, _| planes[idx[r]].1);
        if a.determinant().abs() < 1e-9 {
            return;
        }
        let Some(x) = a.lu().solve(&b) else { return };
        let x: Vec<f64> = x.iter().copied().collect();
        if lp.max_violation(&x) <= 1e-9 {
            let obj: f64 = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
            best = Some(best.map_or(obj, |b| b.min(obj)));
        }
    });
    best
}

fn subsets(total: usize, k: usize, start: usize, chosen: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if chosen.len() == k {
        visit(chosen);
        return;
    }
    for i in start..total {
        chosen.push(i);
        subsets(total, k, i + 1, chosen, visit);
        chosen.pop();
    }
}

pub fn random_unit_vector<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// `n` random unit vectors declared at their own coherence.
pub fn random_spherical_code<R: Rng>(rng: &mut R, dim: usize, n: usize) -> SphericalCode {
    let vectors: Vec<Vec<f64>> = (0..n).map(|_| random_unit_vector(rng, dim)).collect();
    let mut code = SphericalCode { dim, cos_theta: 1.0, vectors };
    let report = codes::verify(&Code::Spherical(code.clone())).unwrap();
    code.cos_theta = report.max_offdiag.max(-1.0);
    code
}

/// Every catalog family at small sizes, as functional codes.
pub fn catalog_functional_codes() -> Vec<(String, Code)> {
    let mut families = vec![Family::Icosahedron, Family::D4Roots, Family::E8Roots];
    for d in 2..=8 {
        families.extend([Family::Simplex(d), Family::Orthonormal(d), Family::CrossPolytope(d)]);
    }
    families
        .into_iter()
        .map(|f| (f.to_string(), Code::from(codes::euclidean_to_functional(&codes::generate(f)))))
        .collect()
}

/// `(name, phi, c, cos_theta, variant)`.
pub type CatalogEntry = (String, PhiSpec, f64, f64, Variant);

/// Simplex, orthonormal and Delsarte-derived certificates, each in both
/// variants.
pub fn certificate_catalog() -> Vec<CatalogEntry> {
    let mut base: Vec<(String, PhiSpec, f64, f64)> = Vec::new();
    for d in 2..=8 {
        let df = d as f64;
        base.push((format!("G1 d={d}"), PhiSpec::Gegenbauer(GegenbauerPoly::basis_element(d, 1)), 1.0 / df, -1.0 / df));
        base.push((format!("r^2-1/{d}"), PhiSpec::monomial(vec![-1.0 / df, 0.0, 1.0]), 1.0 / df, 0.0));
    }
    for (dim, cos_theta, degree) in [(3, 0.5, 10), (4, 0.5, 10), (8, 0.5, 6), (3, 0.0, 4), (5, 0.0, 4), (4, -0.25, 3)] {
        if let Some(cert) = lp_bound(dim, cos_theta, degree, 2000).unwrap().certificate() {
            let p = PfenderCertificate::from_dgs(cert);
            base.push((format!("lp d={dim} cos={cos_theta} m={degree}"), p.phi, p.c, p.cos_theta));
        }
    }
    base.into_iter()
        .flat_map(|(name, phi, c, t)| {
            [Variant::Interval, Variant::FiniteSet].map(|v| (format!("{name} {v}"), phi.clone(), c, t, v))
        })
        .collect()
}

/// Certificates emitted by the LP over a spread of inputs.
pub fn emitted_dgs_certificates() -> Vec<DgsCertificate> {
    let mut out = Vec::new();
    for (dim, cos_theta) in [(2, 0.5), (3, 0.5), (4, 0.5), (5, 0.0), (8, 0.5), (6, -0.2), (12, 0.3)] {
        for degree in [2, 3, 4, 6, 8] {
            if let Some(cert) = lp_bound(dim, cos_theta, degree, 2000).unwrap().certificate() {
                out.push(cert.clone());
            }
        }
    }
    out
}
