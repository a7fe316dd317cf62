//! Gegenbauer polynomials normalized by `G_k(1) = 1`, their orthogonality
//! weight on `[-1, 1]`, and change of basis from monomials.
//!
//! The family is indexed by the ambient dimension `d` of the sphere:
//!
//! ```text
//! G_0(r) = 1
//! G_1(r) = r
//! G_k(r) = ((2k + d - 4) r G_{k-1}(r) - (k - 1) G_{k-2}(r)) / (k + d - 3)
//! ```
//!
//! and is orthogonal with respect to `rho(r) = (1 - r^2)^((d - 3) / 2)`.
//! For `d = 2` the recursion reduces to the Chebyshev polynomials of the
//! first kind and the weight is singular (but integrable) at the endpoints.

use nalgebra::{DMatrix, SymmetricEigen};
use thiserror::Error;

/// Largest degree held in a monomial table.
pub const MAX_DEGREE: usize = 40;

/// Minimum number of quadrature nodes used by [`weighted_inner_product`].
pub const MIN_QUADRATURE_NODES: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GegenbauerError {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("argument {0} lies outside [-1, 1]")]
    OutOfRange(f64),
    #[error("degree {degree} exceeds the supported maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error("polynomial dimensions differ ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("non-finite coefficient at index {0}")]
    NonFinite(usize),
}

fn check_dim(dim: usize) -> Result<(), GegenbauerError> {
    if dim < 2 {
        Err(GegenbauerError::DimensionTooSmall(dim))
    } else {
        Ok(())
    }
}

fn check_arg(r: f64) -> Result<(), GegenbauerError> {
    if !(-1.0..=1.0).contains(&r) {
        Err(GegenbauerError::OutOfRange(r))
    } else {
        Ok(())
    }
}

/// Evaluates `G_k^{(dim)}(r)` with the three-term recursion.
pub fn gegenbauer_eval(dim: usize, k: usize, r: f64) -> Result<f64, GegenbauerError> {
    check_dim(dim)?;
    check_arg(r)?;
    let mut values = vec![0.0; k + 1];
    fill_values(dim, r, &mut values);
    Ok(values[k])
}

/// Writes `G_0(r), ..., G_{out.len()-1}(r)` into `out`. No domain checks.
pub(crate) fn fill_values(dim: usize, r: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = r;
    }
    let d = dim as f64;
    for k in 2..out.len() {
        let kf = k as f64;
        out[k] = ((2.0 * kf + d - 4.0) * r * out[k - 1] - (kf - 1.0) * out[k - 2]) / (kf + d - 3.0);
    }
}

/// Evaluates `sum_k coeffs[k] G_k^{(dim)}(r)` by running the recursion once.
pub(crate) fn eval_series(dim: usize, coeffs: &[f64], r: f64) -> f64 {
    match coeffs.len() {
        0 => 0.0,
        1 => coeffs[0],
        _ => {
            let d = dim as f64;
            let (mut prev, mut cur) = (1.0, r);
            let mut acc = coeffs[0] + coeffs[1] * r;
            for (k, &a) in coeffs.iter().enumerate().skip(2) {
                let kf = k as f64;
                let next = ((2.0 * kf + d - 4.0) * r * cur - (kf - 1.0) * prev) / (kf + d - 3.0);
                prev = cur;
                cur = next;
                acc += a * cur;
            }
            acc
        }
    }
}

/// The Gegenbauer family of one dimension, with monomial expansions of
/// every member up to `max_degree` computed once from the recursion.
#[derive(Debug, Clone)]
pub struct GegenbauerBasis {
    dim: usize,
    max_degree: usize,
    // monomials[k][i] is the coefficient of r^i in G_k.
    monomials: Vec<Vec<f64>>,
}

impl GegenbauerBasis {
    pub fn new(dim: usize, max_degree: usize) -> Result<Self, GegenbauerError> {
        check_dim(dim)?;
        if max_degree > MAX_DEGREE {
            return Err(GegenbauerError::DegreeTooLarge { degree: max_degree, max: MAX_DEGREE });
        }
        let d = dim as f64;
        let mut monomials: Vec<Vec<f64>> = Vec::with_capacity(max_degree + 1);
        monomials.push(vec![1.0]);
        if max_degree >= 1 {
            monomials.push(vec![0.0, 1.0]);
        }
        for k in 2..=max_degree {
            let kf = k as f64;
            let a = (2.0 * kf + d - 4.0) / (kf + d - 3.0);
            let b = (kf - 1.0) / (kf + d - 3.0);
            let mut row = vec![0.0; k + 1];
            for (i, &c) in monomials[k - 1].iter().enumerate() {
                row[i + 1] += a * c;
            }
            for (i, &c) in monomials[k - 2].iter().enumerate() {
                row[i] -= b * c;
            }
            monomials.push(row);
        }
        Ok(Self { dim, max_degree, monomials })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Monomial coefficients of `G_k`, lowest power first.
    pub fn monomial_coeffs(&self, k: usize) -> &[f64] {
        &self.monomials[k]
    }

    /// `G_k(r)` via the recursion.
    pub fn eval(&self, k: usize, r: f64) -> Result<f64, GegenbauerError> {
        self.check_degree(k)?;
        gegenbauer_eval(self.dim, k, r)
    }

    /// `G_k(r)` via Horner on the stored monomial table.
    pub fn eval_from_table(&self, k: usize, r: f64) -> Result<f64, GegenbauerError> {
        self.check_degree(k)?;
        check_arg(r)?;
        Ok(compensated_horner(&self.monomials[k], r))
    }

    /// Re-expresses `sum_j mono[j] r^j` in the Gegenbauer basis by back
    /// substitution on the triangular change-of-basis matrix.
    pub fn expand(&self, mono: &[f64]) -> Result<GegenbauerPoly, GegenbauerError> {
        if let Some(i) = mono.iter().position(|c| !c.is_finite()) {
            return Err(GegenbauerError::NonFinite(i));
        }
        let mut residual = mono.to_vec();
        while residual.len() > 1 && residual.last() == Some(&0.0) {
            residual.pop();
        }
        let m = residual.len().saturating_sub(1);
        self.check_degree(m)?;
        let mut coeffs = vec![0.0; m + 1];
        for k in (0..=m).rev() {
            let row = &self.monomials[k];
            let a = residual[k] / row[k];
            coeffs[k] = a;
            for (i, &c) in row.iter().enumerate() {
                residual[i] -= a * c;
            }
        }
        Ok(GegenbauerPoly::new(self.dim, coeffs))
    }

    /// Monomial coefficients of a Gegenbauer combination.
    pub fn to_monomial(&self, poly: &GegenbauerPoly) -> Result<Vec<f64>, GegenbauerError> {
        if poly.dim != self.dim {
            return Err(GegenbauerError::DimensionMismatch(poly.dim, self.dim));
        }
        let m = poly.coeffs.len().saturating_sub(1);
        self.check_degree(m)?;
        let mut out = vec![0.0; m + 1];
        for (k, &a) in poly.coeffs.iter().enumerate() {
            for (i, &c) in self.monomials[k].iter().enumerate() {
                out[i] += a * c;
            }
        }
        Ok(out)
    }

    fn check_degree(&self, k: usize) -> Result<(), GegenbauerError> {
        if k > self.max_degree {
            Err(GegenbauerError::DegreeTooLarge { degree: k, max: self.max_degree })
        } else {
            Ok(())
        }
    }
}

pub(crate) fn horner(coeffs: &[f64], r: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c)
}

/// Horner's scheme with error-free transformations (Graillat, Langlois and
/// Louvet): the result is as accurate as plain Horner in doubled precision.
/// Monomial tables of degree 20 have coefficient sums near 1e7, where plain
/// Horner loses about nine digits.
pub(crate) fn compensated_horner(coeffs: &[f64], r: f64) -> f64 {
    let Some((&top, rest)) = coeffs.split_last() else { return 0.0 };
    let mut s = top;
    let mut err = 0.0;
    for &c in rest.iter().rev() {
        let p = s * r;
        let p_err = s.mul_add(r, -p);
        let t = p + c;
        let bb = t - p;
        let t_err = (p - (t - bb)) + (c - bb);
        s = t;
        err = err * r + (p_err + t_err);
    }
    s + err
}

/// The orthogonality weight `rho(r) = (1 - r^2)^((dim - 3) / 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Weight {
    dim: usize,
}

impl Weight {
    pub fn new(dim: usize) -> Result<Self, GegenbauerError> {
        check_dim(dim)?;
        Ok(Self { dim })
    }

    /// Exponent `(dim - 3) / 2`.
    pub fn exponent(&self) -> f64 {
        (self.dim as f64 - 3.0) / 2.0
    }

    pub fn density(&self, r: f64) -> f64 {
        (1.0 - r * r).powf(self.exponent())
    }

    /// `int_{-1}^{1} rho(r) dr`, from `pi` (dim 2) or `2` (dim 3) and the
    /// step `I(d + 2) = I(d) (d - 1) / d`.
    pub fn total_mass(&self) -> f64 {
        let (mut d, mut mass) = if self.dim.is_multiple_of(2) { (2, std::f64::consts::PI) } else { (3, 2.0) };
        while d < self.dim {
            mass *= (d as f64 - 1.0) / d as f64;
            d += 2;
        }
        mass
    }
}

/// Gauss rule for `int_{-1}^{1} f(r) rho(r) dr`, exact for polynomials of
/// degree below `2 * len`. Nodes and weights come from the eigen-decomposition
/// of the symmetric Jacobi matrix of the weight.
#[derive(Debug, Clone)]
pub struct Quadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Quadrature {
    pub fn new(dim: usize, len: usize) -> Result<Self, GegenbauerError> {
        let weight = Weight::new(dim)?;
        let alpha = weight.exponent();
        let n = len.max(1);
        let mut jacobi = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            let k = i as f64;
            let b2 = if i == 1 {
                1.0 / (3.0 + 2.0 * alpha)
            } else {
                k * (k + 2.0 * alpha) / ((2.0 * k + 2.0 * alpha + 1.0) * (2.0 * k + 2.0 * alpha - 1.0))
            };
            let b = b2.sqrt();
            jacobi[(i, i - 1)] = b;
            jacobi[(i - 1, i)] = b;
        }
        let eig = SymmetricEigen::new(jacobi);
        let mass = weight.total_mass();
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let v0 = eig.eigenvectors[(0, i)];
                (eig.eigenvalues[i], mass * v0 * v0)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        Ok(Self { nodes, weights })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Anything evaluable on `[-1, 1]` with a known degree.
pub trait Polynomial {
    fn degree(&self) -> usize;
    fn value(&self, r: f64) -> f64;
}

/// A polynomial stored by monomial coefficients, lowest power first.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialPoly(pub Vec<f64>);

impl Polynomial for MonomialPoly {
    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn value(&self, r: f64) -> f64 {
        horner(&self.0, r)
    }
}

/// `V(r) = sum_k coeffs[k] G_k^{(dim)}(r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GegenbauerPoly {
    dim: usize,
    coeffs: Vec<f64>,
}

impl GegenbauerPoly {
    pub fn new(dim: usize, coeffs: Vec<f64>) -> Self {
        Self { dim, coeffs }
    }

    /// The single basis element `G_k`.
    pub fn basis_element(dim: usize, k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        Self { dim, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut Vec<f64> {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Drops trailing zero coefficients (keeps at least one entry).
    pub fn trimmed(mut self) -> Self {
        while self.coeffs.len() > 1 && self.coeffs.last() == Some(&0.0) {
            self.coeffs.pop();
        }
        self
    }

    pub fn eval(&self, r: f64) -> f64 {
        eval_series(self.dim, &self.coeffs, r)
    }

    /// `V(1) = sum_k a_k`, since every `G_k(1) = 1`.
    pub fn at_one(&self) -> f64 {
        self.coeffs.iter().sum()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { dim: self.dim, coeffs: self.coeffs.iter().map(|a| a * factor).collect() }
    }

    pub fn validate(&self) -> Result<(), GegenbauerError> {
        check_dim(self.dim)?;
        match self.coeffs.iter().position(|c| !c.is_finite()) {
            Some(i) => Err(GegenbauerError::NonFinite(i)),
            None => Ok(()),
        }
    }
}

impl Polynomial for GegenbauerPoly {
    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn value(&self, r: f64) -> f64 {
        self.eval(r)
    }
}

/// `int_{-1}^{1} p(r) q(r) rho(r) dr` by Gauss quadrature with
/// `max(64, deg p + deg q + 8)` nodes.
pub fn weighted_inner_product<P, Q>(p: &P, q: &Q, dim: usize) -> Result<f64, GegenbauerError>
where
    P: Polynomial + ?Sized,
    Q: Polynomial + ?Sized,
{
    let nodes = MIN_QUADRATURE_NODES.max(p.degree() + q.degree() + 8);
    let rule = Quadrature::new(dim, nodes)?;
    Ok(rule.integrate(|r| p.value(r) * q.value(r)))
}

/// Projects a polynomial onto the basis by quadrature:
/// `a_k = <p, G_k> / <G_k, G_k>`. Independent of the triangular solve in
/// [`GegenbauerBasis::expand`].
pub fn project_onto_basis<P>(p: &P, dim: usize) -> Result<GegenbauerPoly, GegenbauerError>
where
    P: Polynomial + ?Sized,
{
    let m = p.degree();
    let rule = Quadrature::new(dim, MIN_QUADRATURE_NODES.max(2 * m + 8))?;
    let mut values = vec![0.0; m + 1];
    let mut num = vec![0.0; m + 1];
    let mut den = vec![0.0; m + 1];
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        fill_values(dim, x, &mut values);
        let px = p.value(x);
        for k in 0..=m {
            num[k] += w * px * values[k];
            den[k] += w * values[k] * values[k];
        }
    }
    Ok(GegenbauerPoly::new(dim, num.iter().zip(&den).map(|(n, d)| n / d).collect()))
}
