//! The Delsarte linear programming bound for spherical codes.
//!
//! A polynomial `P = sum_k a_k G_k` (Gegenbauer basis of the ambient
//! dimension) with `a_0 > 0`, `a_k >= 0` and `P(r) <= 0` on `[-1, cos_theta]`
//! bounds the size of every code with angular separation `theta` by
//! `P(1) / a_0`. [`lp_bound`] searches for the best such `P` of a given degree
//! by linear programming over a grid, tightens the grid where the sign
//! condition fails between grid points, and hands the result to
//! [`verify_certificate`], which re-checks everything from the coefficients
//! alone.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gegenbauer::{fill_values, GegenbauerError, GegenbauerPoly, MAX_DEGREE};
use crate::linprog::{solve_lp, LinearProgram, LpError, LpStatus, Relation};
use crate::search;

pub use crate::search::chebyshev_grid;

/// Smallest LP grid accepted by [`lp_bound`].
pub const MIN_GRID_POINTS: usize = 64;
/// Tolerance on `P(r) <= 0`, relative to `max(1, a_0)`.
pub const SIGN_TOL: f64 = 1e-9;
/// Tolerance on `a_k >= 0` for `k >= 1`.
pub const COEFF_TOL: f64 = 1e-12;
/// Slack used when rounding `bound_real` down to an integer.
pub const FLOOR_SLACK: f64 = 1e-9;
/// Grid tightening rounds performed by [`lp_bound`].
pub const MAX_ROUNDS: usize = 10;
/// Verifier grid used by [`verify_certificate`].
pub const DEFAULT_VERIFY_GRID: usize = 20_000;
/// Excess of `P` above zero below which no further grid points are added.
const EXCESS_STOP: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DgsError {
    #[error(transparent)]
    Gegenbauer(#[from] GegenbauerError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("cos_theta must lie in [-1, 1), got {0}")]
    CosTheta(f64),
    #[error("grid needs at least {MIN_GRID_POINTS} points, got {0}")]
    GridTooSmall(usize),
    #[error("degrees must be strictly ascending")]
    UnsortedDegrees,
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("linear program failed numerically at degree {0}")]
    NumericalFailure(usize),
    #[error("certificate failed its own verification: {0}")]
    Unverified(FailureReason),
}

/// Why a certificate was rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum FailureReason {
    NegativeCoefficient { index: usize, value: f64 },
    NonPositiveConstantTerm { value: f64 },
    SignViolation { location: f64, value: f64 },
    BoundMismatch { claimed: f64, recomputed: f64 },
    BoundIntMismatch { claimed: u64, recomputed: u64 },
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NegativeCoefficient { index, value } => {
                write!(f, "negative Gegenbauer coefficient a_{index} = {value}")
            }
            Self::NonPositiveConstantTerm { value } => write!(f, "constant term a_0 = {value} is not positive"),
            Self::SignViolation { location, value } => {
                write!(f, "sign condition violated: P({location}) = {value} > 0")
            }
            Self::BoundMismatch { claimed, recomputed } => {
                write!(f, "bound_real {claimed} does not match P(1)/a_0 = {recomputed}")
            }
            Self::BoundIntMismatch { claimed, recomputed } => {
                write!(f, "bound_int {claimed} does not match floor(bound_real) = {recomputed}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    /// Points of the uniform-in-angle scan of `[-1, cos_theta]`.
    pub grid_size: usize,
    /// `max P(r)` over `[-1, cos_theta]` as located by the scan.
    pub max_sign_violation: f64,
    pub worst_location: f64,
    /// Golden-section iterations spent on each local maximum.
    pub refinement_depth: usize,
    /// `min_{k >= 1} a_k`, or `+inf` for a constant polynomial.
    pub min_coefficient: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure: Option<FailureReason>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename = "dgs")]
pub struct DgsCertificate {
    pub dim: usize,
    pub cos_theta: f64,
    #[serde(rename = "gegenbauer_coeffs")]
    pub coeffs: Vec<f64>,
    pub bound_real: f64,
    pub bound_int: u64,
    pub verification: VerificationReport,
}

impl DgsCertificate {
    /// Builds a certificate from `P`, computing the bound from the
    /// coefficients. The report is filled in by [`verify_certificate`].
    pub fn from_poly(poly: &GegenbauerPoly, cos_theta: f64) -> Result<Self, DgsError> {
        let mut cert = Self {
            dim: poly.dim(),
            cos_theta,
            coeffs: poly.coeffs().to_vec(),
            bound_real: 0.0,
            bound_int: 0,
            verification: VerificationReport {
                passed: false,
                grid_size: 0,
                max_sign_violation: f64::NAN,
                worst_location: f64::NAN,
                refinement_depth: 0,
                min_coefficient: f64::NAN,
                failure: None,
            },
        };
        cert.check_structure()?;
        cert.bound_real = cert.ratio();
        cert.bound_int = floor_bound(cert.bound_real);
        cert.verification = verify_certificate(&cert)?;
        Ok(cert)
    }

    pub fn poly(&self) -> GegenbauerPoly {
        GegenbauerPoly::new(self.dim, self.coeffs.clone())
    }

    /// `P(1) / a_0`.
    pub fn ratio(&self) -> f64 {
        self.coeffs.iter().sum::<f64>() / self.coeffs[0]
    }

    /// The certificate with every coefficient multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|a| *a *= factor);
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    fn check_structure(&self) -> Result<(), DgsError> {
        if self.dim < 2 {
            return Err(GegenbauerError::DimensionTooSmall(self.dim).into());
        }
        check_cos_theta(self.cos_theta)?;
        if self.coeffs.is_empty() {
            return Err(DgsError::Malformed("no coefficients".into()));
        }
        if self.coeffs.len() > MAX_DEGREE + 1 {
            return Err(GegenbauerError::DegreeTooLarge { degree: self.coeffs.len() - 1, max: MAX_DEGREE }.into());
        }
        if let Some(i) = self.coeffs.iter().position(|a| !a.is_finite()) {
            return Err(DgsError::Malformed(format!("coefficient {i} is not finite")));
        }
        if !self.bound_real.is_finite() {
            return Err(DgsError::Malformed("bound_real is not finite".into()));
        }
        Ok(())
    }
}

pub fn floor_bound(bound_real: f64) -> u64 {
    (bound_real + FLOOR_SLACK).floor().max(0.0) as u64
}

fn check_cos_theta(cos_theta: f64) -> Result<(), DgsError> {
    if (-1.0..1.0).contains(&cos_theta) {
        Ok(())
    } else {
        Err(DgsError::CosTheta(cos_theta))
    }
}

/// Result of [`lp_bound`].
#[derive(Debug, Clone, PartialEq)]
pub enum LpBound {
    Certified {
        certificate: DgsCertificate,
        /// Grid tightening rounds that were needed.
        rounds: usize,
    },
    /// No polynomial of this degree meets the sign condition on the grid, or
    /// the optimum diverges as the grid is refined (`a_0` becomes negligible
    /// next to the other coefficients).
    NoCertificate { degree: usize },
}

impl LpBound {
    pub fn certificate(&self) -> Option<&DgsCertificate> {
        match self {
            Self::Certified { certificate, .. } => Some(certificate),
            Self::NoCertificate { .. } => None,
        }
    }

    pub fn bound_real(&self) -> Option<f64> {
        self.certificate().map(|c| c.bound_real)
    }
}

/// Best degree-`degree` Delsarte polynomial for `(dim, cos_theta)`.
///
/// Fixes `a_0 = 1` and minimizes `P(1) = 1 + sum_{k>=1} a_k` subject to
/// `a_k >= 0` and `P(r_i) <= 0` on a Chebyshev grid of `[-1, cos_theta]`.
/// That program has one row per grid point and only `degree` columns, so it
/// is solved through its dual
///
/// ```text
/// maximize sum_i y_i  subject to  -sum_i y_i G_k(r_i) <= 1 (k = 1..degree),  y >= 0
/// ```
///
/// which starts feasible at `y = 0`; the `a_k` are its shadow prices. Local
/// maxima of `P` that poke above zero between grid points are added to the
/// grid and the program re-solved, up to [`MAX_ROUNDS`] times. Any remaining
/// positive excess `e` is removed by lowering `a_0` to `1 - e` and
/// renormalizing, which keeps the certificate sound.
pub fn lp_bound(dim: usize, cos_theta: f64, degree: usize, grid_points: usize) -> Result<LpBound, DgsError> {
    if dim < 2 {
        return Err(GegenbauerError::DimensionTooSmall(dim).into());
    }
    check_cos_theta(cos_theta)?;
    if degree > MAX_DEGREE {
        return Err(GegenbauerError::DegreeTooLarge { degree, max: MAX_DEGREE }.into());
    }
    if grid_points < MIN_GRID_POINTS {
        return Err(DgsError::GridTooSmall(grid_points));
    }

    let mut points = chebyshev_grid(-1.0, cos_theta, grid_points);
    // columns[k - 1][i] = G_k(r_i)
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); degree];
    let mut values = vec![0.0; degree + 1];
    let mut push_point = |columns: &mut Vec<Vec<f64>>, r: f64| {
        fill_values(dim, r, &mut values);
        for (col, &g) in columns.iter_mut().zip(&values[1..]) {
            col.push(g);
        }
    };
    for &r in &points {
        push_point(&mut columns, r);
    }

    let mut rounds = 0;
    let mut last: Option<(GegenbauerPoly, f64)> = None;
    loop {
        let mut lp = LinearProgram::new(vec![-1.0; points.len()]);
        for col in &columns {
            lp.constrain(col.iter().map(|g| -g).collect(), Relation::Le, 1.0);
        }
        let solution = solve_lp(&lp)?;
        match solution.status {
            LpStatus::Optimal => {}
            LpStatus::Unbounded => return Ok(LpBound::NoCertificate { degree }),
            LpStatus::Infeasible | LpStatus::NumericalFailure => {
                // Refinement drove the program to breakdown, typically because
                // the optimum diverges as the grid fills in. The previous
                // polynomial is still usable after lowering its excess.
                return match last {
                    Some((poly, excess)) => finish(poly, excess, cos_theta, degree, rounds),
                    None => Err(DgsError::NumericalFailure(degree)),
                };
            }
        }
        let mut coeffs = Vec::with_capacity(degree + 1);
        coeffs.push(1.0);
        coeffs.extend(solution.duals.iter().map(|p| (-p).max(0.0)));
        let poly = GegenbauerPoly::new(dim, coeffs);

        let scan = search::scan_maxima(|r| poly.eval(r), -1.0, cos_theta, 10 * grid_points);
        let excess = scan.max_value();
        let before = points.len();
        if excess > EXCESS_STOP && rounds < MAX_ROUNDS {
            for m in scan.maxima.iter().filter(|m| m.value > EXCESS_STOP) {
                if !points.contains(&m.location) {
                    points.push(m.location);
                    push_point(&mut columns, m.location);
                }
            }
        }
        if points.len() == before {
            return finish(poly, excess, cos_theta, degree, rounds);
        }
        last = Some((poly, excess));
        rounds += 1;
    }
}

/// Removes any remaining excess and certifies. An excess that would consume
/// all of `a_0` leaves nothing to certify.
fn finish(poly: GegenbauerPoly, excess: f64, cos_theta: f64, degree: usize, rounds: usize) -> Result<LpBound, DgsError> {
    if excess >= 1.0 - 1e-6 {
        return Ok(LpBound::NoCertificate { degree });
    }
    let poly = if excess > 0.0 { lower_constant_term(&poly, excess) } else { poly };
    let certificate = DgsCertificate::from_poly(&poly, cos_theta)?;
    if let Some(reason) = certificate.verification.failure.clone() {
        return Err(DgsError::Unverified(reason));
    }
    Ok(LpBound::Certified { certificate, rounds })
}

/// `(P - excess) / (1 - excess)` for `a_0 = 1`: the constant term drops by
/// `excess` and the polynomial is renormalized to `a_0 = 1`.
fn lower_constant_term(poly: &GegenbauerPoly, excess: f64) -> GegenbauerPoly {
    let a0 = poly.coeffs()[0];
    let shifted = a0 - excess;
    let mut coeffs = poly.coeffs().to_vec();
    coeffs[0] = shifted;
    GegenbauerPoly::new(poly.dim(), coeffs.iter().map(|a| a / shifted).collect())
}

/// Re-checks a certificate from its coefficients with the default grid.
pub fn verify_certificate(cert: &DgsCertificate) -> Result<VerificationReport, DgsError> {
    verify_certificate_with_grid(cert, DEFAULT_VERIFY_GRID)
}

/// Checks, in order: `a_0 > 0` and `a_k >= -1e-12`; `P(r) <= 1e-9 max(1, a_0)`
/// on `[-1, cos_theta]` by a scan of `grid_points` points plus golden-section
/// refinement around every local maximum; `bound_real = P(1)/a_0` and
/// `bound_int = floor(bound_real + 1e-9)`.
pub fn verify_certificate_with_grid(cert: &DgsCertificate, grid_points: usize) -> Result<VerificationReport, DgsError> {
    cert.check_structure()?;
    let poly = cert.poly();
    let a0 = cert.coeffs[0];
    let min_coefficient = cert.coeffs[1..].iter().copied().fold(f64::INFINITY, f64::min);

    let scan = search::scan_maxima(|r| poly.eval(r), -1.0, cert.cos_theta, grid_points.max(MIN_GRID_POINTS));
    let worst = scan.worst();
    let mut report = VerificationReport {
        passed: false,
        grid_size: scan.grid_size,
        max_sign_violation: worst.value,
        worst_location: worst.location,
        refinement_depth: scan.refinement_depth,
        min_coefficient,
        failure: None,
    };

    let failure = if !(a0 > COEFF_TOL) {
        Some(FailureReason::NonPositiveConstantTerm { value: a0 })
    } else if let Some((i, &v)) = cert.coeffs.iter().enumerate().skip(1).find(|(_, &v)| v < -COEFF_TOL) {
        Some(FailureReason::NegativeCoefficient { index: i, value: v })
    } else if worst.value > SIGN_TOL * a0.max(1.0) {
        Some(FailureReason::SignViolation { location: worst.location, value: worst.value })
    } else {
        let recomputed = cert.ratio();
        let recomputed_int = floor_bound(cert.bound_real);
        if (cert.bound_real - recomputed).abs() > 1e-9 * recomputed.abs().max(1.0) {
            Some(FailureReason::BoundMismatch { claimed: cert.bound_real, recomputed })
        } else if cert.bound_int != recomputed_int {
            Some(FailureReason::BoundIntMismatch { claimed: cert.bound_int, recomputed: recomputed_int })
        } else {
            None
        }
    };
    report.passed = failure.is_none();
    report.failure = failure;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Certified,
    NoCertificate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub degree: usize,
    pub bound_real: Option<f64>,
    pub status: RowStatus,
    pub certificate: Option<DgsCertificate>,
}

/// One [`lp_bound`] per degree on a shared grid; degrees are solved on
/// separate threads and reported in input order.
pub fn bound_table(dim: usize, cos_theta: f64, degrees: &[usize], grid_points: usize) -> Result<Vec<TableRow>, DgsError> {
    if degrees.windows(2).any(|w| w[0] >= w[1]) {
        return Err(DgsError::UnsortedDegrees);
    }
    let results: Vec<Result<LpBound, DgsError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = degrees
            .iter()
            .map(|&m| scope.spawn(move || lp_bound(dim, cos_theta, m, grid_points)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("bound worker panicked")).collect()
    });
    degrees
        .iter()
        .zip(results)
        .map(|(&degree, res)| {
            Ok(match res? {
                LpBound::Certified { certificate, .. } => TableRow {
                    degree,
                    bound_real: Some(certificate.bound_real),
                    status: RowStatus::Certified,
                    certificate: Some(certificate),
                },
                LpBound::NoCertificate { .. } => {
                    TableRow { degree, bound_real: None, status: RowStatus::NoCertificate, certificate: None }
                }
            })
        })
        .collect()
}
