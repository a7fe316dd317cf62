//! Pfender-type bounds: if `phi` has a nonnegative double sum over a code and
//! `phi(r) + c <= 0` wherever the code's off-diagonal values can lie, then
//! `n <= (phi(1) + c) / c`.
//!
//! [`pfender_bound`] establishes both conditions structurally for Euclidean
//! codes (nonnegative Gegenbauer coefficients give the double-sum condition
//! for every code). [`functional_pfender_check`] tests them against one
//! concrete spherical, functional or metric code and cross-checks the
//! resulting inequality.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codes::{self, AxiomFailure, Code, CodeError};
use crate::dgs::{floor_bound, DgsCertificate};
use crate::gegenbauer::{horner, GegenbauerBasis, GegenbauerError, GegenbauerPoly, MAX_DEGREE};
use crate::search;

/// Tolerance on `phi(r) + c <= 0`.
pub const SIGN_TOL: f64 = 1e-9;
/// Double sums down to `-1e-9 n^2` count as nonnegative.
pub const DOUBLE_SUM_TOL: f64 = 1e-9;
/// How far evaluation-matrix entries may stray outside `[-1, 1]`.
pub const RANGE_TOL: f64 = 1e-12;
/// Slack allowed on `n <= bound_real` before a violation is raised.
pub const THEOREM_TOL: f64 = 1e-9;
pub const DEFAULT_SCAN_POINTS: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PfenderError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cos_theta = {0} must lie in [-1, 1)")]
    CosTheta(f64),
    #[error("malformed phi: {0}")]
    Phi(String),
    #[error(transparent)]
    Gegenbauer(#[from] GegenbauerError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("condition (i) not established: {0}")]
    ConditionOneNotEstablished(String),
    #[error("not a certificate: phi(r) + c = {value:e} > 0 at r = {location}")]
    NotACertificate { location: f64, value: f64 },
    #[error("evaluation matrix entry ({j}, {k}) = {value} lies outside [-1, 1]")]
    OutOfRange { j: usize, k: usize, value: f64 },
    #[error("code fails its own axioms: {}", .0.join("; "))]
    InvalidCode(Vec<String>),
}

/// The function `phi` on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PhiJson", into = "PhiJson")]
pub enum PhiSpec {
    /// `sum_k a_k G_k^{(dim)}`.
    Gegenbauer(GegenbauerPoly),
    /// `sum_k c_k r^k`; a `dim` tag allows expansion in the Gegenbauer basis.
    Monomial { dim: Option<usize>, coeffs: Vec<f64> },
    /// Piecewise-linear interpolation of `values` at increasing `nodes`
    /// spanning `[-1, 1]`.
    Table { nodes: Vec<f64>, values: Vec<f64> },
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Basis {
    Gegenbauer,
    Monomial,
    Table,
}

#[derive(Serialize, Deserialize)]
struct PhiJson {
    basis: Basis,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    coeffs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nodes: Option<Vec<f64>>,
}

impl TryFrom<PhiJson> for PhiSpec {
    type Error = PfenderError;

    fn try_from(raw: PhiJson) -> Result<Self, Self::Error> {
        let phi = match raw.basis {
            Basis::Gegenbauer => {
                let dim = raw.dim.ok_or_else(|| PfenderError::Phi("gegenbauer basis needs `dim`".into()))?;
                PhiSpec::Gegenbauer(GegenbauerPoly::new(dim, raw.coeffs))
            }
            Basis::Monomial => PhiSpec::Monomial { dim: raw.dim, coeffs: raw.coeffs },
            Basis::Table => {
                let count = raw.coeffs.len();
                let nodes = match raw.nodes {
                    Some(nodes) => nodes,
                    None if count >= 2 => {
                        (0..count).map(|i| -1.0 + 2.0 * i as f64 / (count - 1) as f64).collect()
                    }
                    None => Vec::new(),
                };
                PhiSpec::Table { nodes, values: raw.coeffs }
            }
        };
        phi.validate()?;
        Ok(phi)
    }
}

impl From<PhiSpec> for PhiJson {
    fn from(phi: PhiSpec) -> Self {
        match phi {
            PhiSpec::Gegenbauer(p) => {
                PhiJson { basis: Basis::Gegenbauer, dim: Some(p.dim()), coeffs: p.into_coeffs(), nodes: None }
            }
            PhiSpec::Monomial { dim, coeffs } => PhiJson { basis: Basis::Monomial, dim, coeffs, nodes: None },
            PhiSpec::Table { nodes, values } => {
                PhiJson { basis: Basis::Table, dim: None, coeffs: values, nodes: Some(nodes) }
            }
        }
    }
}

impl PhiSpec {
    pub fn gegenbauer(dim: usize, coeffs: Vec<f64>) -> Self {
        PhiSpec::Gegenbauer(GegenbauerPoly::new(dim, coeffs))
    }

    pub fn monomial(coeffs: Vec<f64>) -> Self {
        PhiSpec::Monomial { dim: None, coeffs }
    }

    pub fn validate(&self) -> Result<(), PfenderError> {
        let finite = |v: &[f64], what: &str| match v.iter().position(|x| !x.is_finite()) {
            Some(i) => Err(PfenderError::Phi(format!("{what} {i} is not finite"))),
            None => Ok(()),
        };
        match self {
            PhiSpec::Gegenbauer(p) => {
                p.validate()?;
                if p.coeffs().is_empty() {
                    return Err(PfenderError::Phi("no coefficients".into()));
                }
            }
            PhiSpec::Monomial { dim, coeffs } => {
                finite(coeffs, "coefficient")?;
                if coeffs.is_empty() {
                    return Err(PfenderError::Phi("no coefficients".into()));
                }
                if let Some(d) = *dim {
                    if d < 2 {
                        return Err(GegenbauerError::DimensionTooSmall(d).into());
                    }
                }
            }
            PhiSpec::Table { nodes, values } => {
                finite(nodes, "node")?;
                finite(values, "value")?;
                if nodes.len() != values.len() || nodes.len() < 2 {
                    return Err(PfenderError::Phi(format!(
                        "table needs at least two nodes and one value per node ({} nodes, {} values)",
                        nodes.len(),
                        values.len()
                    )));
                }
                if nodes[0] != -1.0 || nodes[nodes.len() - 1] != 1.0 {
                    return Err(PfenderError::Phi("table nodes must start at -1 and end at 1".into()));
                }
                if nodes.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(PfenderError::Phi("table nodes must be strictly increasing".into()));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, r: f64) -> f64 {
        match self {
            PhiSpec::Gegenbauer(p) => p.eval(r),
            PhiSpec::Monomial { coeffs, .. } => horner(coeffs, r),
            PhiSpec::Table { nodes, values } => {
                let r = r.clamp(-1.0, 1.0);
                let i = nodes.partition_point(|&x| x <= r).clamp(1, nodes.len() - 1);
                let (x0, x1) = (nodes[i - 1], nodes[i]);
                let t = (r - x0) / (x1 - x0);
                values[i - 1] + t * (values[i] - values[i - 1])
            }
        }
    }

    pub fn at_one(&self) -> f64 {
        match self {
            PhiSpec::Gegenbauer(p) => p.at_one(),
            _ => self.eval(1.0),
        }
    }

    /// The Gegenbauer expansion, when one is available.
    pub fn gegenbauer_expansion(&self) -> Result<Option<GegenbauerPoly>, PfenderError> {
        Ok(match self {
            PhiSpec::Gegenbauer(p) => Some(p.clone()),
            PhiSpec::Monomial { dim: Some(d), coeffs } => {
                let degree = coeffs.len() - 1;
                if degree > MAX_DEGREE {
                    return Err(GegenbauerError::DegreeTooLarge { degree, max: MAX_DEGREE }.into());
                }
                Some(GegenbauerBasis::new(*d, degree)?.expand(coeffs)?)
            }
            _ => None,
        })
    }

    /// `lambda * phi`.
    pub fn scaled(&self, lambda: f64) -> Self {
        let scale = |v: &[f64]| v.iter().map(|x| x * lambda).collect::<Vec<_>>();
        match self {
            PhiSpec::Gegenbauer(p) => PhiSpec::Gegenbauer(p.scaled(lambda)),
            PhiSpec::Monomial { dim, coeffs } => PhiSpec::Monomial { dim: *dim, coeffs: scale(coeffs) },
            PhiSpec::Table { nodes, values } => PhiSpec::Table { nodes: nodes.clone(), values: scale(values) },
        }
    }
}

/// Which off-diagonal values condition (ii) must cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// All of `[-1, cos_theta]`.
    Interval,
    /// Only the values `f_j(tau_k)`, `j != k`, of one code.
    FiniteSet,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Interval => "interval",
            Variant::FiniteSet => "finite_set",
        })
    }
}

/// How the double-sum condition was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Nonnegative Gegenbauer coefficients; valid for every Euclidean code.
    Structural,
    /// Double sum computed on one code, condition (ii) on the interval.
    PerCode,
    /// Double sum and condition (ii) both on one code's values.
    FiniteSet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PfenderReport {
    pub mode: Mode,
    /// Smallest Gegenbauer coefficient (structural mode).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_gegenbauer_coeff: Option<f64>,
    /// The double sum over the code (per-code modes).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub double_sum: Option<f64>,
    /// Largest `phi(r) + c` found where condition (ii) applies.
    pub worst_margin: f64,
    pub worst_location: f64,
    pub points_checked: usize,
    /// Widest gap between nodes of a tabulated `phi`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_node_spacing: Option<f64>,
    /// `phi(1) + c <= 1`, in which case `n <= 1/c`.
    pub special_case: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename = "pfender")]
pub struct PfenderCertificate {
    pub variant: Variant,
    pub phi: PhiSpec,
    pub c: f64,
    pub cos_theta: f64,
    pub bound_real: f64,
    pub bound_int: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<PfenderReport>,
}

impl PfenderCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// The Delsarte polynomial `P` read as `phi = P/a_0 - 1`, `c = 1`, so
    /// that `(phi(1) + c)/c = P(1)/a_0`.
    pub fn from_dgs(cert: &DgsCertificate) -> Self {
        let a0 = cert.coeffs[0];
        let mut coeffs: Vec<f64> = cert.coeffs.iter().map(|a| a / a0).collect();
        coeffs[0] = 0.0;
        let phi = PhiSpec::gegenbauer(cert.dim, coeffs);
        let bound_real = bound(&phi, 1.0);
        PfenderCertificate {
            variant: Variant::Interval,
            phi,
            c: 1.0,
            cos_theta: cert.cos_theta,
            bound_real,
            bound_int: floor_bound(bound_real),
            verification: None,
        }
    }
}

/// `(phi(1) + c) / c`.
pub fn bound(phi: &PhiSpec, c: f64) -> f64 {
    (phi.at_one() + c) / c
}

fn check_c(c: f64) -> Result<(), PfenderError> {
    if c.is_finite() && c > 0.0 {
        Ok(())
    } else {
        Err(PfenderError::Domain(format!("c = {c} must be positive")))
    }
}

fn check_cos_theta(cos_theta: f64) -> Result<(), PfenderError> {
    if (-1.0..1.0).contains(&cos_theta) {
        Ok(())
    } else {
        Err(PfenderError::CosTheta(cos_theta))
    }
}

struct Margin {
    worst: f64,
    location: f64,
    points: usize,
}

/// Largest `phi(r) + c` over `[-1, cos_theta]`. A tabulated `phi` is
/// piecewise linear, so its nodes and the right endpoint suffice.
fn interval_margin(phi: &PhiSpec, c: f64, cos_theta: f64) -> Margin {
    match phi {
        PhiSpec::Table { nodes, .. } => {
            let mut points: Vec<f64> = nodes.iter().copied().filter(|&x| x <= cos_theta).collect();
            points.push(cos_theta);
            let (location, worst) = points
                .iter()
                .map(|&r| (r, phi.eval(r) + c))
                .fold((cos_theta, f64::NEG_INFINITY), |acc, p| if p.1 > acc.1 { p } else { acc });
            Margin { worst, location, points: points.len() }
        }
        _ => {
            let scan = search::scan_maxima(|r| phi.eval(r) + c, -1.0, cos_theta, DEFAULT_SCAN_POINTS);
            let w = scan.worst();
            Margin { worst: w.value, location: w.location, points: scan.grid_size }
        }
    }
}

fn node_spacing(phi: &PhiSpec) -> Option<f64> {
    match phi {
        PhiSpec::Table { nodes, .. } => nodes.windows(2).map(|w| w[1] - w[0]).reduce(f64::max),
        _ => None,
    }
}

/// Structural Pfender bound for Euclidean codes: condition (i) from
/// nonnegative Gegenbauer coefficients, condition (ii) from a refined scan of
/// `phi + c` over `[-1, cos_theta]`.
pub fn pfender_bound(phi: &PhiSpec, c: f64, cos_theta: f64) -> Result<PfenderCertificate, PfenderError> {
    check_c(c)?;
    check_cos_theta(cos_theta)?;
    phi.validate()?;

    let expansion = phi.gegenbauer_expansion()?.ok_or_else(|| {
        PfenderError::ConditionOneNotEstablished("phi has no dimension-tagged Gegenbauer expansion".into())
    })?;
    let coeffs = expansion.coeffs();
    if let Some((k, &a)) = coeffs.iter().enumerate().find(|(_, &a)| a < -crate::dgs::COEFF_TOL) {
        return Err(PfenderError::ConditionOneNotEstablished(format!("negative Gegenbauer coefficient a_{k} = {a}")));
    }
    let min_coeff = coeffs.iter().copied().fold(f64::INFINITY, f64::min);

    let margin = interval_margin(phi, c, cos_theta);
    if margin.worst > SIGN_TOL {
        return Err(PfenderError::NotACertificate { location: margin.location, value: margin.worst });
    }

    let bound_real = bound(phi, c);
    Ok(PfenderCertificate {
        variant: Variant::Interval,
        phi: phi.clone(),
        c,
        cos_theta,
        bound_real,
        bound_int: floor_bound(bound_real),
        verification: Some(PfenderReport {
            mode: Mode::Structural,
            min_gegenbauer_coeff: Some(min_coeff),
            double_sum: None,
            worst_margin: margin.worst,
            worst_location: margin.location,
            points_checked: margin.points,
            max_node_spacing: None,
            special_case: phi.at_one() + c <= 1.0,
        }),
    })
}

/// `sum_{j,k} phi(M[j][k])`, diagonal included.
pub fn double_sum(phi: &PhiSpec, matrix: &[Vec<f64>]) -> Result<f64, PfenderError> {
    let mut total = 0.0;
    let mut comp = 0.0;
    for (j, row) in matrix.iter().enumerate() {
        for (k, &m) in row.iter().enumerate() {
            if !(m.abs() <= 1.0 + RANGE_TOL) {
                return Err(PfenderError::OutOfRange { j, k, value: m });
            }
            // Neumaier summation: n^2 terms of mixed sign.
            let v = phi.eval(m.clamp(-1.0, 1.0));
            let t = total + v;
            comp += if total.abs() >= v.abs() { (total - t) + v } else { (v - t) + total };
            total = t;
        }
    }
    Ok(total + comp)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// Both conditions hold and `n <= bound_real`.
    Holds { n: usize, bound: f64, slack: f64 },
    /// The certificate does not apply to this code.
    NotApplicable { reason: String },
    /// Both conditions hold yet `n > bound_real`: a numerical or logical
    /// fault somewhere, never expected.
    TheoremViolation { n: usize, bound: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremCheck {
    pub verdict: Verdict,
    pub certificate: PfenderCertificate,
}

/// Checks `phi`, `c` against one code and asserts the resulting bound.
///
/// The code must satisfy its own axioms at its declared `cos_theta`. In the
/// interval variant the certificate applies only when the code's coherence
/// is at most the certificate's `cos_theta`; the finite-set variant ignores
/// `cos_theta` and tests condition (ii) at the code's off-diagonal values.
pub fn functional_pfender_check(
    code: &Code,
    phi: &PhiSpec,
    c: f64,
    cos_theta: f64,
    variant: Variant,
) -> Result<TheoremCheck, PfenderError> {
    check_c(c)?;
    check_cos_theta(cos_theta)?;
    phi.validate()?;

    let report = codes::verify(code)?;
    if !report.valid {
        return Err(PfenderError::InvalidCode(report.axiom_failures.iter().map(AxiomFailure::to_string).collect()));
    }
    let n = code.len();
    let matrix = code.evaluation_matrix()?;
    let sum = double_sum(phi, &matrix)?;

    let margin = match variant {
        Variant::Interval => interval_margin(phi, c, cos_theta),
        Variant::FiniteSet => {
            let mut m = Margin { worst: f64::NEG_INFINITY, location: f64::NAN, points: 0 };
            for (j, row) in matrix.iter().enumerate() {
                for (k, &v) in row.iter().enumerate() {
                    if j != k {
                        m.points += 1;
                        let value = phi.eval(v) + c;
                        if value > m.worst {
                            m.worst = value;
                            m.location = v;
                        }
                    }
                }
            }
            m
        }
    };

    let bound_real = bound(phi, c);
    let certificate = PfenderCertificate {
        variant,
        phi: phi.clone(),
        c,
        cos_theta,
        bound_real,
        bound_int: floor_bound(bound_real),
        verification: Some(PfenderReport {
            mode: match variant {
                Variant::Interval => Mode::PerCode,
                Variant::FiniteSet => Mode::FiniteSet,
            },
            min_gegenbauer_coeff: None,
            double_sum: Some(sum),
            worst_margin: margin.worst,
            worst_location: margin.location,
            points_checked: margin.points,
            max_node_spacing: node_spacing(phi),
            special_case: phi.at_one() + c <= 1.0,
        }),
    };

    let nf = n as f64;
    let verdict = if variant == Variant::Interval && report.max_offdiag > cos_theta + codes::AXIOM_TOL {
        Verdict::NotApplicable {
            reason: format!("code coherence {} exceeds certificate cos_theta {}", report.max_offdiag, cos_theta),
        }
    } else if sum < -DOUBLE_SUM_TOL * nf * nf {
        Verdict::NotApplicable { reason: format!("condition (i) fails: double sum = {sum:e}") }
    } else if margin.worst > SIGN_TOL {
        Verdict::NotApplicable {
            reason: format!("condition (ii) fails: phi(r) + c = {:e} at r = {}", margin.worst, margin.location),
        }
    } else if nf > bound_real + THEOREM_TOL {
        Verdict::TheoremViolation { n, bound: bound_real }
    } else {
        Verdict::Holds { n, bound: bound_real, slack: bound_real - nf }
    };
    Ok(TheoremCheck { verdict, certificate })
}
