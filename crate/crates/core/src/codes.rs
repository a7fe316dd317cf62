//! Spherical, functional and metric codes.
//!
//! All three share one shape: functionals `f_j` and points `tau_j` with
//!
//! 1. `||f_j|| = 1`
//! 2. `||tau_j|| = 1` (for metric codes: `m(tau_j, 0) = 1`)
//! 3. `f_j(tau_j) = 1`
//! 4. `f_j(tau_k) <= cos_theta` for `j != k`
//!
//! A spherical code is the Euclidean case `f_j = <., tau_j>`; a functional
//! code lives in `l_p^d` with `f_j` in the dual `l_q^d`; a metric code lives
//! in a finite pointed metric space with `f_j` Lipschitz functions vanishing
//! at the base point, normed by their Lipschitz constant.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance for unit norms, self-evaluations and the separation condition.
pub const AXIOM_TOL: f64 = 1e-12;
/// Tolerance for Lipschitz norms of metric-code functions.
pub const LIPSCHITZ_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CodeError {
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("malformed code: {0}")]
    Shape(String),
    #[error("non-smooth norm (p = {0}): supply the functional explicitly")]
    NonSmoothNorm(f64),
    #[error("vector has l_{p} norm {norm}, expected 1")]
    NotUnit { p: f64, norm: f64 },
    #[error("unknown code family `{0}`")]
    UnknownFamily(String),
    #[error("Lipschitz norm of f_{index} on the finite point set is {norm} < 1; add witness points")]
    NeedWitnessPoints { index: usize, norm: f64 },
}

/// An exponent `p` in `[1, inf]`; `inf` is written as the string `"inf"` in JSON.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent(pub f64);

impl Exponent {
    pub const INFINITY: Exponent = Exponent(f64::INFINITY);

    /// The conjugate exponent `q` with `1/p + 1/q = 1`.
    pub fn dual(self) -> Exponent {
        let p = self.0;
        if p == 1.0 {
            Exponent(f64::INFINITY)
        } else if p.is_infinite() {
            Exponent(1.0)
        } else {
            Exponent(p / (p - 1.0))
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(p) => Ok(Exponent(p)),
            Raw::Text(t) if matches!(t.as_str(), "inf" | "infinity" | "Infinity") => Ok(Exponent::INFINITY),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("invalid exponent `{t}`"))),
        }
    }
}

/// `||x||_p`, with `p = inf` the max norm.
pub fn lp_norm(x: &[f64], p: Exponent) -> f64 {
    let p = p.0;
    if p.is_infinite() {
        x.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    } else if p == 1.0 {
        x.iter().map(|v| v.abs()).sum()
    } else if p == 2.0 {
        x.iter().map(|v| v * v).sum::<f64>().sqrt()
    } else {
        x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The unique norming functional of a unit vector of `l_p`, `1 < p < inf`:
/// `f_i = sign(x_i) |x_i|^(p-1)`. For `p = 2` this is `x` itself.
pub fn norming_functional(x: &[f64], p: f64) -> Result<Vec<f64>, CodeError> {
    if !(p > 1.0) || p.is_infinite() {
        return Err(CodeError::NonSmoothNorm(p));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(CodeError::NonFinite("vector".into()));
    }
    let norm = lp_norm(x, Exponent(p));
    if (norm - 1.0).abs() > AXIOM_TOL {
        return Err(CodeError::NotUnit { p, norm });
    }
    Ok(x.iter().map(|&v| v.signum() * v.abs().powf(p - 1.0)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalCode {
    pub dim: usize,
    pub cos_theta: f64,
    pub vectors: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Space {
    Lp { p: Exponent, dim: usize },
}

impl Space {
    pub fn dim(&self) -> usize {
        match self {
            Space::Lp { dim, .. } => *dim,
        }
    }

    pub fn exponent(&self) -> Exponent {
        match self {
            Space::Lp { p, .. } => *p,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalCode {
    pub space: Space,
    pub points: Vec<Vec<f64>>,
    pub functionals: Vec<Vec<f64>>,
    pub cos_theta: f64,
}

/// A code in a finite pointed metric space. Points of the space are indexed
/// `0..distance.len()`; `functions[j][x]` is `f_j` at point `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricCode {
    pub distance: Vec<Vec<f64>>,
    #[serde(default)]
    pub base: usize,
    pub point_indices: Vec<usize>,
    pub functions: Vec<Vec<f64>>,
    pub cos_theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Code {
    Spherical(SphericalCode),
    Functional(FunctionalCode),
    Metric(MetricCode),
}

impl From<SphericalCode> for Code {
    fn from(c: SphericalCode) -> Self {
        Code::Spherical(c)
    }
}

impl From<FunctionalCode> for Code {
    fn from(c: FunctionalCode) -> Self {
        Code::Functional(c)
    }
}

impl From<MetricCode> for Code {
    fn from(c: MetricCode) -> Self {
        Code::Metric(c)
    }
}

impl Code {
    /// Number of codewords `n`.
    pub fn len(&self) -> usize {
        match self {
            Code::Spherical(c) => c.vectors.len(),
            Code::Functional(c) => c.points.len(),
            Code::Metric(c) => c.point_indices.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cos_theta(&self) -> f64 {
        match self {
            Code::Spherical(c) => c.cos_theta,
            Code::Functional(c) => c.cos_theta,
            Code::Metric(c) => c.cos_theta,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Code::Spherical(_) => "spherical",
            Code::Functional(_) => "functional",
            Code::Metric(_) => "metric",
        }
    }

    /// `M[j][k] = f_j(tau_k)`. For spherical codes this is the Gram matrix.
    pub fn evaluation_matrix(&self) -> Result<Vec<Vec<f64>>, CodeError> {
        self.check_shape()?;
        Ok(match self {
            Code::Spherical(c) => c.vectors.iter().map(|a| c.vectors.iter().map(|b| dot(a, b)).collect()).collect(),
            Code::Functional(c) => {
                c.functionals.iter().map(|f| c.points.iter().map(|t| dot(f, t)).collect()).collect()
            }
            Code::Metric(c) => c
                .functions
                .iter()
                .map(|f| c.point_indices.iter().map(|&k| f[k]).collect())
                .collect(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("code serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    fn check_shape(&self) -> Result<(), CodeError> {
        let finite = |rows: &[Vec<f64>], what: &str| -> Result<(), CodeError> {
            if rows.iter().flatten().any(|v| !v.is_finite()) {
                Err(CodeError::NonFinite(what.into()))
            } else {
                Ok(())
            }
        };
        let lengths = |rows: &[Vec<f64>], len: usize, what: &str| -> Result<(), CodeError> {
            match rows.iter().position(|r| r.len() != len) {
                Some(i) => Err(CodeError::Shape(format!("{what} {i} has length {}, expected {len}", rows[i].len()))),
                None => Ok(()),
            }
        };
        if self.cos_theta().is_nan() {
            return Err(CodeError::NonFinite("cos_theta".into()));
        }
        match self {
            Code::Spherical(c) => {
                finite(&c.vectors, "vectors")?;
                lengths(&c.vectors, c.dim, "vector")?;
            }
            Code::Functional(c) => {
                finite(&c.points, "points")?;
                finite(&c.functionals, "functionals")?;
                let d = c.space.dim();
                lengths(&c.points, d, "point")?;
                lengths(&c.functionals, d, "functional")?;
                if c.points.len() != c.functionals.len() {
                    return Err(CodeError::Shape(format!(
                        "{} points but {} functionals",
                        c.points.len(),
                        c.functionals.len()
                    )));
                }
                if !(c.space.exponent().0 >= 1.0) {
                    return Err(CodeError::Shape(format!("exponent p = {} is below 1", c.space.exponent().0)));
                }
            }
            Code::Metric(c) => {
                finite(&c.distance, "distance")?;
                finite(&c.functions, "functions")?;
                let size = c.distance.len();
                lengths(&c.distance, size, "distance row")?;
                lengths(&c.functions, size, "function")?;
                if c.base >= size {
                    return Err(CodeError::Shape(format!("base index {} out of range", c.base)));
                }
                if let Some(&k) = c.point_indices.iter().find(|&&k| k >= size) {
                    return Err(CodeError::Shape(format!("point index {k} out of range")));
                }
                if c.point_indices.len() != c.functions.len() {
                    return Err(CodeError::Shape(format!(
                        "{} points but {} functions",
                        c.point_indices.len(),
                        c.functions.len()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A broken axiom, numbered as in the code definitions (see module docs).
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum AxiomFailure {
    /// (i) `||f_j|| != 1` (Lipschitz norm for metric codes).
    FunctionalNorm { j: usize, norm: f64 },
    /// (ii) `||tau_j|| != 1` (`m(tau_j, 0) != 1` for metric codes).
    PointNorm { j: usize, norm: f64 },
    /// (iii) `f_j(tau_j) != 1`.
    SelfValue { j: usize, value: f64 },
    /// (iv) `f_j(tau_k) > cos_theta`.
    Separation { j: usize, k: usize, value: f64 },
    /// `f_j` does not vanish at the base point.
    BaseValue { j: usize, value: f64 },
    /// The distance table is not a metric.
    NotAMetric { detail: String },
}

impl AxiomFailure {
    pub fn axiom(&self) -> &'static str {
        match self {
            Self::FunctionalNorm { .. } => "(i)",
            Self::PointNorm { .. } => "(ii)",
            Self::SelfValue { .. } => "(iii)",
            Self::Separation { .. } => "(iv)",
            Self::BaseValue { .. } => "Lip0",
            Self::NotAMetric { .. } => "metric",
        }
    }
}

impl fmt::Display for AxiomFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "axiom {}: ", self.axiom())?;
        match self {
            Self::FunctionalNorm { j, norm } => write!(f, "||f_{j}|| = {norm}, expected 1"),
            Self::PointNorm { j, norm } => write!(f, "||tau_{j}|| = {norm}, expected 1"),
            Self::SelfValue { j, value } => write!(f, "f_{j}(tau_{j}) = {value}, expected 1"),
            Self::Separation { j, k, value } => write!(f, "f_{j}(tau_{k}) = {value} exceeds cos_theta"),
            Self::BaseValue { j, value } => write!(f, "f_{j}(base) = {value}, expected 0"),
            Self::NotAMetric { detail } => write!(f, "{detail}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CodeReport {
    pub valid: bool,
    pub n: usize,
    pub cos_theta: f64,
    /// Coherence `max_{j != k} f_j(tau_k)`; `-inf` when `n < 2`.
    pub max_offdiag: f64,
    pub worst_pair: Option<(usize, usize)>,
    pub axiom_failures: Vec<AxiomFailure>,
    /// Non-fatal observations, such as repeated codewords.
    pub warnings: Vec<String>,
}

/// Checks every axiom at the code's declared `cos_theta`.
pub fn verify(code: &Code) -> Result<CodeReport, CodeError> {
    verify_at(code, code.cos_theta())
}

/// Checks every axiom with the separation condition taken at `cos_theta`.
pub fn verify_at(code: &Code, cos_theta: f64) -> Result<CodeReport, CodeError> {
    if cos_theta.is_nan() {
        return Err(CodeError::NonFinite("cos_theta".into()));
    }
    let matrix = code.evaluation_matrix()?;
    let n = code.len();
    let mut failures = Vec::new();
    let mut warnings = Vec::new();

    match code {
        Code::Spherical(c) => {
            for (j, v) in c.vectors.iter().enumerate() {
                let norm = lp_norm(v, Exponent(2.0));
                if (norm - 1.0).abs() > AXIOM_TOL {
                    failures.push(AxiomFailure::PointNorm { j, norm });
                }
            }
            push_duplicates(&c.vectors, &mut warnings);
        }
        Code::Functional(c) => {
            let p = c.space.exponent();
            let q = p.dual();
            for j in 0..n {
                let norm = lp_norm(&c.functionals[j], q);
                if (norm - 1.0).abs() > AXIOM_TOL {
                    failures.push(AxiomFailure::FunctionalNorm { j, norm });
                }
                let norm = lp_norm(&c.points[j], p);
                if (norm - 1.0).abs() > AXIOM_TOL {
                    failures.push(AxiomFailure::PointNorm { j, norm });
                }
                if (matrix[j][j] - 1.0).abs() > AXIOM_TOL {
                    failures.push(AxiomFailure::SelfValue { j, value: matrix[j][j] });
                }
            }
            push_duplicates(&c.points, &mut warnings);
        }
        Code::Metric(c) => {
            failures.extend(metric_failures(&c.distance));
            for (j, f) in c.functions.iter().enumerate() {
                let norm = lipschitz_norm(&c.distance, f);
                if (norm - 1.0).abs() > LIPSCHITZ_TOL {
                    failures.push(AxiomFailure::FunctionalNorm { j, norm });
                }
                if f[c.base].abs() > AXIOM_TOL {
                    failures.push(AxiomFailure::BaseValue { j, value: f[c.base] });
                }
                let dist = c.distance[c.point_indices[j]][c.base];
                if (dist - 1.0).abs() > AXIOM_TOL {
                    failures.push(AxiomFailure::PointNorm { j, norm: dist });
                }
                if (matrix[j][j] - 1.0).abs() > AXIOM_TOL {
                    failures.push(AxiomFailure::SelfValue { j, value: matrix[j][j] });
                }
            }
            let mut seen = std::collections::HashSet::new();
            for &k in &c.point_indices {
                if !seen.insert(k) {
                    warnings.push(format!("space point {k} is used by more than one codeword"));
                }
            }
        }
    }

    let mut max_offdiag = f64::NEG_INFINITY;
    let mut worst_pair = None;
    for (j, row) in matrix.iter().enumerate() {
        for (k, &v) in row.iter().enumerate() {
            if j == k {
                continue;
            }
            if v > max_offdiag {
                max_offdiag = v;
                worst_pair = Some((j, k));
            }
            if v > cos_theta + AXIOM_TOL {
                failures.push(AxiomFailure::Separation { j, k, value: v });
            }
        }
    }

    Ok(CodeReport { valid: failures.is_empty(), n, cos_theta, max_offdiag, worst_pair, axiom_failures: failures, warnings })
}

fn push_duplicates(rows: &[Vec<f64>], warnings: &mut Vec<String>) {
    for j in 0..rows.len() {
        for k in j + 1..rows.len() {
            if rows[j] == rows[k] {
                warnings.push(format!("codewords {j} and {k} coincide"));
            }
        }
    }
}

fn metric_failures(distance: &[Vec<f64>]) -> Vec<AxiomFailure> {
    let n = distance.len();
    let mut out = Vec::new();
    for x in 0..n {
        if distance[x][x] != 0.0 {
            out.push(AxiomFailure::NotAMetric { detail: format!("m({x}, {x}) = {}", distance[x][x]) });
        }
        for y in 0..n {
            if x == y {
                continue;
            }
            let dxy = distance[x][y];
            if !(dxy > 0.0) {
                out.push(AxiomFailure::NotAMetric { detail: format!("m({x}, {y}) = {dxy} is not positive") });
            }
            if (dxy - distance[y][x]).abs() > AXIOM_TOL {
                out.push(AxiomFailure::NotAMetric { detail: format!("m({x}, {y}) != m({y}, {x})") });
            }
            for z in 0..n {
                if distance[x][z] > dxy + distance[y][z] + AXIOM_TOL {
                    out.push(AxiomFailure::NotAMetric { detail: format!("triangle inequality fails for ({x}, {y}, {z})") });
                }
            }
        }
    }
    out
}

/// `max_{x != y} |f(x) - f(y)| / m(x, y)` over a finite metric space.
pub fn lipschitz_norm(distance: &[Vec<f64>], values: &[f64]) -> f64 {
    let mut best: f64 = 0.0;
    for x in 0..values.len() {
        for y in x + 1..values.len() {
            let d = distance[x][y];
            if d > 0.0 {
                best = best.max((values[x] - values[y]).abs() / d);
            }
        }
    }
    best
}

/// The Euclidean code as a functional code in `l_2^d` with `f_j = tau_j`.
pub fn euclidean_to_functional(code: &SphericalCode) -> FunctionalCode {
    FunctionalCode {
        space: Space::Lp { p: Exponent(2.0), dim: code.dim },
        points: code.vectors.clone(),
        functionals: code.vectors.clone(),
        cos_theta: code.cos_theta,
    }
}

/// Embeds a spherical code as a metric code on `{0} + {tau_j} + witnesses`
/// with Euclidean distances and `f_j(x) = <x, tau_j>`.
pub fn embed_as_metric_code(code: &SphericalCode, witnesses: &[Vec<f64>]) -> Result<MetricCode, CodeError> {
    Code::Spherical(code.clone()).check_shape()?;
    if let Some(w) = witnesses.iter().find(|w| w.len() != code.dim) {
        return Err(CodeError::Shape(format!("witness point has length {}, expected {}", w.len(), code.dim)));
    }
    let mut points = vec![vec![0.0; code.dim]];
    points.extend(code.vectors.iter().cloned());
    points.extend(witnesses.iter().cloned());
    let distance: Vec<Vec<f64>> = points
        .iter()
        .map(|a| points.iter().map(|b| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()).collect())
        .collect();
    let functions: Vec<Vec<f64>> = code.vectors.iter().map(|t| points.iter().map(|x| dot(x, t)).collect()).collect();
    for (j, f) in functions.iter().enumerate() {
        let norm = lipschitz_norm(&distance, f);
        if norm < 1.0 - LIPSCHITZ_TOL {
            return Err(CodeError::NeedWitnessPoints { index: j, norm });
        }
    }
    Ok(MetricCode {
        distance,
        base: 0,
        point_indices: (1..=code.vectors.len()).collect(),
        functions,
        cos_theta: code.cos_theta,
    })
}

/// The generator catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `d + 1` vertices of the regular simplex in `R^d`.
    Simplex(usize),
    /// The standard basis of `R^d`.
    Orthonormal(usize),
    /// `+-e_i` in `R^d`.
    CrossPolytope(usize),
    Icosahedron,
    /// The 24 roots of D4, scaled to unit length.
    D4Roots,
    /// The 240 roots of E8, scaled to unit length.
    E8Roots,
}

impl Family {
    pub fn dim(&self) -> usize {
        match *self {
            Family::Simplex(d) | Family::Orthonormal(d) | Family::CrossPolytope(d) => d,
            Family::Icosahedron => 3,
            Family::D4Roots => 4,
            Family::E8Roots => 8,
        }
    }

    pub fn canonical_cos_theta(&self) -> f64 {
        match *self {
            Family::Simplex(d) => -1.0 / d as f64,
            Family::Orthonormal(_) | Family::CrossPolytope(_) => 0.0,
            Family::Icosahedron => 1.0 / 5f64.sqrt(),
            Family::D4Roots | Family::E8Roots => 0.5,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Simplex(d) => write!(f, "simplex({d})"),
            Family::Orthonormal(d) => write!(f, "orthonormal({d})"),
            Family::CrossPolytope(d) => write!(f, "cross_polytope({d})"),
            Family::Icosahedron => f.write_str("icosahedron"),
            Family::D4Roots => f.write_str("d4_roots"),
            Family::E8Roots => f.write_str("e8_roots"),
        }
    }
}

impl FromStr for Family {
    type Err = CodeError;

    /// Accepts `icosahedron`, `d4_roots`, `e8_roots`, and `simplex(d)`,
    /// `orthonormal(d)`, `cross_polytope(d)` (also written `name:d`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || CodeError::UnknownFamily(s.to_string());
        let s = s.trim();
        let (name, arg) = match s.find(['(', ':']) {
            Some(i) => {
                let rest = s[i + 1..].trim_end_matches(')');
                (&s[..i], Some(rest.trim().parse::<usize>().map_err(|_| unknown())?))
            }
            None => (s, None),
        };
        let name = name.trim().to_ascii_lowercase().replace('-', "_");
        match (name.as_str(), arg) {
            ("simplex", Some(d)) if d >= 1 => Ok(Family::Simplex(d)),
            ("orthonormal", Some(d)) if d >= 1 => Ok(Family::Orthonormal(d)),
            ("cross_polytope", Some(d)) if d >= 1 => Ok(Family::CrossPolytope(d)),
            ("icosahedron", None) => Ok(Family::Icosahedron),
            ("d4_roots" | "d4", None) => Ok(Family::D4Roots),
            ("e8_roots" | "e8", None) => Ok(Family::E8Roots),
            _ => Err(unknown()),
        }
    }
}

fn normalized(v: Vec<f64>) -> Vec<f64> {
    let norm = lp_norm(&v, Exponent(2.0));
    v.into_iter().map(|x| x / norm).collect()
}

/// Builds a catalog code, declared at its family's canonical `cos_theta`.
pub fn generate(family: Family) -> SphericalCode {
    let vectors: Vec<Vec<f64>> = match family {
        Family::Simplex(d) => {
            // e_1..e_d together with t(1,..,1), t = (1 - sqrt(d + 1)) / d, are
            // pairwise at distance sqrt(2); centre and normalize.
            let df = d as f64;
            let t = (1.0 - (df + 1.0).sqrt()) / df;
            let centre = (1.0 + t) / (df + 1.0);
            let mut out: Vec<Vec<f64>> = (0..d)
                .map(|i| (0..d).map(|j| if i == j { 1.0 - centre } else { -centre }).collect())
                .collect();
            out.push(vec![t - centre; d]);
            out.into_iter().map(normalized).collect()
        }
        Family::Orthonormal(d) => (0..d).map(|i| (0..d).map(|j| f64::from(u8::from(i == j))).collect()).collect(),
        Family::CrossPolytope(d) => (0..d)
            .flat_map(|i| {
                [1.0, -1.0].map(|s| (0..d).map(|j| if i == j { s } else { 0.0 }).collect::<Vec<f64>>())
            })
            .collect(),
        Family::Icosahedron => {
            let phi = (1.0 + 5f64.sqrt()) / 2.0;
            let mut out = Vec::new();
            for s1 in [1.0, -1.0] {
                for s2 in [1.0, -1.0] {
                    let (a, b) = (s1, s2 * phi);
                    out.push(vec![0.0, a, b]);
                    out.push(vec![a, b, 0.0]);
                    out.push(vec![b, 0.0, a]);
                }
            }
            out.into_iter().map(normalized).collect()
        }
        Family::D4Roots => pair_roots(4),
        Family::E8Roots => {
            let mut out = pair_roots(8);
            let h = 0.5 / std::f64::consts::SQRT_2;
            for mask in 0u32..256 {
                if mask.count_ones() % 2 == 0 {
                    out.push((0..8).map(|i| if mask & (1 << i) != 0 { -h } else { h }).collect());
                }
            }
            out
        }
    };
    SphericalCode { dim: family.dim(), cos_theta: family.canonical_cos_theta(), vectors }
}

/// `(+-1, +-1, 0, ..., 0)` in every coordinate pair, divided by `sqrt(2)`.
fn pair_roots(dim: usize) -> Vec<Vec<f64>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            for (a, b) in [(s, s), (s, -s), (-s, s), (-s, -s)] {
                let mut v = vec![0.0; dim];
                v[i] = a;
                v[j] = b;
                out.push(v);
            }
        }
    }
    out
}

/// `n` random unit vectors of `l_p^dim` paired with their norming
/// functionals, declared at their own coherence. Requires `1 < p < inf`.
pub fn random_lp_code<R: Rng + ?Sized>(dim: usize, n: usize, p: f64, rng: &mut R) -> Result<FunctionalCode, CodeError> {
    if !(p > 1.0) || p.is_infinite() {
        return Err(CodeError::NonSmoothNorm(p));
    }
    if dim == 0 {
        return Err(CodeError::Shape("dimension must be positive".into()));
    }
    let exponent = Exponent(p);
    let mut points = Vec::with_capacity(n);
    let mut functionals = Vec::with_capacity(n);
    while points.len() < n {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let norm = lp_norm(&v, exponent);
        if norm < 1e-6 {
            continue;
        }
        let x: Vec<f64> = v.iter().map(|c| c / norm).collect();
        let Ok(f) = norming_functional(&x, p) else { continue };
        points.push(x);
        functionals.push(f);
    }
    let mut code = FunctionalCode { space: Space::Lp { p: exponent, dim }, points, functionals, cos_theta: 1.0 };
    let coherence = verify(&Code::Functional(code.clone()))?.max_offdiag;
    code.cos_theta = coherence.max(-1.0);
    Ok(code)
}
