//! The `codebound` command line. Exit codes: 0 success or verified, 1 for an
//! invalid code, an unverified or inapplicable certificate, or no
//! certificate, 2 for usage and input errors.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::codes::{self, Code, Family};
use crate::dgs::{self, DgsCertificate, LpBound, RowStatus};
use crate::gegenbauer::{self, GegenbauerBasis};
use crate::pfender::{self, PfenderCertificate, PfenderError, PhiSpec, Variant, Verdict};

/// `println!` that stops quietly when stdout is closed, as in `| head`.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

/// Seed used by randomized generators when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Parser)]
#[command(name = "codebound", version, about = "Upper bounds for spherical, functional and metric codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate or expand Gegenbauer polynomials.
    #[command(subcommand)]
    Gegenbauer(GegenbauerCmd),
    /// Compute and certify bounds.
    #[command(subcommand)]
    Bound(BoundCmd),
    /// Generate, verify and test codes.
    #[command(subcommand)]
    Code(CodeCmd),
}

#[derive(Debug, Subcommand)]
pub enum GegenbauerCmd {
    /// Print `G_k(r)`.
    Eval {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        degree: usize,
        #[arg(long, allow_hyphen_values = true)]
        at: f64,
    },
    /// Print the Gegenbauer coefficients of a polynomial given by its
    /// monomial coefficients, constant term first.
    Expand {
        #[arg(long)]
        dim: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        coeffs: Vec<f64>,
    },
    /// Print the monomial coefficients of `G_0..G_degree`.
    Table {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        degree: usize,
    },
}

#[derive(Debug, Clone, Copy, Args)]
#[group(required = true, multiple = false)]
pub struct Angle {
    #[arg(long, allow_hyphen_values = true)]
    pub cos_theta: Option<f64>,
    /// Angle in degrees; its cosine is rounded to 15 decimal places.
    #[arg(long, allow_hyphen_values = true)]
    pub theta_degrees: Option<f64>,
}

impl Angle {
    pub fn cos_theta(&self) -> f64 {
        match (self.cos_theta, self.theta_degrees) {
            (Some(c), _) => c,
            (None, Some(deg)) => round_decimals(deg.to_radians().cos(), 15),
            (None, None) => unreachable!("clap enforces one of the angle flags"),
        }
    }
}

fn round_decimals(x: f64, places: usize) -> f64 {
    format!("{x:.places$}").parse().expect("formatted float parses")
}

#[derive(Debug, Subcommand)]
pub enum BoundCmd {
    /// Delsarte linear programming bound.
    Lp {
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        angle: Angle,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 2000)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pfender bound for a supplied `phi`.
    Pfender {
        /// JSON file holding `phi`.
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        c: f64,
        #[command(flatten)]
        angle: Angle,
        /// Check condition (ii) only at the code's off-diagonal values.
        #[arg(long, requires = "code")]
        finite_set: bool,
        /// Check both conditions against this code instead of structurally.
        #[arg(long)]
        code: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Delsarte bounds for several degrees, computed in parallel.
    Table {
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        angle: Angle,
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<usize>,
        #[arg(long, default_value_t = 2000)]
        grid: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CodeForm {
    Spherical,
    Functional,
    Metric,
}

#[derive(Debug, Subcommand)]
pub enum CodeCmd {
    /// Write a catalog code, or a random l_p code with `--family random_lp`.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Representation of catalog codes.
        #[arg(long = "as", value_enum, default_value_t = CodeForm::Spherical)]
        form: CodeForm,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the code axioms.
    Verify {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        cos_theta: Option<f64>,
    },
    /// Test a Pfender (or Delsarte) certificate against a code.
    CheckTheorem {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

type Outcome = Result<i32, String>;

fn execute(command: Command) -> Outcome {
    match command {
        Command::Gegenbauer(cmd) => gegenbauer_cmd(cmd),
        Command::Bound(cmd) => bound_cmd(cmd),
        Command::Code(cmd) => code_cmd(cmd),
    }
}

fn err(e: impl Display) -> String {
    e.to_string()
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    serde_json::from_str(&read(path)?).map_err(|e| format!("cannot parse {}: {e}", path.display()))
}

fn write_out(path: Option<&Path>, json: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, format!("{json}\n")).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => Ok(()),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Rounds to nine decimals for display, so `5.000000000000001` prints as `5`.
pub fn tidy(x: f64) -> String {
    let r = (x * 1e9).round() / 1e9;
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

fn gegenbauer_cmd(cmd: GegenbauerCmd) -> Outcome {
    match cmd {
        GegenbauerCmd::Eval { dim, degree, at } => {
            out!("{}", gegenbauer::gegenbauer_eval(dim, degree, at).map_err(err)?);
        }
        GegenbauerCmd::Expand { dim, coeffs } => {
            let basis = GegenbauerBasis::new(dim, coeffs.len().saturating_sub(1)).map_err(err)?;
            let poly = basis.expand(&coeffs).map_err(err)?;
            for (k, a) in poly.coeffs().iter().enumerate() {
                out!("a_{k} = {a}");
            }
        }
        GegenbauerCmd::Table { dim, degree } => {
            let basis = GegenbauerBasis::new(dim, degree).map_err(err)?;
            for k in 0..=degree {
                let row: Vec<String> = basis.monomial_coeffs(k).iter().map(f64::to_string).collect();
                out!("G_{k}: {}", row.join(" "));
            }
        }
    }
    Ok(0)
}

fn bound_cmd(cmd: BoundCmd) -> Outcome {
    match cmd {
        BoundCmd::Lp { dim, angle, degree, grid, out } => {
            match dgs::lp_bound(dim, angle.cos_theta(), degree, grid).map_err(err)? {
                LpBound::Certified { certificate, .. } => {
                    write_out(out.as_deref(), &certificate.to_json())?;
                    let verified = certificate.verification.passed;
                    out!(
                        "bound_real={} bound_int={} verified={}",
                        certificate.bound_real,
                        certificate.bound_int,
                        yes_no(verified)
                    );
                    Ok(if verified { 0 } else { 1 })
                }
                LpBound::NoCertificate { degree } => {
                    out!("no certificate at degree {degree}");
                    Ok(1)
                }
            }
        }
        BoundCmd::Pfender { phi, c, angle, finite_set, code, out } => {
            let phi: PhiSpec = parse_json(&phi)?;
            let cos_theta = angle.cos_theta();
            match code {
                None => match pfender::pfender_bound(&phi, c, cos_theta) {
                    Ok(cert) => {
                        write_out(out.as_deref(), &cert.to_json())?;
                        out!("bound_real={} bound_int={} verified=yes", cert.bound_real, cert.bound_int);
                        Ok(0)
                    }
                    Err(e @ (PfenderError::NotACertificate { .. } | PfenderError::ConditionOneNotEstablished(_))) => {
                        eprintln!("{e}");
                        out!("bound_real={} verified=no", pfender::bound(&phi, c));
                        Ok(1)
                    }
                    Err(e) => Err(err(e)),
                },
                Some(path) => {
                    let code: Code = parse_json(&path)?;
                    let variant = if finite_set { Variant::FiniteSet } else { Variant::Interval };
                    let check = pfender::functional_pfender_check(&code, &phi, c, cos_theta, variant).map_err(err)?;
                    write_out(out.as_deref(), &check.certificate.to_json())?;
                    let cert = &check.certificate;
                    let holds = report_verdict(&check.verdict);
                    out!("bound_real={} bound_int={} verified={}", cert.bound_real, cert.bound_int, yes_no(holds));
                    Ok(if holds { 0 } else { 1 })
                }
            }
        }
        BoundCmd::Table { dim, angle, degrees, grid } => {
            let rows = dgs::bound_table(dim, angle.cos_theta(), &degrees, grid).map_err(err)?;
            for row in rows {
                match (row.status, row.certificate) {
                    (RowStatus::Certified, Some(cert)) => out!(
                        "degree={} bound_real={} bound_int={} verified={}",
                        row.degree,
                        cert.bound_real,
                        cert.bound_int,
                        yes_no(cert.verification.passed)
                    ),
                    _ => out!("degree={} no certificate", row.degree),
                }
            }
            Ok(0)
        }
    }
}

/// Prints the reason for anything but `Holds`; returns whether it held.
fn report_verdict(verdict: &Verdict) -> bool {
    match verdict {
        Verdict::Holds { .. } => true,
        Verdict::NotApplicable { reason } => {
            eprintln!("certificate not applicable to this code: {reason}");
            false
        }
        Verdict::TheoremViolation { n, bound } => {
            eprintln!("THEOREM VIOLATION: n = {n} exceeds bound {bound} with both conditions verified");
            false
        }
    }
}

fn code_cmd(cmd: CodeCmd) -> Outcome {
    match cmd {
        CodeCmd::Gen { family, dim, n, p, seed, form, out } => {
            let code: Code = if family.eq_ignore_ascii_case("random_lp") {
                let (Some(dim), Some(n), Some(p)) = (dim, n, p) else {
                    return Err("random_lp needs --dim, --n and --p".into());
                };
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                codes::random_lp_code(dim, n, p, &mut rng).map_err(err)?.into()
            } else {
                let family: Family = family.parse().map_err(err)?;
                let sph = codes::generate(family);
                match form {
                    CodeForm::Spherical => sph.into(),
                    CodeForm::Functional => codes::euclidean_to_functional(&sph).into(),
                    CodeForm::Metric => codes::embed_as_metric_code(&sph, &[]).map_err(err)?.into(),
                }
            };
            let json = code.to_json();
            match out {
                Some(path) => write_out(Some(&path), &json)?,
                None => out!("{json}"),
            }
            Ok(0)
        }
        CodeCmd::Verify { file, cos_theta } => {
            let code: Code = parse_json(&file)?;
            let report = codes::verify_at(&code, cos_theta.unwrap_or(code.cos_theta())).map_err(err)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            out!("valid={} n={} max_offdiag={}", yes_no(report.valid), report.n, report.max_offdiag);
            for failure in &report.axiom_failures {
                out!("{failure}");
            }
            Ok(if report.valid { 0 } else { 1 })
        }
        CodeCmd::CheckTheorem { file, cert } => {
            let code: Code = parse_json(&file)?;
            let cert = load_certificate(&cert)?;
            let check = pfender::functional_pfender_check(&code, &cert.phi, cert.c, cert.cos_theta, cert.variant)
                .map_err(err)?;
            let holds = report_verdict(&check.verdict);
            if let Verdict::Holds { n, bound, slack } = check.verdict {
                out!("n={n} bound={} slack={}", tidy(bound), tidy(slack));
            }
            Ok(if holds { 0 } else { 1 })
        }
    }
}

/// Reads a Pfender certificate, or a Delsarte certificate converted to one.
fn load_certificate(path: &Path) -> Result<PfenderCertificate, String> {
    let text = read(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))?;
    let parsed = match value.get("kind").and_then(|k| k.as_str()) {
        Some("dgs") => DgsCertificate::from_json(&text).map(|c| PfenderCertificate::from_dgs(&c)),
        _ => PfenderCertificate::from_json(&text),
    };
    parsed.map_err(|e| format!("cannot parse {}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_degrees_rounding() {
        let a = Angle { cos_theta: None, theta_degrees: Some(60.0) };
        assert_eq!(a.cos_theta(), 0.5);
        let a = Angle { cos_theta: None, theta_degrees: Some(90.0) };
        assert_eq!(a.cos_theta(), 0.0);
    }

    #[test]
    fn tidy_numbers() {
        assert_eq!(tidy(5.000000000000001), "5");
        assert_eq!(tidy(-1e-16), "0");
        assert_eq!(tidy(2.5), "2.5");
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["codebound", "gegenbauer", "eval", "--dim", "1", "--degree", "2", "--at", "0.5"]), 2);
        assert_eq!(run(["codebound", "bound", "lp", "--dim", "8"]), 2);
        assert_eq!(run(["codebound", "nonsense"]), 2);
    }
}
