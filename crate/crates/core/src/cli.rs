//! Command-line front end. Exit codes: 0 success, 1 input or solver
//! error, 2 certificate failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::diagnostics::{certify_parts, CertificateReport};
use crate::distributions::TrueDistribution;
use crate::error::{Error, Result};
use crate::pmf::{EmpiricalPmf, Pmf, TriangularMixture};
use crate::sim::{campaign_to_json, format_float, rows_to_csv, run_campaign, ExperimentSpec, Functional};
use crate::solver::{fit, FitResult, SolverConfig, TraceRecord};
use crate::tolerances::CertifyTolerances;

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_CERTIFICATE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "convexpmf", version, about = "Least-squares estimation of a convex discrete distribution")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    /// One nonnegative integer per line.
    Raw,
    /// CSV rows `value,count`.
    Counts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FitOutput {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit the convex least-squares estimator to a data file.
    Fit {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "raw")]
        format: InputFormat,
        #[arg(long, default_value_t = SolverConfig::default().d_tol)]
        d_tol: f64,
        #[arg(long, default_value_t = SolverConfig::default().mass_tol)]
        mass_tol: f64,
        #[arg(long, default_value_t = SolverConfig::default().max_outer)]
        max_outer: usize,
        #[arg(long, value_enum, default_value = "json")]
        output: FitOutput,
        /// Attach the optimality certificate; exit 2 if it fails.
        #[arg(long)]
        certify: bool,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo comparison of the empirical and constrained estimators.
    Simulate {
        /// geom:G, tri:J or pois:L; repeat for several truths.
        #[arg(long = "dist", required = true)]
        dists: Vec<String>,
        /// Comma-separated sample sizes.
        #[arg(long, default_value = "10,100,1000", value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        replicates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated subset of l2,kolmogorov,hellinger,tv,variance,entropy,p0.
        #[arg(long, default_value = "l2,kolmogorov,hellinger,tv,variance,entropy,p0")]
        functionals: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a fit produced by `fit` against a data file.
    Certify {
        fit_json: PathBuf,
        data: PathBuf,
        #[arg(long, value_enum, default_value = "raw")]
        format: InputFormat,
    },
}

/// Parses a data file body.
pub fn parse_dataset(text: &str, format: InputFormat) -> Result<EmpiricalPmf> {
    let mut pairs: Vec<(usize, u64)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let bad = |message: String| Error::Parse { line, message };
        match format {
            InputFormat::Raw => {
                let v = parse_value(body).map_err(bad)?;
                pairs.push((v, 1));
            }
            InputFormat::Counts => {
                if pairs.is_empty() && body.eq_ignore_ascii_case("value,count") {
                    continue;
                }
                let (v, c) = body
                    .split_once(',')
                    .ok_or_else(|| bad(format!("expected 'value,count', got '{body}'")))?;
                let v = parse_value(v.trim()).map_err(bad)?;
                let c: u64 = c
                    .trim()
                    .parse()
                    .map_err(|_| bad(format!("count '{}' is not a positive integer", c.trim())))?;
                if c == 0 {
                    return Err(bad("count must be positive".into()));
                }
                pairs.push((v, c));
            }
        }
    }
    if pairs.is_empty() {
        return Err(Error::EmptySample);
    }
    EmpiricalPmf::from_counts(&pairs)
}

fn parse_value(s: &str) -> std::result::Result<usize, String> {
    if s.starts_with('-') {
        return Err(format!("negative value '{s}'"));
    }
    s.parse()
        .map_err(|_| format!("'{s}' is not a nonnegative integer"))
}

pub fn read_dataset(path: &Path, format: InputFormat) -> Result<EmpiricalPmf> {
    parse_dataset(&fs::read_to_string(path)?, format)
}

/// On-disk form of a fit.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitDocument {
    pub schema_version: u32,
    pub n: u64,
    pub empirical: Vec<f64>,
    pub fitted: Vec<f64>,
    pub mixture: TriangularMixture,
    pub objective: f64,
    pub final_l: usize,
    pub trace: Vec<TraceRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateReport>,
}

impl FitDocument {
    pub fn new(ptilde: &EmpiricalPmf, result: &FitResult, with_certificate: bool) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            n: ptilde.n(),
            empirical: ptilde.probs().to_vec(),
            fitted: result.pmf.probs().to_vec(),
            mixture: result.mixture.clone(),
            objective: result.objective,
            final_l: result.final_l,
            trace: result.trace.clone(),
            certificate: with_certificate.then(|| result.certificate.clone()),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        match value.get("schema_version").and_then(|v| v.as_u64()) {
            Some(v) if v == SCHEMA_VERSION as u64 => {}
            Some(v) => return Err(Error::Schema(format!("unsupported schema_version {v}"))),
            None => return Err(Error::Schema("missing schema_version".into())),
        }
        let doc: Self = serde_json::from_value(value).map_err(|e| Error::Schema(e.to_string()))?;
        if doc.fitted.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::Schema("fitted pmf has negative or non-finite entries".into()));
        }
        Ok(doc)
    }

    /// Certifies the stored mixture and fitted pmf against `ptilde`.
    pub fn certify(&self, ptilde: &EmpiricalPmf, tol: &CertifyTolerances) -> CertificateReport {
        let pmf = Pmf::from_raw(self.fitted.clone());
        certify_parts(&self.mixture, &pmf, self.final_l, ptilde, tol)
    }
}

fn fit_csv(ptilde: &EmpiricalPmf, result: &FitResult) -> String {
    let len = ptilde.probs().len().max(result.pmf.probs().len());
    let mut out = String::from("index,empirical,fitted,weight\n");
    for i in 0..len {
        let weight = if i == 0 { 0.0 } else { result.mixture.get(i) };
        out.push_str(&format!(
            "{i},{},{},{}\n",
            format_float(ptilde.get(i)),
            format_float(result.pmf.get(i)),
            format_float(weight)
        ));
    }
    // components beyond the fitted support (T_{s+1} has no mass at s+1)
    for (j, w) in result.mixture.iter().filter(|&(j, _)| j >= len) {
        out.push_str(&format!("{j},0.0,0.0,{}\n", format_float(w)));
    }
    out
}

fn emit(out: Option<&Path>, body: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => fs::write(path, body)?,
        None => stdout.write_all(body.as_bytes())?,
    }
    Ok(())
}

fn run_command(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Fit {
            input,
            format,
            d_tol,
            mass_tol,
            max_outer,
            output,
            certify,
            out,
        } => {
            let ptilde = read_dataset(&input, format)?;
            let cfg = SolverConfig {
                d_tol,
                mass_tol,
                max_outer,
                ..SolverConfig::default()
            };
            let result = fit(&ptilde, &cfg)?;
            let body = match output {
                FitOutput::Json => {
                    serde_json::to_string_pretty(&FitDocument::new(&ptilde, &result, certify))? + "\n"
                }
                FitOutput::Csv => fit_csv(&ptilde, &result),
            };
            emit(out.as_deref(), &body, stdout)?;
            if certify && !result.certificate.passed {
                writeln!(stderr, "certificate failed: {}", result.certificate.violations.join("; "))?;
                return Ok(EXIT_CERTIFICATE);
            }
            Ok(EXIT_OK)
        }
        Command::Simulate {
            dists,
            n,
            replicates,
            seed,
            functionals,
            format,
            out,
        } => {
            let functionals = Functional::parse_list(&functionals)?;
            let specs = dists
                .iter()
                .map(|d| {
                    let d: TrueDistribution = d.parse()?;
                    let spec = ExperimentSpec::new(d, seed)
                        .with_sizes(&n)
                        .with_replicates(replicates)
                        .with_functionals(&functionals);
                    spec.validate()?;
                    Ok(spec)
                })
                .collect::<Result<Vec<_>>>()?;
            let campaign = run_campaign(&specs);
            for f in &campaign.failures {
                writeln!(stderr, "{}: {}", f.distribution, f.error)?;
            }
            let body = match format {
                TableFormat::Csv => rows_to_csv(&campaign.rows()),
                TableFormat::Json => campaign_to_json(&campaign)?,
            };
            emit(out.as_deref(), &body, stdout)?;
            Ok(if campaign.failures.is_empty() { EXIT_OK } else { EXIT_ERROR })
        }
        Command::Certify { fit_json, data, format } => {
            let doc = FitDocument::from_json(&fs::read_to_string(&fit_json)?)?;
            let ptilde = read_dataset(&data, format)?;
            let report = doc.certify(&ptilde, &CertifyTolerances::default());
            stdout.write_all((serde_json::to_string_pretty(&report)? + "\n").as_bytes())?;
            if report.passed {
                Ok(EXIT_OK)
            } else {
                writeln!(stderr, "certificate failed: {}", report.violations.join("; "))?;
                Ok(EXIT_CERTIFICATE)
            }
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match run_command(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}
