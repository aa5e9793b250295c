//! Monte Carlo comparison of the empirical and the constrained estimator.
//!
//! Replicate `r` of every sample size draws from a ChaCha8 stream seeded
//! with `seed ^ r`, so results do not depend on scheduling.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{centered_absolute_moment, entropy, losses, variance};
use crate::distributions::TrueDistribution;
use crate::error::{Error, Result};
use crate::pmf::{is_convex, EmpiricalPmf, Pmf};
use crate::solver::{fit, SolverConfig};
use crate::tolerances::CONVEXITY_TOL;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "CONVEXPMF_THREADS";

/// Slack allowed on the per-replicate l2 dominance check.
pub const DOMINANCE_TOL: f64 = 1e-10;
/// Minimal l2 improvement required when the empirical pmf is not convex.
pub const STRICT_GAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Functional {
    L2,
    Kolmogorov,
    Hellinger,
    Tv,
    Variance,
    Entropy,
    P0,
}

impl Functional {
    pub const ALL: [Functional; 7] = [
        Self::L2,
        Self::Kolmogorov,
        Self::Hellinger,
        Self::Tv,
        Self::Variance,
        Self::Entropy,
        Self::P0,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::L2 => "l2",
            Self::Kolmogorov => "kolmogorov",
            Self::Hellinger => "hellinger",
            Self::Tv => "tv",
            Self::Variance => "variance",
            Self::Entropy => "entropy",
            Self::P0 => "p0",
        }
    }

    /// Losses are reported as mean risks, characteristics as relative
    /// standard errors.
    pub fn is_loss(self) -> bool {
        matches!(self, Self::L2 | Self::Kolmogorov | Self::Hellinger | Self::Tv)
    }

    /// Loss between `estimate` and `truth`, or the characteristic of `estimate`.
    fn evaluate(self, estimate: &Pmf, truth: &Pmf) -> f64 {
        match self {
            Self::L2 => losses(estimate, truth).l2,
            Self::Kolmogorov => losses(estimate, truth).kolmogorov,
            Self::Hellinger => losses(estimate, truth).hellinger,
            Self::Tv => losses(estimate, truth).total_variation,
            Self::Variance => variance(estimate),
            Self::Entropy => entropy(estimate.probs()),
            Self::P0 => estimate.get(0),
        }
    }

    /// Parses a comma-separated list such as `l2,entropy,p0`.
    pub fn parse_list(s: &str) -> Result<Vec<Functional>> {
        let mut out: Vec<Functional> = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<_>>()?;
        out.sort();
        out.dedup();
        if out.is_empty() {
            return Err(Error::InvalidConfig("empty functional list".into()));
        }
        Ok(out)
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Functional {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown functional '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Estimator {
    Empirical,
    Constrained,
}

impl Estimator {
    pub fn name(self) -> &'static str {
        match self {
            Self::Empirical => "empirical",
            Self::Constrained => "constrained",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub distribution: TrueDistribution,
    pub sample_sizes: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
    pub functionals: Vec<Functional>,
}

impl ExperimentSpec {
    /// Sizes 10, 100 and 1000, 1000 replicates, every functional.
    pub fn new(distribution: TrueDistribution, seed: u64) -> Self {
        Self {
            distribution,
            sample_sizes: vec![10, 100, 1000],
            replicates: 1000,
            seed,
            functionals: Functional::ALL.to_vec(),
        }
    }

    pub fn with_sizes(mut self, sizes: &[usize]) -> Self {
        self.sample_sizes = sizes.to_vec();
        self
    }

    pub fn with_replicates(mut self, replicates: usize) -> Self {
        self.replicates = replicates;
        self
    }

    pub fn with_functionals(mut self, functionals: &[Functional]) -> Self {
        self.functionals = functionals.to_vec();
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.distribution.validated()?;
        if self.replicates == 0 {
            return Err(Error::InvalidConfig("replicates must be at least 1".into()));
        }
        if self.sample_sizes.is_empty() || self.sample_sizes.contains(&0) {
            return Err(Error::InvalidConfig("sample sizes must be nonempty and at least 1".into()));
        }
        Ok(())
    }
}

/// The nine truths of the simulation design.
pub fn design_distributions() -> Vec<TrueDistribution> {
    vec![
        TrueDistribution::Geometric(0.9),
        TrueDistribution::Geometric(0.5),
        TrueDistribution::Geometric(0.1),
        TrueDistribution::Triangular(20),
        TrueDistribution::Triangular(5),
        TrueDistribution::Triangular(2),
        TrueDistribution::Poisson(0.59),
        TrueDistribution::Poisson(0.8),
        TrueDistribution::Poisson(1.0),
    ]
}

/// One spec per design truth.
pub fn design_grid(replicates: usize, seed: u64) -> Vec<ExperimentSpec> {
    design_distributions()
        .into_iter()
        .map(|d| ExperimentSpec::new(d, seed).with_replicates(replicates))
        .collect()
}

/// Aggregate for one `(n, estimator, functional)`: mean risk for losses,
/// relative standard error otherwise. `None` when the true characteristic
/// is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub n: usize,
    pub estimator: Estimator,
    pub functional: Functional,
    pub value: Option<f64>,
    pub mc_stderr: Option<f64>,
}

/// Per-sample-size bookkeeping of the deterministic properties.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeSummary {
    pub n: usize,
    /// Replicates with `l2(p^, p0) > l2(p~, p0) + DOMINANCE_TOL`.
    pub dominance_violations: usize,
    /// Replicates with non-convex `p~` but an l2 gain below `STRICT_GAP`.
    pub strict_violations: usize,
    pub nonconvex_fraction: f64,
    pub certificate_failures: usize,
    /// Replicates violating the mean, `p(0)` or centered-moment relations.
    pub moment_relation_failures: usize,
    /// Largest `l2(p^, p0) - l2(p~, p0)` over replicates.
    pub max_l2_excess: f64,
    /// Smallest l2 gain among replicates with non-convex `p~`.
    pub min_strict_gain: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub spec: ExperimentSpec,
    /// Whether the materialized truth is convex. The l2 dominance of the
    /// constrained estimator is only guaranteed when it is.
    pub truth_convex: bool,
    pub cells: Vec<Cell>,
    pub sizes: Vec<SizeSummary>,
    pub dominance_violations: usize,
}

impl ExperimentResult {
    pub fn cell(&self, n: usize, estimator: Estimator, functional: Functional) -> Option<&Cell> {
        self.cells
            .iter()
            .find(|c| c.n == n && c.estimator == estimator && c.functional == functional)
    }

    pub fn value(&self, n: usize, estimator: Estimator, functional: Functional) -> Option<f64> {
        self.cell(n, estimator, functional).and_then(|c| c.value)
    }

    pub fn size(&self, n: usize) -> Option<&SizeSummary> {
        self.sizes.iter().find(|s| s.n == n)
    }

    /// Tidy rows in `(n, estimator, functional)` order.
    pub fn rows(&self) -> Vec<TableRow> {
        self.cells
            .iter()
            .map(|c| TableRow {
                distribution: self.spec.distribution.family().to_string(),
                param: self.spec.distribution.param(),
                n: c.n,
                estimator: c.estimator,
                functional: c.functional,
                value: c.value,
                mc_stderr: c.mc_stderr,
            })
            .collect()
    }
}

struct Replicate {
    empirical: Vec<f64>,
    constrained: Vec<f64>,
    l2_empirical: f64,
    l2_constrained: f64,
    nonconvex: bool,
    certificate_passed: bool,
    moments_ok: bool,
}

/// Mean equality, `p(0)` ordering and centered-moment ordering between the
/// empirical and the constrained estimate.
pub fn moment_relations_hold(ptilde: &Pmf, phat: &Pmf) -> bool {
    if (ptilde.mean() - phat.mean()).abs() > 1e-8 || phat.get(0) < ptilde.get(0) - 1e-10 {
        return false;
    }
    let centers = [0.0, ptilde.mean().floor()];
    centers.iter().all(|&a| {
        (1..=3).all(|u| {
            centered_absolute_moment(ptilde, a, u) <= centered_absolute_moment(phat, a, u) + 1e-8
        })
    })
}

fn run_replicate(
    spec: &ExperimentSpec,
    truth: &Pmf,
    n: usize,
    r: usize,
    cfg: &SolverConfig,
) -> Result<Replicate> {
    let attach = |e: Error| Error::Replicate {
        replicate: r,
        n,
        source: Box::new(e),
    };
    let sample = crate::distributions::sample_pmf(truth, n, spec.seed ^ r as u64);
    let ptilde = EmpiricalPmf::from_samples(&sample).map_err(attach)?;
    let fitted = fit(&ptilde, cfg).map_err(attach)?;
    let emp = ptilde.pmf();
    Ok(Replicate {
        empirical: spec.functionals.iter().map(|f| f.evaluate(emp, truth)).collect(),
        constrained: spec.functionals.iter().map(|f| f.evaluate(&fitted.pmf, truth)).collect(),
        l2_empirical: losses(emp, truth).l2,
        l2_constrained: losses(&fitted.pmf, truth).l2,
        nonconvex: !ptilde.is_convex().convex,
        certificate_passed: fitted.certificate.passed,
        moments_ok: moment_relations_hold(emp, &fitted.pmf),
    })
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let threads: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("{THREADS_ENV} must be a positive integer, got '{v}'")))?;
        builder = builder.num_threads(threads.max(1));
    }
    builder
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let r = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / r;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (r - 1.0);
    (mean, (var / r).sqrt())
}

/// Mean risk with its Monte Carlo standard error, or the relative standard
/// error `sqrt(E (theta^ - theta0)^2) / theta0` with a delta-method error.
fn aggregate(functional: Functional, values: &[f64], theta0: f64) -> (Option<f64>, Option<f64>) {
    if functional.is_loss() {
        let (m, se) = mean_and_stderr(values);
        return (Some(m), Some(se));
    }
    if theta0 == 0.0 {
        return (None, None);
    }
    let sq: Vec<f64> = values.iter().map(|v| (v - theta0).powi(2)).collect();
    let (mse, se_mse) = mean_and_stderr(&sq);
    let rmse = mse.sqrt();
    let se = if rmse > 0.0 { se_mse / (2.0 * rmse) } else { 0.0 };
    (Some(rmse / theta0.abs()), Some(se / theta0.abs()))
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    let truth = spec.distribution.materialize()?;
    let cfg = SolverConfig::default();
    let pool = thread_pool()?;
    let truth_convex = is_convex(truth.probs(), CONVEXITY_TOL).convex;
    let theta0: Vec<f64> = spec.functionals.iter().map(|f| f.evaluate(&truth, &truth)).collect();

    let mut cells = Vec::new();
    let mut sizes = Vec::new();
    for &n in &spec.sample_sizes {
        // collect keeps replicate order regardless of scheduling
        let reps: Vec<Replicate> = pool.install(|| {
            (0..spec.replicates)
                .into_par_iter()
                .map(|r| run_replicate(spec, &truth, n, r, &cfg))
                .collect::<Result<_>>()
        })?;

        for (estimator, pick) in [
            (Estimator::Empirical, (|x: &Replicate| &x.empirical) as fn(&Replicate) -> &Vec<f64>),
            (Estimator::Constrained, |x: &Replicate| &x.constrained),
        ] {
            for (k, &functional) in spec.functionals.iter().enumerate() {
                let values: Vec<f64> = reps.iter().map(|x| pick(x)[k]).collect();
                let (value, mc_stderr) = aggregate(functional, &values, theta0[k]);
                cells.push(Cell {
                    n,
                    estimator,
                    functional,
                    value,
                    mc_stderr,
                });
            }
        }

        let excess = |x: &Replicate| x.l2_constrained - x.l2_empirical;
        let nonconvex: Vec<&Replicate> = reps.iter().filter(|x| x.nonconvex).collect();
        sizes.push(SizeSummary {
            n,
            dominance_violations: reps.iter().filter(|x| excess(x) > DOMINANCE_TOL).count(),
            strict_violations: nonconvex.iter().filter(|x| -excess(x) < STRICT_GAP).count(),
            nonconvex_fraction: nonconvex.len() as f64 / reps.len() as f64,
            certificate_failures: reps.iter().filter(|x| !x.certificate_passed).count(),
            moment_relation_failures: reps.iter().filter(|x| !x.moments_ok).count(),
            max_l2_excess: reps.iter().map(excess).fold(f64::NEG_INFINITY, f64::max),
            min_strict_gain: nonconvex.iter().map(|x| -excess(x)).reduce(f64::min),
        });
    }

    let dominance_violations = sizes.iter().map(|s| s.dominance_violations).sum();
    Ok(ExperimentResult {
        spec: spec.clone(),
        truth_convex,
        cells,
        sizes,
        dominance_violations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub distribution: String,
    pub param: f64,
    pub n: usize,
    pub estimator: Estimator,
    pub functional: Functional,
    pub value: Option<f64>,
    pub mc_stderr: Option<f64>,
}

#[derive(Debug)]
pub struct SpecFailure {
    pub index: usize,
    pub distribution: TrueDistribution,
    pub error: Error,
}

#[derive(Debug, Default)]
pub struct Campaign {
    pub results: Vec<ExperimentResult>,
    pub failures: Vec<SpecFailure>,
}

impl Campaign {
    pub fn rows(&self) -> Vec<TableRow> {
        self.results.iter().flat_map(ExperimentResult::rows).collect()
    }

    /// Number of `(distribution, n)` configurations that ran.
    pub fn configs(&self) -> usize {
        self.results.iter().map(|r| r.sizes.len()).sum()
    }
}

/// Runs every spec in order; failing specs are collected instead of
/// aborting the campaign.
pub fn run_campaign(specs: &[ExperimentSpec]) -> Campaign {
    let mut campaign = Campaign::default();
    for (index, spec) in specs.iter().enumerate() {
        match run_experiment(spec) {
            Ok(r) => campaign.results.push(r),
            Err(error) => campaign.failures.push(SpecFailure {
                index,
                distribution: spec.distribution,
                error,
            }),
        }
    }
    campaign
}

pub const CSV_HEADER: &str = "distribution,param,n,estimator,functional,value,mc_stderr";

/// Shortest decimal that reads back to the same `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:?}")
}

fn format_opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

pub fn rows_to_csv(rows: &[TableRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.distribution,
            format_float(r.param),
            r.n,
            r.estimator.name(),
            r.functional.name(),
            format_opt(r.value),
            format_opt(r.mc_stderr),
        ));
    }
    out
}

#[derive(Serialize)]
struct CampaignJson<'a> {
    schema_version: u32,
    experiments: Vec<ExperimentJson<'a>>,
    rows: Vec<TableRow>,
}

#[derive(Serialize)]
struct ExperimentJson<'a> {
    spec: &'a ExperimentSpec,
    truth_convex: bool,
    dominance_violations: usize,
    sizes: &'a [SizeSummary],
}

pub fn campaign_to_json(campaign: &Campaign) -> Result<String> {
    let doc = CampaignJson {
        schema_version: 1,
        experiments: campaign
            .results
            .iter()
            .map(|r| ExperimentJson {
                spec: &r.spec,
                truth_convex: r.truth_convex,
                dominance_violations: r.dominance_violations,
                sizes: &r.sizes,
            })
            .collect(),
        rows: campaign.rows(),
    };
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(d: TrueDistribution, sizes: &[usize], reps: usize) -> ExperimentSpec {
        ExperimentSpec::new(d, 2024).with_sizes(sizes).with_replicates(reps)
    }

    #[test]
    fn point_mass_truth_has_zero_risk() {
        let r = run_experiment(&small(TrueDistribution::Triangular(1), &[1, 10, 50], 20)).unwrap();
        for c in r.cells.iter().filter(|c| c.functional.is_loss()) {
            assert_eq!(c.value, Some(0.0), "{c:?}");
        }
        // variance and entropy of a point mass are zero: no relative error
        assert_eq!(r.value(10, Estimator::Constrained, Functional::Entropy), None);
        assert_eq!(r.value(10, Estimator::Constrained, Functional::P0), Some(0.0));
    }

    #[test]
    fn triangular_two_constrained_wins() {
        let r = run_experiment(&small(TrueDistribution::Triangular(2), &[1000], 100)).unwrap();
        let e = r.value(1000, Estimator::Empirical, Functional::L2).unwrap();
        let c = r.value(1000, Estimator::Constrained, Functional::L2).unwrap();
        assert!(c > 0.0 && c < e, "constrained {c} empirical {e}");
        assert_eq!(r.dominance_violations, 0);
        let s = r.size(1000).unwrap();
        assert_eq!(s.strict_violations, 0);
        assert_eq!(s.certificate_failures, 0);
        assert_eq!(s.moment_relation_failures, 0);
    }

    #[test]
    fn poisson_one_large_n_constrained_loses() {
        let r = run_experiment(&small(TrueDistribution::Poisson(1.0), &[1000], 100)).unwrap();
        let e = r.value(1000, Estimator::Empirical, Functional::L2).unwrap();
        let c = r.value(1000, Estimator::Constrained, Functional::L2).unwrap();
        assert!(c > e);
    }

    #[test]
    fn deterministic_and_thread_independent() {
        let spec = small(TrueDistribution::Geometric(0.5), &[10, 100], 30);
        let a = rows_to_csv(&run_experiment(&spec).unwrap().rows());
        let b = rows_to_csv(&run_experiment(&spec).unwrap().rows());
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| rows_to_csv(&run_experiment(&spec).unwrap().rows()));
        assert_eq!(a, c);
    }

    #[test]
    fn campaign_shapes() {
        assert!(run_campaign(&[]).rows().is_empty());
        assert_eq!(design_grid(1, 0).iter().map(|s| s.sample_sizes.len()).sum::<usize>(), 27);

        let specs = vec![
            small(TrueDistribution::Triangular(3), &[5], 3).with_functionals(&[Functional::L2]),
            ExperimentSpec::new(TrueDistribution::Triangular(3), 1).with_replicates(0),
        ];
        let c = run_campaign(&specs);
        assert_eq!(c.results.len(), 1);
        assert_eq!(c.failures.len(), 1);
        assert_eq!(c.failures[0].index, 1);
        let csv = rows_to_csv(&c.rows());
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().count(), 1 + 2);
    }

    #[test]
    fn aggregation() {
        let (v, se) = aggregate(Functional::L2, &[1.0, 3.0], 0.0);
        assert_eq!(v, Some(2.0));
        assert!((se.unwrap() - 1.0).abs() < 1e-15);
        // errors of +-0.1 around theta0 = 0.5 give RSE 0.2
        let (v, _) = aggregate(Functional::P0, &[0.4, 0.6], 0.5);
        assert!((v.unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(aggregate(Functional::Entropy, &[0.1], 0.0), (None, None));
    }

    #[test]
    fn functional_parsing() {
        assert_eq!(
            Functional::parse_list("p0, l2,l2").unwrap(),
            vec![Functional::L2, Functional::P0]
        );
        assert!(Functional::parse_list("l3").is_err());
        assert!(Functional::parse_list("").is_err());
    }

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, 1e-20, 123456.789, 0.0] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
    }
}
