//! Least-squares estimation of a convex discrete distribution.
//!
//! A convex pmf on the nonnegative integers is a nonnegative mixture of
//! triangular pmfs `T_j`. The estimator projects the empirical pmf onto that
//! cone; [`solver::fit`] computes the projection with the support reduction
//! algorithm, [`oracle`] solves the same problem by dense NNLS, and
//! [`diagnostics::certify`] checks a fit against the optimality conditions.
//!
//! ```
//! use convexpmf::{fit, EmpiricalPmf, SolverConfig};
//!
//! let ptilde = EmpiricalPmf::from_samples(&[0u32, 0, 1, 2]).unwrap();
//! let result = fit(&ptilde, &SolverConfig::default()).unwrap();
//! assert!(result.certificate.passed);
//! assert!((result.pmf.get(0) - 0.5).abs() < 1e-12);
//! ```

pub mod cli;
pub mod diagnostics;
pub mod distributions;
pub mod error;
pub mod oracle;
pub mod pmf;
pub mod sim;
pub mod solver;
pub mod tolerances;

pub use diagnostics::{certify, losses, moments, CertificateReport, LossReport, MomentReport};
pub use distributions::TrueDistribution;
pub use error::{Error, Result};
pub use pmf::{mixture_to_pmf, pmf_to_mixture, EmpiricalPmf, Pmf, TriangularMixture};
pub use solver::{fit, fit_fixed_l, FitResult, SolverConfig};
pub use tolerances::CertifyTolerances;
