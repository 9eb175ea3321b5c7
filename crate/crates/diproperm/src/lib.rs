//! Direction-Projection-Permutation (DiProPerm) two-sample hypothesis tests
//! for high dimensional, low sample size data.
//!
//! A DiProPerm test has three steps:
//!
//! 1. **Direction** — train a binary linear classifier on the class labels
//!    and take the unit normal vector of its separating hyperplane
//!    ([`directions`]).
//! 2. **Projection** — project both samples onto that direction and compute
//!    a univariate two-sample statistic ([`statistics`]).
//! 3. **Permutation** — pool the samples, repeatedly permute the labels,
//!    retrain the direction and recompute the statistic, and locate the
//!    observed statistic within the permutation distribution
//!    ([`permutation`]).
//!
//! Different direction/statistic pairings test different hypotheses: the
//! mean-difference statistic targets equality of means, while studentized
//! statistics are sensitive to any distributional difference. Every pairing
//! is exact for the strong null of equal distributions; validity for the
//! weaker null of equal means depends on the pairing and on sample balance.
//!
//! The [`baselines`] module provides the energy test, classical Hotelling
//! T², and the random-projection Hotelling test for comparison, and
//! [`simulation`] provides the synthetic generators and Monte Carlo power
//! machinery used to study calibration and power.
//!
//! ```
//! use diproperm::data_model::{RngPolicy, SamplePair};
//! use diproperm::directions::DirectionMethod;
//! use diproperm::permutation::{run_diproperm, PermutationPlan};
//! use diproperm::statistics::{SolverOptions, StatKind};
//! use diproperm::simulation::{sample_distribution, DistributionSpec};
//!
//! let policy = RngPolicy::new(7);
//! let f = DistributionSpec::spherical_gaussian(20, 0.0, 1.0);
//! let x = sample_distribution(&f, 15, &mut policy.stream(0)).unwrap();
//! let y = sample_distribution(&f, 15, &mut policy.stream(1)).unwrap();
//! let sp = SamplePair::new(x, y).unwrap();
//!
//! let plan = PermutationPlan::new(100, RngPolicy::new(42));
//! let result = run_diproperm(
//!     &sp,
//!     DirectionMethod::Md,
//!     StatKind::MeanDiff,
//!     &SolverOptions::default(),
//!     &plan,
//! )
//! .unwrap();
//! assert!(result.empirical_p > 0.05); // same distribution: no rejection
//! ```

pub mod baselines;
pub mod cli;
pub mod data_model;
pub mod directions;
pub mod error;
pub mod permutation;
pub mod simulation;
pub mod statistics;

pub use error::{Error, Result};
