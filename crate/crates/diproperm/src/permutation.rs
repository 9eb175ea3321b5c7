//! Step 3 of DiProPerm: rerun direction + statistic under random label
//! permutations and locate the observed statistic in the permutation
//! distribution.
//!
//! Three significance indicators are reported: the empirical p-value
//! (strict exceedance proportion, which is often zero for strong
//! separations), the Gaussian-fit p-value, and the z-score of the observed
//! statistic against a normal fit to the permuted statistics.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::data_model::{pool, PooledSample, RngPolicy, SamplePair};
use crate::directions::DirectionMethod;
use crate::error::{Error, Result};
use crate::statistics::{evaluate, SolverOptions, StatKind};

/// Plan for the random-relabeling permutation test.
#[derive(Debug, Clone)]
pub struct PermutationPlan {
    /// Number of random relabelings B.
    pub b_perms: usize,
    /// Seed policy; replicate k draws from substream k.
    pub rng: RngPolicy,
    /// Also report the smoothed p-value (#exceed + 1) / (B + 1), which is
    /// never exactly zero.
    pub include_smoothed: bool,
}

impl PermutationPlan {
    pub fn new(b_perms: usize, rng: RngPolicy) -> Self {
        PermutationPlan {
            b_perms,
            rng,
            include_smoothed: false,
        }
    }
}

impl Default for PermutationPlan {
    fn default() -> Self {
        PermutationPlan::new(1000, RngPolicy::new(0))
    }
}

/// Outcome of a DiProPerm permutation test.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PermutationResult {
    pub method: DirectionMethod,
    pub stat: StatKind,
    /// Statistic on the original labels.
    pub observed: f64,
    /// Strict exceedance proportion #{perm > observed} / B.
    pub empirical_p: f64,
    /// Smoothed (#exceed + 1)/(B + 1) variant, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smoothed_p: Option<f64>,
    /// Upper tail of a Gaussian fitted to the permuted statistics.
    pub gauss_p: f64,
    /// z-score of the observed statistic under that Gaussian fit.
    #[serde(rename = "z")]
    pub z_score: f64,
    pub b_perms: usize,
    pub seed: u64,
    pub perm_stats: Vec<f64>,
}

impl PermutationResult {
    /// Level-alpha decision: reject iff the empirical p-value is below
    /// alpha.
    pub fn reject(&self, alpha: f64) -> bool {
        self.empirical_p < alpha
    }
}

/// Reorders the pooled rows by a uniformly random permutation (Fisher-
/// Yates) drawn from `rng`; `split_m` is unchanged.
pub fn permute_labels(pooled: &PooledSample, rng: &mut impl Rng) -> PooledSample {
    let n = pooled.total();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let z = DMatrix::from_fn(n, pooled.z.ncols(), |i, j| pooled.z[(order[i], j)]);
    PooledSample {
        z,
        split_m: pooled.split_m,
    }
}

/// Proportion of permuted statistics strictly exceeding the observed one.
pub fn empirical_pvalue(observed: f64, perm_stats: &[f64]) -> f64 {
    let exceed = perm_stats.iter().filter(|&&s| s > observed).count();
    exceed as f64 / perm_stats.len() as f64
}

/// z-score of the observed statistic against a Gaussian fitted to the
/// permuted statistics. Errors with `DegenerateNull` when they are
/// constant.
pub fn z_score(observed: f64, perm_stats: &[f64]) -> Result<f64> {
    if perm_stats.len() < 2 {
        return Err(Error::DegenerateNull);
    }
    let b = perm_stats.len() as f64;
    let mean = perm_stats.iter().sum::<f64>() / b;
    let var = perm_stats.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (b - 1.0);
    if var <= 0.0 {
        return Err(Error::DegenerateNull);
    }
    Ok((observed - mean) / var.sqrt())
}

/// Upper tail probability 1 - Phi(z) of the Gaussian fit.
pub fn gaussian_fit_pvalue(observed: f64, perm_stats: &[f64]) -> Result<f64> {
    let z = z_score(observed, perm_stats)?;
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    Ok(1.0 - normal.cdf(z))
}

/// Runs the full DiProPerm test: observed statistic on the original
/// labels, then B retrained permuted statistics from per-replicate RNG
/// substreams.
///
/// A permuted replicate whose direction is degenerate (no separation at
/// all) scores 0; solver failures abort with the replicate index. Output
/// is identical for any worker count.
pub fn run_diproperm(
    sp: &SamplePair,
    direction: DirectionMethod,
    stat: StatKind,
    opts: &SolverOptions,
    plan: &PermutationPlan,
) -> Result<PermutationResult> {
    if plan.b_perms == 0 {
        return Err(Error::Config("b_perms must be at least 1".into()));
    }
    let observed = evaluate(sp, direction, stat, opts)?;
    let pooled = pool(sp);

    let perm_stats: Vec<f64> = (1..=plan.b_perms)
        .into_par_iter()
        .map(|k| replicate_statistic(&pooled, direction, stat, opts, plan, k))
        .collect::<Result<Vec<f64>>>()?;

    let empirical_p = empirical_pvalue(observed, &perm_stats);
    let z = z_score(observed, &perm_stats)?;
    let gauss_p = gaussian_fit_pvalue(observed, &perm_stats)?;
    let smoothed_p = plan.include_smoothed.then(|| {
        let exceed = perm_stats.iter().filter(|&&s| s > observed).count();
        (exceed as f64 + 1.0) / (plan.b_perms as f64 + 1.0)
    });

    Ok(PermutationResult {
        method: direction,
        stat,
        observed,
        empirical_p,
        smoothed_p,
        gauss_p,
        z_score: z,
        b_perms: plan.b_perms,
        seed: plan.rng.master_seed,
        perm_stats,
    })
}

/// Statistic of the k-th permuted relabeling (k is 1-based; substream k).
pub fn replicate_statistic(
    pooled: &PooledSample,
    direction: DirectionMethod,
    stat: StatKind,
    opts: &SolverOptions,
    plan: &PermutationPlan,
    k: usize,
) -> Result<f64> {
    let mut rng = plan.rng.stream(k as u64);
    let permuted = permute_labels(pooled, &mut rng);
    let sp_k = permuted.unpool().map_err(|e| e.in_replicate(k))?;
    match evaluate(&sp_k, direction, stat, opts) {
        Ok(v) => Ok(v),
        // a relabeling with zero separation is evidence for the null
        Err(Error::DegenerateDirection(_)) => Ok(0.0),
        Err(e) => Err(e.in_replicate(k)),
    }
}

/// Returns the permuted sample pair of replicate `k`, exactly as
/// `run_diproperm` would construct it. Used to export projection panels.
pub fn replicate_sample(pooled: &PooledSample, plan: &PermutationPlan, k: usize) -> Result<SamplePair> {
    let mut rng = plan.rng.stream(k as u64);
    permute_labels(pooled, &mut rng).unpool()
}
