//! Reference two-sample tests: the energy test, the classical Hotelling
//! T² test, and the random-projection Hotelling test.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, FisherSnedecor};

use crate::data_model::{pool, RngPolicy, SamplePair};
use crate::directions::ScatterMatrices;
use crate::error::{Error, Result};
use crate::permutation::PermutationPlan;

/// Energy test outcome.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EnergyResult {
    pub statistic: f64,
    pub empirical_p: f64,
    pub b_perms: usize,
}

/// Configuration for the random-projection test.
#[derive(Debug, Clone)]
pub struct RPConfig {
    /// Projected dimension k; `None` picks `floor(min(m, n) / 2)`.
    pub k: Option<usize>,
    pub rng: RngPolicy,
}

/// Hotelling T² outcome, with its F conversion.
#[derive(Debug, Clone, serde::Serialize)]
pub struct HotellingResult {
    pub t2: f64,
    pub f_stat: f64,
    pub df1: usize,
    pub df2: usize,
    pub p_value: f64,
}

/// Energy two-sample statistic
/// `(mn/N) [ (2/mn) ΣΣ ||Xi - Yj|| - (1/m²) ΣΣ ||Xi - Xj|| - (1/n²) ΣΣ ||Yi - Yj|| ]`.
pub fn energy_statistic(sp: &SamplePair) -> f64 {
    let pooled = pool(sp);
    let dist = pairwise_distances(&pooled.z);
    let groups: Vec<bool> = (0..sp.total()).map(|i| i < sp.m()).collect();
    energy_from_distances(&dist, &groups, sp.m(), sp.n())
}

/// Full pairwise Euclidean distance matrix of the pooled rows.
fn pairwise_distances(z: &DMatrix<f64>) -> DMatrix<f64> {
    let n = z.nrows();
    let mut dist = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (z.row(i) - z.row(j)).norm();
            dist[(i, j)] = d;
            dist[(j, i)] = d;
        }
    }
    dist
}

/// Energy statistic from a precomputed distance matrix and a group-1
/// membership mask.
fn energy_from_distances(dist: &DMatrix<f64>, in_x: &[bool], m: usize, n: usize) -> f64 {
    let total = in_x.len();
    let (mut between, mut within_x, mut within_y) = (0.0, 0.0, 0.0);
    for i in 0..total {
        for j in (i + 1)..total {
            let d = dist[(i, j)];
            match (in_x[i], in_x[j]) {
                (true, false) | (false, true) => between += d,
                (true, true) => within_x += d,
                (false, false) => within_y += d,
            }
        }
    }
    let (m, n) = (m as f64, n as f64);
    let total = m + n;
    // within sums above count each unordered pair once; the double sums in
    // the statistic count ordered pairs, hence the factors of 2
    (m * n / total)
        * ((2.0 / (m * n)) * between
            - (1.0 / (m * m)) * 2.0 * within_x
            - (1.0 / (n * n)) * 2.0 * within_y)
}

/// Energy permutation test. Distances are computed once; each relabeling
/// only re-partitions the distance matrix.
pub fn energy_test(sp: &SamplePair, plan: &PermutationPlan) -> Result<EnergyResult> {
    if plan.b_perms == 0 {
        return Err(Error::Config("b_perms must be at least 1".into()));
    }
    let pooled = pool(sp);
    let dist = pairwise_distances(&pooled.z);
    let m = sp.m();
    let n = sp.n();
    let total = m + n;

    let observed = {
        let in_x: Vec<bool> = (0..total).map(|i| i < m).collect();
        energy_from_distances(&dist, &in_x, m, n)
    };

    let perm_stats: Vec<f64> = (1..=plan.b_perms)
        .into_par_iter()
        .map(|k| {
            let mut rng = plan.rng.stream(k as u64);
            let mut order: Vec<usize> = (0..total).collect();
            order.shuffle(&mut rng);
            let mut in_x = vec![false; total];
            for &idx in order.iter().take(m) {
                in_x[idx] = true;
            }
            energy_from_distances(&dist, &in_x, m, n)
        })
        .collect();

    Ok(EnergyResult {
        statistic: observed,
        empirical_p: crate::permutation::empirical_pvalue(observed, &perm_stats),
        b_perms: plan.b_perms,
    })
}

/// Classical Hotelling T² test with the exact F reference distribution.
///
/// Requires `d <= N - 2` and a nonsingular pooled covariance.
pub fn hotelling_t2(sp: &SamplePair) -> Result<HotellingResult> {
    let d = sp.d();
    let total = sp.total();
    if d > total.saturating_sub(2) {
        return Err(Error::SingularCovariance(format!(
            "d = {d} exceeds N - 2 = {}",
            total.saturating_sub(2)
        )));
    }
    let scatter = ScatterMatrices::compute(sp)?;
    let diff = (sp.x_mean() - sp.y_mean()).transpose();
    let chol = scatter
        .pooled_unbiased
        .clone()
        .cholesky()
        .ok_or_else(|| Error::SingularCovariance("pooled covariance not positive definite".into()))?;
    let solved = chol.solve(&diff);
    let m = sp.m() as f64;
    let n = sp.n() as f64;
    let t2 = (m * n / (m + n)) * diff.dot(&solved);

    let df1 = d;
    let df2 = total - d - 1;
    let f_stat = t2 * df2 as f64 / (df1 as f64 * (total as f64 - 2.0));
    let f_dist = FisherSnedecor::new(df1 as f64, df2 as f64)
        .map_err(|e| Error::Config(format!("F distribution: {e}")))?;
    let p_value = 1.0 - f_dist.cdf(f_stat);
    Ok(HotellingResult {
        t2,
        f_stat,
        df1,
        df2,
        p_value,
    })
}

/// Hotelling T² on data mapped through an explicit k×d projection matrix.
/// `rp_test` draws the matrix; this entry point makes the projection a
/// test hook (the identity reproduces `hotelling_t2` exactly).
pub fn rp_test_with_matrix(sp: &SamplePair, projection: &DMatrix<f64>) -> Result<HotellingResult> {
    if projection.ncols() != sp.d() {
        return Err(Error::Config(format!(
            "projection is {}x{} but data dimension is {}",
            projection.nrows(),
            projection.ncols(),
            sp.d()
        )));
    }
    let pt = projection.transpose();
    let projected = SamplePair::new(sp.x() * &pt, sp.y() * &pt)?;
    hotelling_t2(&projected)
}

/// Random-projection Hotelling test: map every observation through one
/// k×d matrix with iid standard normal entries, then apply the classical
/// T² test in dimension k.
pub fn rp_test(sp: &SamplePair, cfg: &RPConfig) -> Result<HotellingResult> {
    let k = cfg.k.unwrap_or(sp.m().min(sp.n()) / 2);
    let total = sp.total();
    if k < 1 || k > total.saturating_sub(2) {
        return Err(Error::Config(format!(
            "projected dimension k = {k} must satisfy 1 <= k <= N - 2 = {}",
            total.saturating_sub(2)
        )));
    }
    let mut rng = cfg.rng.stream(0);
    let projection = DMatrix::from_fn(k, sp.d(), |_, _| StandardNormal.sample(&mut rng));
    rp_test_with_matrix(sp, &projection)
}

/// Unnormalized FLD mean-difference value `(X̄-Ȳ) W⁻¹ (X̄-Ȳ)'`, which
/// equals `(1/(N-2)) (N/(mn)) T²`. Exposed for the Hotelling bridge
/// diagnostics.
pub fn fld_mean_diff_value(sp: &SamplePair) -> Result<f64> {
    let scatter = ScatterMatrices::compute(sp)?;
    let diff: DVector<f64> = (sp.x_mean() - sp.y_mean()).transpose();
    let w_tilde = crate::directions::pseudoinverse_apply(
        &scatter.within_w,
        &diff,
        crate::directions::pinv_rtol(sp),
    );
    Ok(diff.dot(&w_tilde))
}
