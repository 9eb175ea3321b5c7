//! Step 2 of DiProPerm: project both samples onto a direction and compute
//! a univariate two-sample statistic.
//!
//! All statistics are signed so that larger values mean more separation of
//! X above Y under the crate's orientation convention.

use nalgebra::DVector;

use crate::data_model::SamplePair;
use crate::directions::{compute_direction, DirectionMethod, DirectionVector};
use crate::error::{Error, Result};

/// The univariate two-sample statistic applied to the projections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum StatKind {
    /// Difference of projected sample means (the MD statistic).
    #[serde(rename = "md")]
    MeanDiff,
    /// Welch's unequal-variance two-sample t statistic.
    #[serde(rename = "t")]
    WelchT,
    /// Mean difference scaled by pooled per-coordinate variance estimates
    /// of the original d-dimensional data.
    #[serde(rename = "smd")]
    ScaledMeanDiff,
    /// Difference of projected sample medians.
    #[serde(rename = "med")]
    MedianDiff,
    /// Median difference divided by the pooled median absolute deviation.
    #[serde(rename = "medmad")]
    MedianOverMad,
    /// Mann-Whitney area under the ROC curve, X as the positive class.
    #[serde(rename = "auc")]
    Auc,
    /// Paired t statistic over index-matched projections (requires m = n).
    #[serde(rename = "pairt")]
    PairedT,
}

impl StatKind {
    pub const ALL: [StatKind; 7] = [
        StatKind::MeanDiff,
        StatKind::WelchT,
        StatKind::ScaledMeanDiff,
        StatKind::MedianDiff,
        StatKind::MedianOverMad,
        StatKind::Auc,
        StatKind::PairedT,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            StatKind::MeanDiff => "md",
            StatKind::WelchT => "t",
            StatKind::ScaledMeanDiff => "smd",
            StatKind::MedianDiff => "med",
            StatKind::MedianOverMad => "medmad",
            StatKind::Auc => "auc",
            StatKind::PairedT => "pairt",
        }
    }
}

/// Solver parameters threaded through [`evaluate`] to the direction
/// solvers.
#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// SVM slack penalty.
    pub svm_c: f64,
    /// SVM dual KKT tolerance.
    pub svm_tol: f64,
    /// DWD penalty; `None` uses `100 / median^2` of between-class
    /// distances.
    pub dwd_c: Option<f64>,
    /// DWD KKT tolerance.
    pub dwd_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            svm_c: 100.0,
            svm_tol: 1e-6,
            dwd_c: None,
            dwd_tol: 1e-5,
        }
    }
}

/// Projections of both samples onto a direction, with their moments.
#[derive(Debug, Clone)]
pub struct ProjectionSummary {
    pub px: Vec<f64>,
    pub py: Vec<f64>,
    pub mean_x: f64,
    pub mean_y: f64,
    /// Unbiased sample variance of the X projections (0 when m = 1).
    pub var_x: f64,
    /// Unbiased sample variance of the Y projections (0 when n = 1).
    pub var_y: f64,
    /// mean_x - mean_y; equals T_{m,n} = ||X̄ - Ȳ|| when the direction is
    /// the unit MD direction.
    pub t_value: f64,
    /// S_{m,n} = var_x/m + var_y/n.
    pub s_value: f64,
}

impl ProjectionSummary {
    pub fn from_projections(px: Vec<f64>, py: Vec<f64>) -> Self {
        let mean_x = mean(&px);
        let mean_y = mean(&py);
        let var_x = unbiased_variance(&px, mean_x);
        let var_y = unbiased_variance(&py, mean_y);
        let t_value = mean_x - mean_y;
        let s_value = var_x / px.len() as f64 + var_y / py.len() as f64;
        ProjectionSummary {
            px,
            py,
            mean_x,
            mean_y,
            var_x,
            var_y,
            t_value,
            s_value,
        }
    }

    pub fn m(&self) -> usize {
        self.px.len()
    }

    pub fn n(&self) -> usize {
        self.py.len()
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn unbiased_variance(v: &[f64], mean: f64) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (v.len() as f64 - 1.0)
}

fn median(v: &[f64]) -> f64 {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mid = sorted.len() / 2;
    if sorted.len().is_multiple_of(2) {
        0.5 * (sorted[mid - 1] + sorted[mid])
    } else {
        sorted[mid]
    }
}

/// Projects both samples onto `w` and summarizes the projected values.
pub fn project(sp: &SamplePair, direction: &DirectionVector) -> ProjectionSummary {
    let px = (sp.x() * &direction.w).iter().copied().collect();
    let py = (sp.y() * &direction.w).iter().copied().collect();
    ProjectionSummary::from_projections(px, py)
}

/// Difference of projected sample means.
pub fn stat_mean_diff(ps: &ProjectionSummary) -> f64 {
    ps.mean_x - ps.mean_y
}

/// Welch's two-sample t statistic on the projections.
///
/// Returns `+inf`/`-inf` when the denominator vanishes but the means still
/// differ (perfect separation with zero spread), and `ZeroVariance` when
/// both the numerator and denominator are zero.
pub fn stat_welch_t(ps: &ProjectionSummary) -> Result<f64> {
    if ps.m() < 2 || ps.n() < 2 {
        return Err(Error::Config("welch t requires m >= 2 and n >= 2".into()));
    }
    let num = ps.mean_x - ps.mean_y;
    if ps.s_value <= 0.0 {
        if num == 0.0 {
            return Err(Error::ZeroVariance);
        }
        return Ok(f64::INFINITY.copysign(num));
    }
    Ok(num / ps.s_value.sqrt())
}

/// Mean difference scaled by the per-coordinate pooled variance estimates
/// `sx2`, `sy2` of the original d-dimensional samples:
/// `T / sqrt(sx2/m + sy2/n)`.
pub fn stat_scaled_mean_diff(ps: &ProjectionSummary, sx2: f64, sy2: f64) -> Result<f64> {
    let denom = sx2 / ps.m() as f64 + sy2 / ps.n() as f64;
    if denom <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(ps.t_value / denom.sqrt())
}

/// Per-coordinate pooled variance estimate of a raw sample: trace of the
/// sample covariance divided by d. This is the spherical-model estimate of
/// sigma^2 used by the scaled mean difference.
pub fn per_coordinate_variance(rows: &nalgebra::DMatrix<f64>) -> f64 {
    let m = rows.nrows();
    if m < 2 {
        return 0.0;
    }
    let mean = rows.row_mean();
    let mut ss = 0.0;
    for row in rows.row_iter() {
        ss += (row - &mean).norm_squared();
    }
    ss / ((m as f64 - 1.0) * rows.ncols() as f64)
}

/// Difference of projected sample medians.
pub fn stat_median_diff(ps: &ProjectionSummary) -> f64 {
    median(&ps.px) - median(&ps.py)
}

/// Median difference divided by the pooled MAD: the median of the absolute
/// deviations of each projection from its own group median, pooled across
/// groups. No consistency factor is applied.
pub fn stat_median_over_mad(ps: &ProjectionSummary) -> Result<f64> {
    let med_x = median(&ps.px);
    let med_y = median(&ps.py);
    let deviations: Vec<f64> = ps
        .px
        .iter()
        .map(|v| (v - med_x).abs())
        .chain(ps.py.iter().map(|v| (v - med_y).abs()))
        .collect();
    let mad = median(&deviations);
    if mad <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((med_x - med_y) / mad)
}

/// Mann-Whitney AUC with ties counted 1/2, X as the positive class.
pub fn stat_auc(ps: &ProjectionSummary) -> f64 {
    let mut wins = 0.0;
    for &a in &ps.px {
        for &b in &ps.py {
            if a > b {
                wins += 1.0;
            } else if a == b {
                wins += 0.5;
            }
        }
    }
    wins / (ps.m() as f64 * ps.n() as f64)
}

/// Paired t statistic over index-matched projection differences.
pub fn stat_paired_t(ps: &ProjectionSummary) -> Result<f64> {
    if ps.m() != ps.n() {
        return Err(Error::Pairing {
            m: ps.m(),
            n: ps.n(),
        });
    }
    if ps.m() < 2 {
        return Err(Error::Config("paired t requires m = n >= 2".into()));
    }
    let diffs: Vec<f64> = ps
        .px
        .iter()
        .zip(ps.py.iter())
        .map(|(a, b)| a - b)
        .collect();
    let d_mean = mean(&diffs);
    let d_var = unbiased_variance(&diffs, d_mean);
    if d_var <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(d_mean / (d_var / diffs.len() as f64).sqrt())
}

/// Computes `stat` from a projection summary. The scaled mean difference
/// needs the raw data's variance estimates, so it takes the sample pair.
pub fn compute_stat(sp: &SamplePair, ps: &ProjectionSummary, stat: StatKind) -> Result<f64> {
    match stat {
        StatKind::MeanDiff => Ok(stat_mean_diff(ps)),
        StatKind::WelchT => stat_welch_t(ps),
        StatKind::ScaledMeanDiff => {
            let sx2 = per_coordinate_variance(sp.x());
            let sy2 = per_coordinate_variance(sp.y());
            stat_scaled_mean_diff(ps, sx2, sy2)
        }
        StatKind::MedianDiff => Ok(stat_median_diff(ps)),
        StatKind::MedianOverMad => stat_median_over_mad(ps),
        StatKind::Auc => Ok(stat_auc(ps)),
        StatKind::PairedT => stat_paired_t(ps),
    }
}

/// Single entry point for every named DiProPerm test: trains `direction`,
/// projects, and computes `stat`. MD-MD, MD-t, DWD-t, DWD-MD,
/// MD-scaled-MD, ... are all pairings of the two enums.
pub fn evaluate(
    sp: &SamplePair,
    direction: DirectionMethod,
    stat: StatKind,
    opts: &SolverOptions,
) -> Result<f64> {
    let dir = compute_direction(sp, direction, opts)?;
    let ps = project(sp, &dir);
    compute_stat(sp, &ps, stat)
}

/// Returns a direction vector wrapping `w` without training; useful for
/// projecting onto externally supplied directions.
pub fn direction_from_vector(w: DVector<f64>, method: DirectionMethod) -> DirectionVector {
    DirectionVector { w, method }
}
