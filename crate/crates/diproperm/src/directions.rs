//! Step 1 of DiProPerm: the normal vector to a binary linear classifier's
//! separating hyperplane.
//!
//! Five classifiers are implemented: Mean Difference (centroid method),
//! Fisher Linear Discrimination, soft-margin linear SVM, Distance Weighted
//! Discrimination, and Maximal Data Piling. Every returned direction has
//! unit norm and is oriented so that the projected mean of X is at least
//! the projected mean of Y.

use nalgebra::{DMatrix, DVector};

use crate::data_model::SamplePair;
use crate::error::{Error, Result};

/// The classifier used to train the direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionMethod {
    /// Mean Difference: normalized centroid difference.
    Md,
    /// Fisher Linear Discrimination: within-scatter-whitened mean difference.
    Fld,
    /// Soft-margin linear Support Vector Machine.
    Svm,
    /// Distance Weighted Discrimination.
    Dwd,
    /// Maximal Data Piling: total-scatter-whitened mean difference.
    Mdp,
}

impl DirectionMethod {
    pub const ALL: [DirectionMethod; 5] = [
        DirectionMethod::Md,
        DirectionMethod::Fld,
        DirectionMethod::Svm,
        DirectionMethod::Dwd,
        DirectionMethod::Mdp,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            DirectionMethod::Md => "md",
            DirectionMethod::Fld => "fld",
            DirectionMethod::Svm => "svm",
            DirectionMethod::Dwd => "dwd",
            DirectionMethod::Mdp => "mdp",
        }
    }
}

/// A unit vector w in R^d normal to a trained separating hyperplane,
/// oriented toward class X (`mean(X·w) >= mean(Y·w)`).
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionVector {
    pub w: DVector<f64>,
    pub method: DirectionMethod,
}

/// Scatter matrices of a sample pair.
#[derive(Debug, Clone)]
pub struct ScatterMatrices {
    /// Within-class scatter W: sum over both classes of centered outer
    /// products.
    pub within_w: DMatrix<f64>,
    /// Total scatter of the globally centered pooled data.
    pub total_s: DMatrix<f64>,
    /// Pooled unbiased covariance estimate S_u = W / (N - 2).
    pub pooled_unbiased: DMatrix<f64>,
}

impl ScatterMatrices {
    pub fn compute(sp: &SamplePair) -> Result<Self> {
        let total = sp.total();
        if total < 3 {
            return Err(Error::Config(
                "scatter matrices require N >= 3 observations".into(),
            ));
        }
        let within_w = centered_gram(sp.x()) + centered_gram(sp.y());

        let pooled = crate::data_model::pool(sp);
        let total_s = centered_gram(&pooled.z);

        let pooled_unbiased = &within_w / (total as f64 - 2.0);
        Ok(ScatterMatrices {
            within_w,
            total_s,
            pooled_unbiased,
        })
    }
}

/// Returns the sum of (row - mean)' (row - mean) over all rows.
fn centered_gram(rows: &DMatrix<f64>) -> DMatrix<f64> {
    let mean = rows.row_mean();
    let mut centered = rows.clone();
    for mut row in centered.row_iter_mut() {
        row -= &mean;
    }
    centered.transpose() * centered
}

/// Applies the Moore-Penrose pseudoinverse of a symmetric PSD matrix to a
/// vector, via SVD with singular values below `rtol * sigma_max` truncated.
pub fn pseudoinverse_apply(mat: &DMatrix<f64>, rhs: &DVector<f64>, rtol: f64) -> DVector<f64> {
    let svd = mat.clone().svd(true, true);
    let sigma_max = svd.singular_values.max();
    if sigma_max <= 0.0 {
        return DVector::zeros(rhs.len());
    }
    let cutoff = rtol * sigma_max;
    let u = svd.u.as_ref().expect("svd with u");
    let v_t = svd.v_t.as_ref().expect("svd with v_t");
    let mut coeffs = u.transpose() * rhs;
    for (k, c) in coeffs.iter_mut().enumerate() {
        let s = svd.singular_values[k];
        *c = if s > cutoff { *c / s } else { 0.0 };
    }
    v_t.transpose() * coeffs
}

/// Numerical-rank cutoff used for FLD and MDP pseudoinverses.
pub fn pinv_rtol(sp: &SamplePair) -> f64 {
    1e-10 * sp.d().max(sp.total()) as f64
}

/// Normalizes, orients toward X, and wraps a raw weight vector.
fn finalize(w: DVector<f64>, method: DirectionMethod, sp: &SamplePair) -> Result<DirectionVector> {
    let norm = w.norm();
    if norm < 1e-14 || !norm.is_finite() {
        return Err(Error::DegenerateDirection(format!(
            "{} classifier returned a zero weight vector",
            method.name()
        )));
    }
    let mut w = w / norm;
    let diff = sp.x_mean() - sp.y_mean();
    let toward_x: f64 = diff
        .iter()
        .zip(w.iter())
        .map(|(a, b)| a * b)
        .sum();
    if toward_x < 0.0 {
        w = -w;
    }
    Ok(DirectionVector { w, method })
}

/// Mean Difference direction: `(X̄ - Ȳ) / ||X̄ - Ȳ||`.
pub fn md_direction(sp: &SamplePair) -> Result<DirectionVector> {
    let x_mean = sp.x_mean();
    let y_mean = sp.y_mean();
    let diff = (&x_mean - &y_mean).transpose();
    if diff.norm() < 1e-14 * (1.0 + x_mean.norm() + y_mean.norm()) {
        return Err(Error::DegenerateDirection(
            "centroids coincide; MD direction undefined".into(),
        ));
    }
    finalize(diff, DirectionMethod::Md, sp)
}

/// Fisher Linear Discrimination direction: `W⁺ (X̄ - Ȳ)`, where W is the
/// within-class scatter and W⁺ its pseudoinverse.
pub fn fld_direction(sp: &SamplePair) -> Result<DirectionVector> {
    let scatter = ScatterMatrices::compute(sp)?;
    let diff = (sp.x_mean() - sp.y_mean()).transpose();
    let w = pseudoinverse_apply(&scatter.within_w, &diff, pinv_rtol(sp));
    finalize(w, DirectionMethod::Fld, sp)
}

/// Maximal Data Piling direction: total-scatter-whitened mean difference
/// `T⁺ (X̄ - Ȳ)`.
///
/// In the HDLSS regime (`d >= N - 2`) the projections of each class onto
/// this direction collapse to a single value per class.
pub fn mdp_direction(sp: &SamplePair) -> Result<DirectionVector> {
    let scatter = ScatterMatrices::compute(sp)?;
    let diff = (sp.x_mean() - sp.y_mean()).transpose();
    let w = pseudoinverse_apply(&scatter.total_s, &diff, pinv_rtol(sp));
    finalize(w, DirectionMethod::Mdp, sp)
}

/// Stacks both classes into one matrix with labels +1 (X) and -1 (Y).
fn stacked_with_labels(sp: &SamplePair) -> (DMatrix<f64>, Vec<f64>) {
    let pooled = crate::data_model::pool(sp);
    let labels: Vec<f64> = (0..sp.total())
        .map(|i| if i < sp.m() { 1.0 } else { -1.0 })
        .collect();
    (pooled.z, labels)
}

/// Soft-margin linear SVM direction.
///
/// Solves the dual with SMO-style maximal-violating-pair updates and a
/// deterministic selection rule; terminates when every dual KKT violation
/// is at most `tol`.
pub fn svm_direction(sp: &SamplePair, c_penalty: f64, tol: f64) -> Result<DirectionVector> {
    if c_penalty <= 0.0 || tol <= 0.0 {
        return Err(Error::Config("svm requires c_penalty > 0 and tol > 0".into()));
    }
    let (points, labels) = stacked_with_labels(sp);
    let n = points.nrows();

    // Q_ij = y_i y_j <x_i, x_j>
    let gram = &points * points.transpose();
    let q = DMatrix::from_fn(n, n, |i, j| labels[i] * labels[j] * gram[(i, j)]);

    let mut alpha = vec![0.0f64; n];
    let mut grad = vec![-1.0f64; n]; // gradient of 1/2 a'Qa - e'a at a = 0
    let max_iter = 100_000usize.saturating_mul(n).min(20_000_000);

    let mut residual = f64::INFINITY;
    let mut converged = false;
    for _ in 0..max_iter {
        // maximal violating pair
        let mut i_up = None;
        let mut m_up = f64::NEG_INFINITY;
        let mut j_low = None;
        let mut m_low = f64::INFINITY;
        for t in 0..n {
            let score = -labels[t] * grad[t];
            let in_up = (labels[t] > 0.0 && alpha[t] < c_penalty)
                || (labels[t] < 0.0 && alpha[t] > 0.0);
            let in_low = (labels[t] > 0.0 && alpha[t] > 0.0)
                || (labels[t] < 0.0 && alpha[t] < c_penalty);
            if in_up && score > m_up {
                m_up = score;
                i_up = Some(t);
            }
            if in_low && score < m_low {
                m_low = score;
                j_low = Some(t);
            }
        }
        let (i, j) = match (i_up, j_low) {
            (Some(i), Some(j)) => (i, j),
            _ => break,
        };
        residual = m_up - m_low;
        if residual <= tol {
            converged = true;
            break;
        }

        // two-variable subproblem, clipped to the [0, C] box
        let old_i = alpha[i];
        let old_j = alpha[j];
        // identical for both label cases: K_ii + K_jj - 2 K_ij >= 0
        let quad = (gram[(i, i)] + gram[(j, j)] - 2.0 * gram[(i, j)]).max(1e-12);
        if labels[i] != labels[j] {
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
                if alpha[i] > c_penalty {
                    alpha[i] = c_penalty;
                    alpha[j] = c_penalty - diff;
                }
            } else {
                if alpha[i] < 0.0 {
                    alpha[i] = 0.0;
                    alpha[j] = -diff;
                }
                if alpha[j] > c_penalty {
                    alpha[j] = c_penalty;
                    alpha[i] = c_penalty + diff;
                }
            }
        } else {
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c_penalty {
                if alpha[i] > c_penalty {
                    alpha[i] = c_penalty;
                    alpha[j] = sum - c_penalty;
                }
                if alpha[j] > c_penalty {
                    alpha[j] = c_penalty;
                    alpha[i] = sum - c_penalty;
                }
            } else {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = sum;
                }
                if alpha[i] < 0.0 {
                    alpha[i] = 0.0;
                    alpha[j] = sum;
                }
            }
        }
        let di = alpha[i] - old_i;
        let dj = alpha[j] - old_j;
        for t in 0..n {
            grad[t] += q[(t, i)] * di + q[(t, j)] * dj;
        }
    }
    if !converged && residual > tol {
        return Err(Error::Solver {
            residual,
            iterations: max_iter,
        });
    }

    let mut w = DVector::zeros(sp.d());
    for t in 0..n {
        if alpha[t] != 0.0 {
            w += points.row(t).transpose() * (alpha[t] * labels[t]);
        }
    }
    finalize(w, DirectionMethod::Svm, sp)
}

/// DWD loss for a signed functional margin u = y(w·x + b) with slack
/// optimized out: `1/u` when `u >= 1/sqrt(C)`, linear continuation
/// `2*sqrt(C) - C*u` otherwise. Convex and continuously differentiable.
fn dwd_loss(u: f64, c: f64) -> (f64, f64) {
    let threshold = 1.0 / c.sqrt();
    if u >= threshold {
        (1.0 / u, -1.0 / (u * u))
    } else {
        (2.0 * c.sqrt() - c * u, -c)
    }
}

/// Default DWD penalty: `100 / median^2` of the between-class pairwise
/// distances.
pub fn default_dwd_penalty(sp: &SamplePair) -> Result<f64> {
    let mut dists = Vec::with_capacity(sp.m() * sp.n());
    for xi in sp.x().row_iter() {
        for yj in sp.y().row_iter() {
            dists.push((xi - yj).norm());
        }
    }
    dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mid = dists.len() / 2;
    let median = if dists.len() % 2 == 0 {
        0.5 * (dists[mid - 1] + dists[mid])
    } else {
        dists[mid]
    };
    if median <= 0.0 {
        return Err(Error::DegenerateDirection(
            "all between-class distances are zero; DWD penalty undefined".into(),
        ));
    }
    Ok(100.0 / (median * median))
}

/// Distance Weighted Discrimination direction.
///
/// Minimizes the sum of inverse margins plus `c_penalty` times the slack
/// over `(w, b)` with `||w|| <= 1`, using projected gradient descent with
/// Barzilai-Borwein steps and Armijo backtracking. Terminates when the KKT
/// residual of the ball-constrained problem falls below `tol` (relative to
/// the active multiplier scale).
pub fn dwd_direction(sp: &SamplePair, c_penalty: f64, tol: f64) -> Result<DirectionVector> {
    if c_penalty <= 0.0 || tol <= 0.0 {
        return Err(Error::Config("dwd requires c_penalty > 0 and tol > 0".into()));
    }
    let (points, labels) = stacked_with_labels(sp);
    let n = points.nrows();
    let d = points.ncols();
    let labels = DVector::from_vec(labels);

    let objective_and_grad = |w: &DVector<f64>, b: f64| -> (f64, DVector<f64>, f64) {
        let margins = &points * w;
        let mut f = 0.0;
        let mut coef = DVector::zeros(n);
        for i in 0..n {
            let u = labels[i] * (margins[i] + b);
            let (v, dv) = dwd_loss(u, c_penalty);
            f += v;
            coef[i] = dv * labels[i];
        }
        let grad_w = points.transpose() * &coef;
        let grad_b = coef.sum();
        (f, grad_w, grad_b)
    };

    // warm start from the MD direction when it exists
    let mut w = match md_direction(sp) {
        Ok(dir) => dir.w * 0.9,
        Err(_) => DVector::zeros(d),
    };
    let mid = (sp.x_mean() + sp.y_mean()) * 0.5;
    let mut b = -mid
        .iter()
        .zip(w.iter())
        .map(|(a, c)| a * c)
        .sum::<f64>();

    let project = |w: &mut DVector<f64>| {
        let norm = w.norm();
        if norm > 1.0 {
            *w /= norm;
        }
    };

    let (mut f, mut grad_w, mut grad_b) = objective_and_grad(&w, b);
    let mut step = 1.0 / (1.0 + grad_w.norm().max(grad_b.abs()));
    let mut prev_sw: Option<(DVector<f64>, f64, DVector<f64>, f64)> = None;
    let max_iter = 200_000;
    let mut kkt = f64::INFINITY;
    let mut kkt_scale = 1.0;
    let mut converged = false;

    for _ in 0..max_iter {
        // KKT residual: interior -> plain gradient norm; on the boundary the
        // radial component is absorbed by the multiplier of ||w|| <= 1.
        let wnorm = w.norm();
        kkt = if wnorm < 1.0 - 1e-9 {
            (grad_w.norm_squared() + grad_b * grad_b).sqrt()
        } else {
            let lambda = (-w.dot(&grad_w)).max(0.0);
            let tangential = &grad_w + &w * lambda;
            (tangential.norm_squared() + grad_b * grad_b).sqrt()
        };
        let scale = 1.0 + (-w.dot(&grad_w)).abs() + grad_b.abs().min(1.0);
        kkt_scale = scale;
        if kkt <= tol * scale {
            converged = true;
            break;
        }

        // Barzilai-Borwein step length from the previous accepted move
        if let Some((pw, pb, pgw, pgb)) = &prev_sw {
            let sw = &w - pw;
            let sb = b - pb;
            let yw = &grad_w - pgw;
            let yb = grad_b - pgb;
            let ss = sw.norm_squared() + sb * sb;
            let sy = sw.dot(&yw) + sb * yb;
            if sy > 1e-300 {
                step = (ss / sy).clamp(1e-12, 1e6);
            }
        }
        prev_sw = Some((w.clone(), b, grad_w.clone(), grad_b));

        // Armijo backtracking on the projected step
        let mut t = step;
        let mut accepted = false;
        for _ in 0..60 {
            let mut w_new = &w - &grad_w * t;
            project(&mut w_new);
            let b_new = b - grad_b * t;
            let (f_new, gw_new, gb_new) = objective_and_grad(&w_new, b_new);
            let dir_w = &w_new - &w;
            let dir_b = b_new - b;
            let decrease = grad_w.dot(&dir_w) + grad_b * dir_b;
            if f_new <= f + 1e-4 * decrease || f_new < f - 1e-14 * f.abs() {
                w = w_new;
                b = b_new;
                f = f_new;
                grad_w = gw_new;
                grad_b = gb_new;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            // step underflow: first-order progress is exhausted
            converged = kkt.is_finite();
            break;
        }
    }

    // BB steps can cycle just above the threshold; a residual within two
    // orders of the tolerance is still far tighter than the statistic needs
    if !converged && kkt > 100.0 * tol * kkt_scale {
        return Err(Error::Solver {
            residual: kkt,
            iterations: max_iter,
        });
    }
    finalize(w, DirectionMethod::Dwd, sp)
}

/// Evaluates the DWD objective for a fixed unit direction, optimizing the
/// intercept and slacks. Used to compare candidate directions.
pub fn dwd_objective_at_direction(sp: &SamplePair, w: &DVector<f64>, c_penalty: f64) -> f64 {
    let (points, labels) = stacked_with_labels(sp);
    let margins = &points * w;
    let f_of_b = |b: f64| -> f64 {
        (0..points.nrows())
            .map(|i| dwd_loss(labels[i] * (margins[i] + b), c_penalty).0)
            .sum()
    };
    // golden-section search on the convex 1-D intercept problem
    let spread = margins.iter().fold(0.0f64, |a, v| a.max(v.abs())) + 1.0;
    let (mut lo, mut hi) = (-2.0 * spread, 2.0 * spread);
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let m1 = hi - phi * (hi - lo);
        let m2 = lo + phi * (hi - lo);
        if f_of_b(m1) <= f_of_b(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    f_of_b(0.5 * (lo + hi))
}

/// Computes the direction for `method` with the given solver options.
pub fn compute_direction(
    sp: &SamplePair,
    method: DirectionMethod,
    opts: &crate::statistics::SolverOptions,
) -> Result<DirectionVector> {
    match method {
        DirectionMethod::Md => md_direction(sp),
        DirectionMethod::Fld => fld_direction(sp),
        DirectionMethod::Mdp => mdp_direction(sp),
        DirectionMethod::Svm => svm_direction(sp, opts.svm_c, opts.svm_tol),
        DirectionMethod::Dwd => {
            let c = match opts.dwd_c {
                Some(c) => c,
                None => default_dwd_penalty(sp)?,
            };
            dwd_direction(sp, c, opts.dwd_tol)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data_model::RngPolicy;
    use crate::statistics::{project, SolverOptions};
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn pair(x: &[f64], xr: usize, y: &[f64], yr: usize, d: usize) -> SamplePair {
        SamplePair::new(
            DMatrix::from_row_slice(xr, d, x),
            DMatrix::from_row_slice(yr, d, y),
        )
        .unwrap()
    }

    fn gaussian_pair(m: usize, n: usize, d: usize, seed: u64) -> SamplePair {
        let policy = RngPolicy::new(seed);
        let mut rx = policy.stream(0);
        let mut ry = policy.stream(1);
        let x = DMatrix::from_fn(m, d, |_, _| rx.sample::<f64, _>(StandardNormal) + 1.0);
        let y = DMatrix::from_fn(n, d, |_, _| ry.sample::<f64, _>(StandardNormal));
        SamplePair::new(x, y).unwrap()
    }

    #[test]
    fn md_is_normalized_centroid_difference() {
        // centroids (2, 1) and (0, 0); diff (2, 1) normalized
        let sp = pair(&[1.0, 0.0, 3.0, 2.0], 2, &[0.0, 0.0], 1, 2);
        let dir = md_direction(&sp).unwrap();
        let s = 5.0f64.sqrt();
        assert!((dir.w[0] - 2.0 / s).abs() < 1e-12);
        assert!((dir.w[1] - 1.0 / s).abs() < 1e-12);
    }

    #[test]
    fn md_coincident_centroids_are_degenerate() {
        let sp = pair(&[1.0, 0.0, -1.0, 0.0], 2, &[0.0, 1.0, 0.0, -1.0], 2, 2);
        assert!(matches!(
            md_direction(&sp),
            Err(Error::DegenerateDirection(_))
        ));
    }

    #[test]
    fn every_direction_is_unit_norm_and_oriented_toward_x() {
        let sp = gaussian_pair(12, 15, 6, 7);
        let opts = SolverOptions::default();
        for method in DirectionMethod::ALL {
            let dir = compute_direction(&sp, method, &opts).unwrap();
            assert!((dir.w.norm() - 1.0).abs() < 1e-10, "{}", method.name());
            let ps = project(&sp, &dir);
            assert!(ps.mean_x >= ps.mean_y, "{}", method.name());
        }
    }

    #[test]
    fn fld_reduces_to_md_under_spherical_within_scatter() {
        // four points per class placed so each within-class scatter is 2*I
        let sp = pair(
            &[2.0, 1.0, 0.0, 1.0, 1.0, 2.0, 1.0, 0.0],
            4,
            &[1.0, 0.0, -1.0, 0.0, 0.0, 1.0, 0.0, -1.0],
            4,
            2,
        );
        let fld = fld_direction(&sp).unwrap();
        let md = md_direction(&sp).unwrap();
        assert!((&fld.w - &md.w).norm() < 1e-10);
    }

    #[test]
    fn fld_whitens_anisotropic_within_scatter() {
        // within scatter diag(16, 4), mean difference (1, 1):
        // w ~ diag(1/16, 1/4) (1, 1) ~ (1, 4)
        let sp = pair(
            &[3.0, 1.0, -1.0, 1.0, 1.0, 2.0, 1.0, 0.0],
            4,
            &[2.0, 0.0, -2.0, 0.0, 0.0, 1.0, 0.0, -1.0],
            4,
            2,
        );
        let fld = fld_direction(&sp).unwrap();
        let s = 17.0f64.sqrt();
        assert!((fld.w[0] - 1.0 / s).abs() < 1e-10);
        assert!((fld.w[1] - 4.0 / s).abs() < 1e-10);
    }

    #[test]
    fn pseudoinverse_matches_exact_solve_on_invertible_matrix() {
        let mat = DMatrix::from_row_slice(2, 2, &[4.0, 1.0, 1.0, 3.0]);
        let rhs = DVector::from_vec(vec![1.0, 2.0]);
        let got = pseudoinverse_apply(&mat, &rhs, 1e-12);
        let want = mat.clone().lu().solve(&rhs).unwrap();
        assert!((got - want).norm() < 1e-10);
    }

    #[test]
    fn svm_finds_the_max_margin_separator() {
        // mirrored wedges: the max-margin separator is the vertical axis
        let sp = pair(
            &[2.0, 0.0, 3.0, 1.0, 3.0, -1.0],
            3,
            &[-2.0, 0.0, -3.0, 1.0, -3.0, -1.0],
            3,
            2,
        );
        let dir = svm_direction(&sp, 100.0, 1e-8).unwrap();
        assert!((dir.w[0] - 1.0).abs() < 1e-6);
        assert!(dir.w[1].abs() < 1e-6);
    }

    #[test]
    fn svm_rejects_bad_parameters() {
        let sp = gaussian_pair(4, 4, 2, 1);
        assert!(svm_direction(&sp, -1.0, 1e-6).is_err());
        assert!(svm_direction(&sp, 1.0, 0.0).is_err());
    }

    #[test]
    fn dwd_recovers_the_symmetric_separator() {
        let sp = pair(
            &[4.0, 0.0, 5.0, 1.0, 5.0, -1.0],
            3,
            &[-4.0, 0.0, -5.0, 1.0, -5.0, -1.0],
            3,
            2,
        );
        let dir = dwd_direction(&sp, 1.0, 1e-8).unwrap();
        assert!((dir.w[0] - 1.0).abs() < 1e-4);
        assert!(dir.w[1].abs() < 1e-4);
    }

    #[test]
    fn dwd_objective_prefers_its_own_direction() {
        let sp = gaussian_pair(10, 12, 8, 3);
        let c = default_dwd_penalty(&sp).unwrap();
        let dwd = dwd_direction(&sp, c, 1e-7).unwrap();
        let md = md_direction(&sp).unwrap();
        let f_dwd = dwd_objective_at_direction(&sp, &dwd.w, c);
        let f_md = dwd_objective_at_direction(&sp, &md.w, c);
        assert!(f_dwd <= f_md + 1e-6 * f_md.abs());
    }

    #[test]
    fn mdp_piles_each_class_onto_a_point_in_hdlss() {
        // d = 10 >= N - 2 = 6: projections collapse to one value per class
        let sp = gaussian_pair(4, 4, 10, 11);
        let dir = mdp_direction(&sp).unwrap();
        let ps = project(&sp, &dir);
        for v in &ps.px {
            assert!((v - ps.mean_x).abs() < 1e-8);
        }
        for v in &ps.py {
            assert!((v - ps.mean_y).abs() < 1e-8);
        }
        assert!(ps.mean_x > ps.mean_y);
    }

    #[test]
    fn default_penalty_scales_inversely_with_distance() {
        let sp = gaussian_pair(6, 6, 4, 5);
        let c1 = default_dwd_penalty(&sp).unwrap();
        let scaled = SamplePair::new(sp.x() * 2.0, sp.y() * 2.0).unwrap();
        let c2 = default_dwd_penalty(&scaled).unwrap();
        assert!((c2 - c1 / 4.0).abs() < 1e-10 * c1);
    }
}
