//! Synthetic generators and Monte Carlo estimation of test size and power.
//!
//! The generators cover the simulation settings used throughout the power
//! studies: spherical Gaussians, iid t(5) marginals, block-correlated
//! Gaussians, and Gaussian mixtures.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};
use rayon::prelude::*;

use crate::baselines::{energy_test, rp_test, RPConfig};
use crate::data_model::{pool, SamplePair};
use crate::directions::{md_direction, DirectionMethod};
use crate::error::{Error, Result};
use crate::permutation::{permute_labels, run_diproperm, PermutationPlan};
use crate::statistics::{project, SolverOptions, StatKind};

/// Mean vector rule for Gaussian generators.
#[derive(Debug, Clone)]
pub enum MeanFill {
    /// Every coordinate equals the given value.
    Constant(f64),
    /// Explicit mean vector.
    Vector(DVector<f64>),
    /// First ceil(d/4) coordinates zero, the rest `1/sqrt(n)`.
    SparseShift { n: usize },
}

impl MeanFill {
    pub fn realize(&self, d: usize) -> DVector<f64> {
        match self {
            MeanFill::Constant(c) => DVector::from_element(d, *c),
            MeanFill::Vector(v) => v.clone(),
            MeanFill::SparseShift { n } => sparse_shift_mean(d, *n),
        }
    }
}

/// The S2 mean vector: exactly ceil(d/4) leading zeros, then 1/sqrt(n).
pub fn sparse_shift_mean(d: usize, n: usize) -> DVector<f64> {
    let zeros = d.div_ceil(4);
    let fill = 1.0 / (n as f64).sqrt();
    DVector::from_fn(d, |i, _| if i < zeros { 0.0 } else { fill })
}

/// Distribution family of one sample.
#[derive(Debug, Clone)]
pub enum DistributionKind {
    /// `N(mu, sigma2 * I_d)`.
    SphericalGaussian { mean: MeanFill, sigma2: f64 },
    /// d iid marginal t(5) coordinates (variance 5/3, not standardized).
    IidT5,
    /// Gaussian with block-diagonal covariance: identical 5×5 blocks with
    /// unit diagonal and off-diagonal `rho`.
    BlockGaussian { mean: MeanFill, rho: f64 },
    /// Mixture of spherical Gaussians: (weight, mean, sigma2) components.
    GaussianMixture { components: Vec<(f64, DVector<f64>, f64)> },
}

/// A generator description: family plus dimension.
#[derive(Debug, Clone)]
pub struct DistributionSpec {
    pub kind: DistributionKind,
    pub d: usize,
}

impl DistributionSpec {
    pub fn spherical_gaussian(d: usize, mu: f64, sigma2: f64) -> Self {
        DistributionSpec {
            kind: DistributionKind::SphericalGaussian {
                mean: MeanFill::Constant(mu),
                sigma2,
            },
            d,
        }
    }

    pub fn iid_t5(d: usize) -> Self {
        DistributionSpec {
            kind: DistributionKind::IidT5,
            d,
        }
    }

    /// S2 first sample: zero-mean block Gaussian with rho = 0.2.
    pub fn s2_null(d: usize) -> Self {
        DistributionSpec {
            kind: DistributionKind::BlockGaussian {
                mean: MeanFill::Constant(0.0),
                rho: 0.2,
            },
            d,
        }
    }

    /// S2 second sample: block Gaussian with the sparse 1/sqrt(n) shift.
    pub fn s2_shifted(d: usize, n: usize) -> Self {
        DistributionSpec {
            kind: DistributionKind::BlockGaussian {
                mean: MeanFill::SparseShift { n },
                rho: 0.2,
            },
            d,
        }
    }

    /// S3 first sample: equal mixture of `N((3, ±30, 0, ...), I_d)`.
    pub fn s3_sample1(d: usize) -> Self {
        DistributionSpec {
            kind: DistributionKind::GaussianMixture {
                components: s3_components(d, 3.0),
            },
            d,
        }
    }

    /// S3 second sample: equal mixture of `N((-3, ±30, 0, ...), I_d)`.
    pub fn s3_sample2(d: usize) -> Self {
        DistributionSpec {
            kind: DistributionKind::GaussianMixture {
                components: s3_components(d, -3.0),
            },
            d,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::Spec("dimension must be positive".into()));
        }
        match &self.kind {
            DistributionKind::SphericalGaussian { sigma2, mean } => {
                if *sigma2 <= 0.0 {
                    return Err(Error::Spec("sigma2 must be positive".into()));
                }
                if let MeanFill::Vector(v) = mean {
                    if v.len() != self.d {
                        return Err(Error::Spec("mean vector length != d".into()));
                    }
                }
            }
            DistributionKind::IidT5 => {}
            DistributionKind::BlockGaussian { .. } => {
                if !self.d.is_multiple_of(5) {
                    return Err(Error::Spec(format!(
                        "block Gaussian requires d divisible by 5, got {}",
                        self.d
                    )));
                }
            }
            DistributionKind::GaussianMixture { components } => {
                if components.is_empty() {
                    return Err(Error::Spec("mixture needs components".into()));
                }
                let wsum: f64 = components.iter().map(|(w, _, _)| w).sum();
                if (wsum - 1.0).abs() > 1e-12 {
                    return Err(Error::Spec(format!("mixture weights sum to {wsum}, not 1")));
                }
                for (w, mu, s2) in components {
                    if *w < 0.0 || *s2 <= 0.0 || mu.len() != self.d {
                        return Err(Error::Spec("invalid mixture component".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

fn s3_components(d: usize, first: f64) -> Vec<(f64, DVector<f64>, f64)> {
    let mut up = DVector::zeros(d);
    up[0] = first;
    if d > 1 {
        up[1] = 30.0;
    }
    let mut down = DVector::zeros(d);
    down[0] = first;
    if d > 1 {
        down[1] = -30.0;
    }
    vec![(0.5, up, 1.0), (0.5, down, 1.0)]
}

/// Draws `count` iid rows from the specified law.
pub fn sample_distribution(
    spec: &DistributionSpec,
    count: usize,
    rng: &mut impl Rng,
) -> Result<DMatrix<f64>> {
    spec.validate()?;
    let d = spec.d;
    let mut out = DMatrix::zeros(count, d);
    match &spec.kind {
        DistributionKind::SphericalGaussian { mean, sigma2 } => {
            let mu = mean.realize(d);
            let sd = sigma2.sqrt();
            for i in 0..count {
                for j in 0..d {
                    let z: f64 = StandardNormal.sample(rng);
                    out[(i, j)] = mu[j] + sd * z;
                }
            }
        }
        DistributionKind::IidT5 => {
            let t5 = StudentT::new(5.0).expect("t(5)");
            for i in 0..count {
                for j in 0..d {
                    out[(i, j)] = t5.sample(rng);
                }
            }
        }
        DistributionKind::BlockGaussian { mean, rho } => {
            let mu = mean.realize(d);
            // Cholesky factor of the 5x5 block (1 - rho) I + rho J
            let block = DMatrix::from_fn(5, 5, |i, j| if i == j { 1.0 } else { *rho });
            let chol = block
                .cholesky()
                .ok_or_else(|| Error::Spec(format!("block with rho {rho} is not PD")))?;
            let l = chol.l();
            let mut z = DVector::zeros(5);
            for i in 0..count {
                for b in 0..d / 5 {
                    for v in z.iter_mut() {
                        *v = StandardNormal.sample(rng);
                    }
                    let correlated = &l * &z;
                    for k in 0..5 {
                        let j = 5 * b + k;
                        out[(i, j)] = mu[j] + correlated[k];
                    }
                }
            }
        }
        DistributionKind::GaussianMixture { components } => {
            for i in 0..count {
                let pick: f64 = rng.gen();
                let mut acc = 0.0;
                let mut chosen = components.len() - 1;
                for (idx, (w, _, _)) in components.iter().enumerate() {
                    acc += w;
                    if pick < acc {
                        chosen = idx;
                        break;
                    }
                }
                let (_, mu, s2) = &components[chosen];
                let sd = s2.sqrt();
                for j in 0..d {
                    let z: f64 = StandardNormal.sample(rng);
                    out[(i, j)] = mu[j] + sd * z;
                }
            }
        }
    }
    Ok(out)
}

/// Which test a power study exercises.
#[derive(Debug, Clone)]
pub enum TestDescriptor {
    DiProPerm {
        direction: DirectionMethod,
        stat: StatKind,
        opts: SolverOptions,
    },
    Energy,
    RandomProjection { k: Option<usize> },
    Hotelling,
}

impl TestDescriptor {
    pub fn diproperm(direction: DirectionMethod, stat: StatKind) -> Self {
        TestDescriptor::DiProPerm {
            direction,
            stat,
            opts: SolverOptions::default(),
        }
    }

    pub fn name(&self) -> String {
        match self {
            TestDescriptor::DiProPerm { direction, stat, .. } => {
                format!("{}-{}", direction.name(), stat.name())
            }
            TestDescriptor::Energy => "energy".into(),
            TestDescriptor::RandomProjection { .. } => "rp".into(),
            TestDescriptor::Hotelling => "hotelling".into(),
        }
    }
}

/// One point of a power study.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PowerEstimate {
    pub mu1: Option<f64>,
    pub sigma1_sq: Option<f64>,
    pub d: usize,
    pub rejection_rate: f64,
    pub mc_reps: usize,
    /// Binomial standard error sqrt(p(1-p)/reps).
    pub std_err: f64,
}

/// Grid for a power surface over (mu1, sigma1^2), with F2 = N(0, I_d).
#[derive(Debug, Clone)]
pub struct PowerGrid {
    pub mu1_values: Vec<f64>,
    pub sigma1_sq_values: Vec<f64>,
    pub m: usize,
    pub n: usize,
    pub d: usize,
    pub alpha: f64,
    pub mc_reps: usize,
    pub test: TestDescriptor,
}

/// Estimates the rejection rate of `test` at level `alpha` over
/// `mc_reps` independent draws of (X from f1, Y from f2).
///
/// Each repetition uses its own data substream and its own permutation
/// seed derived from `plan.rng`, so results are independent of worker
/// count.
#[allow(clippy::too_many_arguments)]
pub fn estimate_power(
    f1: &DistributionSpec,
    f2: &DistributionSpec,
    test: &TestDescriptor,
    m: usize,
    n: usize,
    alpha: f64,
    mc_reps: usize,
    plan: &PermutationPlan,
) -> Result<PowerEstimate> {
    if !(0.0..1.0).contains(&alpha) || alpha <= 0.0 {
        return Err(Error::Config(format!("alpha {alpha} not in (0, 1)")));
    }
    if mc_reps == 0 {
        return Err(Error::Config("mc_reps must be at least 1".into()));
    }
    f1.validate()?;
    f2.validate()?;
    if f1.d != f2.d {
        return Err(Error::Spec("f1 and f2 dimensions differ".into()));
    }

    let rejections: usize = (0..mc_reps)
        .into_par_iter()
        .map(|rep| -> Result<usize> {
            let data_policy = plan.rng.child(2 * rep as u64);
            let x = sample_distribution(f1, m, &mut data_policy.stream(0))
                .map_err(|e| e.in_replicate(rep))?;
            let y = sample_distribution(f2, n, &mut data_policy.stream(1))
                .map_err(|e| e.in_replicate(rep))?;
            let sp = SamplePair::new(x, y).map_err(|e| e.in_replicate(rep))?;
            let rep_plan = PermutationPlan {
                b_perms: plan.b_perms,
                rng: plan.rng.child(2 * rep as u64 + 1),
                include_smoothed: false,
            };
            let reject = match test {
                TestDescriptor::DiProPerm {
                    direction,
                    stat,
                    opts,
                } => run_diproperm(&sp, *direction, *stat, opts, &rep_plan)
                    .map_err(|e| e.in_replicate(rep))?
                    .reject(alpha),
                TestDescriptor::Energy => {
                    energy_test(&sp, &rep_plan)
                        .map_err(|e| e.in_replicate(rep))?
                        .empirical_p
                        < alpha
                }
                TestDescriptor::RandomProjection { k } => {
                    let cfg = RPConfig {
                        k: *k,
                        rng: rep_plan.rng,
                    };
                    rp_test(&sp, &cfg).map_err(|e| e.in_replicate(rep))?.p_value < alpha
                }
                TestDescriptor::Hotelling => {
                    crate::baselines::hotelling_t2(&sp)
                        .map_err(|e| e.in_replicate(rep))?
                        .p_value
                        < alpha
                }
            };
            Ok(reject as usize)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;

    let rate = rejections as f64 / mc_reps as f64;
    Ok(PowerEstimate {
        mu1: None,
        sigma1_sq: None,
        d: f1.d,
        rejection_rate: rate,
        mc_reps,
        std_err: (rate * (1.0 - rate) / mc_reps as f64).sqrt(),
    })
}

/// Power surface over a (mu1, sigma1^2) grid: F1 = N(mu1 * 1, sigma1^2 I_d)
/// with the constant-fill mean convention, F2 = N(0, I_d).
pub fn power_surface(grid: &PowerGrid, plan: &PermutationPlan) -> Result<Vec<PowerEstimate>> {
    let mut out = Vec::with_capacity(grid.mu1_values.len() * grid.sigma1_sq_values.len());
    let f2 = DistributionSpec::spherical_gaussian(grid.d, 0.0, 1.0);
    for (gi, &mu1) in grid.mu1_values.iter().enumerate() {
        for (gj, &s1) in grid.sigma1_sq_values.iter().enumerate() {
            let f1 = DistributionSpec::spherical_gaussian(grid.d, mu1, s1);
            let point_plan = PermutationPlan {
                b_perms: plan.b_perms,
                rng: plan
                    .rng
                    .child((gi * grid.sigma1_sq_values.len() + gj) as u64),
                include_smoothed: false,
            };
            let mut est = estimate_power(
                &f1,
                &f2,
                &grid.test,
                grid.m,
                grid.n,
                grid.alpha,
                grid.mc_reps,
                &point_plan,
            )?;
            est.mu1 = Some(mu1);
            est.sigma1_sq = Some(s1);
            out.push(est);
        }
    }
    Ok(out)
}

/// One row of the dimension-scaling diagnostic.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ScalingRow {
    pub d: usize,
    /// Median over reps of the unconditional S_{m,n}(Z) / d, with S
    /// computed from the raw (unnormalized) mean-difference projections.
    pub median_s_over_d: f64,
    /// Median over reps of the permuted S_{m,n}(Z_pi) / d.
    pub median_s_perm_over_d: f64,
    pub reps: usize,
}

/// S_{m,n} with projections onto the raw mean-difference vector
/// (not normalized): the quantity whose unconditional and permutation
/// growth orders in d differ.
pub fn md_s_raw(sp: &SamplePair) -> Result<f64> {
    let dir = md_direction(sp)?;
    let ps = project(sp, &dir);
    let scale = (sp.x_mean() - sp.y_mean()).norm_squared();
    Ok(ps.s_value * scale)
}

/// Per dimension in `d_list`, the median unconditional and permuted
/// `S_{m,n}/d` over `reps` draws of X ~ N(0, I_d), Y ~ N(0, sigma_y2 I_d).
pub fn scaling_diagnostic(
    d_list: &[usize],
    m: usize,
    n: usize,
    sigma_y2: f64,
    reps: usize,
    plan: &PermutationPlan,
) -> Result<Vec<ScalingRow>> {
    let mut rows = Vec::with_capacity(d_list.len());
    for (di, &d) in d_list.iter().enumerate() {
        let f1 = DistributionSpec::spherical_gaussian(d, 0.0, 1.0);
        let f2 = DistributionSpec::spherical_gaussian(d, 0.0, sigma_y2);
        let pairs: Vec<(f64, f64)> = (0..reps)
            .into_par_iter()
            .map(|rep| -> Result<(f64, f64)> {
                let policy = plan.rng.child((di * reps + rep) as u64);
                let x = sample_distribution(&f1, m, &mut policy.stream(0))?;
                let y = sample_distribution(&f2, n, &mut policy.stream(1))?;
                let sp = SamplePair::new(x, y)?;
                let s_uncond = md_s_raw(&sp)?;
                let permuted = permute_labels(&pool(&sp), &mut policy.stream(2));
                let s_perm = md_s_raw(&permuted.unpool()?)?;
                Ok((s_uncond / d as f64, s_perm / d as f64))
            })
            .collect::<Result<Vec<_>>>()?;
        let med = |vals: Vec<f64>| -> f64 {
            let mut v = vals;
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mid = v.len() / 2;
            if v.len().is_multiple_of(2) {
                0.5 * (v[mid - 1] + v[mid])
            } else {
                v[mid]
            }
        };
        rows.push(ScalingRow {
            d,
            median_s_over_d: med(pairs.iter().map(|p| p.0).collect()),
            median_s_perm_over_d: med(pairs.iter().map(|p| p.1).collect()),
            reps,
        });
    }
    Ok(rows)
}

/// HDLSS expected distance between draws from `N(mu, sigma_x^2 I_d)` and
/// `N(mu, sigma_y^2 I_d)`: `sqrt((sigma_x^2 + sigma_y^2) d)` up to O_P(1).
pub fn expected_pair_distance(sigma_x2: f64, sigma_y2: f64, d: usize) -> f64 {
    ((sigma_x2 + sigma_y2) * d as f64).sqrt()
}
