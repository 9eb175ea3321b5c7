//! Acceptance suite: one test per release criterion, each printing a
//! single PASS/FAIL line. Run with `cargo test --test acceptance --
//! --nocapture` to see the lines; the Monte Carlo criteria take a few
//! minutes total on one core.

use diproperm::baselines::{fld_mean_diff_value, hotelling_t2};
use diproperm::data_model::{RngPolicy, SamplePair};
use diproperm::directions::{mdp_direction, DirectionMethod};
use diproperm::permutation::{run_diproperm, PermutationPlan};
use diproperm::simulation::{
    expected_pair_distance, sample_distribution, scaling_diagnostic, DistributionSpec,
    TestDescriptor,
};
use diproperm::statistics::{
    project, stat_auc, stat_median_diff, stat_welch_t, ProjectionSummary, SolverOptions, StatKind,
};
use rand::Rng;
use rand_distr::StandardNormal;

fn report(number: usize, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {number} ({name}): {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {number} ({name}) failed: {detail}");
}

#[allow(clippy::too_many_arguments)]
fn power(
    f1: &DistributionSpec,
    f2: &DistributionSpec,
    test: &TestDescriptor,
    m: usize,
    n: usize,
    alpha: f64,
    reps: usize,
    b: usize,
    seed: u64,
) -> f64 {
    let plan = PermutationPlan::new(b, RngPolicy::new(seed));
    diproperm::simulation::estimate_power(f1, f2, test, m, n, alpha, reps, &plan)
        .unwrap()
        .rejection_rate
}

/// Strong null: every direction-statistic pair is an exact level-alpha
/// test when F1 = F2, checked at the 99% binomial band for 300 reps.
#[test]
fn c1_strong_null_exactness() {
    let f = DistributionSpec::spherical_gaussian(50, 0.0, 1.0);
    let tests = [
        TestDescriptor::diproperm(DirectionMethod::Md, StatKind::MeanDiff),
        TestDescriptor::diproperm(DirectionMethod::Md, StatKind::WelchT),
        TestDescriptor::diproperm(DirectionMethod::Dwd, StatKind::WelchT),
    ];
    let mut detail = String::new();
    let mut pass = true;
    for (i, test) in tests.iter().enumerate() {
        let rate = power(&f, &f, test, 20, 20, 0.1, 300, 100, 1100 + i as u64);
        detail.push_str(&format!("{} {:.3}; ", test.name(), rate));
        pass &= (0.056..=0.146).contains(&rate);
    }
    report(1, "strong-null exactness", pass, detail.trim_end());
}

/// Equal means with unequal variances at balanced sample sizes: the
/// permutation null is wider than the unconditional one, so MD-MD stays
/// at or below level.
#[test]
fn c2_theorem1_calibration() {
    let f1 = DistributionSpec::spherical_gaussian(200, 0.0, 1.0);
    let f2 = DistributionSpec::spherical_gaussian(200, 0.0, 9.0);
    let test = TestDescriptor::diproperm(DirectionMethod::Md, StatKind::MeanDiff);
    let rate = power(&f1, &f2, &test, 25, 25, 0.05, 300, 100, 1200);
    report(
        2,
        "balanced unequal-variance calibration",
        (0.02..=0.09).contains(&rate),
        &format!("md-md rejection rate {rate:.3} in [0.02, 0.09]"),
    );
}

/// The permuted denominator S grows an order of magnitude faster in d than
/// the unconditional one, and at d = 400 the observed MD-t statistic beats
/// every permuted statistic in essentially every replicate.
#[test]
fn c3_theorem2_order_gap() {
    let plan = PermutationPlan::new(1, RngPolicy::new(1300));
    let rows = scaling_diagnostic(&[100, 400], 50, 50, 100.0, 50, &plan).unwrap();
    let uncond_ratio = rows[1].median_s_over_d / rows[0].median_s_over_d;
    let perm_ratio = rows[1].median_s_perm_over_d / rows[0].median_s_perm_over_d;

    // consequence: at d = 400 the observed MD-t exceeds all 100 permuted
    // statistics in at least 95% of replicates
    let policy = RngPolicy::new(1301);
    let reps = 50;
    let mut exceed = 0usize;
    for rep in 0..reps {
        let data = policy.child(2 * rep as u64);
        let f1 = DistributionSpec::spherical_gaussian(400, 0.0, 1.0);
        let f2 = DistributionSpec::spherical_gaussian(400, 0.0, 100.0);
        let x = sample_distribution(&f1, 50, &mut data.stream(0)).unwrap();
        let y = sample_distribution(&f2, 50, &mut data.stream(1)).unwrap();
        let sp = SamplePair::new(x, y).unwrap();
        let rep_plan = PermutationPlan::new(100, policy.child(2 * rep as u64 + 1));
        let result = run_diproperm(
            &sp,
            DirectionMethod::Md,
            StatKind::WelchT,
            &SolverOptions::default(),
            &rep_plan,
        )
        .unwrap();
        if result.empirical_p == 0.0 {
            exceed += 1;
        }
    }
    let exceed_frac = exceed as f64 / reps as f64;

    let pass = (2.0..=8.0).contains(&perm_ratio)
        && (0.5..=2.0).contains(&uncond_ratio)
        && exceed_frac >= 0.95;
    report(
        3,
        "dimension-order gap",
        pass,
        &format!(
            "S/d ratio across 100->400: unconditional {uncond_ratio:.2} in [0.5, 2], \
             permuted {perm_ratio:.2} in [2, 8]; MD-t exceedance {exceed_frac:.2} >= 0.95"
        ),
    );
}

/// MD-t does not attain level for equal means with unequal variances,
/// while MD-MD does.
#[test]
fn c4_md_t_invalid_for_weak_null() {
    let f1 = DistributionSpec::spherical_gaussian(500, 0.0, 4.0);
    let f2 = DistributionSpec::spherical_gaussian(500, 0.0, 1.0);
    let t = power(
        &f1,
        &f2,
        &TestDescriptor::diproperm(DirectionMethod::Md, StatKind::WelchT),
        50,
        50,
        0.05,
        200,
        100,
        1400,
    );
    let md = power(
        &f1,
        &f2,
        &TestDescriptor::diproperm(DirectionMethod::Md, StatKind::MeanDiff),
        50,
        50,
        0.05,
        200,
        100,
        1401,
    );
    report(
        4,
        "MD-t weak-null invalidity",
        t > 0.5 && md < 0.1,
        &format!("md-t rate {t:.3} > 0.5; md-md rate {md:.3} < 0.1"),
    );
}

/// With unbalanced sample sizes the scaled mean difference attains level
/// where the raw mean difference does not.
#[test]
fn c5_scaled_md_unbalanced_validity() {
    let f2 = DistributionSpec::spherical_gaussian(500, 0.0, 1.0);
    let smd = TestDescriptor::diproperm(DirectionMethod::Md, StatKind::ScaledMeanDiff);
    let mut detail = String::new();
    let mut pass = true;
    for (i, s1) in [0.5, 2.0].into_iter().enumerate() {
        let f1 = DistributionSpec::spherical_gaussian(500, 0.0, s1);
        let rate = power(&f1, &f2, &smd, 50, 100, 0.05, 200, 100, 1500 + i as u64);
        detail.push_str(&format!("md-smd rate {rate:.3} at var {s1}; "));
        pass &= (0.014..=0.10).contains(&rate);
    }
    let f1 = DistributionSpec::spherical_gaussian(500, 0.0, 2.0);
    let md_rate = power(
        &f1,
        &f2,
        &TestDescriptor::diproperm(DirectionMethod::Md, StatKind::MeanDiff),
        50,
        100,
        0.05,
        200,
        100,
        1502,
    );
    detail.push_str(&format!("md-md rate {md_rate:.3} > 0.15 at var 2"));
    pass &= md_rate > 0.15;
    report(5, "scaled-MD unbalanced validity", pass, &detail);
}

/// Power ordering on the bimodal mixture setting, plus level of MD-MD on
/// the Gaussian-vs-t(5) setting at unbalanced sizes.
#[test]
fn c6_power_ordering() {
    let d = 100;
    let f1 = DistributionSpec::s3_sample1(d);
    let f2 = DistributionSpec::s3_sample2(d);
    let dwd_t = power(
        &f1,
        &f2,
        &TestDescriptor::diproperm(DirectionMethod::Dwd, StatKind::WelchT),
        50,
        50,
        0.1,
        200,
        100,
        1600,
    );
    let energy = power(&f1, &f2, &TestDescriptor::Energy, 50, 50, 0.1, 200, 100, 1601);
    let dwd_md = power(
        &f1,
        &f2,
        &TestDescriptor::diproperm(DirectionMethod::Dwd, StatKind::MeanDiff),
        50,
        50,
        0.1,
        200,
        100,
        1602,
    );
    let md_md = power(
        &f1,
        &f2,
        &TestDescriptor::diproperm(DirectionMethod::Md, StatKind::MeanDiff),
        50,
        50,
        0.1,
        200,
        100,
        1603,
    );

    // Gaussian vs iid t(5), equal means, balanced sizes m = n = 50: MD-MD
    // power should sit near the nominal level (99% binomial band around
    // 0.1). Balance matters: with n = 3m the permutation null is wider
    // than the unconditional one here and the rate collapses to ~0.
    let g1 = DistributionSpec::spherical_gaussian(d, 0.0, 1.0);
    let g2 = DistributionSpec::iid_t5(d);
    let s1_rate = power(
        &g1,
        &g2,
        &TestDescriptor::diproperm(DirectionMethod::Md, StatKind::MeanDiff),
        50,
        50,
        0.1,
        200,
        100,
        1604,
    );

    let pass = dwd_t >= energy + 0.1 && dwd_md >= md_md + 0.1 && (0.045..=0.155).contains(&s1_rate);
    report(
        6,
        "power ordering",
        pass,
        &format!(
            "dwd-t {dwd_t:.3} >= energy {energy:.3} + 0.1; dwd-md {dwd_md:.3} >= \
             md-md {md_md:.3} + 0.1; gaussian-vs-t md-md {s1_rate:.3} in [0.045, 0.155]"
        ),
    );
}

// ---- criterion 7: deterministic oracles ------------------------------

fn brute_welch(x: &[f64], y: &[f64]) -> f64 {
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let var = |v: &[f64], mu: f64| {
        v.iter().map(|t| (t - mu) * (t - mu)).sum::<f64>() / (v.len() - 1) as f64
    };
    let (mx, my) = (mean(x), mean(y));
    (mx - my) / (var(x, mx) / x.len() as f64 + var(y, my) / y.len() as f64).sqrt()
}

fn brute_auc(x: &[f64], y: &[f64]) -> f64 {
    let mut total = 0.0;
    for a in x {
        for b in y {
            total += if a > b {
                1.0
            } else if a == b {
                0.5
            } else {
                0.0
            };
        }
    }
    total / (x.len() * y.len()) as f64
}

fn brute_median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mid = s.len() / 2;
    if s.len().is_multiple_of(2) {
        0.5 * (s[mid - 1] + s[mid])
    } else {
        s[mid]
    }
}

#[test]
fn c7_deterministic_oracles() {
    let mut detail = String::new();

    // FLD-Hotelling bridge on 100 random low-dimensional instances:
    // (X̄-Ȳ) W⁺ (X̄-Ȳ)' = T² · N / (m n (N-2))
    let policy = RngPolicy::new(1700);
    let mut bridge_worst = 0.0f64;
    for i in 0..100 {
        let mut rng = policy.stream(i);
        let d = 2 + (i as usize % 5);
        let m = d + 3 + (i as usize % 4);
        let n = d + 4 + (i as usize % 3);
        let x = nalgebra::DMatrix::from_fn(m, d, |_, _| rng.sample::<f64, _>(StandardNormal));
        let y = nalgebra::DMatrix::from_fn(n, d, |_, _| {
            0.3 + rng.sample::<f64, _>(StandardNormal)
        });
        let sp = SamplePair::new(x, y).unwrap();
        let lhs = fld_mean_diff_value(&sp).unwrap();
        let h = hotelling_t2(&sp).unwrap();
        let total = (m + n) as f64;
        let rhs = h.t2 * total / ((m * n) as f64 * (total - 2.0));
        bridge_worst = bridge_worst.max((lhs - rhs).abs());
    }
    let bridge_ok = bridge_worst < 1e-8;
    detail.push_str(&format!("fld-hotelling bridge worst {bridge_worst:.2e}; "));

    // energy hand value: X = {0, 2}, Y = {1, 3} gives exactly 1
    let sp = SamplePair::new(
        nalgebra::DMatrix::from_row_slice(2, 1, &[0.0, 2.0]),
        nalgebra::DMatrix::from_row_slice(2, 1, &[1.0, 3.0]),
    )
    .unwrap();
    let energy_ok = (diproperm::baselines::energy_statistic(&sp) - 1.0).abs() < 1e-12;
    detail.push_str(&format!("energy hand value ok {energy_ok}; "));

    // statistics vs brute force on 1000 random projection vectors
    let mut stats_worst = 0.0f64;
    for i in 0..1000 {
        let mut rng = policy.stream(1000 + i);
        let m = 5 + (i as usize % 20);
        let n = 5 + (i as usize % 13);
        let px: Vec<f64> = (0..m).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let py: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let ps = ProjectionSummary::from_projections(px.clone(), py.clone());
        stats_worst = stats_worst.max((stat_welch_t(&ps).unwrap() - brute_welch(&px, &py)).abs());
        stats_worst = stats_worst.max((stat_auc(&ps) - brute_auc(&px, &py)).abs());
        stats_worst = stats_worst
            .max((stat_median_diff(&ps) - (brute_median(&px) - brute_median(&py))).abs());
    }
    let stats_ok = stats_worst < 1e-12;
    detail.push_str(&format!("stat brute-force worst {stats_worst:.2e}; "));

    // MDP piling residual whenever d > N - 2. At d = N - 2 exactly, the
    // N - 2 within-class difference vectors generically span all of R^d,
    // so no direction is orthogonal to them and complete piling is
    // impossible for any classifier; the property starts at d = N - 1.
    let mut piling_worst = 0.0f64;
    for (i, (m, n, d)) in [(2usize, 2usize, 5usize), (4, 4, 7), (5, 7, 11), (10, 10, 40)]
        .into_iter()
        .enumerate()
    {
        let mut rng = policy.stream(3000 + i as u64);
        let x = nalgebra::DMatrix::from_fn(m, d, |_, _| rng.sample::<f64, _>(StandardNormal));
        let y = nalgebra::DMatrix::from_fn(n, d, |_, _| {
            1.0 + rng.sample::<f64, _>(StandardNormal)
        });
        let sp = SamplePair::new(x, y).unwrap();
        let dir = mdp_direction(&sp).unwrap();
        let ps = project(&sp, &dir);
        for v in &ps.px {
            piling_worst = piling_worst.max((v - ps.mean_x).abs());
        }
        for v in &ps.py {
            piling_worst = piling_worst.max((v - ps.mean_y).abs());
        }
    }
    let piling_ok = piling_worst < 1e-8;
    detail.push_str(&format!("mdp piling worst {piling_worst:.2e}; "));

    // expected pair distance vs Monte Carlo at d = 10^4
    let d = 10_000;
    let (sx2, sy2) = (1.0f64, 4.0f64);
    let mut rng = policy.stream(4000);
    let mut total = 0.0;
    let pairs = 200;
    for _ in 0..pairs {
        let mut sq = 0.0;
        for _ in 0..d {
            let a: f64 = rng.sample::<f64, _>(StandardNormal) * sx2.sqrt();
            let b: f64 = rng.sample::<f64, _>(StandardNormal) * sy2.sqrt();
            sq += (a - b) * (a - b);
        }
        total += sq.sqrt();
    }
    let mc = total / pairs as f64;
    let formula = expected_pair_distance(sx2, sy2, d);
    let dist_rel = (mc - formula).abs() / formula;
    let dist_ok = dist_rel < 0.02;
    detail.push_str(&format!("pair distance rel err {dist_rel:.4} < 0.02"));

    report(
        7,
        "deterministic oracles",
        bridge_ok && energy_ok && stats_ok && piling_ok && dist_ok,
        &detail,
    );
}
