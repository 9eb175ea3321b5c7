//! Small Monte Carlo power comparison on the bimodal mixture setting:
//! DiProPerm with a DWD direction versus the energy baseline.

use diproperm::data_model::RngPolicy;
use diproperm::directions::DirectionMethod;
use diproperm::permutation::PermutationPlan;
use diproperm::simulation::{estimate_power, DistributionSpec, TestDescriptor};
use diproperm::statistics::StatKind;

fn main() -> diproperm::Result<()> {
    let d = 100;
    let (m, n) = (50, 50);
    let (alpha, reps, b) = (0.1, 50, 100);

    // equal mixtures with different component layouts and identical means
    let f1 = DistributionSpec::s3_sample1(d);
    let f2 = DistributionSpec::s3_sample2(d);

    let tests = [
        TestDescriptor::diproperm(DirectionMethod::Dwd, StatKind::WelchT),
        TestDescriptor::diproperm(DirectionMethod::Md, StatKind::MeanDiff),
        TestDescriptor::Energy,
    ];

    println!("{:<10} {:>10} {:>10}", "test", "power", "stderr");
    for (i, test) in tests.iter().enumerate() {
        let plan = PermutationPlan::new(b, RngPolicy::new(2024).child(i as u64));
        let est = estimate_power(&f1, &f2, test, m, n, alpha, reps, &plan)?;
        println!(
            "{:<10} {:>10.3} {:>10.3}",
            test.name(),
            est.rejection_rate,
            est.std_err
        );
    }
    Ok(())
}
