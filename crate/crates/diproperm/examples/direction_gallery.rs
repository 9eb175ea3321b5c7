//! Trains all five direction classifiers on the same dataset and compares
//! the projected separations and the angle each makes with the mean
//! difference direction.

use diproperm::data_model::{RngPolicy, SamplePair};
use diproperm::directions::{compute_direction, DirectionMethod};
use diproperm::simulation::{sample_distribution, DistributionSpec};
use diproperm::statistics::{project, stat_welch_t, SolverOptions};

fn main() -> diproperm::Result<()> {
    // keep d < m + n - 2 so the within-class scatter is nonsingular and
    // FLD/MDP do not enter the data-piling regime
    let d = 30;
    let policy = RngPolicy::new(7);
    let f1 = DistributionSpec::spherical_gaussian(d, 0.4, 1.0);
    let f2 = DistributionSpec::spherical_gaussian(d, 0.0, 1.0);
    let x = sample_distribution(&f1, 30, &mut policy.stream(0))?;
    let y = sample_distribution(&f2, 30, &mut policy.stream(1))?;
    let sp = SamplePair::new(x, y)?;

    let opts = SolverOptions::default();
    let md = compute_direction(&sp, DirectionMethod::Md, &opts)?;

    println!(
        "{:<6} {:>12} {:>12} {:>14}",
        "method", "mean diff", "welch t", "angle to MD"
    );
    for method in DirectionMethod::ALL {
        let dir = compute_direction(&sp, method, &opts)?;
        let ps = project(&sp, &dir);
        let cosine = dir.w.dot(&md.w).clamp(-1.0, 1.0);
        println!(
            "{:<6} {:>12.4} {:>12.4} {:>13.1}°",
            method.name(),
            ps.mean_x - ps.mean_y,
            stat_welch_t(&ps)?,
            cosine.acos().to_degrees()
        );
    }
    Ok(())
}
