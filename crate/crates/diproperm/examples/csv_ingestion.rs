//! Loads a two-group dataset from a CSV file with a label column and runs
//! a DiProPerm test on it, mirroring what the `diproperm test` subcommand
//! does.

use std::io::Write;

use diproperm::data_model::{load_dataset, LabelSpec, LoadOptions, RngPolicy};
use diproperm::directions::DirectionMethod;
use diproperm::permutation::{run_diproperm, PermutationPlan};
use diproperm::statistics::{SolverOptions, StatKind};

fn main() -> diproperm::Result<()> {
    // write a small CSV: a label column plus three feature columns
    let dir = std::env::temp_dir();
    let path = dir.join("diproperm_example.csv");
    let mut file = std::fs::File::create(&path)?;
    writeln!(file, "group,gene_a,gene_b,gene_c")?;
    for i in 0..12 {
        let t = i as f64 / 4.0;
        writeln!(file, "case,{:.3},{:.3},{:.3}", 2.0 + t, 1.0 - t, 0.5)?;
        writeln!(file, "control,{:.3},{:.3},{:.3}", t, 1.0 + t, 0.4)?;
    }
    drop(file);

    let opts = LoadOptions {
        labels: LabelSpec::ColumnName("group".into()),
        transpose: false,
        positive_label: Some("case".into()),
        has_header: true,
    };
    let sp = load_dataset(&path, &opts)?;
    println!(
        "loaded {} + {} observations, {} features, X = {:?}",
        sp.m(),
        sp.n(),
        sp.d(),
        sp.label_names.as_ref().map(|(a, _)| a.as_str())
    );

    let plan = PermutationPlan::new(500, RngPolicy::new(1));
    let result = run_diproperm(
        &sp,
        DirectionMethod::Fld,
        StatKind::WelchT,
        &SolverOptions::default(),
        &plan,
    )?;
    println!(
        "fld-t: observed {:.3}, empirical p {:.4}",
        result.observed, result.empirical_p
    );

    std::fs::remove_file(&path)?;
    Ok(())
}
