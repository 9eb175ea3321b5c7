//! Command-line front end: run tests on data files, run simulations, and
//! emit plot-ready TSV/JSON.
//!
//! Exit codes: 0 success, 2 validation error, 3 solver failure.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::baselines::{energy_test, hotelling_t2, rp_test, RPConfig};
use crate::data_model::{load_dataset, pool, LabelSpec, LoadOptions, RngPolicy, SamplePair};
use crate::directions::{compute_direction, DirectionMethod};
use crate::error::{Error, Result};
use crate::permutation::{replicate_sample, run_diproperm, PermutationPlan};
use crate::simulation::{
    estimate_power, sample_distribution, scaling_diagnostic, DistributionSpec, TestDescriptor,
};
use crate::statistics::{project, SolverOptions, StatKind};

#[derive(Debug, Parser)]
#[command(
    name = "diproperm",
    about = "Direction-Projection-Permutation two-sample tests for high dimensional data",
    version
)]
pub struct Cli {
    /// Worker thread count (results are identical for any value).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a DiProPerm test on a delimited data file.
    Test(TestArgs),
    /// Monte Carlo power estimates over simulation settings.
    Power(PowerArgs),
    /// Dimension-scaling diagnostic of the MD-t denominator.
    Scaling(ScalingArgs),
    /// Run a baseline test (energy, rp, hotelling) on simulated data.
    Baseline(BaselineArgs),
}

/// Output format. Single results default to json, grids to tsv.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Tsv,
}

/// Direction choices: md, fld, svm, dwd, mdp.
#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DirectionArg {
    Md,
    Fld,
    Svm,
    Dwd,
    Mdp,
}

impl From<DirectionArg> for DirectionMethod {
    fn from(a: DirectionArg) -> Self {
        match a {
            DirectionArg::Md => DirectionMethod::Md,
            DirectionArg::Fld => DirectionMethod::Fld,
            DirectionArg::Svm => DirectionMethod::Svm,
            DirectionArg::Dwd => DirectionMethod::Dwd,
            DirectionArg::Mdp => DirectionMethod::Mdp,
        }
    }
}

/// Statistic choices: md, t, smd, med, medmad, auc, pairt.
#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StatArg {
    Md,
    T,
    Smd,
    Med,
    Medmad,
    Auc,
    Pairt,
}

impl From<StatArg> for StatKind {
    fn from(a: StatArg) -> Self {
        match a {
            StatArg::Md => StatKind::MeanDiff,
            StatArg::T => StatKind::WelchT,
            StatArg::Smd => StatKind::ScaledMeanDiff,
            StatArg::Med => StatKind::MedianDiff,
            StatArg::Medmad => StatKind::MedianOverMad,
            StatArg::Auc => StatKind::Auc,
            StatArg::Pairt => StatKind::PairedT,
        }
    }
}

#[derive(Debug, Parser)]
pub struct TestArgs {
    /// Input data file (CSV or TSV).
    pub input: PathBuf,

    #[arg(long, value_enum, default_value = "md")]
    pub direction: DirectionArg,

    #[arg(long, value_enum, default_value = "t")]
    pub stat: StatArg,

    /// Number of label permutations B.
    #[arg(long, default_value_t = 1000)]
    pub nperm: usize,

    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,

    /// Master seed (falls back to env DIPROPERM_SEED, then 0).
    #[arg(long)]
    pub seed: Option<u64>,

    /// Label column name (requires a header row).
    #[arg(long)]
    pub label: Option<String>,

    /// Label column zero-based index.
    #[arg(long, conflicts_with = "label")]
    pub label_index: Option<usize>,

    /// Separate label file, one label per observation.
    #[arg(long, conflicts_with_all = ["label", "label_index"])]
    pub label_file: Option<PathBuf>,

    /// The data file has no header row.
    #[arg(long)]
    pub no_header: bool,

    /// Input is features x observations; transpose after reading.
    #[arg(long)]
    pub transpose: bool,

    /// Which label value is group X (default: lexicographically smaller).
    #[arg(long)]
    pub positive_label: Option<String>,

    /// Write the JSON result here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Write the projections TSV here (default: derived from --output).
    #[arg(long)]
    pub projections: Option<PathBuf>,

    /// How many permuted worlds to include in the projections TSV.
    #[arg(long, default_value_t = 3)]
    pub projection_worlds: usize,

    /// Keep only this many permuted statistics in the JSON output.
    #[arg(long)]
    pub truncate_perm_stats: Option<usize>,

    /// Also report the (#exceed + 1)/(B + 1) smoothed p-value.
    #[arg(long)]
    pub smoothed: bool,

    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatArg,

    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Parser)]
pub struct SolverArgs {
    /// SVM slack penalty.
    #[arg(long, default_value_t = 100.0)]
    pub svm_c: f64,
    /// DWD penalty (default: 100 / median^2 between-class distance).
    #[arg(long)]
    pub dwd_c: Option<f64>,
}

impl SolverArgs {
    fn options(&self) -> SolverOptions {
        SolverOptions {
            svm_c: self.svm_c,
            dwd_c: self.dwd_c,
            ..SolverOptions::default()
        }
    }
}

#[derive(Debug, Parser)]
pub struct PowerArgs {
    /// Simulation setting: s1, s2, s3, or gauss (mu1/sigma1sq grid).
    #[arg(long, default_value = "gauss")]
    pub setting: String,

    /// Test to run: a direction-stat pair (md-md, md-t, dwd-t, ...) or
    /// energy, rp, hotelling.
    #[arg(long, default_value = "md-md")]
    pub test: String,

    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',', default_value = "100")]
    pub dims: Vec<usize>,

    #[arg(long, default_value_t = 50)]
    pub m: usize,

    #[arg(long, default_value_t = 50)]
    pub n: usize,

    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,

    /// Monte Carlo repetitions per grid point.
    #[arg(long, default_value_t = 200)]
    pub reps: usize,

    #[arg(long, default_value_t = 100)]
    pub nperm: usize,

    #[arg(long)]
    pub seed: Option<u64>,

    /// mu1 grid for the gauss setting.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub mu1: Vec<f64>,

    /// sigma1^2 grid for the gauss setting.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub sigma1sq: Vec<f64>,

    #[arg(long)]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "tsv")]
    pub format: FormatArg,

    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Parser)]
pub struct ScalingArgs {
    /// Variance of the second sample.
    #[arg(long, default_value_t = 100.0)]
    pub sigmay2: f64,

    #[arg(long, value_delimiter = ',', default_value = "100,400")]
    pub dims: Vec<usize>,

    #[arg(long, default_value_t = 50)]
    pub m: usize,

    #[arg(long, default_value_t = 50)]
    pub n: usize,

    #[arg(long, default_value_t = 50)]
    pub reps: usize,

    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long)]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "tsv")]
    pub format: FormatArg,
}

#[derive(Debug, Parser)]
pub struct BaselineArgs {
    /// energy, rp, or hotelling.
    #[arg(long)]
    pub method: String,

    /// Simulation setting: s1, s2, s3, or gauss.
    #[arg(long, default_value = "s1")]
    pub setting: String,

    #[arg(long, default_value_t = 100)]
    pub d: usize,

    #[arg(long, default_value_t = 50)]
    pub m: usize,

    #[arg(long, default_value_t = 50)]
    pub n: usize,

    #[arg(long, default_value_t = 1000)]
    pub nperm: usize,

    /// Projected dimension for the rp method.
    #[arg(long)]
    pub k: Option<usize>,

    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long, default_value_t = 0.0)]
    pub mu1: f64,

    #[arg(long, default_value_t = 1.0)]
    pub sigma1sq: f64,

    #[arg(long)]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatArg,
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.or_else(|| {
        std::env::var("DIPROPERM_SEED")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(0)
}

fn write_output(path: &Option<PathBuf>, content: &str) -> Result<()> {
    match path {
        Some(p) => {
            let mut f = std::fs::File::create(p)?;
            f.write_all(content.as_bytes())?;
            Ok(())
        }
        None => {
            print!("{content}");
            std::io::stdout().flush()?;
            Ok(())
        }
    }
}

/// The two generators of a named simulation setting.
fn setting_specs(
    setting: &str,
    d: usize,
    n: usize,
    mu1: f64,
    sigma1sq: f64,
) -> Result<(DistributionSpec, DistributionSpec)> {
    match setting {
        "s1" => Ok((
            DistributionSpec::spherical_gaussian(d, 0.0, 1.0),
            DistributionSpec::iid_t5(d),
        )),
        "s2" => Ok((DistributionSpec::s2_null(d), DistributionSpec::s2_shifted(d, n))),
        "s3" => Ok((
            DistributionSpec::s3_sample1(d),
            DistributionSpec::s3_sample2(d),
        )),
        "gauss" => Ok((
            DistributionSpec::spherical_gaussian(d, mu1, sigma1sq),
            DistributionSpec::spherical_gaussian(d, 0.0, 1.0),
        )),
        other => Err(Error::Config(format!(
            "unknown setting {other:?} (expected s1, s2, s3, gauss)"
        ))),
    }
}

fn parse_test(name: &str, solver: &SolverArgs, rp_k: Option<usize>) -> Result<TestDescriptor> {
    match name {
        "energy" => return Ok(TestDescriptor::Energy),
        "rp" => return Ok(TestDescriptor::RandomProjection { k: rp_k }),
        "hotelling" => return Ok(TestDescriptor::Hotelling),
        _ => {}
    }
    let (dir_name, stat_name) = name
        .split_once('-')
        .ok_or_else(|| Error::Config(format!("unknown test {name:?}")))?;
    let direction = DirectionMethod::ALL
        .into_iter()
        .find(|m| m.name() == dir_name)
        .ok_or_else(|| Error::Config(format!("unknown direction {dir_name:?}")))?;
    let stat = StatKind::ALL
        .into_iter()
        .find(|s| s.name() == stat_name)
        .ok_or_else(|| Error::Config(format!("unknown statistic {stat_name:?}")))?;
    Ok(TestDescriptor::DiProPerm {
        direction,
        stat,
        opts: solver.options(),
    })
}

pub fn cmd_test(args: &TestArgs) -> Result<()> {
    let labels = if let Some(name) = &args.label {
        LabelSpec::ColumnName(name.clone())
    } else if let Some(idx) = args.label_index {
        LabelSpec::ColumnIndex(idx)
    } else if let Some(path) = &args.label_file {
        LabelSpec::File(path.clone())
    } else {
        LabelSpec::ColumnIndex(0)
    };
    let has_header = matches!(labels, LabelSpec::ColumnName(_)) || !args.no_header;
    let opts = LoadOptions {
        labels,
        transpose: args.transpose,
        positive_label: args.positive_label.clone(),
        has_header: has_header && !args.transpose,
    };
    let sp = load_dataset(&args.input, &opts)?;

    let seed = resolve_seed(args.seed);
    let mut plan = PermutationPlan::new(args.nperm, RngPolicy::new(seed));
    plan.include_smoothed = args.smoothed;
    let solver = args.solver.options();
    let direction: DirectionMethod = args.direction.into();
    let stat: StatKind = args.stat.into();

    let mut result = run_diproperm(&sp, direction, stat, &solver, &plan)?;

    let projections_path = args.projections.clone().or_else(|| {
        args.output
            .as_ref()
            .map(|o| o.with_extension("projections.tsv"))
    });
    if let Some(path) = &projections_path {
        write_projection_worlds(path, &sp, direction, &solver, &plan, args.projection_worlds)?;
    }

    if let Some(keep) = args.truncate_perm_stats {
        result.perm_stats.truncate(keep);
    }
    let rendered = match args.format {
        FormatArg::Json => {
            let json =
                serde_json::to_string_pretty(&result).map_err(|e| Error::Config(e.to_string()))?;
            format!("{json}\n")
        }
        FormatArg::Tsv => format!(
            "method\tstat\tobserved\tempirical_p\tgauss_p\tz\tb_perms\tseed\n\
             {}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            result.method.name(),
            result.stat.name(),
            result.observed,
            result.empirical_p,
            result.gauss_p,
            result.z_score,
            result.b_perms,
            result.seed
        ),
    };
    write_output(&args.output, &rendered)
}

/// Projections TSV with columns (value, group, world): the original world
/// plus the first `worlds` permuted relabelings, each with its retrained
/// direction.
fn write_projection_worlds(
    path: &Path,
    sp: &SamplePair,
    direction: DirectionMethod,
    solver: &SolverOptions,
    plan: &PermutationPlan,
    worlds: usize,
) -> Result<()> {
    let mut out = String::from("value\tgroup\tworld\n");
    let append = |sp_w: &SamplePair, world: &str, out: &mut String| -> Result<()> {
        let dir = compute_direction(sp_w, direction, solver)?;
        let ps = project(sp_w, &dir);
        for v in &ps.px {
            out.push_str(&format!("{v}\tX\t{world}\n"));
        }
        for v in &ps.py {
            out.push_str(&format!("{v}\tY\t{world}\n"));
        }
        Ok(())
    };
    append(sp, "original", &mut out)?;
    let pooled = pool(sp);
    for k in 1..=worlds.min(plan.b_perms) {
        let sp_k = replicate_sample(&pooled, plan, k)?;
        append(&sp_k, &format!("perm_{k}"), &mut out)?;
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn cmd_power(args: &PowerArgs) -> Result<()> {
    let seed = resolve_seed(args.seed);
    let test_name = args.test.clone();
    let descriptor = parse_test(&args.test, &args.solver, None)?;

    let mut tsv =
        String::from("mu1\tsigma1sq\td\trejection_rate\tstderr\ttest\tm\tn\talpha\treps\tseed\n");
    let mut json_rows: Vec<serde_json::Value> = Vec::new();
    let grid_points: Vec<(Option<f64>, Option<f64>, usize)> = if args.setting == "gauss" {
        args.dims
            .iter()
            .flat_map(|&d| {
                args.mu1.iter().flat_map(move |&mu| {
                    args.sigma1sq.iter().map(move |&s| (Some(mu), Some(s), d))
                })
            })
            .collect()
    } else {
        args.dims.iter().map(|&d| (None, None, d)).collect()
    };

    for (point, (mu1, s1, d)) in grid_points.into_iter().enumerate() {
        let (f1, f2) = setting_specs(
            &args.setting,
            d,
            args.n,
            mu1.unwrap_or(0.0),
            s1.unwrap_or(1.0),
        )?;
        let plan = PermutationPlan::new(
            args.nperm,
            RngPolicy::new(seed).child(point as u64),
        );
        let est = estimate_power(
            &f1, &f2, &descriptor, args.m, args.n, args.alpha, args.reps, &plan,
        )?;
        let fmt_opt = |v: Option<f64>| v.map_or("NA".to_string(), |x| format!("{x}"));
        tsv.push_str(&format!(
            "{}\t{}\t{}\t{}\t{:.6}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            fmt_opt(mu1),
            fmt_opt(s1),
            d,
            est.rejection_rate,
            est.std_err,
            test_name,
            args.m,
            args.n,
            args.alpha,
            args.reps,
            seed
        ));
        json_rows.push(serde_json::json!({
            "mu1": mu1,
            "sigma1sq": s1,
            "d": d,
            "rejection_rate": est.rejection_rate,
            "stderr": est.std_err,
            "test": test_name,
            "m": args.m,
            "n": args.n,
            "alpha": args.alpha,
            "reps": args.reps,
            "seed": seed,
        }));
    }
    match args.format {
        FormatArg::Tsv => write_output(&args.output, &tsv),
        FormatArg::Json => {
            let json = serde_json::to_string_pretty(&json_rows)
                .map_err(|e| Error::Config(e.to_string()))?;
            write_output(&args.output, &format!("{json}\n"))
        }
    }
}

pub fn cmd_scaling(args: &ScalingArgs) -> Result<()> {
    let seed = resolve_seed(args.seed);
    let plan = PermutationPlan::new(1, RngPolicy::new(seed));
    let rows = scaling_diagnostic(&args.dims, args.m, args.n, args.sigmay2, args.reps, &plan)?;
    match args.format {
        FormatArg::Tsv => {
            let mut tsv =
                String::from("d\tmedian_s_over_d\tmedian_s_perm_over_d\treps\tsigmay2\tseed\n");
            for row in &rows {
                tsv.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\n",
                    row.d,
                    row.median_s_over_d,
                    row.median_s_perm_over_d,
                    row.reps,
                    args.sigmay2,
                    seed
                ));
            }
            write_output(&args.output, &tsv)
        }
        FormatArg::Json => {
            let json_rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    serde_json::json!({
                        "d": row.d,
                        "median_s_over_d": row.median_s_over_d,
                        "median_s_perm_over_d": row.median_s_perm_over_d,
                        "reps": row.reps,
                        "sigmay2": args.sigmay2,
                        "seed": seed,
                    })
                })
                .collect();
            let json = serde_json::to_string_pretty(&json_rows)
                .map_err(|e| Error::Config(e.to_string()))?;
            write_output(&args.output, &format!("{json}\n"))
        }
    }
}

pub fn cmd_baseline(args: &BaselineArgs) -> Result<()> {
    let seed = resolve_seed(args.seed);
    let policy = RngPolicy::new(seed);
    let (f1, f2) = setting_specs(&args.setting, args.d, args.n, args.mu1, args.sigma1sq)?;
    let x = sample_distribution(&f1, args.m, &mut policy.stream(0))?;
    let y = sample_distribution(&f2, args.n, &mut policy.stream(1))?;
    let sp = SamplePair::new(x, y)?;

    let json = match args.method.as_str() {
        "energy" => {
            let plan = PermutationPlan::new(args.nperm, policy.child(1));
            let r = energy_test(&sp, &plan)?;
            serde_json::json!({
                "method": "energy",
                "observed": r.statistic,
                "empirical_p": r.empirical_p,
                "b_perms": r.b_perms,
                "seed": seed,
            })
        }
        "rp" => {
            let cfg = RPConfig {
                k: args.k,
                rng: policy.child(1),
            };
            let r = rp_test(&sp, &cfg)?;
            serde_json::json!({
                "method": "rp",
                "t2": r.t2,
                "f_stat": r.f_stat,
                "df1": r.df1,
                "df2": r.df2,
                "p_value": r.p_value,
                "seed": seed,
            })
        }
        "hotelling" => {
            let r = hotelling_t2(&sp)?;
            serde_json::json!({
                "method": "hotelling",
                "t2": r.t2,
                "f_stat": r.f_stat,
                "df1": r.df1,
                "df2": r.df2,
                "p_value": r.p_value,
                "seed": seed,
            })
        }
        other => {
            return Err(Error::Config(format!(
                "unknown baseline method {other:?} (expected energy, rp, hotelling)"
            )))
        }
    };
    let rendered = match args.format {
        FormatArg::Json => {
            let text =
                serde_json::to_string_pretty(&json).map_err(|e| Error::Config(e.to_string()))?;
            format!("{text}\n")
        }
        FormatArg::Tsv => {
            // one header/value row pair; serde_json's map keeps keys sorted
            let obj = json.as_object().expect("baseline result is an object");
            let header: Vec<&str> = obj.keys().map(String::as_str).collect();
            let values: Vec<String> = obj
                .values()
                .map(|v| match v {
                    serde_json::Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            format!("{}\n{}\n", header.join("\t"), values.join("\t"))
        }
    };
    write_output(&args.output, &rendered)
}

/// Runs a parsed CLI invocation.
pub fn run(cli: &Cli) -> Result<()> {
    if let Some(threads) = cli.threads {
        // ignore the error if a global pool already exists (e.g. in tests)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match &cli.command {
        Command::Test(args) => cmd_test(args),
        Command::Power(args) => cmd_power(args),
        Command::Scaling(args) => cmd_scaling(args),
        Command::Baseline(args) => cmd_baseline(args),
    }
}

fn is_solver_error(err: &Error) -> bool {
    match err {
        Error::Solver { .. } => true,
        Error::Replicate { source, .. } => is_solver_error(source),
        _ => false,
    }
}

/// Parses `std::env::args`, runs, and returns the process exit code.
pub fn main_with_exit_code() -> i32 {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if is_solver_error(&e) {
                3
            } else {
                2
            }
        }
    }
}
