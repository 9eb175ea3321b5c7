//! Criterion 8: every CLI command with a fixed seed produces byte-identical
//! output regardless of the worker thread count.

use std::io::Write;
use std::process::Command;

fn run(args: &[&str], threads: &str) -> (Vec<u8>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_diproperm"))
        .args(args)
        .args(["--threads", threads])
        .output()
        .expect("spawn diproperm");
    assert!(
        out.status.success(),
        "diproperm {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    (out.stdout, out.stderr)
}

fn assert_identical_across_workers(args: &[&str]) {
    let baseline = run(args, "1");
    for threads in ["4", "8"] {
        let other = run(args, threads);
        assert_eq!(
            baseline, other,
            "output of {args:?} differs between 1 and {threads} workers"
        );
    }
}

#[test]
fn c8_test_subcommand_is_worker_independent() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("data.csv");
    let mut f = std::fs::File::create(&csv).unwrap();
    writeln!(f, "label,a,b,c,e").unwrap();
    for i in 0..15 {
        let t = i as f64 * 0.37;
        writeln!(f, "x,{:.4},{:.4},{:.4},{:.4}", t.sin() + 1.0, t.cos(), t * 0.1, 0.5).unwrap();
        writeln!(f, "y,{:.4},{:.4},{:.4},{:.4}", t.sin(), t.cos() - 0.5, t * 0.2, 0.1).unwrap();
    }
    drop(f);
    let csv = csv.to_str().unwrap();
    assert_identical_across_workers(&[
        "test", csv, "--label", "label", "--direction", "dwd", "--stat", "t", "--nperm", "200",
        "--seed", "31",
    ]);
    println!("criterion 8 (test subcommand worker independence): PASS");
}

#[test]
fn c8_power_subcommand_is_worker_independent() {
    assert_identical_across_workers(&[
        "power", "--setting", "gauss", "--test", "md-t", "--dims", "30", "--m", "15", "--n",
        "15", "--mu1", "0,0.5", "--reps", "25", "--nperm", "50", "--seed", "32",
    ]);
    assert_identical_across_workers(&[
        "power", "--setting", "s3", "--test", "energy", "--dims", "25", "--m", "12", "--n",
        "12", "--reps", "20", "--nperm", "50", "--seed", "33",
    ]);
    println!("criterion 8 (power subcommand worker independence): PASS");
}

#[test]
fn c8_scaling_subcommand_is_worker_independent() {
    assert_identical_across_workers(&[
        "scaling", "--dims", "20,80", "--m", "10", "--n", "10", "--reps", "10", "--seed", "34",
    ]);
    println!("criterion 8 (scaling subcommand worker independence): PASS");
}

#[test]
fn c8_baseline_subcommand_is_worker_independent() {
    for method in ["energy", "rp", "hotelling"] {
        assert_identical_across_workers(&[
            "baseline", "--method", method, "--setting", "gauss", "--d", "10", "--m", "15",
            "--n", "15", "--nperm", "100", "--seed", "35",
        ]);
    }
    println!("criterion 8 (baseline subcommand worker independence): PASS");
}

#[test]
fn seed_env_var_fallback_matches_explicit_flag() {
    let with_flag = Command::new(env!("CARGO_BIN_EXE_diproperm"))
        .args(["scaling", "--dims", "20", "--m", "8", "--n", "8", "--reps", "5", "--seed", "77"])
        .output()
        .unwrap();
    let with_env = Command::new(env!("CARGO_BIN_EXE_diproperm"))
        .args(["scaling", "--dims", "20", "--m", "8", "--n", "8", "--reps", "5"])
        .env("DIPROPERM_SEED", "77")
        .output()
        .unwrap();
    assert_eq!(with_flag.stdout, with_env.stdout);
}
