//! Datasets, labels, RNG policy, and delimited-file ingestion.
//!
//! Observations are rows and features are columns throughout the crate.
//! The `transpose` ingestion flag accommodates the genes-by-samples layout
//! common in microarray files.

use std::collections::BTreeSet;
use std::path::Path;

use nalgebra::{DMatrix, RowDVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Two labeled samples X (m×d) and Y (n×d) sharing feature dimension d.
///
/// All directional statistics in this crate are defined relative to X:
/// directions are oriented so the projected mean of X is at least the
/// projected mean of Y.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePair {
    x: DMatrix<f64>,
    y: DMatrix<f64>,
    /// Label names recorded at ingestion, if any: (x label, y label).
    pub label_names: Option<(String, String)>,
}

impl SamplePair {
    /// Builds a pair from two row-major observation matrices.
    ///
    /// Rejects empty groups, mismatched feature dimensions, and non-finite
    /// entries.
    pub fn new(x: DMatrix<f64>, y: DMatrix<f64>) -> Result<Self> {
        if x.nrows() == 0 {
            return Err(Error::EmptyGroup("X".into()));
        }
        if y.nrows() == 0 {
            return Err(Error::EmptyGroup("Y".into()));
        }
        if x.ncols() != y.ncols() || x.ncols() == 0 {
            return Err(Error::Config(format!(
                "feature dimensions must match and be positive, got {} and {}",
                x.ncols(),
                y.ncols()
            )));
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Config("non-finite entry in sample matrix".into()));
        }
        Ok(SamplePair {
            x,
            y,
            label_names: None,
        })
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &DMatrix<f64> {
        &self.y
    }

    /// Number of observations in X.
    pub fn m(&self) -> usize {
        self.x.nrows()
    }

    /// Number of observations in Y.
    pub fn n(&self) -> usize {
        self.y.nrows()
    }

    /// Feature dimension d.
    pub fn d(&self) -> usize {
        self.x.ncols()
    }

    /// Pooled sample size N = m + n.
    pub fn total(&self) -> usize {
        self.m() + self.n()
    }

    /// Centroid of X as a 1×d row vector.
    pub fn x_mean(&self) -> RowDVector<f64> {
        self.x.row_mean()
    }

    /// Centroid of Y as a 1×d row vector.
    pub fn y_mean(&self) -> RowDVector<f64> {
        self.y.row_mean()
    }
}

/// The pooled sample Z: the X block stacked on top of the Y block.
///
/// The first `split_m` rows are group 1; label permutations reorder the
/// rows while `split_m` stays fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct PooledSample {
    pub z: DMatrix<f64>,
    pub split_m: usize,
}

impl PooledSample {
    /// Pooled sample size N.
    pub fn total(&self) -> usize {
        self.z.nrows()
    }

    /// Splits back into a `SamplePair` at the `split_m` boundary.
    pub fn unpool(&self) -> Result<SamplePair> {
        let m = self.split_m;
        let n = self.z.nrows() - m;
        SamplePair::new(
            self.z.rows(0, m).into_owned(),
            self.z.rows(m, n).into_owned(),
        )
    }
}

/// Concatenates X-then-Y into a pooled sample with `split_m = m`.
pub fn pool(sp: &SamplePair) -> PooledSample {
    let m = sp.m();
    let n = sp.n();
    let d = sp.d();
    let mut z = DMatrix::zeros(m + n, d);
    z.rows_mut(0, m).copy_from(sp.x());
    z.rows_mut(m, n).copy_from(sp.y());
    PooledSample { z, split_m: m }
}

/// Seed policy for reproducible, order-independent parallel execution.
///
/// Every task (permutation replicate, Monte Carlo repetition, projection
/// draw) gets its own counter-based substream keyed by `(master_seed,
/// task_index)`, so results do not depend on worker count or scheduling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngPolicy {
    pub master_seed: u64,
}

impl RngPolicy {
    pub fn new(master_seed: u64) -> Self {
        RngPolicy { master_seed }
    }

    /// Returns the substream for `task_index`. Identical `(master_seed,
    /// task_index)` always yields an identical value stream.
    pub fn stream(&self, task_index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(task_index);
        rng
    }

    /// Derives an independent child policy for nested task structures
    /// (e.g. one permutation plan per Monte Carlo repetition).
    pub fn child(&self, task_index: u64) -> RngPolicy {
        RngPolicy {
            master_seed: splitmix64(
                self.master_seed ^ task_index.wrapping_mul(0x9E37_79B9_7F4A_7C15),
            ),
        }
    }
}

fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// How to find the label of each observation in a delimited file.
#[derive(Debug, Clone)]
pub enum LabelSpec {
    /// A column of the data file, by header name.
    ColumnName(String),
    /// A column of the data file, by zero-based index.
    ColumnIndex(usize),
    /// A separate text file with one label per observation, in order.
    /// Required when the data file is transposed (features × samples).
    File(std::path::PathBuf),
}

/// Options for [`load_dataset`].
#[derive(Debug, Clone)]
pub struct LoadOptions {
    pub labels: LabelSpec,
    /// Input file is features × observations; transpose after reading.
    pub transpose: bool,
    /// Force this label value to be group X. Default: the lexicographically
    /// smaller label is X.
    pub positive_label: Option<String>,
    /// The file starts with a header row. Implied by `LabelSpec::ColumnName`.
    pub has_header: bool,
}

impl LoadOptions {
    pub fn by_column_name(name: &str) -> Self {
        LoadOptions {
            labels: LabelSpec::ColumnName(name.to_string()),
            transpose: false,
            positive_label: None,
            has_header: true,
        }
    }

    pub fn by_column_index(index: usize, has_header: bool) -> Self {
        LoadOptions {
            labels: LabelSpec::ColumnIndex(index),
            transpose: false,
            positive_label: None,
            has_header,
        }
    }

    pub fn by_label_file(path: impl Into<std::path::PathBuf>, transpose: bool) -> Self {
        LoadOptions {
            labels: LabelSpec::File(path.into()),
            transpose,
            positive_label: None,
            has_header: false,
        }
    }
}

/// Loads a two-group dataset from a comma- or tab-delimited text file.
///
/// The delimiter is taken from the extension (`.tsv`/`.tab` means tab) or
/// sniffed from the first line. Rows carrying the X label (see
/// `LoadOptions::positive_label`) become group X, the rest group Y; row
/// order within each group follows file order.
pub fn load_dataset(path: &Path, opts: &LoadOptions) -> Result<SamplePair> {
    let text = std::fs::read_to_string(path)?;
    let delim = sniff_delimiter(path, &text);

    let mut lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    if lines.is_empty() {
        return Err(Error::Config(format!("{}: empty file", path.display())));
    }

    let header: Option<Vec<String>> = if opts.has_header {
        let h = lines.remove(0);
        Some(h.split(delim).map(|s| s.trim().to_string()).collect())
    } else {
        None
    };

    let mut cells: Vec<Vec<String>> = lines
        .iter()
        .map(|l| l.split(delim).map(|s| s.trim().to_string()).collect())
        .collect();

    // Labels first, so the transpose path can keep the matrix fully numeric.
    let labels: Vec<String> = match &opts.labels {
        LabelSpec::ColumnName(name) => {
            let header = header
                .as_ref()
                .ok_or_else(|| Error::Config("label column by name requires a header".into()))?;
            let idx = header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::Config(format!("no column named {name:?}")))?;
            extract_label_column(&mut cells, idx)?
        }
        LabelSpec::ColumnIndex(idx) => extract_label_column(&mut cells, *idx)?,
        LabelSpec::File(label_path) => std::fs::read_to_string(label_path)?
            .lines()
            .map(|l| l.trim().to_string())
            .filter(|l| !l.is_empty())
            .collect(),
    };

    let mut matrix = parse_numeric(&cells)?;
    if opts.transpose {
        matrix = matrix.transpose();
    }

    if labels.len() != matrix.nrows() {
        return Err(Error::Config(format!(
            "{} labels for {} observations",
            labels.len(),
            matrix.nrows()
        )));
    }

    let distinct: BTreeSet<&String> = labels.iter().collect();
    if distinct.len() != 2 {
        return Err(Error::Label(
            distinct.into_iter().cloned().collect::<Vec<_>>(),
        ));
    }
    let mut iter = distinct.into_iter();
    let (first, second) = (iter.next().unwrap().clone(), iter.next().unwrap().clone());
    let (x_label, y_label) = match &opts.positive_label {
        Some(p) if *p == second => (second, first),
        Some(p) if *p == first => (first, second),
        Some(p) => {
            return Err(Error::Config(format!(
                "positive label {p:?} does not occur in the data"
            )))
        }
        None => (first, second), // lexicographically smaller label is X
    };

    let x_idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == x_label).collect();
    let y_idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == y_label).collect();
    let mut sp = SamplePair::new(select_rows(&matrix, &x_idx), select_rows(&matrix, &y_idx))?;
    sp.label_names = Some((x_label, y_label));
    Ok(sp)
}

fn sniff_delimiter(path: &Path, text: &str) -> char {
    match path.extension().and_then(|e| e.to_str()) {
        Some("tsv") | Some("tab") => '\t',
        Some("csv") => ',',
        _ => {
            if text.lines().next().is_some_and(|l| l.contains('\t')) {
                '\t'
            } else {
                ','
            }
        }
    }
}

fn extract_label_column(cells: &mut [Vec<String>], idx: usize) -> Result<Vec<String>> {
    cells
        .iter_mut()
        .enumerate()
        .map(|(row, line)| {
            if idx >= line.len() {
                return Err(Error::Parse {
                    row,
                    col: idx,
                    msg: "missing label cell".into(),
                });
            }
            Ok(line.remove(idx))
        })
        .collect()
}

fn parse_numeric(cells: &[Vec<String>]) -> Result<DMatrix<f64>> {
    let nrows = cells.len();
    let ncols = cells.first().map_or(0, |r| r.len());
    if ncols == 0 {
        return Err(Error::Config("no feature columns".into()));
    }
    let mut m = DMatrix::zeros(nrows, ncols);
    for (i, row) in cells.iter().enumerate() {
        if row.len() != ncols {
            return Err(Error::Parse {
                row: i,
                col: row.len(),
                msg: format!("expected {ncols} cells, found {}", row.len()),
            });
        }
        for (j, cell) in row.iter().enumerate() {
            m[(i, j)] = cell.parse::<f64>().map_err(|e| Error::Parse {
                row: i,
                col: j,
                msg: format!("{cell:?}: {e}"),
            })?;
        }
    }
    Ok(m)
}

fn select_rows(m: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), m.ncols(), |i, j| m[(idx[i], j)])
}
