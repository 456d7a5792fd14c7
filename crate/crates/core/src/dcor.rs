//! Sample distance covariance and correlation (V-statistics) computed from
//! distance matrices, plus a permutation test of independence.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metrics::{csv_field, DistanceMatrix};
use crate::rng;

/// Doubly centred distance matrix: `A_kl = a_kl - ā_k - ā_l + ā`.
#[derive(Debug, Clone, PartialEq)]
pub struct CenteredMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl CenteredMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }
}

pub fn double_center(d: &DistanceMatrix) -> CenteredMatrix {
    let n = d.n();
    let nf = n as f64;
    let row_means: Vec<f64> = (0..n).map(|i| (0..n).map(|j| d.get(i, j)).sum::<f64>() / nf).collect();
    let col_means: Vec<f64> = (0..n).map(|j| (0..n).map(|i| d.get(i, j)).sum::<f64>() / nf).collect();
    let grand = row_means.iter().sum::<f64>() / nf;
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            entries[i * n + j] = d.get(i, j) - row_means[i] - col_means[j] + grand;
        }
    }
    CenteredMatrix { n, entries }
}

/// `(1/n²) Σ A_kl B_kl`.
pub fn sample_dcov(a: &CenteredMatrix, b: &CenteredMatrix) -> Result<f64> {
    if a.n != b.n {
        return Err(Error::invalid(format!("size mismatch: {} vs {}", a.n, b.n)));
    }
    if a.n == 0 {
        return Ok(0.0);
    }
    let s: f64 = a.entries.iter().zip(&b.entries).map(|(x, y)| x * y).sum();
    let v = s / (a.n * a.n) as f64;
    if !v.is_finite() {
        return Err(Error::NumericalFailure(format!("non-finite distance covariance {v}")));
    }
    Ok(v)
}

/// Signed and square-rooted distance covariance/variance/correlation.
///
/// Lower-case fields are the raw V-statistics; capitalised fields are their
/// square roots (`dCor = sqrt(max(dcor, 0))`).
#[derive(Debug, Clone, Copy, PartialEq)]
#[allow(non_snake_case)]
pub struct DcorReport {
    pub dcov: f64,
    pub dvar_x: f64,
    pub dvar_y: f64,
    pub dcor: f64,
    pub dCov: f64,
    pub dVar_x: f64,
    pub dVar_y: f64,
    pub dCor: f64,
    pub negative_flag: bool,
}

impl DcorReport {
    fn from_parts(dcov: f64, dvar_x: f64, dvar_y: f64) -> Self {
        // Rounding can push a variance of a single-point sample a hair below zero.
        let (dvar_x, dvar_y) = (dvar_x.max(0.0), dvar_y.max(0.0));
        let denom = (dvar_x * dvar_y).sqrt();
        let dcor = if denom > 0.0 { dcov / denom } else { 0.0 };
        let negative = dcov < 0.0 && denom > 0.0;
        DcorReport {
            dcov,
            dvar_x,
            dvar_y,
            dcor,
            dCov: dcov.max(0.0).sqrt(),
            dVar_x: dvar_x.sqrt(),
            dVar_y: dvar_y.sqrt(),
            dCor: dcor.max(0.0).sqrt(),
            negative_flag: negative,
        }
    }

    /// Flat `key=value` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in [
            ("dcov", self.dcov),
            ("dvar_x", self.dvar_x),
            ("dvar_y", self.dvar_y),
            ("dcor", self.dcor),
            ("dCov", self.dCov),
            ("dVar_x", self.dVar_x),
            ("dVar_y", self.dVar_y),
            ("dCor", self.dCor),
        ] {
            writeln!(out, "{k}={v}").unwrap();
        }
        writeln!(out, "negative_flag={}", self.negative_flag).unwrap();
        out
    }
}

pub fn sample_dcor(dx: &DistanceMatrix, dy: &DistanceMatrix) -> Result<DcorReport> {
    if dx.n() != dy.n() {
        return Err(Error::invalid(format!("size mismatch: {} vs {}", dx.n(), dy.n())));
    }
    if dx.n() < 2 {
        return Err(Error::invalid("distance correlation needs at least two samples"));
    }
    let (a, b) = (double_center(dx), double_center(dy));
    Ok(DcorReport::from_parts(
        sample_dcov(&a, &b)?,
        sample_dcov(&a, &a)?,
        sample_dcov(&b, &b)?,
    ))
}

/// Symmetric matrix of pairwise correlations between several metric structures.
#[derive(Debug, Clone, PartialEq)]
pub struct DcorMatrix {
    pub labels: Vec<String>,
    pub reports: Vec<DcorReport>,
}

impl DcorMatrix {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn report(&self, i: usize, j: usize) -> &DcorReport {
        &self.reports[i * self.len() + j]
    }

    /// Square-rooted correlations, row-major.
    pub fn dcor_root(&self) -> Vec<f64> {
        self.reports.iter().map(|r| r.dCor).collect()
    }

    pub fn negative_flags(&self) -> Vec<bool> {
        self.reports.iter().map(|r| r.negative_flag).collect()
    }

    /// CSV of `dCor` values with the labels as header row and first column.
    pub fn to_csv(&self) -> String {
        self.values_csv(|r| r.dCor)
    }

    /// CSV of the signed `dcor` values.
    pub fn to_csv_raw(&self) -> String {
        self.values_csv(|r| r.dcor)
    }

    fn values_csv(&self, f: impl Fn(&DcorReport) -> f64) -> String {
        let mut out = String::from("metric");
        for l in &self.labels {
            out.push(',');
            out.push_str(&csv_field(l));
        }
        out.push('\n');
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(&csv_field(l));
            for j in 0..self.len() {
                write!(out, ",{}", f(self.report(i, j))).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

pub fn dcor_matrix(mats: &[DistanceMatrix]) -> Result<DcorMatrix> {
    if mats.len() < 2 {
        return Err(Error::invalid("need at least two distance matrices"));
    }
    let n = mats[0].n();
    if mats.iter().any(|m| m.n() != n) {
        return Err(Error::invalid("distance matrices differ in size"));
    }
    if n < 2 {
        return Err(Error::invalid("distance correlation needs at least two samples"));
    }
    let centered: Vec<CenteredMatrix> = mats.par_iter().map(double_center).collect();
    let k = mats.len();
    let mut cov = vec![0.0; k * k];
    for i in 0..k {
        for j in i..k {
            let c = sample_dcov(&centered[i], &centered[j])?;
            cov[i * k + j] = c;
            cov[j * k + i] = c;
        }
    }
    let mut reports = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            reports.push(DcorReport::from_parts(cov[i * k + j], cov[i * k + i], cov[j * k + j]));
        }
    }
    Ok(DcorMatrix {
        labels: mats.iter().map(|m| m.label().to_string()).collect(),
        reports,
    })
}

/// Permutation p-value for independence, `(1 + #{permuted dcov >= observed}) / (permutations + 1)`.
///
/// Replica `r` shuffles sample labels of `dy` with a generator seeded by
/// `derive_seed(seed, r)`, so the result does not depend on scheduling.
pub fn permutation_test(dx: &DistanceMatrix, dy: &DistanceMatrix, permutations: usize, seed: u64) -> Result<f64> {
    if dx.n() != dy.n() {
        return Err(Error::invalid(format!("size mismatch: {} vs {}", dx.n(), dy.n())));
    }
    if permutations < 1 {
        return Err(Error::invalid("need at least one permutation"));
    }
    let n = dx.n();
    let (a, b) = (double_center(dx), double_center(dy));
    let observed = sample_dcov(&a, &b)?;
    // Centering commutes with relabeling, so permuted statistics reuse B.
    let exceed = (0..permutations)
        .into_par_iter()
        .filter(|&r| {
            let mut perm: Vec<usize> = (0..n).collect();
            rng::shuffle(&mut rng::rng(rng::derive_seed(seed, r as u64)), &mut perm);
            let mut s = 0.0;
            for i in 0..n {
                let arow = &a.entries[i * n..(i + 1) * n];
                let brow = &b.entries[perm[i] * n..(perm[i] + 1) * n];
                for j in 0..n {
                    s += arow[j] * brow[perm[j]];
                }
            }
            s / (n * n) as f64 >= observed
        })
        .count();
    Ok((1 + exceed) as f64 / (permutations + 1) as f64)
}
