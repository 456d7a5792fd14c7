//! Experiment orchestration: config files, the sample → complex → diagram →
//! summary → distance → dCor pipeline, the negative-type suite, the DEM
//! pipeline, and SVG heatmaps.
//!
//! Configs are TOML. Top-level keys: `seed`, `repetitions`, `degree`,
//! `metrics`, `outputs`; tables `[model]`, `[sweep]` and `[dem]`:
//!
//! ```toml
//! seed = 7
//! repetitions = 50
//! degree = 1
//! metrics = ["wasserstein:p=1", "wasserstein:p=2", "bottleneck"]
//! outputs = "out/er"
//!
//! [model]
//! kind = "er"        # er | directed_er | torus | cube | interpolated
//! n = 25
//!
//! [sweep]            # optional; one sample per value, model kind interpolated
//! count = 100        # or: values = [0.0, 0.5, 1.0]
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;

use crate::complexes::build_cubical_complex;
use crate::dcor::{dcor_matrix, sample_dcor, DcorMatrix, DcorReport};
use crate::dem::{
    chunk_center_distance, chunk_grid, chunk_manifest, load_grid_file, synth_graded_terrain, tri, ChunkSpec,
};
use crate::error::{Error, Result};
use crate::metrics::{pairwise_matrix, DistanceMatrix, MetricSpec, Summary, SummaryKind};
use crate::models::{ModelKind, ModelSpec};
use crate::negtype::{
    fixture_landscape_l1, fixture_landscape_linf, fixture_large_p, fixture_small_p, quadratic_form, Fixture,
};
use crate::persistence::{compute_persistence, PersistenceDiagram};
use crate::rng::derive_seed;
use crate::summaries::{betti_curve, euler_curve, landscape_from_diagram, simplex_count_curve, StepCurve};

/// Metrics used when a config lists none.
pub const DEFAULT_METRICS: &[&str] = &[
    "wasserstein:p=1",
    "wasserstein:p=2",
    "bottleneck",
    "landscape:p=1",
    "landscape:p=2",
    "landscape:p=inf",
    "pss:sigma=0.01",
    "pss:sigma=0.1",
    "betti:p=1",
    "betti:p=2",
    "euler:p=1",
    "euler:p=2",
    "swk:sigma=0.01",
];

fn default_metrics() -> Vec<String> {
    DEFAULT_METRICS.iter().map(|s| s.to_string()).collect()
}

fn default_repetitions() -> usize {
    50
}

fn default_degree() -> usize {
    1
}

fn default_outputs() -> PathBuf {
    PathBuf::from("out")
}

/// Parameter grid: explicit `values`, or `count` evenly spaced on `[0,1]`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub values: Option<Vec<f64>>,
    #[serde(default)]
    pub count: Option<usize>,
}

impl SweepSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        let v = match (&self.values, self.count) {
            (Some(v), None) => v.clone(),
            (None, Some(c)) if c >= 2 => (0..c).map(|i| i as f64 / (c - 1) as f64).collect(),
            (None, Some(_)) => return Err(Error::Config("sweep count must be at least 2".into())),
            _ => return Err(Error::Config("sweep needs exactly one of `values` or `count`".into())),
        };
        if v.len() < 2 {
            return Err(Error::Config("sweep needs at least two values".into()));
        }
        if let Some(bad) = v.iter().find(|g| !(0.0..=1.0).contains(*g)) {
            return Err(Error::Config(format!("sweep value {bad} outside [0,1]")));
        }
        Ok(v)
    }
}

/// Synthetic or loaded terrain, chunking and ground resolution.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemConfig {
    /// Grid file (ESRI ASCII or CSV); synthetic terrain when absent.
    #[serde(default)]
    pub input: Option<PathBuf>,
    #[serde(default = "DemConfig::default_size")]
    pub size: usize,
    #[serde(default = "DemConfig::default_smooth")]
    pub smooth: f64,
    #[serde(default = "DemConfig::default_rough")]
    pub rough: f64,
    #[serde(default = "DemConfig::default_chunks")]
    pub chunks: ChunkSpec,
    #[serde(default = "DemConfig::default_resolution")]
    pub resolution: f64,
}

impl DemConfig {
    fn default_size() -> usize {
        65
    }
    fn default_smooth() -> f64 {
        0.3
    }
    fn default_rough() -> f64 {
        0.9
    }
    fn default_chunks() -> ChunkSpec {
        ChunkSpec {
            chunk_size: 16,
            stride: 8,
            max_chunks: None,
        }
    }
    fn default_resolution() -> f64 {
        1.0
    }
}

impl Default for DemConfig {
    fn default() -> Self {
        DemConfig {
            input: None,
            size: Self::default_size(),
            smooth: Self::default_smooth(),
            rough: Self::default_rough(),
            chunks: Self::default_chunks(),
            resolution: Self::default_resolution(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default = "default_degree")]
    pub degree: usize,
    #[serde(default = "default_metrics")]
    pub metrics: Vec<String>,
    #[serde(default = "default_outputs")]
    pub outputs: PathBuf,
    #[serde(default)]
    pub model: Option<ModelSpec>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub dem: Option<DemConfig>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            repetitions: default_repetitions(),
            degree: default_degree(),
            metrics: default_metrics(),
            outputs: default_outputs(),
            model: None,
            sweep: None,
            dem: None,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Parsed metric specs; fails on an empty list or any bad spec.
    pub fn metric_specs(&self) -> Result<Vec<MetricSpec>> {
        if self.metrics.is_empty() {
            return Err(Error::Config("at least one metric is required".into()));
        }
        self.metrics.iter().map(|m| m.parse()).collect()
    }

    fn model(&self) -> Result<&ModelSpec> {
        self.model
            .as_ref()
            .ok_or_else(|| Error::Config("missing [model] table".into()))
    }

    /// Checks everything an experiment run needs.
    pub fn validate(&self) -> Result<()> {
        self.metric_specs()?;
        let model = self.model()?;
        if let Some(sweep) = &self.sweep {
            if model.kind != ModelKind::Interpolated {
                return Err(Error::Config("a sweep requires the interpolated model".into()));
            }
            sweep.values()?;
            ModelSpec::new(model.kind, model.n, Some(0.5))?;
        } else {
            model.validate()?;
            if self.repetitions < 2 {
                return Err(Error::Config(format!(
                    "repetitions must be at least 2, got {}",
                    self.repetitions
                )));
            }
        }
        Ok(())
    }
}

fn prepare_outputs(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir.join("distances"))
        .and_then(|_| fs::create_dir_all(dir.join("samples")))
        .map_err(|e| Error::Config(format!("cannot write to {}: {e}", dir.display())))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(Error::from)
}

/// File name for a metric label: alphanumerics kept, everything else `_`.
pub fn label_file_name(label: &str) -> String {
    let stem: String = label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '.' || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect();
    format!("{stem}.csv")
}

/// Summaries of one sample, computed on demand for the requested kinds.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSummaries {
    pub diagram: PersistenceDiagram,
    pub landscape: Option<Summary>,
    pub betti: Option<StepCurve>,
    pub euler: Option<StepCurve>,
    pub count: Option<StepCurve>,
}

/// Computes the degree-`degree` diagram of `cx` and whichever summaries
/// `kinds` require. The complex must include cells up to `degree + 1`.
pub fn summarize_complex(
    cx: &crate::complexes::FilteredComplex,
    degree: usize,
    kinds: &[SummaryKind],
) -> Result<SampleSummaries> {
    let top = cx.max_dim().unwrap_or(0);
    let all: Vec<usize> = (0..=top).collect();
    let full = compute_persistence(cx, &all, None)?;
    let diagram = full.in_degree(degree);
    let landscape = if kinds.contains(&SummaryKind::Landscape) {
        Some(Summary::Landscape(landscape_from_diagram(&diagram, None)?))
    } else {
        None
    };
    let betti = kinds
        .contains(&SummaryKind::BettiCurve)
        .then(|| betti_curve(&full, degree));
    let euler = kinds.contains(&SummaryKind::EulerCurve).then(|| {
        let curves: Vec<StepCurve> = all.iter().map(|&k| betti_curve(&full, k)).collect();
        euler_curve(&curves)
    });
    let count = kinds
        .contains(&SummaryKind::CountCurve)
        .then(|| simplex_count_curve(cx, 1));
    Ok(SampleSummaries {
        diagram,
        landscape,
        betti,
        euler,
        count,
    })
}

/// Distance matrices of `samples` under each metric, labelled by metric spec.
pub fn metric_matrices(samples: &[SampleSummaries], metrics: &[MetricSpec]) -> Result<Vec<DistanceMatrix>> {
    // Count curves share a horizon so their tails agree.
    let horizon = samples
        .iter()
        .filter_map(|s| s.count.as_ref())
        .flat_map(|c| c.breakpoints().last().copied())
        .fold(f64::NEG_INFINITY, f64::max);
    metrics
        .iter()
        .map(|m| {
            let summaries: Vec<Summary> = samples
                .iter()
                .map(|s| match m.summary_kind() {
                    SummaryKind::Diagram => Ok(Summary::Diagram(s.diagram.clone())),
                    SummaryKind::Landscape => s.landscape.clone().ok_or(()),
                    SummaryKind::BettiCurve => s.betti.clone().map(Summary::Curve).ok_or(()),
                    SummaryKind::EulerCurve => s.euler.clone().map(Summary::Curve).ok_or(()),
                    SummaryKind::CountCurve => s.count.as_ref().map(|c| Summary::Curve(c.truncated(horizon))).ok_or(()),
                })
                .collect::<std::result::Result<_, ()>>()
                .map_err(|_| Error::invalid(format!("summary for `{m}` was not computed")))?;
            pairwise_matrix(&summaries, m)
        })
        .collect()
}

/// Everything a run produced, also written to the output directory.
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub sample_seeds: Vec<u64>,
    pub diagrams: Vec<PersistenceDiagram>,
    pub matrices: Vec<DistanceMatrix>,
    pub dcor: Option<DcorMatrix>,
}

fn sample_summaries(
    model: &ModelSpec,
    seeds: &[u64],
    degree: usize,
    kinds: &[SummaryKind],
) -> Result<Vec<SampleSummaries>> {
    seeds
        .par_iter()
        .map(|&s| {
            let cx = model.generate(s)?.to_complex(degree + 1)?;
            summarize_complex(&cx, degree, kinds)
        })
        .collect()
}

fn kinds_of(metrics: &[MetricSpec]) -> Vec<SummaryKind> {
    metrics.iter().map(MetricSpec::summary_kind).collect()
}

/// Samples the model, computes every metric's distance matrix and the dCor
/// matrix between them, and writes the artifacts under `cfg.outputs`.
///
/// Computation happens in memory without writing when `cfg.outputs` is empty.
pub fn run_experiment(cfg: &RunConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    if cfg.sweep.is_some() {
        return Err(Error::Config(
            "config has a sweep; use the parameter-correlation run".into(),
        ));
    }
    let metrics = cfg.metric_specs()?;
    let model = cfg.model()?;
    let out = (!cfg.outputs.as_os_str().is_empty()).then_some(cfg.outputs.as_path());
    if let Some(dir) = out {
        prepare_outputs(dir)?;
    }
    let seeds: Vec<u64> = (0..cfg.repetitions as u64).map(|i| derive_seed(cfg.seed, i)).collect();
    let samples = sample_summaries(model, &seeds, cfg.degree, &kinds_of(&metrics))?;
    let matrices = metric_matrices(&samples, &metrics)?;
    let dcor = if matrices.len() >= 2 {
        Some(dcor_matrix(&matrices)?)
    } else {
        None
    };
    let diagrams: Vec<PersistenceDiagram> = samples.into_iter().map(|s| s.diagram).collect();
    if let Some(dir) = out {
        for (i, d) in diagrams.iter().enumerate() {
            write(&dir.join("samples").join(format!("sample_{i:04}.csv")), &d.to_csv())?;
        }
        for m in &matrices {
            write(&dir.join("distances").join(label_file_name(m.label())), &m.to_csv())?;
        }
        if let Some(dc) = &dcor {
            write(&dir.join("dcor.csv"), &dc.to_csv())?;
            write(&dir.join("dcor_raw.csv"), &dc.to_csv_raw())?;
            let svg = render_heatmap(&dc.dcor_root(), &dc.labels, &dc.negative_flags())?;
            write(&dir.join("dcor.svg"), &svg)?;
        }
        write(&dir.join("manifest.toml"), &manifest(cfg, &seeds))?;
    }
    Ok(ExperimentResult {
        sample_seeds: seeds,
        diagrams,
        matrices,
        dcor,
    })
}

fn manifest(cfg: &RunConfig, seeds: &[u64]) -> String {
    let mut s = String::new();
    writeln!(s, "version = \"{}\"", env!("CARGO_PKG_VERSION")).unwrap();
    writeln!(s, "seed = {}", cfg.seed).unwrap();
    writeln!(s, "repetitions = {}", cfg.repetitions).unwrap();
    writeln!(s, "degree = {}", cfg.degree).unwrap();
    let metrics: Vec<String> = cfg.metrics.iter().map(|m| format!("\"{m}\"")).collect();
    writeln!(s, "metrics = [{}]", metrics.join(", ")).unwrap();
    let seeds: Vec<String> = seeds.iter().map(u64::to_string).collect();
    writeln!(s, "sample_seeds = [{}]", seeds.join(", ")).unwrap();
    if let Some(m) = &cfg.model {
        writeln!(s, "\n[model]\nkind = \"{}\"\nn = {}", m.kind, m.n).unwrap();
        if let Some(g) = m.gamma {
            writeln!(s, "gamma = {g}").unwrap();
        }
    }
    s
}

/// dCor of one metric's distance matrix against a parameter matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterCorrelation {
    pub metric: String,
    pub report: DcorReport,
}

/// One interpolated sample per sweep value; dCor of every summary metric
/// against `|γ_i − γ_j|`, sorted by decreasing `dCor`.
pub fn run_parameter_correlation(cfg: &RunConfig) -> Result<Vec<ParameterCorrelation>> {
    cfg.validate()?;
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Config("missing [sweep] table".into()))?
        .values()?;
    let metrics = cfg.metric_specs()?;
    let model = cfg.model()?;
    let out = (!cfg.outputs.as_os_str().is_empty()).then_some(cfg.outputs.as_path());
    if let Some(dir) = out {
        prepare_outputs(dir)?;
    }
    let kinds = kinds_of(&metrics);
    let samples = sweep
        .par_iter()
        .enumerate()
        .map(|(i, &g)| {
            let spec = ModelSpec::new(ModelKind::Interpolated, model.n, Some(g))?;
            let cx = spec.generate_nth(cfg.seed, i as u64)?.to_complex(cfg.degree + 1)?;
            summarize_complex(&cx, cfg.degree, &kinds)
        })
        .collect::<Result<Vec<_>>>()?;
    let matrices = metric_matrices(&samples, &metrics)?;
    let param = DistanceMatrix::from_values("gamma", &sweep)?;
    let mut table = matrices
        .iter()
        .map(|m| {
            Ok(ParameterCorrelation {
                metric: m.label().to_string(),
                report: sample_dcor(m, &param)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    table.sort_by(|a, b| {
        b.report
            .dCor
            .total_cmp(&a.report.dCor)
            .then_with(|| a.metric.cmp(&b.metric))
    });
    if let Some(dir) = out {
        for m in &matrices {
            write(&dir.join("distances").join(label_file_name(m.label())), &m.to_csv())?;
        }
        write(&dir.join("distances").join("gamma.csv"), &param.to_csv())?;
        write(&dir.join("parameter_dcor.csv"), &parameter_table_csv(&table))?;
        let seeds: Vec<u64> = (0..sweep.len() as u64).map(|i| derive_seed(cfg.seed, i)).collect();
        write(&dir.join("manifest.toml"), &manifest(cfg, &seeds))?;
    }
    Ok(table)
}

pub fn parameter_table_csv(table: &[ParameterCorrelation]) -> String {
    let mut s = String::from("metric,dCor,dcor,negative_flag\n");
    for row in table {
        writeln!(
            s,
            "{},{},{},{}",
            crate::metrics::csv_field(&row.metric),
            row.report.dCor,
            row.report.dcor,
            row.report.negative_flag
        )
        .unwrap();
    }
    s
}

/// One evaluated quadratic form.
#[derive(Debug, Clone, PartialEq)]
pub struct NegtypeRow {
    pub fixture: &'static str,
    pub metric: String,
    pub form: f64,
    /// Closed-form value of the quadratic form.
    pub expected: f64,
    /// Whether the published result asserts a violation here.
    pub claims_violation: bool,
    pub pass: bool,
}

impl NegtypeRow {
    pub fn conclusion(&self) -> &'static str {
        if self.form > 1e-12 {
            "violates negative type"
        } else if self.form.abs() <= 1e-12 {
            "zero form (violates strong negative type)"
        } else {
            "no violation"
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NegtypeReport {
    pub rows: Vec<NegtypeRow>,
}

impl NegtypeReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            writeln!(
                s,
                "{:<5} {:<16} {:<18} form={:<22} expected={:<22} {}",
                if r.pass { "PASS" } else { "FAIL" },
                r.fixture,
                r.metric,
                r.form,
                r.expected,
                r.conclusion()
            )
            .unwrap();
        }
        s
    }
}

fn fixture_form(f: &Fixture, metric: &MetricSpec) -> Result<f64> {
    let d = f.distance_matrix(&metric.to_string(), |a, b| {
        let (a, b) = match metric.summary_kind() {
            SummaryKind::Landscape => (
                Summary::Landscape(landscape_from_diagram(a, None)?),
                Summary::Landscape(landscape_from_diagram(b, None)?),
            ),
            _ => (Summary::Diagram(a.clone()), Summary::Diagram(b.clone())),
        };
        metric.distance(&a, &b)
    })?;
    Ok(quadratic_form(&f.configuration(d)?))
}

/// Evaluates the four counterexample fixtures and compares each quadratic
/// form with its closed-form value and the claimed sign.
pub fn run_negtype_suite() -> Result<NegtypeReport> {
    let ps = [1.0, 2.0, 2.4, 2.41, 3.0, f64::INFINITY];
    let small = fixture_small_p();
    let large = fixture_large_p();
    let mut rows = Vec::new();
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b.abs().max(1.0);
    for &p in &ps {
        let metric = if p.is_infinite() {
            MetricSpec::Bottleneck
        } else {
            MetricSpec::Wasserstein { p }
        };
        let r = 1.0 / p;
        let form = fixture_form(&small, &metric)?;
        let expected = 48.0 * 4f64.powf(r) - 64.0 * 2f64.powf(r);
        let claims = p < 2f64.ln() / (4.0f64 / 3.0).ln();
        rows.push(NegtypeRow {
            fixture: "small-p",
            metric: metric.to_string(),
            form,
            expected,
            claims_violation: claims,
            pass: close(form, expected) && (!claims || form > 0.0),
        });

        let form = fixture_form(&large, &metric)?;
        let s = 4.0 + 6.0 * 2f64.powf(r) + 4.0 * 3f64.powf(r) + 4f64.powf(r);
        let expected = 32.0 * s - 32.0 * 16.0 * 8f64.powf(r) / 2.0;
        let claims = p >= 2.4;
        rows.push(NegtypeRow {
            fixture: "large-p",
            metric: metric.to_string(),
            form,
            expected,
            claims_violation: claims,
            pass: close(form, expected) && (!claims || form > 0.0),
        });
    }
    let form = fixture_form(&fixture_landscape_l1(), &MetricSpec::Landscape { p: 1.0 })?;
    rows.push(NegtypeRow {
        fixture: "landscape-L1",
        metric: "landscape:p=1".into(),
        form,
        expected: 0.0,
        claims_violation: false,
        pass: form.abs() < 1e-12,
    });
    let form = fixture_form(&fixture_landscape_linf(), &MetricSpec::Landscape { p: f64::INFINITY })?;
    rows.push(NegtypeRow {
        fixture: "landscape-Linf",
        metric: "landscape:p=inf".into(),
        form,
        expected: 3.0,
        claims_violation: true,
        pass: close(form, 3.0) && form > 0.0,
    });
    Ok(NegtypeReport { rows })
}

/// Writes each fixture as diagram CSV plus a weights sidecar.
pub fn export_fixtures(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    for (name, f) in [
        ("small_p", fixture_small_p()),
        ("large_p", fixture_large_p()),
        ("landscape_l1", fixture_landscape_l1()),
        ("landscape_linf", fixture_landscape_linf()),
    ] {
        write(&dir.join(format!("{name}.csv")), &f.to_csv())?;
        write(&dir.join(format!("{name}.weights")), &f.weights_text())?;
    }
    Ok(())
}

/// Results of the terrain pipeline.
#[derive(Debug, Clone)]
pub struct DemResult {
    pub tri: Vec<f64>,
    pub centers: Vec<(f64, f64)>,
    pub diagrams: Vec<PersistenceDiagram>,
    /// One matrix per metric, then `tri` and `geodesic`.
    pub matrices: Vec<DistanceMatrix>,
    pub dcor: DcorMatrix,
}

impl DemResult {
    /// The matrix labelled `label`.
    pub fn matrix(&self, label: &str) -> Option<&DistanceMatrix> {
        self.matrices.iter().find(|m| m.label() == label)
    }
}

/// Terrain → chunks → cubical persistence → summaries, correlated against
/// per-chunk TRI and centre distances.
pub fn run_dem(cfg: &RunConfig) -> Result<DemResult> {
    let metrics = cfg.metric_specs()?;
    let dem = cfg.dem.clone().unwrap_or_default();
    dem.chunks.validate().map_err(|e| Error::Config(e.to_string()))?;
    if !(dem.resolution > 0.0) {
        return Err(Error::Config("dem resolution must be positive".into()));
    }
    let out = (!cfg.outputs.as_os_str().is_empty()).then_some(cfg.outputs.as_path());
    if let Some(dir) = out {
        prepare_outputs(dir)?;
    }
    let grid = match &dem.input {
        Some(path) => load_grid_file(path)?,
        None => {
            synth_graded_terrain(dem.size, dem.smooth, dem.rough, cfg.seed).map_err(|e| Error::Config(e.to_string()))?
        }
    };
    let chunks = chunk_grid(&grid, &dem.chunks)?;
    if chunks.len() < 2 {
        return Err(Error::Config("terrain yields fewer than two chunks".into()));
    }
    let kinds = kinds_of(&metrics);
    let per_chunk = chunks
        .par_iter()
        .map(|c| {
            let cx = build_cubical_complex(&c.grid)?;
            Ok((summarize_complex(&cx, cfg.degree, &kinds)?, tri(&c.grid)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let tris: Vec<f64> = per_chunk.iter().map(|x| x.1).collect();
    let samples: Vec<SampleSummaries> = per_chunk.into_iter().map(|x| x.0).collect();
    let mut matrices = metric_matrices(&samples, &metrics)?;
    matrices.push(DistanceMatrix::from_values("tri", &tris)?);
    let centers: Vec<(f64, f64)> = chunks.iter().map(|c| c.center).collect();
    let n = centers.len();
    let mut geo = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            geo[i * n + j] = chunk_center_distance(centers[i], centers[j], dem.resolution)?;
        }
    }
    matrices.push(DistanceMatrix::new("geodesic", n, geo)?);
    let dcor = dcor_matrix(&matrices)?;
    let diagrams: Vec<PersistenceDiagram> = samples.into_iter().map(|s| s.diagram).collect();
    if let Some(dir) = out {
        write(&dir.join("chunks.csv"), &chunk_manifest(&chunks, &tris))?;
        for (i, d) in diagrams.iter().enumerate() {
            write(&dir.join("samples").join(format!("chunk_{i:04}.csv")), &d.to_csv())?;
        }
        for m in &matrices {
            write(&dir.join("distances").join(label_file_name(m.label())), &m.to_csv())?;
        }
        write(&dir.join("dcor.csv"), &dcor.to_csv())?;
        write(&dir.join("dcor_raw.csv"), &dcor.to_csv_raw())?;
        write(
            &dir.join("dcor.svg"),
            &render_heatmap(&dcor.dcor_root(), &dcor.labels, &dcor.negative_flags())?,
        )?;
        let seeds = [cfg.seed];
        write(&dir.join("manifest.toml"), &manifest(cfg, &seeds))?;
    }
    Ok(DemResult {
        tri: tris,
        centers,
        diagrams,
        matrices,
        dcor,
    })
}

/// Fill used for cells whose signed `dcor` was negative.
pub const NEGATIVE_COLOR: &str = "#ff00ff";

fn scale_color(v: f64) -> String {
    // White at 0 to deep blue at 1.
    let t = v.clamp(0.0, 1.0);
    let lerp = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        lerp(255.0, 8.0),
        lerp(255.0, 48.0),
        lerp(255.0, 107.0)
    )
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Standalone SVG heatmap of a square matrix on a fixed `[0,1]` scale, each
/// cell annotated to two decimals.
pub fn render_heatmap(values: &[f64], labels: &[String], negative: &[bool]) -> Result<String> {
    let n = labels.len();
    if values.len() != n * n || negative.len() != n * n {
        return Err(Error::invalid(format!(
            "{} labels do not match a matrix of {} entries",
            n,
            values.len()
        )));
    }
    const CELL: usize = 56;
    let margin = 12 + 7 * labels.iter().map(|l| l.chars().count()).max().unwrap_or(0);
    let size = margin + n * CELL + 8;
    let mut s = String::new();
    writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" font-family=\"sans-serif\" font-size=\"11\">"
    )
    .unwrap();
    for (i, label) in labels.iter().enumerate() {
        let c = margin + i * CELL + CELL / 2;
        let label = xml_escape(label);
        writeln!(
            s,
            "<text x=\"{}\" y=\"{c}\" text-anchor=\"end\" dominant-baseline=\"middle\">{label}</text>",
            margin - 4
        )
        .unwrap();
        writeln!(
            s,
            "<text x=\"{c}\" y=\"{}\" text-anchor=\"start\" transform=\"rotate(-90 {c} {})\">{label}</text>",
            margin - 4,
            margin - 4
        )
        .unwrap();
    }
    for i in 0..n {
        for j in 0..n {
            let v = values[i * n + j];
            let fill = if negative[i * n + j] {
                NEGATIVE_COLOR.to_string()
            } else {
                scale_color(v)
            };
            let (x, y) = (margin + j * CELL, margin + i * CELL);
            writeln!(
                s,
                "<rect x=\"{x}\" y=\"{y}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"{fill}\" stroke=\"#ffffff\"/>"
            )
            .unwrap();
            let ink = if v > 0.55 && !negative[i * n + j] {
                "#ffffff"
            } else {
                "#000000"
            };
            writeln!(
                s,
                "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" dominant-baseline=\"middle\" fill=\"{ink}\">{v:.2}</text>",
                x + CELL / 2,
                y + CELL / 2
            )
            .unwrap();
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}
