//! Command-line front end. Exit codes: 0 success, 2 configuration or input
//! error, 3 numerical failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use topocorr::complexes::{build_cubical_complex, DirectedWeightedGraph, FilteredComplex, WeightedGraph};
use topocorr::dcor::{dcor_matrix, permutation_test, sample_dcor};
use topocorr::dem::load_grid_file;
use topocorr::experiment::{
    export_fixtures, parameter_table_csv, render_heatmap, run_dem, run_experiment, run_negtype_suite,
    run_parameter_correlation, RunConfig,
};
use topocorr::metrics::{pairwise_matrix, DistanceMatrix, MetricSpec, Summary, SummaryKind};
use topocorr::models::{ModelKind, ModelSpec};
use topocorr::persistence::{compute_persistence, PersistenceDiagram};
use topocorr::summaries::{betti_curve, euler_curve, landscape_from_diagram};
use topocorr::{Error, Result};

#[derive(Parser)]
#[command(name = "topocorr", version, about = "Topological summaries and distance correlation")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file or directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum InputKind {
    /// `dim value face*` filtered complex text.
    Complex,
    /// `source,target,weight` undirected edge list.
    Graph,
    /// `source,target,weight` directed edge list.
    Digraph,
    /// Point cloud CSV with a header row.
    Points,
    /// Elevation grid (ESRI ASCII or CSV).
    Grid,
}

#[derive(Clone, Copy, ValueEnum)]
enum SummaryChoice {
    Landscape,
    Betti,
    Euler,
}

#[derive(Subcommand)]
enum Command {
    /// Draw one model sample and write it as CSV.
    Generate {
        /// er, directed_er, torus, cube or interpolated; defaults to the config's model.
        #[arg(long, value_parser = parse_kind)]
        model: Option<ModelKind>,
        /// Vertices or points.
        #[arg(long)]
        n: Option<usize>,
        /// Interpolation weight in [0, 1] for the interpolated model.
        #[arg(long)]
        gamma: Option<f64>,
    },
    /// Persistence diagram of a complex, graph, point cloud or grid.
    Persist {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "complex")]
        kind: InputKind,
        /// Highest homology degree reported.
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    /// Landscape, Betti curve or Euler curve of a diagram CSV.
    Summarize {
        /// Diagram CSV with a `degree,birth,death` header.
        input: PathBuf,
        #[arg(long, value_enum)]
        summary: SummaryChoice,
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    /// Pairwise distance matrix of diagram CSVs under one metric.
    Distmat {
        /// Diagram CSVs, one per sample.
        #[arg(required = true, num_args = 2..)]
        inputs: Vec<PathBuf>,
        /// Metric spec, e.g. `wasserstein:p=2`, `landscape:p=inf`, `pss:sigma=0.1`.
        #[arg(long)]
        metric: String,
        /// Homology degree the metric compares.
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    /// dCor matrix between distance-matrix CSVs, with an SVG heatmap.
    Dcor {
        /// Distance-matrix CSVs over the same samples.
        #[arg(required = true, num_args = 2..)]
        inputs: Vec<PathBuf>,
    },
    /// Counterexample suite for negative type.
    Negtype {
        /// Also write the fixtures as CSV plus weights into this directory.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Permutation test for independence of two distance matrices.
    Permtest {
        x: PathBuf,
        y: PathBuf,
        /// Label shuffles; the smallest attainable p-value is 1/(permutations+1).
        #[arg(long, default_value_t = 999)]
        permutations: usize,
    },
    /// Terrain pipeline: chunks, cubical persistence, TRI and dCor.
    Dem,
    /// Full experiment, or a parameter sweep when the config has one.
    Experiment,
}

fn parse_kind(s: &str) -> std::result::Result<ModelKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Config(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.outputs = o.clone();
    }
    Ok(cfg)
}

fn edges(text: &str) -> Result<(usize, Vec<(usize, usize, f64)>)> {
    let mut out = Vec::new();
    let mut n = 0;
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let bad = || Error::Parse {
            line: i + 1,
            msg: "expected source,target,weight".into(),
        };
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 3 {
            return Err(bad());
        }
        let s: usize = f[0].parse().map_err(|_| bad())?;
        let t: usize = f[1].parse().map_err(|_| bad())?;
        let w: f64 = f[2].parse().map_err(|_| bad())?;
        n = n.max(s + 1).max(t + 1);
        out.push((s, t, w));
    }
    Ok((n, out))
}

fn load_complex(path: &Path, kind: InputKind, max_dim: usize) -> Result<FilteredComplex> {
    match kind {
        InputKind::Complex => FilteredComplex::from_text(&read(path)?),
        InputKind::Graph => {
            let (n, e) = edges(&read(path)?)?;
            let mut w = vec![0.0; n * n];
            for (s, t, x) in e {
                w[s * n + t] = x;
                w[t * n + s] = x;
            }
            topocorr::complexes::build_flag_complex(&WeightedGraph::from_matrix(n, w)?, max_dim)
        }
        InputKind::Digraph => {
            let (n, e) = edges(&read(path)?)?;
            topocorr::complexes::build_directed_flag_complex(&DirectedWeightedGraph::from_edges(n, &e)?, max_dim)
        }
        InputKind::Points => {
            let text = read(path)?;
            let points = text
                .lines()
                .enumerate()
                .skip(1)
                .filter(|(_, l)| !l.trim().is_empty())
                .map(|(i, l)| {
                    l.split(',')
                        .map(|t| {
                            t.trim().parse::<f64>().map_err(|_| Error::Parse {
                                line: i + 1,
                                msg: format!("not a number: `{}`", t.trim()),
                            })
                        })
                        .collect::<Result<Vec<f64>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            topocorr::complexes::build_rips_complex(&points, max_dim, f64::INFINITY)
        }
        InputKind::Grid => build_cubical_complex(&load_grid_file(path)?),
    }
}

fn load_diagram(path: &Path) -> Result<PersistenceDiagram> {
    PersistenceDiagram::from_csv(&read(path)?)
}

fn run(cli: &Cli) -> Result<()> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Generate { model, n, gamma } => {
            let cfg = load_config(cli)?;
            let spec = match (model, cfg.model) {
                (Some(kind), _) => ModelSpec::new(*kind, n.unwrap_or(25), *gamma)?,
                (None, Some(m)) => m,
                (None, None) => return Err(Error::Config("give --model or a config with [model]".into())),
            };
            emit(out, &spec.generate(cfg.seed)?.to_csv())
        }
        Command::Persist { input, kind, degree } => {
            let cx = load_complex(input, *kind, degree + 1)?;
            let degrees: Vec<usize> = (0..=*degree).collect();
            emit(out, &compute_persistence(&cx, &degrees, None)?.to_csv())
        }
        Command::Summarize { input, summary, degree } => {
            let d = load_diagram(input)?;
            let text = match summary {
                SummaryChoice::Landscape => landscape_from_diagram(&d.in_degree(*degree), None)?.to_text(),
                SummaryChoice::Betti => betti_curve(&d, *degree).to_csv(),
                SummaryChoice::Euler => {
                    let top = d.degrees().into_iter().max().unwrap_or(0);
                    let curves: Vec<_> = (0..=top).map(|k| betti_curve(&d, k)).collect();
                    euler_curve(&curves).to_csv()
                }
            };
            emit(out, &text)
        }
        Command::Distmat { inputs, metric, degree } => {
            let metric: MetricSpec = metric.parse()?;
            let summaries = inputs
                .iter()
                .map(|p| {
                    let d = load_diagram(p)?;
                    Ok(match metric.summary_kind() {
                        SummaryKind::Diagram => Summary::Diagram(d.in_degree(*degree)),
                        SummaryKind::Landscape => {
                            Summary::Landscape(landscape_from_diagram(&d.in_degree(*degree), None)?)
                        }
                        SummaryKind::BettiCurve => Summary::Curve(betti_curve(&d, *degree)),
                        SummaryKind::EulerCurve => {
                            let top = d.degrees().into_iter().max().unwrap_or(0);
                            let curves: Vec<_> = (0..=top).map(|k| betti_curve(&d, k)).collect();
                            Summary::Curve(euler_curve(&curves))
                        }
                        SummaryKind::CountCurve => {
                            return Err(Error::Config("count curves need complexes, not diagrams".into()))
                        }
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            emit(out, &pairwise_matrix(&summaries, &metric)?.to_csv())
        }
        Command::Dcor { inputs } => {
            let mats = inputs
                .iter()
                .map(|p| DistanceMatrix::from_csv(&read(p)?))
                .collect::<Result<Vec<_>>>()?;
            let dc = dcor_matrix(&mats)?;
            match out {
                Some(dir) => {
                    fs::create_dir_all(dir)?;
                    fs::write(dir.join("dcor.csv"), dc.to_csv())?;
                    fs::write(dir.join("dcor_raw.csv"), dc.to_csv_raw())?;
                    fs::write(
                        dir.join("dcor.svg"),
                        render_heatmap(&dc.dcor_root(), &dc.labels, &dc.negative_flags())?,
                    )?;
                    Ok(())
                }
                None => emit(None, &dc.to_csv()),
            }
        }
        Command::Negtype { export } => {
            if let Some(dir) = export {
                export_fixtures(dir)?;
            }
            let report = run_negtype_suite()?;
            emit(out, &report.to_text())?;
            if report.all_pass() {
                Ok(())
            } else {
                Err(Error::NumericalFailure("negative-type suite has failing rows".into()))
            }
        }
        Command::Permtest { x, y, permutations } => {
            let dx = DistanceMatrix::from_csv(&read(x)?)?;
            let dy = DistanceMatrix::from_csv(&read(y)?)?;
            let seed = cli.seed.unwrap_or(0);
            let report = sample_dcor(&dx, &dy)?;
            let p = permutation_test(&dx, &dy, *permutations, seed)?;
            emit(
                out,
                &format!("{}p_value={p}\npermutations={permutations}\n", report.to_text()),
            )
        }
        Command::Dem => {
            let cfg = load_config(cli)?;
            let res = run_dem(&cfg)?;
            print!("{}", res.dcor.to_csv());
            Ok(())
        }
        Command::Experiment => {
            let cfg = load_config(cli)?;
            if cfg.sweep.is_some() {
                let table = run_parameter_correlation(&cfg)?;
                print!("{}", parameter_table_csv(&table));
            } else {
                let res = run_experiment(&cfg)?;
                if let Some(dc) = res.dcor {
                    print!("{}", dc.to_csv());
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::NumericalFailure(_) => 3,
                _ => 2,
            })
        }
    }
}
