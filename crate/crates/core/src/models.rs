//! Seeded random generators for the experiment families.
//!
//! Every generator is a pure function of its arguments. Draws are consumed
//! in a fixed order so outputs replay bit-for-bit:
//!
//! * `gen_er`: upper-triangle edges `(i, j)`, `i < j`, row-major.
//! * `gen_directed_er`: ordered pairs `(i, j)`, `i != j`, row-major.
//! * `sample_torus`: per point, `s` then `t`.
//! * `sample_cube`: per point, `x`, `y`, `z`.
//! * `gen_interpolated`: all cube points first, then per upper-triangle edge
//!   the random weight `E_ij` followed by the coin deciding which weight wins.

use std::f64::consts::TAU;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Deserialize;

use crate::complexes::{
    build_directed_flag_complex, build_flag_complex, build_rips_complex, DirectedWeightedGraph, FilteredComplex,
    WeightedGraph,
};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng, uniform};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Er,
    DirectedEr,
    Torus,
    Cube,
    Interpolated,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Er => "er",
            ModelKind::DirectedEr => "directed_er",
            ModelKind::Torus => "torus",
            ModelKind::Cube => "cube",
            ModelKind::Interpolated => "interpolated",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "er" => Ok(ModelKind::Er),
            "directed_er" => Ok(ModelKind::DirectedEr),
            "torus" => Ok(ModelKind::Torus),
            "cube" => Ok(ModelKind::Cube),
            "interpolated" => Ok(ModelKind::Interpolated),
            _ => Err(Error::Config(format!("unknown model kind `{s}`"))),
        }
    }
}

/// A model family with its size and, for `interpolated`, the mixing weight.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub n: usize,
    #[serde(default)]
    pub gamma: Option<f64>,
}

impl ModelSpec {
    pub fn new(kind: ModelKind, n: usize, gamma: Option<f64>) -> Result<Self> {
        let spec = ModelSpec { kind, n, gamma };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config(format!("model size must be at least 2, got {}", self.n)));
        }
        match (self.kind, self.gamma) {
            (ModelKind::Interpolated, Some(g)) if (0.0..=1.0).contains(&g) => Ok(()),
            (ModelKind::Interpolated, Some(g)) => Err(Error::Config(format!("gamma {g} outside [0,1]"))),
            (ModelKind::Interpolated, None) => Err(Error::Config("interpolated model needs gamma".into())),
            (_, Some(_)) => Err(Error::Config(format!(
                "gamma only applies to interpolated, not {}",
                self.kind
            ))),
            (_, None) => Ok(()),
        }
    }

    /// Draws one sample with the given seed.
    pub fn generate(&self, seed: u64) -> Result<ModelSample> {
        self.validate()?;
        Ok(match self.kind {
            ModelKind::Er => ModelSample::Graph(gen_er(self.n, seed)?),
            ModelKind::DirectedEr => ModelSample::Digraph(gen_directed_er(self.n, seed)?),
            ModelKind::Torus => ModelSample::Points(sample_torus(self.n, seed)),
            ModelKind::Cube => ModelSample::Points(sample_cube(self.n, seed)),
            ModelKind::Interpolated => {
                ModelSample::Graph(gen_interpolated(self.n, self.gamma.unwrap_or_default(), seed)?)
            }
        })
    }

    /// Sample `index` of a batch rooted at `seed`.
    pub fn generate_nth(&self, seed: u64, index: u64) -> Result<ModelSample> {
        self.generate(derive_seed(seed, index))
    }
}

/// Output of a generator.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSample {
    Graph(WeightedGraph),
    Digraph(DirectedWeightedGraph),
    Points(Vec<Vec<f64>>),
}

impl ModelSample {
    /// Flag, directed flag or Vietoris–Rips complex up to `max_dim`.
    pub fn to_complex(&self, max_dim: usize) -> Result<FilteredComplex> {
        match self {
            ModelSample::Graph(g) => build_flag_complex(g, max_dim),
            ModelSample::Digraph(g) => build_directed_flag_complex(g, max_dim),
            ModelSample::Points(p) => build_rips_complex(p, max_dim, f64::INFINITY),
        }
    }

    /// Edge list `source,target,weight` for graphs, coordinates `x1,x2,...`
    /// for point clouds.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match self {
            ModelSample::Graph(g) => {
                out.push_str("source,target,weight\n");
                for i in 0..g.n() {
                    for j in (i + 1)..g.n() {
                        writeln!(out, "{i},{j},{}", g.weight(i, j)).unwrap();
                    }
                }
            }
            ModelSample::Digraph(g) => {
                out.push_str("source,target,weight\n");
                for i in 0..g.n() {
                    for j in 0..g.n() {
                        if let Some(w) = g.weight(i, j) {
                            writeln!(out, "{i},{j},{w}").unwrap();
                        }
                    }
                }
            }
            ModelSample::Points(points) => {
                let dim = points.first().map_or(0, Vec::len);
                let header: Vec<String> = (1..=dim).map(|k| format!("x{k}")).collect();
                writeln!(out, "{}", header.join(",")).unwrap();
                for p in points {
                    let row: Vec<String> = p.iter().map(f64::to_string).collect();
                    writeln!(out, "{}", row.join(",")).unwrap();
                }
            }
        }
        out
    }
}

fn check_size(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid(format!("need at least 2 vertices, got {n}")));
    }
    Ok(())
}

/// Complete graph with i.i.d. uniform `[0,1)` edge weights.
pub fn gen_er(n: usize, seed: u64) -> Result<WeightedGraph> {
    check_size(n)?;
    let mut r = rng(seed);
    let mut w = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let x = uniform(&mut r);
            w[i * n + j] = x;
            w[j * n + i] = x;
        }
    }
    WeightedGraph::from_matrix(n, w)
}

/// Complete digraph with independent weights on both orientations.
pub fn gen_directed_er(n: usize, seed: u64) -> Result<DirectedWeightedGraph> {
    check_size(n)?;
    let mut r = rng(seed);
    let mut w = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                w[i * n + j] = uniform(&mut r);
            }
        }
    }
    DirectedWeightedGraph::complete(n, w)
}

/// Uniform angles mapped to the flat torus `(cos s, sin s, cos t, sin t)`.
pub fn sample_torus(n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| {
            let s = TAU * uniform(&mut r);
            let t = TAU * uniform(&mut r);
            vec![s.cos(), s.sin(), t.cos(), t.sin()]
        })
        .collect()
}

/// Uniform points in `[0,1)³`.
pub fn sample_cube(n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut r = rng(seed);
    (0..n).map(|_| (0..3).map(|_| uniform(&mut r)).collect()).collect()
}

/// Each edge independently carries a uniform random weight (probability
/// `gamma`) or the Euclidean distance between cube points (otherwise).
pub fn gen_interpolated(n: usize, gamma: f64, seed: u64) -> Result<WeightedGraph> {
    check_size(n)?;
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::invalid(format!("gamma {gamma} outside [0,1]")));
    }
    let mut r = rng(seed);
    let points: Vec<Vec<f64>> = (0..n).map(|_| (0..3).map(|_| uniform(&mut r)).collect()).collect();
    let mut w = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let e = uniform(&mut r);
            let x = if uniform(&mut r) < gamma {
                e
            } else {
                crate::complexes::euclidean(&points[i], &points[j])
            };
            w[i * n + j] = x;
            w[j * n + i] = x;
        }
    }
    WeightedGraph::from_matrix(n, w)
}
