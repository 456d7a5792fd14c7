//! Filtered cell complexes built from graphs, point clouds and height grids.
//!
//! Every builder produces a [`FilteredComplex`] whose cells are sorted by
//! filtration value, then dimension, then their vertex tuple. Faces always
//! precede their cofaces, so the cell order is directly usable as the column
//! order of a boundary matrix.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Complete graph with symmetric real edge weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    weights: Vec<f64>,
}

impl WeightedGraph {
    /// Builds a graph from a row-major `n x n` matrix. The diagonal is ignored.
    pub fn from_matrix(n: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != n * n {
            return Err(Error::invalid(format!(
                "expected {} weights for {n} vertices, got {}",
                n * n,
                weights.len()
            )));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (weights[i * n + j], weights[j * n + i]);
                if !a.is_finite() || !b.is_finite() {
                    return Err(Error::invalid(format!("non-finite weight on edge ({i},{j})")));
                }
                if a != b {
                    return Err(Error::invalid(format!("asymmetric weight on edge ({i},{j})")));
                }
            }
        }
        Ok(WeightedGraph { n, weights })
    }

    /// Builds a graph by evaluating `f(i, j)` for every `i < j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut weights = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let w = f(i, j);
                weights[i * n + j] = w;
                weights[j * n + i] = w;
            }
        }
        Self::from_matrix(n, weights)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n + j]
    }
}

/// Directed graph with independent weights on each orientation.
///
/// Missing edges are `None`; the complete directed graph has every
/// off-diagonal entry present.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedWeightedGraph {
    n: usize,
    weights: Vec<Option<f64>>,
}

impl DirectedWeightedGraph {
    /// Complete digraph from a row-major `n x n` matrix; entry `(i, j)` weights `i -> j`.
    pub fn complete(n: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != n * n {
            return Err(Error::invalid(format!(
                "expected {} weights for {n} vertices, got {}",
                n * n,
                weights.len()
            )));
        }
        let weights = weights
            .into_iter()
            .enumerate()
            .map(|(k, w)| (k / n != k % n).then_some(w))
            .collect();
        Self::new(n, weights)
    }

    /// Digraph on `n` vertices containing exactly the listed `(from, to, weight)` edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut weights = vec![None; n * n];
        for &(u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!("edge ({u},{v}) out of range")));
            }
            if u != v {
                weights[u * n + v] = Some(w);
            }
        }
        Self::new(n, weights)
    }

    fn new(n: usize, weights: Vec<Option<f64>>) -> Result<Self> {
        if weights.iter().flatten().any(|w| !w.is_finite()) {
            return Err(Error::invalid("non-finite directed edge weight"));
        }
        Ok(DirectedWeightedGraph { n, weights })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Weight of the edge `from -> to`, if present.
    pub fn weight(&self, from: usize, to: usize) -> Option<f64> {
        if from == to {
            None
        } else {
            self.weights[from * self.n + to]
        }
    }
}

/// Rectangular grid of heights, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightGrid {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl HeightGrid {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("height grid needs at least one row and column"));
        }
        if values.len() != rows * cols {
            return Err(Error::invalid(format!(
                "expected {} heights for a {rows}x{cols} grid, got {}",
                rows * cols,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite height"));
        }
        Ok(HeightGrid { rows, cols, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::invalid("ragged height grid"));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.cols + c]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Copy of the `height x width` block whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, height: usize, width: usize) -> Result<Self> {
        if r0 + height > self.rows || c0 + width > self.cols {
            return Err(Error::invalid("block exceeds grid bounds"));
        }
        let mut values = Vec::with_capacity(height * width);
        for r in r0..r0 + height {
            values.extend_from_slice(&self.values[r * self.cols + c0..r * self.cols + c0 + width]);
        }
        Self::new(height, width, values)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.rows, self.cols, self.values.iter().map(|&v| f(v)).collect())
    }
}

/// One cell of a filtered complex.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub dim: usize,
    pub value: f64,
    /// Vertex tuple identifying the cell; used for deterministic tie-breaking.
    pub vertices: Vec<usize>,
    /// Indices of the codimension-one faces in the complex order (sorted).
    pub faces: Vec<usize>,
}

/// Cells in a filtration-compatible total order.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredComplex {
    cells: Vec<Cell>,
}

struct RawCell {
    dim: usize,
    value: f64,
    key: Vec<usize>,
    face_keys: Vec<Vec<usize>>,
}

impl FilteredComplex {
    fn assemble(mut raw: Vec<RawCell>) -> Result<Self> {
        raw.sort_by(|a, b| {
            a.value
                .total_cmp(&b.value)
                .then(a.dim.cmp(&b.dim))
                .then_with(|| a.key.cmp(&b.key))
        });
        let index: HashMap<&[usize], usize> = raw.iter().enumerate().map(|(i, c)| (c.key.as_slice(), i)).collect();
        let mut cells = Vec::with_capacity(raw.len());
        for c in &raw {
            let mut faces = Vec::with_capacity(c.face_keys.len());
            for fk in &c.face_keys {
                let &f = index
                    .get(fk.as_slice())
                    .ok_or_else(|| Error::invalid(format!("face {fk:?} missing from complex")))?;
                faces.push(f);
            }
            faces.sort_unstable();
            cells.push(Cell {
                dim: c.dim,
                value: c.value,
                vertices: c.key.clone(),
                faces,
            });
        }
        let cx = FilteredComplex { cells };
        cx.validate()?;
        Ok(cx)
    }

    /// Wraps already-ordered cells after checking the ordering invariants.
    pub fn from_cells(cells: Vec<Cell>) -> Result<Self> {
        let cx = FilteredComplex { cells };
        cx.validate()?;
        Ok(cx)
    }

    /// Checks face-before-coface, face values, face dimensions and monotone order.
    pub fn validate(&self) -> Result<()> {
        let mut prev = f64::NEG_INFINITY;
        for (i, c) in self.cells.iter().enumerate() {
            if !c.value.is_finite() {
                return Err(Error::invalid(format!("cell {i} has non-finite value")));
            }
            if c.value < prev {
                return Err(Error::invalid(format!("cell {i} breaks the filtration order")));
            }
            prev = c.value;
            if c.dim == 0 && !c.faces.is_empty() {
                return Err(Error::invalid(format!("vertex {i} has faces")));
            }
            for &f in &c.faces {
                if f >= i {
                    return Err(Error::invalid(format!(
                        "cell {i} has face {f} that does not precede it"
                    )));
                }
                let face = &self.cells[f];
                if face.dim + 1 != c.dim {
                    return Err(Error::invalid(format!("cell {i} has face {f} of wrong dimension")));
                }
                if face.value > c.value {
                    return Err(Error::invalid(format!("cell {i} enters before its face {f}")));
                }
            }
        }
        Ok(())
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.cells.iter().map(|c| c.dim).max()
    }

    /// Largest filtration value, or `None` for the empty complex.
    pub fn max_value(&self) -> Option<f64> {
        self.cells.last().map(|c| c.value)
    }

    /// Number of cells of each dimension.
    pub fn counts_by_dim(&self) -> Vec<usize> {
        let mut counts = vec![0; self.max_dim().map_or(0, |d| d + 1)];
        for c in &self.cells {
            counts[c.dim] += 1;
        }
        counts
    }

    /// Text form: one line per cell, `dim value face_id*`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.cells {
            write!(out, "{} {}", c.dim, c.value).unwrap();
            for f in &c.faces {
                write!(out, " {f}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Parses the text form written by [`FilteredComplex::to_text`].
    ///
    /// Vertex tuples are not part of the format; each parsed cell gets its
    /// own index as its tuple.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cells = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let dim = fields
                .next()
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| Error::parse(lineno + 1, "bad dimension"))?;
            let value = fields
                .next()
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| Error::parse(lineno + 1, "bad filtration value"))?;
            let faces = fields
                .map(|s| s.parse::<usize>().map_err(|_| Error::parse(lineno + 1, "bad face id")))
                .collect::<Result<Vec<_>>>()?;
            let id = cells.len();
            cells.push(Cell {
                dim,
                value,
                vertices: vec![id],
                faces,
            });
        }
        Self::from_cells(cells)
    }
}

/// Enumerates the cliques of the graph given by `edge` up to `max_dim + 1` vertices.
fn flag_cells(n: usize, max_dim: usize, edge: impl Fn(usize, usize) -> Option<f64>) -> Vec<RawCell> {
    let mut out: Vec<RawCell> = (0..n)
        .map(|v| RawCell {
            dim: 0,
            value: 0.0,
            key: vec![v],
            face_keys: Vec::new(),
        })
        .collect();
    // Frontier of (simplex, value) pairs of the current dimension.
    let mut frontier: Vec<(Vec<usize>, f64)> = (0..n).map(|v| (vec![v], 0.0)).collect();
    for dim in 1..=max_dim {
        let mut next = Vec::new();
        for (simplex, value) in &frontier {
            let last = *simplex.last().unwrap();
            'cand: for w in (last + 1)..n {
                let mut v = *value;
                for &u in simplex {
                    match edge(u, w) {
                        Some(x) => v = v.max(x),
                        None => continue 'cand,
                    }
                }
                let mut key = simplex.clone();
                key.push(w);
                next.push((key, v));
            }
        }
        for (key, value) in &next {
            out.push(RawCell {
                dim,
                value: *value,
                key: key.clone(),
                face_keys: drop_one(key),
            });
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    out
}

fn drop_one(key: &[usize]) -> Vec<Vec<usize>> {
    (0..key.len())
        .map(|i| {
            let mut f = key.to_vec();
            f.remove(i);
            f
        })
        .collect()
}

/// Flag (clique) complex of a weighted complete graph.
///
/// Vertices enter at 0; every clique enters at the largest weight among its edges.
pub fn build_flag_complex(g: &WeightedGraph, max_dim: usize) -> Result<FilteredComplex> {
    if max_dim < 1 {
        return Err(Error::invalid("flag complex needs max_dim >= 1"));
    }
    if g.n() == 0 {
        return Err(Error::invalid("flag complex needs at least one vertex"));
    }
    FilteredComplex::assemble(flag_cells(g.n(), max_dim, |i, j| Some(g.weight(i, j))))
}

/// Directed flag complex: simplices are vertex tuples `(v0, .., vk)` with an
/// edge `vi -> vj` for every `i < j`.
pub fn build_directed_flag_complex(g: &DirectedWeightedGraph, max_dim: usize) -> Result<FilteredComplex> {
    if max_dim < 1 {
        return Err(Error::invalid("directed flag complex needs max_dim >= 1"));
    }
    let n = g.n();
    if n == 0 {
        return Err(Error::invalid("directed flag complex needs at least one vertex"));
    }
    let mut raw: Vec<RawCell> = (0..n)
        .map(|v| RawCell {
            dim: 0,
            value: 0.0,
            key: vec![v],
            face_keys: Vec::new(),
        })
        .collect();
    let mut frontier: Vec<(Vec<usize>, f64)> = (0..n).map(|v| (vec![v], 0.0)).collect();
    for dim in 1..=max_dim {
        let mut next = Vec::new();
        for (simplex, value) in &frontier {
            'cand: for w in 0..n {
                if simplex.contains(&w) {
                    continue;
                }
                let mut v = *value;
                for &u in simplex {
                    match g.weight(u, w) {
                        Some(x) => v = v.max(x),
                        None => continue 'cand,
                    }
                }
                let mut key = simplex.clone();
                key.push(w);
                next.push((key, v));
            }
        }
        for (key, value) in &next {
            raw.push(RawCell {
                dim,
                value: *value,
                key: key.clone(),
                face_keys: drop_one(key),
            });
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    FilteredComplex::assemble(raw)
}

/// Vietoris–Rips complex of a Euclidean point cloud, truncated at `max_radius`.
pub fn build_rips_complex(points: &[Vec<f64>], max_dim: usize, max_radius: f64) -> Result<FilteredComplex> {
    if points.is_empty() {
        return Err(Error::invalid("Rips complex needs at least one point"));
    }
    if !(max_radius > 0.0) {
        return Err(Error::invalid("max_radius must be positive"));
    }
    let dim = points[0].len();
    if points
        .iter()
        .any(|p| p.len() != dim || p.iter().any(|x| !x.is_finite()))
    {
        return Err(Error::invalid("points must be finite and share one dimension"));
    }
    let n = points.len();
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = euclidean(&points[i], &points[j]);
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    FilteredComplex::assemble(flag_cells(n, max_dim, |i, j| {
        let d = dist[i * n + j];
        (d <= max_radius).then_some(d)
    }))
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Cubical complex with the grid values on the 2-cells; every edge and vertex
/// takes the minimum value over the squares containing it.
pub fn build_cubical_complex(grid: &HeightGrid) -> Result<FilteredComplex> {
    let (rows, cols) = (grid.rows(), grid.cols());
    let vc = cols + 1;
    let vid = |r: usize, c: usize| r * vc + c;
    let mut vertex_val = vec![f64::INFINITY; (rows + 1) * vc];
    // Horizontal edge (r, c)-(r, c+1) and vertical edge (r, c)-(r+1, c).
    let mut hedge_val = vec![f64::INFINITY; (rows + 1) * cols];
    let mut vedge_val = vec![f64::INFINITY; rows * vc];
    let mut raw = Vec::with_capacity(rows * cols * 4 + rows + cols + 1);

    for r in 0..rows {
        for c in 0..cols {
            let h = grid.get(r, c);
            for (rr, cc) in [(r, c), (r, c + 1), (r + 1, c), (r + 1, c + 1)] {
                let v = &mut vertex_val[vid(rr, cc)];
                *v = v.min(h);
            }
            for rr in [r, r + 1] {
                let e = &mut hedge_val[rr * cols + c];
                *e = e.min(h);
            }
            for cc in [c, c + 1] {
                let e = &mut vedge_val[r * vc + cc];
                *e = e.min(h);
            }
            let (a, b, d, e) = (vid(r, c), vid(r, c + 1), vid(r + 1, c), vid(r + 1, c + 1));
            raw.push(RawCell {
                dim: 2,
                value: h,
                key: vec![a, b, d, e],
                face_keys: vec![vec![a, b], vec![d, e], vec![a, d], vec![b, e]],
            });
        }
    }
    for r in 0..=rows {
        for c in 0..cols {
            let (a, b) = (vid(r, c), vid(r, c + 1));
            raw.push(RawCell {
                dim: 1,
                value: hedge_val[r * cols + c],
                key: vec![a, b],
                face_keys: vec![vec![a], vec![b]],
            });
        }
    }
    for r in 0..rows {
        for c in 0..=cols {
            let (a, b) = (vid(r, c), vid(r + 1, c));
            raw.push(RawCell {
                dim: 1,
                value: vedge_val[r * vc + c],
                key: vec![a, b],
                face_keys: vec![vec![a], vec![b]],
            });
        }
    }
    for (v, &value) in vertex_val.iter().enumerate() {
        raw.push(RawCell {
            dim: 0,
            value,
            key: vec![v],
            face_keys: Vec::new(),
        });
    }
    FilteredComplex::assemble(raw)
}
