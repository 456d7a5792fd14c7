//! Distances between persistence summaries.
//!
//! Diagram metrics compare points of the same homological degree only:
//! Wasserstein costs add up across degrees, the bottleneck distance takes the
//! maximum. The diagonal is never stored but every diagram metric lets points
//! vanish onto it.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::persistence::PersistenceDiagram;
use crate::summaries::{PersistenceLandscape, StepCurve};

/// Symmetric matrix of pairwise distances with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
    label: String,
}

impl DistanceMatrix {
    /// Validates symmetry, zero diagonal, non-negativity and finiteness.
    pub fn new(label: impl Into<String>, n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::invalid(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        for i in 0..n {
            if entries[i * n + i] != 0.0 {
                return Err(Error::invalid(format!("non-zero diagonal entry at {i}")));
            }
            for j in 0..n {
                let x = entries[i * n + j];
                if !x.is_finite() || x < 0.0 {
                    return Err(Error::invalid(format!(
                        "entry ({i},{j}) = {x} is not a finite non-negative value"
                    )));
                }
                if x != entries[j * n + i] {
                    return Err(Error::invalid(format!("asymmetric entries at ({i},{j})")));
                }
            }
        }
        Ok(DistanceMatrix {
            n,
            entries,
            label: label.into(),
        })
    }

    /// Fills the matrix from `f(i, j)` for `i < j`.
    pub fn from_fn(label: impl Into<String>, n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = f(i, j);
                entries[i * n + j] = d;
                entries[j * n + i] = d;
            }
        }
        Self::new(label, n, entries)
    }

    /// Euclidean distances between points.
    pub fn euclidean(label: impl Into<String>, points: &[Vec<f64>]) -> Result<Self> {
        Self::from_fn(label, points.len(), |i, j| {
            crate::complexes::euclidean(&points[i], &points[j])
        })
    }

    /// Absolute differences of real values.
    pub fn from_values(label: impl Into<String>, values: &[f64]) -> Result<Self> {
        Self::from_fn(label, values.len(), |i, j| (values[i] - values[j]).abs())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Multiplies every entry by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.label.clone(),
            self.n,
            self.entries.iter().map(|x| x * factor).collect(),
        )
    }

    /// Relabels samples: entry `(i, j)` of the result is entry `(perm[i], perm[j])`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::invalid("permutation length differs from matrix size"));
        }
        let n = self.n;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = self.get(perm[i], perm[j]);
            }
        }
        Self::new(self.label.clone(), n, entries)
    }

    /// First row is the (CSV-quoted) label, then `n` rows of `n` numbers.
    pub fn to_csv(&self) -> String {
        let mut out = csv_field(&self.label);
        out.push('\n');
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let label = unquote_csv(lines.next().ok_or_else(|| Error::parse(1, "missing label row"))?);
        let mut entries = Vec::new();
        let mut rows = 0;
        for (lineno, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::parse(lineno + 2, "bad number"))
                })
                .collect::<Result<Vec<_>>>()?;
            if rows > 0 && row.len() * rows != entries.len() {
                return Err(Error::parse(lineno + 2, "ragged row"));
            }
            entries.extend(row);
            rows += 1;
        }
        if entries.len() != rows * rows {
            return Err(Error::parse(rows + 1, "matrix is not square"));
        }
        Self::new(label, rows, entries)
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn unquote_csv(s: &str) -> String {
    let s = s.trim();
    if s.len() >= 2 && s.starts_with('"') && s.ends_with('"') {
        s[1..s.len() - 1].replace("\"\"", "\"")
    } else {
        s.to_string()
    }
}

fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::invalid(format!("p must be at least 1, got {p}")));
    }
    Ok(())
}

/// L^p distance from `(birth, death)` to the diagonal: `2^(1/p - 1)(death - birth)`,
/// and `(death - birth)/2` for `p = ∞`.
pub fn diagonal_distance(point: (f64, f64), p: f64) -> Result<f64> {
    check_p(p)?;
    let pers = point.1 - point.0;
    if p.is_infinite() {
        Ok(pers / 2.0)
    } else {
        Ok(2f64.powf(1.0 / p - 1.0) * pers)
    }
}

/// p-th power of the L^p distance to the nearest diagonal point.
fn diagonal_cost(point: (f64, f64), p: f64) -> f64 {
    2.0 * ((point.1 - point.0) / 2.0).powf(p)
}

fn ground_cost(x: (f64, f64), y: (f64, f64), p: f64) -> f64 {
    (x.0 - y.0).abs().powf(p) + (x.1 - y.1).abs().powf(p)
}

fn sup_dist(x: (f64, f64), y: (f64, f64)) -> f64 {
    (x.0 - y.0).abs().max((x.1 - y.1).abs())
}

/// Minimum-cost perfect assignment of a square cost matrix (row-major).
///
/// Shortest augmenting paths with vertex potentials, `O(n^3)`. Returns the
/// column assigned to each row.
pub fn assignment(cost: &[f64], n: usize) -> Vec<usize> {
    assert_eq!(cost.len(), n * n);
    if n == 0 {
        return Vec::new();
    }
    let a = |i: usize, j: usize| cost[(i - 1) * n + (j - 1)];
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    // row_of[j] is the row matched to column j (1-based, 0 = free).
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = a(i0, j) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut col_of = vec![0; n];
    for j in 1..=n {
        col_of[row_of[j] - 1] = j - 1;
    }
    col_of
}

/// Optimal sum of p-th power costs between two point sets with the diagonal available.
fn wasserstein_cost(xs: &[(f64, f64)], ys: &[(f64, f64)], p: f64) -> f64 {
    let (m, n) = (xs.len(), ys.len());
    let size = m + n;
    if size == 0 {
        return 0.0;
    }
    // Rows: points of X, then diagonal slots for Y. Columns: points of Y,
    // then diagonal slots for X. Diagonal slots are interchangeable, so a
    // point may use any slot of the other side at its own diagonal cost.
    let mut cost = vec![0.0; size * size];
    for (i, &x) in xs.iter().enumerate() {
        let dx = diagonal_cost(x, p);
        for (j, &y) in ys.iter().enumerate() {
            cost[i * size + j] = ground_cost(x, y, p);
        }
        for j in n..size {
            cost[i * size + j] = dx;
        }
    }
    for i in m..size {
        for (j, &y) in ys.iter().enumerate() {
            cost[i * size + j] = diagonal_cost(y, p);
        }
    }
    let cols = assignment(&cost, size);
    cols.iter()
        .enumerate()
        .map(|(i, &j)| cost[i * size + j])
        .fold(0.0, |a, b| a + b)
}

fn degrees_of(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Vec<usize> {
    let mut ds = d1.degrees();
    ds.extend(d2.degrees());
    ds.sort_unstable();
    ds.dedup();
    ds
}

/// p-Wasserstein distance with the L^p ground metric; `p = ∞` gives the bottleneck distance.
pub fn wasserstein(d1: &PersistenceDiagram, d2: &PersistenceDiagram, p: f64) -> Result<f64> {
    check_p(p)?;
    if p.is_infinite() {
        return Ok(bottleneck(d1, d2));
    }
    let total: f64 = degrees_of(d1, d2)
        .into_iter()
        .map(|k| wasserstein_cost(&d1.pairs(k), &d2.pairs(k), p))
        .fold(0.0, |a, b| a + b);
    Ok(total.powf(1.0 / p))
}

/// Optimal bijection cost between equal-size diagrams with the diagonal
/// forbidden. Used to confirm that a matching never routes through it.
pub fn wasserstein_bijection(d1: &PersistenceDiagram, d2: &PersistenceDiagram, p: f64) -> Result<f64> {
    check_p(p)?;
    let mut total = 0.0;
    for k in degrees_of(d1, d2) {
        let (xs, ys) = (d1.pairs(k), d2.pairs(k));
        if xs.len() != ys.len() {
            return Err(Error::invalid("bijection needs equally many points in each degree"));
        }
        let n = xs.len();
        let mut cost = vec![0.0; n * n];
        for (i, &x) in xs.iter().enumerate() {
            for (j, &y) in ys.iter().enumerate() {
                cost[i * n + j] = ground_cost(x, y, p);
            }
        }
        let cols = assignment(&cost, n);
        total += cols.iter().enumerate().map(|(i, &j)| cost[i * n + j]).sum::<f64>();
    }
    Ok(total.powf(1.0 / p))
}

/// Maximum bipartite matching size (Hopcroft–Karp).
fn max_matching(n_left: usize, n_right: usize, adj: &[Vec<usize>]) -> usize {
    const NIL: usize = usize::MAX;
    let mut match_l = vec![NIL; n_left];
    let mut match_r = vec![NIL; n_right];
    let mut dist = vec![0usize; n_left];
    let mut matched = 0;

    fn dfs(u: usize, adj: &[Vec<usize>], match_l: &mut [usize], match_r: &mut [usize], dist: &mut [usize]) -> bool {
        for &v in &adj[u] {
            let w = match_r[v];
            if w == usize::MAX || (dist[w] == dist[u] + 1 && dfs(w, adj, match_l, match_r, dist)) {
                match_l[u] = v;
                match_r[v] = u;
                return true;
            }
        }
        dist[u] = usize::MAX;
        false
    }

    loop {
        let mut queue = std::collections::VecDeque::new();
        for u in 0..n_left {
            if match_l[u] == NIL {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_r[v];
                if w == NIL {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        for u in 0..n_left {
            if match_l[u] == NIL && dfs(u, adj, &mut match_l, &mut match_r, &mut dist) {
                matched += 1;
            }
        }
    }
    matched
}

fn bottleneck_single(xs: &[(f64, f64)], ys: &[(f64, f64)]) -> f64 {
    let (m, n) = (xs.len(), ys.len());
    if m + n == 0 {
        return 0.0;
    }
    let dx: Vec<f64> = xs.iter().map(|x| (x.1 - x.0) / 2.0).collect();
    let dy: Vec<f64> = ys.iter().map(|y| (y.1 - y.0) / 2.0).collect();
    let mut candidates: Vec<f64> = dx.iter().chain(&dy).copied().collect();
    for &x in xs {
        for &y in ys {
            candidates.push(sup_dist(x, y));
        }
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    // Left: X, then diagonal copies of Y. Right: Y, then diagonal copies of X.
    let feasible = |r: f64| {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m + n];
        for i in 0..m {
            for j in 0..n {
                if sup_dist(xs[i], ys[j]) <= r {
                    adj[i].push(j);
                }
            }
            if dx[i] <= r {
                adj[i].push(n + i);
            }
        }
        for k in 0..n {
            if dy[k] <= r {
                adj[m + k].push(k);
            }
            adj[m + k].extend(n..n + m);
        }
        max_matching(m + n, m + n, &adj) == m + n
    };
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Bottleneck distance (sup-norm ground metric), exact.
pub fn bottleneck(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> f64 {
    degrees_of(d1, d2)
        .into_iter()
        .map(|k| bottleneck_single(&d1.pairs(k), &d2.pairs(k)))
        .fold(0.0, f64::max)
}

/// `∫ |f|^p` over `[0, len]` for `f` linear from `a` to `b`, assuming `a` and `b`
/// do not have opposite signs.
fn linear_power_integral(a: f64, b: f64, len: f64, p: f64) -> f64 {
    let (a, b) = (a.abs(), b.abs());
    if a == b {
        return len * a.powf(p);
    }
    len * (b.powf(p + 1.0) - a.powf(p + 1.0)) / ((p + 1.0) * (b - a))
}

fn piecewise_distance_pow(f: &[(f64, f64)], g: &[(f64, f64)], p: f64) -> f64 {
    use crate::summaries::eval_piecewise;
    let mut ts: Vec<f64> = f.iter().chain(g).map(|&(t, _)| t).collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let diff = |t: f64| eval_piecewise(f, t) - eval_piecewise(g, t);
    if p.is_infinite() {
        return ts.iter().map(|&t| diff(t).abs()).fold(0.0, f64::max);
    }
    let mut total = 0.0;
    for w in ts.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        let (a, b) = (diff(t0), diff(t1));
        if a * b < 0.0 {
            let tz = t0 + (t1 - t0) * a.abs() / (a.abs() + b.abs());
            total += linear_power_integral(a, 0.0, tz - t0, p) + linear_power_integral(0.0, b, t1 - tz, p);
        } else {
            total += linear_power_integral(a, b, t1 - t0, p);
        }
    }
    total
}

/// L^p distance between landscapes, summed over levels; exact for every `p ∈ [1, ∞]`.
pub fn landscape_distance(l1: &PersistenceLandscape, l2: &PersistenceLandscape, p: f64) -> Result<f64> {
    check_p(p)?;
    let depth = l1.levels().len().max(l2.levels().len());
    let empty: Vec<(f64, f64)> = Vec::new();
    let level = |l: &PersistenceLandscape, k: usize| l.levels().get(k).cloned().unwrap_or_else(|| empty.clone());
    let parts = (0..depth).map(|k| piecewise_distance_pow(&level(l1, k), &level(l2, k), p));
    if p.is_infinite() {
        Ok(parts.fold(0.0, f64::max))
    } else {
        Ok(parts.fold(0.0, |a, b| a + b).powf(1.0 / p))
    }
}

/// L^p distance between step curves. Curves whose tails differ are infinitely far apart.
pub fn curve_distance(c1: &StepCurve, c2: &StepCurve, p: f64) -> Result<f64> {
    check_p(p)?;
    if c1.tail() != c2.tail() {
        return Ok(f64::INFINITY);
    }
    let mut ts: Vec<f64> = c1.breakpoints().iter().chain(c2.breakpoints()).copied().collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    if p.is_infinite() {
        return Ok(ts.iter().map(|&t| (c1.eval(t) - c2.eval(t)).abs()).max().unwrap_or(0) as f64);
    }
    let total: f64 = ts
        .windows(2)
        .map(|w| ((c1.eval(w[0]) - c2.eval(w[0])).abs() as f64).powf(p) * (w[1] - w[0]))
        .fold(0.0, |a, b| a + b);
    Ok(total.powf(1.0 / p))
}

/// Persistence scale-space kernel in closed form.
pub fn pss_kernel(f: &PersistenceDiagram, g: &PersistenceDiagram, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::invalid(format!("sigma must be positive, got {sigma}")));
    }
    let mut sum = 0.0;
    for k in degrees_of(f, g) {
        let (fs, gs) = (f.pairs(k), g.pairs(k));
        for &(a, b) in &fs {
            for &(c, d) in &gs {
                let near = (a - c).powi(2) + (b - d).powi(2);
                let mirror = (a - d).powi(2) + (b - c).powi(2);
                sum += (-near / (8.0 * sigma)).exp() - (-mirror / (8.0 * sigma)).exp();
            }
        }
    }
    Ok(sum / (8.0 * std::f64::consts::PI * sigma))
}

fn kernel_distance(kff: f64, kgg: f64, kfg: f64) -> Result<f64> {
    let r = kff + kgg - 2.0 * kfg;
    if r < -1e-12 {
        return Err(Error::NumericalFailure(format!("negative kernel radicand {r}")));
    }
    Ok(r.max(0.0).sqrt())
}

/// Distance induced by the scale-space kernel.
pub fn pss_distance(f: &PersistenceDiagram, g: &PersistenceDiagram, sigma: f64) -> Result<f64> {
    kernel_distance(
        pss_kernel(f, f, sigma)?,
        pss_kernel(g, g, sigma)?,
        pss_kernel(f, g, sigma)?,
    )
}

/// Sliced Wasserstein distance averaged over `lines` directions `iπ/lines`.
pub fn sliced_wasserstein(d1: &PersistenceDiagram, d2: &PersistenceDiagram, lines: usize) -> Result<f64> {
    if lines < 1 {
        return Err(Error::invalid("sliced Wasserstein needs at least one line"));
    }
    let degrees = degrees_of(d1, d2);
    let per_degree: Vec<(Vec<(f64, f64)>, Vec<(f64, f64)>)> =
        degrees.iter().map(|&k| (d1.pairs(k), d2.pairs(k))).collect();
    let mut total = 0.0;
    let mut u = Vec::new();
    let mut v = Vec::new();
    for i in 0..lines {
        let theta = i as f64 * std::f64::consts::PI / lines as f64;
        let (c, s) = (theta.cos(), theta.sin());
        let proj = |pt: (f64, f64)| pt.0 * c + pt.1 * s;
        let proj_diag = |pt: (f64, f64)| 0.5 * (pt.0 + pt.1) * (c + s);
        for (xs, ys) in &per_degree {
            u.clear();
            v.clear();
            u.extend(xs.iter().map(|&x| proj(x)));
            u.extend(ys.iter().map(|&y| proj_diag(y)));
            v.extend(ys.iter().map(|&y| proj(y)));
            v.extend(xs.iter().map(|&x| proj_diag(x)));
            u.sort_by(f64::total_cmp);
            v.sort_by(f64::total_cmp);
            total += u.iter().zip(&v).map(|(a, b)| (a - b).abs()).sum::<f64>();
        }
    }
    Ok(total / lines as f64)
}

/// `sqrt(2 - 2 exp(-SW / 2σ²))`, the distance of the Gaussian sliced Wasserstein kernel.
pub fn sw_kernel_distance(d1: &PersistenceDiagram, d2: &PersistenceDiagram, sigma: f64, lines: usize) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::invalid(format!("sigma must be positive, got {sigma}")));
    }
    let sw = sliced_wasserstein(d1, d2, lines)?;
    Ok(sw_kernel_from_sw(sw, sigma))
}

pub(crate) fn sw_kernel_from_sw(sw: f64, sigma: f64) -> f64 {
    let k = (-sw / (2.0 * sigma * sigma)).exp();
    (2.0 - 2.0 * k).max(0.0).sqrt()
}

/// A metric on one kind of summary, parsed from strings such as
/// `wasserstein:p=1`, `bottleneck`, `landscape:p=inf`, `pss:sigma=0.01` or
/// `swk:sigma=1,lines=10`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricSpec {
    Wasserstein { p: f64 },
    Bottleneck,
    Landscape { p: f64 },
    Betti { p: f64 },
    Euler { p: f64 },
    Pss { sigma: f64 },
    SlicedWasserstein { lines: usize },
    SwKernel { sigma: f64, lines: usize },
    Count1 { p: f64 },
}

/// Which summary a metric consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SummaryKind {
    Diagram,
    Landscape,
    BettiCurve,
    EulerCurve,
    CountCurve,
}

impl MetricSpec {
    pub fn summary_kind(&self) -> SummaryKind {
        match self {
            MetricSpec::Wasserstein { .. }
            | MetricSpec::Bottleneck
            | MetricSpec::Pss { .. }
            | MetricSpec::SlicedWasserstein { .. }
            | MetricSpec::SwKernel { .. } => SummaryKind::Diagram,
            MetricSpec::Landscape { .. } => SummaryKind::Landscape,
            MetricSpec::Betti { .. } => SummaryKind::BettiCurve,
            MetricSpec::Euler { .. } => SummaryKind::EulerCurve,
            MetricSpec::Count1 { .. } => SummaryKind::CountCurve,
        }
    }

    /// Distance between two summaries of the kind this metric consumes.
    pub fn distance(&self, a: &Summary, b: &Summary) -> Result<f64> {
        use MetricSpec as M;
        match (self, a, b) {
            (M::Wasserstein { p }, Summary::Diagram(x), Summary::Diagram(y)) => wasserstein(x, y, *p),
            (M::Bottleneck, Summary::Diagram(x), Summary::Diagram(y)) => Ok(bottleneck(x, y)),
            (M::Pss { sigma }, Summary::Diagram(x), Summary::Diagram(y)) => pss_distance(x, y, *sigma),
            (M::SlicedWasserstein { lines }, Summary::Diagram(x), Summary::Diagram(y)) => {
                sliced_wasserstein(x, y, *lines)
            }
            (M::SwKernel { sigma, lines }, Summary::Diagram(x), Summary::Diagram(y)) => {
                sw_kernel_distance(x, y, *sigma, *lines)
            }
            (M::Landscape { p }, Summary::Landscape(x), Summary::Landscape(y)) => landscape_distance(x, y, *p),
            (M::Betti { p } | M::Euler { p } | M::Count1 { p }, Summary::Curve(x), Summary::Curve(y)) => {
                curve_distance(x, y, *p)
            }
            _ => Err(Error::invalid(format!(
                "metric `{self}` does not apply to these summaries"
            ))),
        }
    }
}

fn fmt_p(p: f64) -> String {
    if p.is_infinite() {
        "inf".to_string()
    } else {
        p.to_string()
    }
}

impl fmt::Display for MetricSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricSpec::Wasserstein { p } => write!(f, "wasserstein:p={}", fmt_p(*p)),
            MetricSpec::Bottleneck => write!(f, "bottleneck"),
            MetricSpec::Landscape { p } => write!(f, "landscape:p={}", fmt_p(*p)),
            MetricSpec::Betti { p } => write!(f, "betti:p={}", fmt_p(*p)),
            MetricSpec::Euler { p } => write!(f, "euler:p={}", fmt_p(*p)),
            MetricSpec::Pss { sigma } => write!(f, "pss:sigma={sigma}"),
            MetricSpec::SlicedWasserstein { lines } if *lines == 10 => write!(f, "sw"),
            MetricSpec::SlicedWasserstein { lines } => write!(f, "sw:lines={lines}"),
            MetricSpec::SwKernel { sigma, lines } => write!(f, "swk:sigma={sigma},lines={lines}"),
            MetricSpec::Count1 { p } => write!(f, "count1:p={}", fmt_p(*p)),
        }
    }
}

impl FromStr for MetricSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, params) = s.split_once(':').unwrap_or((s, ""));
        let mut p = None;
        let mut sigma = None;
        let mut lines = None;
        for kv in params.split(',').map(str::trim).filter(|kv| !kv.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("malformed parameter `{kv}` in `{s}`")))?;
            let bad = || Error::Config(format!("bad value `{v}` for `{k}` in `{s}`"));
            match k.trim() {
                "p" => {
                    let x = match v.trim() {
                        "inf" | "infinity" | "∞" => f64::INFINITY,
                        other => other.parse::<f64>().map_err(|_| bad())?,
                    };
                    if x.is_nan() || x < 1.0 {
                        return Err(bad());
                    }
                    p = Some(x);
                }
                "sigma" => {
                    let x = v.trim().parse::<f64>().map_err(|_| bad())?;
                    if !(x > 0.0) || !x.is_finite() {
                        return Err(bad());
                    }
                    sigma = Some(x);
                }
                "lines" => {
                    let x = v.trim().parse::<usize>().map_err(|_| bad())?;
                    if x < 1 {
                        return Err(bad());
                    }
                    lines = Some(x);
                }
                other => return Err(Error::Config(format!("unknown parameter `{other}` in `{s}`"))),
            }
        }
        let need_p = || p.ok_or_else(|| Error::Config(format!("`{s}` needs p=")));
        let need_sigma = || sigma.ok_or_else(|| Error::Config(format!("`{s}` needs sigma=")));
        let spec = match name.trim() {
            "wasserstein" => MetricSpec::Wasserstein { p: need_p()? },
            "bottleneck" => MetricSpec::Bottleneck,
            "landscape" => MetricSpec::Landscape { p: need_p()? },
            "betti" => MetricSpec::Betti { p: need_p()? },
            "euler" => MetricSpec::Euler { p: need_p()? },
            "count1" => MetricSpec::Count1 { p: need_p()? },
            "pss" => MetricSpec::Pss { sigma: need_sigma()? },
            "sw" => MetricSpec::SlicedWasserstein {
                lines: lines.unwrap_or(10),
            },
            "swk" => MetricSpec::SwKernel {
                sigma: need_sigma()?,
                lines: lines.unwrap_or(10),
            },
            other => return Err(Error::Config(format!("unknown metric `{other}`"))),
        };
        Ok(spec)
    }
}

/// A summary of one sample.
#[derive(Debug, Clone, PartialEq)]
pub enum Summary {
    Diagram(PersistenceDiagram),
    Landscape(PersistenceLandscape),
    Curve(StepCurve),
}

/// Pairwise distances of `samples` under `metric`, evaluated in parallel.
pub fn pairwise_matrix(samples: &[Summary], metric: &MetricSpec) -> Result<DistanceMatrix> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::invalid("pairwise matrix needs at least two samples"));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let values = pairs
        .par_iter()
        .map(|&(i, j)| metric.distance(&samples[i], &samples[j]))
        .collect::<Result<Vec<f64>>>()?;
    let mut entries = vec![0.0; n * n];
    for (&(i, j), &d) in pairs.iter().zip(&values) {
        entries[i * n + j] = d;
        entries[j * n + i] = d;
    }
    DistanceMatrix::new(metric.to_string(), n, entries)
}
