//! Negative-type checks for finite metric configurations, and the explicit
//! configurations of persistence diagrams and barcodes that violate
//! negative type (or strong negative type).
//!
//! A metric space has negative type when `Σ α_i α_j d(x_i, x_j) <= 0` for
//! every finite configuration and every weight vector with `Σ α_i = 0`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::metrics::DistanceMatrix;
use crate::persistence::{DiagramPoint, PersistenceDiagram};

/// Distances together with zero-sum weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedConfiguration {
    distances: DistanceMatrix,
    weights: Vec<f64>,
}

impl WeightedConfiguration {
    pub fn new(distances: DistanceMatrix, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != distances.n() {
            return Err(Error::invalid("one weight per point required"));
        }
        let sum: f64 = weights.iter().sum();
        if sum.abs() > 1e-12 {
            return Err(Error::invalid(format!("weights sum to {sum}, not 0")));
        }
        Ok(WeightedConfiguration { distances, weights })
    }

    pub fn distances(&self) -> &DistanceMatrix {
        &self.distances
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// `Σ α_i α_j d(x_i, x_j)`; a positive value certifies a violation.
pub fn quadratic_form(cfg: &WeightedConfiguration) -> f64 {
    let n = cfg.weights.len();
    let mut total = 0.0;
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            row += cfg.weights[j] * cfg.distances.get(i, j);
        }
        total += cfg.weights[i] * row;
    }
    total
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues and the matrix of eigenvectors (column `k` belongs to
/// eigenvalue `k`), both row-major and unsorted.
pub fn jacobi_eigen(matrix: &[f64], n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    assert_eq!(matrix.len(), n * n);
    let mut a = matrix.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    let off = |a: &[f64]| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };
    const MAX_SWEEPS: usize = 100;
    for _ in 0..MAX_SWEEPS {
        if off(&a) <= 1e-12 * scale {
            let eigenvalues = (0..n).map(|i| a[i * n + i]).collect();
            return Ok((eigenvalues, v));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(Error::NumericalFailure(format!(
        "Jacobi iteration did not converge in {MAX_SWEEPS} sweeps"
    )))
}

/// Outcome of [`negtype_check`].
#[derive(Debug, Clone, PartialEq)]
pub enum NegTypeVerdict {
    NegativeType,
    /// Zero-sum weights with a positive quadratic form.
    Violated {
        weights: Vec<f64>,
        form: f64,
    },
}

/// Tests the finite configuration `d` for a negative-type violation via the
/// spectrum of `-J D J`, `J` the centering projector.
pub fn negtype_check(d: &DistanceMatrix, tol: f64) -> Result<NegTypeVerdict> {
    if !(tol >= 0.0) {
        return Err(Error::invalid("tolerance must be non-negative"));
    }
    let n = d.n();
    if n < 2 {
        return Ok(NegTypeVerdict::NegativeType);
    }
    let centered = crate::dcor::double_center(d);
    let m: Vec<f64> = centered.entries().iter().map(|x| -x).collect();
    let (vals, vecs) = jacobi_eigen(&m, n)?;
    let (k, &lambda) = vals
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty spectrum");
    if lambda >= -tol {
        return Ok(NegTypeVerdict::NegativeType);
    }
    let mut weights: Vec<f64> = (0..n).map(|i| vecs[i * n + k]).collect();
    let mean = weights.iter().sum::<f64>() / n as f64;
    weights.iter_mut().for_each(|w| *w -= mean);
    let form = quadratic_form(&WeightedConfiguration {
        distances: d.clone(),
        weights: weights.clone(),
    });
    Ok(NegTypeVerdict::Violated { weights, form })
}

/// Named diagrams (or barcodes) with the weights of a violating configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub names: Vec<String>,
    pub diagrams: Vec<PersistenceDiagram>,
    pub weights: Vec<f64>,
}

impl Fixture {
    pub fn len(&self) -> usize {
        self.diagrams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagrams.is_empty()
    }

    /// Distance matrix of the fixture under `metric`.
    pub fn distance_matrix(
        &self,
        label: &str,
        metric: impl Fn(&PersistenceDiagram, &PersistenceDiagram) -> Result<f64>,
    ) -> Result<DistanceMatrix> {
        let n = self.len();
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = metric(&self.diagrams[i], &self.diagrams[j])?;
                entries[i * n + j] = d;
                entries[j * n + i] = d;
            }
        }
        DistanceMatrix::new(label, n, entries)
    }

    pub fn configuration(&self, distances: DistanceMatrix) -> Result<WeightedConfiguration> {
        WeightedConfiguration::new(distances, self.weights.clone())
    }

    /// Diagram CSV with an extra `diagram` column naming the member.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,birth,death,diagram\n");
        for (name, d) in self.names.iter().zip(&self.diagrams) {
            for p in d.points() {
                writeln!(out, "{},{},{},{}", p.degree, p.birth, p.death, name).unwrap();
            }
        }
        out
    }

    /// Sidecar weights file, one value per line in member order.
    pub fn weights_text(&self) -> String {
        self.weights.iter().map(|w| format!("{w}\n")).collect()
    }
}

fn diagram(points: &[(f64, f64)]) -> PersistenceDiagram {
    PersistenceDiagram::new(points.iter().map(|&(b, d)| DiagramPoint::new(b, d, 1)).collect(), None)
        .expect("fixture points lie above the diagonal")
}

fn barcode(bars: &[(f64, f64)]) -> PersistenceDiagram {
    PersistenceDiagram::from_pairs(bars).expect("fixture bars are non-empty")
}

/// Unit square with corners named as in the counterexample figures.
#[derive(Clone, Copy)]
struct Square {
    a: (f64, f64),
    b: (f64, f64),
    c: (f64, f64),
    d: (f64, f64),
    e: (f64, f64),
}

/// Square whose lower-left corner `c` is at `(x, y)`.
fn square(x: f64, y: f64) -> Square {
    Square {
        c: (x, y),
        d: (x + 1.0, y),
        a: (x, y + 1.0),
        b: (x + 1.0, y + 1.0),
        e: (x + 0.5, y + 0.5),
    }
}

/// Sixteen degree-1 diagrams violating negative type for every Wasserstein
/// `p < ln 2 / ln(4/3)`. Points sit on two unit squares; each diagram takes
/// an edge of one square and a diagonal of the other.
pub fn fixture_small_p() -> Fixture {
    let s1 = square(0.0, 3.0);
    let s2 = square(4.0, 7.0);
    let edges1 = [(s1.a, s1.b), (s1.a, s1.c), (s1.b, s1.d), (s1.c, s1.d)];
    let edges2 = [(s2.a, s2.b), (s2.a, s2.c), (s2.b, s2.d), (s2.c, s2.d)];
    let mut names = Vec::new();
    let mut diagrams = Vec::new();
    let mut weights = Vec::new();
    // x_i: edge of square 1 with a diagonal of square 2.
    for (k, diag) in [(s2.a, s2.d), (s2.b, s2.c)].into_iter().enumerate() {
        for (i, e) in edges1.iter().enumerate() {
            names.push(format!("x{}", 4 * k + i + 1));
            diagrams.push(diagram(&[e.0, e.1, diag.0, diag.1]));
            weights.push(1.0);
        }
    }
    // y_i: diagonal of square 1 with an edge of square 2.
    for (k, diag) in [(s1.a, s1.d), (s1.b, s1.c)].into_iter().enumerate() {
        for (i, e) in edges2.iter().enumerate() {
            names.push(format!("y{}", 4 * k + i + 1));
            diagrams.push(diagram(&[diag.0, diag.1, e.0, e.1]));
            weights.push(-1.0);
        }
    }
    Fixture {
        names,
        diagrams,
        weights,
    }
}

/// Thirty-two degree-1 diagrams violating negative type for every
/// Wasserstein `p >= 2.4` and for the bottleneck distance.
///
/// X members take one corner of each upper-case square plus both
/// lower-case centres; Y members take one corner of each lower-case square
/// plus both upper-case centres.
pub fn fixture_large_p() -> Fixture {
    let lower = [square(0.0, 3.0), square(4.0, 7.0)];
    let upper = [square(-4.0, -1.0), square(-8.0, -5.0)];
    let corners = |s: &Square| [("A", s.a), ("B", s.b), ("C", s.c), ("D", s.d)];
    let mut names = Vec::new();
    let mut diagrams = Vec::new();
    let mut weights = Vec::new();
    for (squares, centres, weight, lowercase) in [(upper, lower, 1.0, false), (lower, upper, -1.0, true)] {
        for (n1, p1) in corners(&squares[0]) {
            for (n2, p2) in corners(&squares[1]) {
                let (n1, n2) = if lowercase {
                    (n1.to_lowercase(), n2.to_lowercase())
                } else {
                    (n1.to_string(), n2.to_string())
                };
                names.push(format!("{{{n1}1,{n2}2,centres}}"));
                diagrams.push(diagram(&[p1, p2, centres[0].e, centres[1].e]));
                weights.push(weight);
            }
        }
    }
    Fixture {
        names,
        diagrams,
        weights,
    }
}

/// Four barcodes whose L¹ landscape configuration has quadratic form exactly 0.
pub fn fixture_landscape_l1() -> Fixture {
    Fixture {
        names: ["X1", "X2", "Y1", "Y2"].map(String::from).to_vec(),
        diagrams: vec![
            barcode(&[(0.0, 1.0), (3.0, 4.0)]),
            barcode(&[(1.0, 2.0), (2.0, 3.0)]),
            barcode(&[(0.0, 1.0), (1.0, 2.0)]),
            barcode(&[(2.0, 3.0), (3.0, 4.0)]),
        ],
        weights: vec![1.0, 1.0, -1.0, -1.0],
    }
}

/// Six barcodes violating negative type for landscapes under L^∞.
pub fn fixture_landscape_linf() -> Fixture {
    let shared_x = [(6.5, 7.5), (8.5, 9.5), (10.5, 11.5)];
    let shared_y = [(0.5, 1.5), (2.5, 3.5), (4.5, 5.5)];
    let with = |first: (f64, f64), rest: &[(f64, f64)]| {
        let mut bars = vec![first];
        bars.extend_from_slice(rest);
        barcode(&bars)
    };
    let with_last = |last: (f64, f64), rest: &[(f64, f64)]| {
        let mut bars = rest.to_vec();
        bars.push(last);
        barcode(&bars)
    };
    Fixture {
        names: ["X1", "X2", "X3", "Y1", "Y2", "Y3"].map(String::from).to_vec(),
        diagrams: vec![
            with((0.0, 2.0), &shared_x),
            with((2.0, 4.0), &shared_x),
            with((4.0, 6.0), &shared_x),
            with_last((6.0, 8.0), &shared_y),
            with_last((8.0, 10.0), &shared_y),
            with_last((10.0, 12.0), &shared_y),
        ],
        weights: vec![1.0, 1.0, 1.0, -1.0, -1.0, -1.0],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{bottleneck, landscape_distance, wasserstein, wasserstein_bijection};
    use crate::summaries::landscape_from_diagram;

    fn w(p: f64) -> impl Fn(&PersistenceDiagram, &PersistenceDiagram) -> Result<f64> {
        move |a, b| wasserstein(a, b, p)
    }

    fn landscape_metric(p: f64) -> impl Fn(&PersistenceDiagram, &PersistenceDiagram) -> Result<f64> {
        move |a, b| landscape_distance(&landscape_from_diagram(a, None)?, &landscape_from_diagram(b, None)?, p)
    }

    #[test]
    fn small_p_form_at_one() {
        let f = fixture_small_p();
        let cfg = f.configuration(f.distance_matrix("w1", w(1.0)).unwrap()).unwrap();
        assert!((quadratic_form(&cfg) - 64.0).abs() < 1e-9);
    }

    #[test]
    fn small_p_sign_change() {
        let f = fixture_small_p();
        for (p, positive) in [(1.0, true), (2.0, true), (2.4, true), (2.41, false), (3.0, false)] {
            let cfg = f.configuration(f.distance_matrix("w", w(p)).unwrap()).unwrap();
            assert_eq!(quadratic_form(&cfg) > 0.0, positive, "p = {p}");
        }
    }

    #[test]
    fn small_p_never_uses_diagonal() {
        let f = fixture_small_p();
        for p in [1.0, 2.0, 3.0] {
            for a in &f.diagrams {
                for b in &f.diagrams {
                    let with = wasserstein(a, b, p).unwrap();
                    let without = wasserstein_bijection(a, b, p).unwrap();
                    assert!((with - without).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn large_p_never_uses_diagonal() {
        let f = fixture_large_p();
        for a in f.diagrams.iter().step_by(3) {
            for b in &f.diagrams {
                let with = wasserstein(a, b, 2.4).unwrap();
                let without = wasserstein_bijection(a, b, 2.4).unwrap();
                assert!((with - without).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn large_p_suffices_inequality() {
        for p in [2.4, 3.0, 5.0, 10.0, 100.0] {
            let lhs = 4.0 * (1.0f64 / 8.0).powf(1.0 / p)
                + 6.0 * (0.25f64).powf(1.0 / p)
                + 4.0 * (3.0f64 / 8.0).powf(1.0 / p)
                + (0.5f64).powf(1.0 / p);
            assert!(lhs > 8.0, "p = {p}");
        }
        // Limit p -> ∞: 4 + 6 + 4 + 1 = 15 > 8.
        let f = fixture_large_p();
        let cfg = f
            .configuration(f.distance_matrix("b", |a, b| Ok(bottleneck(a, b))).unwrap())
            .unwrap();
        assert!((quadratic_form(&cfg) - (32.0 * 15.0 - 256.0 * 1.0)).abs() < 1e-9);
    }

    #[test]
    fn landscape_l1_fixture() {
        let f = fixture_landscape_l1();
        for d in &f.diagrams {
            assert_eq!(landscape_from_diagram(d, None).unwrap().levels().len(), 1);
        }
        let m = f.distance_matrix("l1", landscape_metric(1.0)).unwrap();
        assert_eq!(m.get(0, 1), 2.0 * m.get(0, 2));
        assert_eq!(m.get(2, 3), 2.0 * m.get(1, 3));
        assert_eq!(quadratic_form(&f.configuration(m).unwrap()), 0.0);
    }

    #[test]
    fn landscape_linf_fixture() {
        let f = fixture_landscape_linf();
        let m = f.distance_matrix("linf", landscape_metric(f64::INFINITY)).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let expected = if i == j {
                    0.0
                } else if (i < 3) == (j < 3) {
                    1.0
                } else {
                    0.5
                };
                assert_eq!(m.get(i, j), expected, "({i},{j})");
            }
        }
        assert_eq!(quadratic_form(&f.configuration(m).unwrap()), 3.0);
    }

    #[test]
    fn weights_must_sum_to_zero() {
        let d = DistanceMatrix::from_values("x", &[0.0, 1.0]).unwrap();
        assert!(WeightedConfiguration::new(d.clone(), vec![1.0, 1.0]).is_err());
        assert!(WeightedConfiguration::new(d, vec![1.0, -1.0]).is_ok());
    }

    #[test]
    fn euclidean_form_nonpositive() {
        let pts: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64, (i * i % 5) as f64]).collect();
        let d = DistanceMatrix::euclidean("e", &pts).unwrap();
        let cfg = WeightedConfiguration::new(d.clone(), vec![1.0, -2.0, 0.5, 0.5, 1.5, -1.5]).unwrap();
        assert!(quadratic_form(&cfg) <= 0.0);
        assert_eq!(negtype_check(&d, 1e-9).unwrap(), NegTypeVerdict::NegativeType);
    }

    #[test]
    fn single_point_is_negative_type() {
        let d = DistanceMatrix::from_values("x", &[3.0]).unwrap();
        assert_eq!(negtype_check(&d, 0.0).unwrap(), NegTypeVerdict::NegativeType);
    }

    #[test]
    fn small_p_violation_detected() {
        let f = fixture_small_p();
        let d = f.distance_matrix("w1", w(1.0)).unwrap();
        match negtype_check(&d, 1e-9).unwrap() {
            NegTypeVerdict::Violated { weights, form } => {
                assert!(weights.iter().sum::<f64>().abs() < 1e-12);
                assert!(form > 1e-9);
                let cfg = WeightedConfiguration::new(d, weights).unwrap();
                assert!((quadratic_form(&cfg) - form).abs() < 1e-12);
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn jacobi_reconstructs() {
        let n = 5;
        let m: Vec<f64> = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                ((i + 1) * (j + 1)) as f64 + if i == j { 3.0 } else { 0.0 }
            })
            .collect();
        let (vals, vecs) = jacobi_eigen(&m, n).unwrap();
        for k in 0..n {
            for i in 0..n {
                let av: f64 = (0..n).map(|j| m[i * n + j] * vecs[j * n + k]).sum();
                assert!((av - vals[k] * vecs[i * n + k]).abs() < 1e-10);
            }
        }
        let trace: f64 = (0..n).map(|i| m[i * n + i]).sum();
        assert!((vals.iter().sum::<f64>() - trace).abs() < 1e-10);
    }

    #[test]
    fn fixture_export() {
        let f = fixture_landscape_l1();
        let csv = f.to_csv();
        assert!(csv.starts_with("degree,birth,death,diagram\n"));
        assert_eq!(csv.lines().count(), 1 + 8);
        assert_eq!(f.weights_text(), "1\n1\n-1\n-1\n");
        // Extra columns are ignored by the diagram reader.
        assert_eq!(PersistenceDiagram::from_csv(&csv).unwrap().len(), 8);
    }
}
