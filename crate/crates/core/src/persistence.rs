//! Persistent homology over the two-element field.
//!
//! [`compute_persistence`] runs the standard column reduction on the
//! boundary matrix of a [`FilteredComplex`]. [`persistent_betti`] computes
//! the same information by dense rank computations and serves as an
//! independent check on small complexes.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::complexes::FilteredComplex;
use crate::error::{Error, Result};

/// A point `(birth, death)` of homological degree `degree`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagramPoint {
    pub birth: f64,
    pub death: f64,
    pub degree: usize,
}

impl DiagramPoint {
    pub fn new(birth: f64, death: f64, degree: usize) -> Self {
        DiagramPoint { birth, death, degree }
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }
}

/// Finite multiset of off-diagonal points. The diagonal is implicit.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PersistenceDiagram {
    points: Vec<DiagramPoint>,
    cap: Option<f64>,
}

impl PersistenceDiagram {
    /// Builds a diagram, dropping zero-persistence points.
    pub fn new(points: Vec<DiagramPoint>, cap: Option<f64>) -> Result<Self> {
        let mut kept = Vec::with_capacity(points.len());
        for p in points {
            if !p.birth.is_finite() || !p.death.is_finite() {
                return Err(Error::invalid("diagram points must be finite"));
            }
            if p.death < p.birth {
                return Err(Error::invalid(format!("death {} before birth {}", p.death, p.birth)));
            }
            if p.death > p.birth {
                kept.push(p);
            }
        }
        Ok(PersistenceDiagram { points: kept, cap })
    }

    /// Degree-0 diagram from `(birth, death)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::from_pairs_in_degree(pairs, 0)
    }

    pub fn from_pairs_in_degree(pairs: &[(f64, f64)], degree: usize) -> Result<Self> {
        Self::new(
            pairs.iter().map(|&(b, d)| DiagramPoint::new(b, d, degree)).collect(),
            None,
        )
    }

    pub fn points(&self) -> &[DiagramPoint] {
        &self.points
    }

    pub fn cap(&self) -> Option<f64> {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sorted list of the degrees that occur.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.points.iter().map(|p| p.degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// The sub-diagram of one degree.
    pub fn in_degree(&self, degree: usize) -> PersistenceDiagram {
        PersistenceDiagram {
            points: self.points.iter().copied().filter(|p| p.degree == degree).collect(),
            cap: self.cap,
        }
    }

    /// `(birth, death)` pairs of one degree.
    pub fn pairs(&self, degree: usize) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .filter(|p| p.degree == degree)
            .map(|p| (p.birth, p.death))
            .collect()
    }

    pub fn total_persistence(&self, degree: usize) -> f64 {
        self.points
            .iter()
            .filter(|p| p.degree == degree)
            .map(DiagramPoint::persistence)
            .sum()
    }

    /// Points sorted by degree, birth, death; a canonical form for comparisons.
    pub fn canonical(&self) -> Vec<DiagramPoint> {
        let mut pts = self.points.clone();
        pts.sort_by(|a, b| {
            a.degree
                .cmp(&b.degree)
                .then(a.birth.total_cmp(&b.birth))
                .then(a.death.total_cmp(&b.death))
        });
        pts
    }

    /// CSV with header `degree,birth,death`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,birth,death\n");
        for p in &self.points {
            writeln!(out, "{},{},{}", p.degree, p.birth, p.death).unwrap();
        }
        out
    }

    /// Parses diagram CSV; columns are located by header name and extra columns are ignored.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let names: Vec<&str> = header.split(',').map(str::trim).collect();
        let col = |name: &str| {
            names
                .iter()
                .position(|&n| n == name)
                .ok_or_else(|| Error::parse(1, format!("missing column `{name}`")))
        };
        let (ci, bi, di) = (col("degree")?, col("birth")?, col("death")?);
        let mut points = Vec::new();
        for (lineno, line) in lines {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let get = |i: usize| {
                fields
                    .get(i)
                    .copied()
                    .ok_or_else(|| Error::parse(lineno + 1, "too few fields"))
            };
            let degree = get(ci)?
                .parse::<usize>()
                .map_err(|_| Error::parse(lineno + 1, "bad degree"))?;
            let birth = get(bi)?
                .parse::<f64>()
                .map_err(|_| Error::parse(lineno + 1, "bad birth"))?;
            let death = get(di)?
                .parse::<f64>()
                .map_err(|_| Error::parse(lineno + 1, "bad death"))?;
            points.push(DiagramPoint::new(birth, death, degree));
        }
        Self::new(points, None)
    }
}

/// Sparse boundary matrix over the two-element field; column `j` lists the
/// faces of cell `j` as sorted row indices.
#[derive(Debug, Clone)]
pub struct BoundaryMatrix {
    columns: Vec<Vec<usize>>,
    dims: Vec<usize>,
}

impl BoundaryMatrix {
    pub fn from_complex(cx: &FilteredComplex) -> Self {
        BoundaryMatrix {
            columns: cx
                .cells()
                .iter()
                .map(|c| {
                    let mut faces = c.faces.clone();
                    faces.sort_unstable();
                    faces
                })
                .collect(),
            dims: cx.cells().iter().map(|c| c.dim).collect(),
        }
    }

    pub fn columns(&self) -> &[Vec<usize>] {
        &self.columns
    }
}

/// One persistence pair in cell indices; `death == None` for essential classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexPair {
    pub dim: usize,
    pub birth: usize,
    pub death: Option<usize>,
}

fn add_into(target: &mut Vec<usize>, other: &[usize], scratch: &mut Vec<usize>) {
    scratch.clear();
    let (mut i, mut j) = (0, 0);
    while i < target.len() && j < other.len() {
        match target[i].cmp(&other[j]) {
            std::cmp::Ordering::Less => {
                scratch.push(target[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                scratch.push(other[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    scratch.extend_from_slice(&target[i..]);
    scratch.extend_from_slice(&other[j..]);
    std::mem::swap(target, scratch);
}

impl BoundaryMatrix {
    /// Left-to-right column reduction. With `clearing`, dimensions are
    /// processed from the top down and columns of cells known to be
    /// killed are zeroed without reduction; the pairing is the same.
    pub fn reduce(&self, clearing: bool) -> Vec<IndexPair> {
        let n = self.columns.len();
        let mut reduced: Vec<Vec<usize>> = self.columns.clone();
        let mut pivot_of: HashMap<usize, usize> = HashMap::new();
        let mut cleared = vec![false; n];
        let mut scratch = Vec::new();

        let max_dim = self.dims.iter().copied().max().unwrap_or(0);
        let passes: Vec<Option<usize>> = if clearing {
            (0..=max_dim).rev().map(Some).collect()
        } else {
            vec![None]
        };
        for pass in passes {
            for j in 0..n {
                if pass.is_some_and(|d| self.dims[j] != d) {
                    continue;
                }
                if cleared[j] {
                    reduced[j].clear();
                    continue;
                }
                let mut col = std::mem::take(&mut reduced[j]);
                while let Some(&low) = col.last() {
                    match pivot_of.get(&low) {
                        Some(&k) => add_into(&mut col, &reduced[k], &mut scratch),
                        None => break,
                    }
                }
                if let Some(&low) = col.last() {
                    pivot_of.insert(low, j);
                    if clearing {
                        cleared[low] = true;
                    }
                }
                reduced[j] = col;
            }
        }

        let mut pairs = Vec::new();
        for j in 0..n {
            if let Some(&low) = reduced[j].last() {
                pairs.push(IndexPair {
                    dim: self.dims[low],
                    birth: low,
                    death: Some(j),
                });
            } else if !pivot_of.contains_key(&j) {
                pairs.push(IndexPair {
                    dim: self.dims[j],
                    birth: j,
                    death: None,
                });
            }
        }
        pairs.sort_by_key(|p| (p.birth, p.death));
        pairs
    }
}

/// Persistence pairs of `cx` in cell indices.
pub fn persistence_pairs(cx: &FilteredComplex, clearing: bool) -> Vec<IndexPair> {
    BoundaryMatrix::from_complex(cx).reduce(clearing)
}

/// Persistence diagram of `cx` in the requested degrees.
///
/// Essential classes are closed at `cap`, which defaults to the largest
/// filtration value of the complex. Zero-persistence pairs are dropped.
pub fn compute_persistence(cx: &FilteredComplex, degrees: &[usize], cap: Option<f64>) -> Result<PersistenceDiagram> {
    compute_persistence_with(cx, degrees, cap, true)
}

pub fn compute_persistence_with(
    cx: &FilteredComplex,
    degrees: &[usize],
    cap: Option<f64>,
    clearing: bool,
) -> Result<PersistenceDiagram> {
    let max_value = cx.max_value().unwrap_or(0.0);
    let cap = match cap {
        Some(c) if c < max_value || !c.is_finite() => {
            return Err(Error::invalid(format!(
                "cap {c} is below the largest filtration value {max_value}"
            )))
        }
        Some(c) => c,
        None => max_value,
    };
    let cells = cx.cells();
    let points = persistence_pairs(cx, clearing)
        .into_iter()
        .filter(|p| degrees.contains(&p.dim))
        .map(|p| {
            let death = p.death.map_or(cap, |d| cells[d].value);
            DiagramPoint::new(cells[p.birth].value, death, p.dim)
        })
        .collect();
    PersistenceDiagram::new(points, Some(cap))
}

/// Dense bit vector over the two-element field.
#[derive(Clone, Debug)]
struct Bits(Vec<u64>);

impl Bits {
    fn zeros(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] ^= 1 << (i % 64);
    }

    fn xor(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }

    fn highest(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
    }
}

/// Echelon basis keyed by leading bit.
struct Echelon {
    rows: HashMap<usize, Bits>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: HashMap::new() }
    }

    /// Inserts `v`; returns whether the rank grew.
    fn insert(&mut self, mut v: Bits) -> bool {
        while let Some(h) = v.highest() {
            match self.rows.get(&h) {
                Some(r) => v.xor(r),
                None => {
                    self.rows.insert(h, v);
                    return true;
                }
            }
        }
        false
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Persistent Betti number `dim Z_k(K_a) - dim(B_k(K_b) ∩ Z_k(K_a))` by
/// dense rank computations. Intended for small complexes.
pub fn persistent_betti(cx: &FilteredComplex, a: f64, b: f64, k: usize) -> Result<usize> {
    if a > b {
        return Err(Error::invalid(format!("persistent Betti needs a <= b, got {a} > {b}")));
    }
    let cells = cx.cells();
    let n = cells.len();

    // Cycle basis of K_a in degree k: kernel of the boundary restricted to k-cells <= a.
    let mut cycles: Vec<Bits> = Vec::new();
    let mut reducer: Vec<(usize, Bits, Bits)> = Vec::new();
    for (i, c) in cells.iter().enumerate() {
        if c.dim != k || c.value > a {
            continue;
        }
        let mut image = Bits::zeros(n);
        for &f in &c.faces {
            image.set(f);
        }
        let mut chain = Bits::zeros(n);
        chain.set(i);
        loop {
            match image.highest() {
                None => {
                    cycles.push(chain);
                    break;
                }
                Some(h) => match reducer.iter().find(|(p, _, _)| *p == h) {
                    Some((_, img, ch)) => {
                        image.xor(img);
                        chain.xor(ch);
                    }
                    None => {
                        reducer.push((h, image, chain));
                        break;
                    }
                },
            }
        }
    }
    let z = cycles.len();

    let mut boundaries = Echelon::new();
    let mut combined = Echelon::new();
    for c in cells.iter().filter(|c| c.dim == k + 1 && c.value <= b) {
        let mut v = Bits::zeros(n);
        for &f in &c.faces {
            v.set(f);
        }
        boundaries.insert(v.clone());
        combined.insert(v);
    }
    for zc in cycles {
        combined.insert(zc);
    }
    // dim(Z ∩ B) = dim Z + dim B - dim(Z + B)
    let intersection = z + boundaries.rank() - combined.rank();
    Ok(z - intersection)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{build_cubical_complex, build_flag_complex, build_rips_complex, HeightGrid, WeightedGraph};

    fn four_cycle() -> FilteredComplex {
        // Square edges (consecutive vertices) at 1, diagonals at 2.
        let g = WeightedGraph::from_fn(4, |i, j| if j - i == 2 { 2.0 } else { 1.0 }).unwrap();
        build_flag_complex(&g, 2).unwrap()
    }

    #[test]
    fn single_vertex() {
        let cx = FilteredComplex::from_text("0 0\n").unwrap();
        let d = compute_persistence(&cx, &[0], Some(1.0)).unwrap();
        assert_eq!(d.points(), &[DiagramPoint::new(0.0, 1.0, 0)]);
        assert_eq!(d.cap(), Some(1.0));
    }

    #[test]
    fn unsorted_faces_in_text() {
        let sorted = FilteredComplex::from_text("0 0\n0 0\n0 0\n1 1 0 1\n1 1 1 2\n1 1 0 2\n2 2 3 4 5\n").unwrap();
        let shuffled = FilteredComplex::from_text("0 0\n0 0\n0 0\n1 1 1 0\n1 1 2 1\n1 1 2 0\n2 2 5 3 4\n").unwrap();
        assert_eq!(persistence_pairs(&sorted, true), persistence_pairs(&shuffled, true));
    }

    #[test]
    fn elder_rule_edge() {
        let cx = FilteredComplex::from_text("0 0\n0 0\n1 0.7 0 1\n").unwrap();
        let d = compute_persistence(&cx, &[0], Some(1.0)).unwrap();
        let mut pairs = d.pairs(0);
        pairs.sort_by(|a, b| a.1.total_cmp(&b.1));
        assert_eq!(pairs, vec![(0.0, 0.7), (0.0, 1.0)]);
    }

    #[test]
    fn four_cycle_h1() {
        let cx = four_cycle();
        let d = compute_persistence(&cx, &[1], None).unwrap();
        assert_eq!(d.pairs(1), vec![(1.0, 2.0)]);
        assert_eq!(persistent_betti(&cx, 1.0, 1.5, 1).unwrap(), 1);
        assert_eq!(persistent_betti(&cx, 1.0, 2.0, 1).unwrap(), 0);
    }

    #[test]
    fn cap_below_max_rejected() {
        let cx = four_cycle();
        assert!(matches!(
            compute_persistence(&cx, &[0], Some(1.5)),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn betti_rejects_reversed_interval() {
        assert!(persistent_betti(&four_cycle(), 2.0, 1.0, 0).is_err());
    }

    #[test]
    fn persistent_betti_at_equal_endpoints_is_betti() {
        let cx = four_cycle();
        assert_eq!(persistent_betti(&cx, 0.0, 0.0, 0).unwrap(), 4);
        assert_eq!(persistent_betti(&cx, 1.0, 1.0, 0).unwrap(), 1);
        assert_eq!(persistent_betti(&cx, 1.0, 1.0, 1).unwrap(), 1);
    }

    #[test]
    fn unit_square_rips_h1() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]];
        let cx = build_rips_complex(&pts, 2, 2.0).unwrap();
        let d = compute_persistence(&cx, &[1], None).unwrap();
        let pairs = d.pairs(1);
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].0, 1.0);
        assert!((pairs[0].1 - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(persistent_betti(&cx, 1.0, 1.2, 1).unwrap(), 1);
    }

    #[test]
    fn cubical_two_by_two_h0() {
        let g = HeightGrid::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let cx = build_cubical_complex(&g).unwrap();
        let d = compute_persistence(&cx, &[0, 1], None).unwrap();
        assert_eq!(d.pairs(0), vec![(1.0, 4.0)]);
        assert!(d.pairs(1).is_empty());
    }

    #[test]
    fn clearing_matches_standard() {
        let g = WeightedGraph::from_fn(7, |i, j| ((i * 13 + j * 7) % 17) as f64 / 17.0).unwrap();
        let cx = build_flag_complex(&g, 3).unwrap();
        assert_eq!(
            BoundaryMatrix::from_complex(&cx).reduce(true),
            BoundaryMatrix::from_complex(&cx).reduce(false)
        );
    }

    #[test]
    fn h0_interval_count() {
        let g = WeightedGraph::from_fn(6, |i, j| ((i * 5 + j * 3) % 7) as f64).unwrap();
        let cx = build_flag_complex(&g, 1).unwrap();
        let d = compute_persistence(&cx, &[0], None).unwrap();
        // All vertices enter at 0; merges at weight 0 are zero-persistence.
        let zero_merges = persistence_pairs(&cx, false)
            .iter()
            .filter(|p| p.dim == 0 && p.death.is_some_and(|j| cx.cells()[j].value == 0.0))
            .count();
        assert_eq!(d.in_degree(0).len(), 6 - zero_merges);
    }

    #[test]
    fn csv_round_trip_and_extra_columns() {
        let d = PersistenceDiagram::new(
            vec![DiagramPoint::new(0.0, 1.5, 0), DiagramPoint::new(0.25, 0.75, 1)],
            None,
        )
        .unwrap();
        assert_eq!(PersistenceDiagram::from_csv(&d.to_csv()).unwrap(), d);
        let extra = "id,birth,death,degree\n7,0,1.5,0\n8,0.25,0.75,1\n";
        assert_eq!(PersistenceDiagram::from_csv(extra).unwrap().canonical(), d.canonical());
        assert!(PersistenceDiagram::from_csv("degree,birth\n0,1\n").is_err());
    }

    #[test]
    fn zero_persistence_dropped() {
        let d = PersistenceDiagram::from_pairs(&[(1.0, 1.0), (0.0, 2.0)]).unwrap();
        assert_eq!(d.len(), 1);
        assert!(PersistenceDiagram::from_pairs(&[(2.0, 1.0)]).is_err());
    }
}
