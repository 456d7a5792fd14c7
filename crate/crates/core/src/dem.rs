//! Elevation grids: loading, overlapping chunks, terrain ruggedness and
//! synthetic diamond-square terrain.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::complexes::HeightGrid;
use crate::error::{Error, Result};
use crate::rng::{rng, uniform};

/// Sliding-window geometry. `stride = chunk_size / 2` gives 50% overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChunkSpec {
    pub chunk_size: usize,
    pub stride: usize,
    #[serde(default)]
    pub max_chunks: Option<usize>,
}

impl ChunkSpec {
    pub fn new(chunk_size: usize, stride: usize, max_chunks: Option<usize>) -> Result<Self> {
        let spec = ChunkSpec {
            chunk_size,
            stride,
            max_chunks,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.stride == 0 || self.stride > self.chunk_size {
            return Err(Error::invalid(format!(
                "stride {} must lie in 1..={}",
                self.stride, self.chunk_size
            )));
        }
        Ok(())
    }
}

/// One window of a grid; `row`/`col` index the window position and the
/// centre is in grid units (`x` along columns, `y` along rows).
#[derive(Debug, Clone, PartialEq)]
pub struct Chunk {
    pub row: usize,
    pub col: usize,
    pub center: (f64, f64),
    pub grid: HeightGrid,
}

/// Parses an ESRI ASCII grid (`ncols`/`nrows` header) or a headerless CSV
/// matrix. Any NODATA cell is rejected.
pub fn load_grid(text: &str) -> Result<HeightGrid> {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty());
    match first {
        None => Err(Error::parse(1, "empty grid")),
        Some(l) if l.starts_with(|c: char| c.is_ascii_alphabetic()) => load_ascii_grid(text),
        Some(_) => load_csv_grid(text),
    }
}

pub fn load_grid_file(path: impl AsRef<Path>) -> Result<HeightGrid> {
    load_grid(&std::fs::read_to_string(path)?)
}

fn number(token: &str, line: usize) -> Result<f64> {
    let v: f64 = token
        .trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("not a number: `{}`", token.trim())))?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("non-finite value `{}`", token.trim())));
    }
    Ok(v)
}

fn load_csv_grid(text: &str) -> Result<HeightGrid> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = line.split(',').map(|t| number(t, i + 1)).collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::parse(
                    i + 1,
                    format!("expected {} columns, got {}", first.len(), row.len()),
                ));
            }
        }
        rows.push(row);
    }
    HeightGrid::from_rows(&rows)
}

fn load_ascii_grid(text: &str) -> Result<HeightGrid> {
    let mut ncols = None;
    let mut nrows = None;
    let mut nodata = None;
    let mut values = Vec::new();
    let mut rows_seen = 0;
    let mut header_done = false;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if !header_done && trimmed.starts_with(|c: char| c.is_ascii_alphabetic()) {
            let mut parts = trimmed.split_whitespace();
            let key = parts.next().unwrap_or_default().to_ascii_lowercase();
            let value = parts
                .next()
                .ok_or_else(|| Error::parse(line_no, format!("header `{key}` has no value")))?;
            if parts.next().is_some() {
                return Err(Error::parse(line_no, "malformed header line"));
            }
            let count = || {
                value
                    .parse::<usize>()
                    .map_err(|_| Error::parse(line_no, format!("`{key}` must be a positive integer")))
            };
            match key.as_str() {
                "ncols" => ncols = Some(count()?),
                "nrows" => nrows = Some(count()?),
                "nodata_value" => nodata = Some(number(value, line_no)?),
                "xllcorner" | "yllcorner" | "xllcenter" | "yllcenter" | "cellsize" => {
                    number(value, line_no)?;
                }
                _ => return Err(Error::parse(line_no, format!("unknown header key `{key}`"))),
            }
            continue;
        }
        header_done = true;
        let cols = ncols.ok_or_else(|| Error::parse(line_no, "missing ncols header"))?;
        let rows = nrows.ok_or_else(|| Error::parse(line_no, "missing nrows header"))?;
        let row = trimmed
            .split_whitespace()
            .map(|t| number(t, line_no))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != cols {
            return Err(Error::parse(
                line_no,
                format!("expected {cols} columns, got {}", row.len()),
            ));
        }
        if rows_seen == rows {
            return Err(Error::parse(line_no, format!("more than the declared {rows} rows")));
        }
        if let Some(nd) = nodata {
            if row.contains(&nd) {
                return Err(Error::parse(line_no, "NODATA value present"));
            }
        }
        values.extend(row);
        rows_seen += 1;
    }
    let last = text.lines().count().max(1);
    let cols = ncols.ok_or_else(|| Error::parse(last, "missing ncols header"))?;
    let rows = nrows.ok_or_else(|| Error::parse(last, "missing nrows header"))?;
    if rows_seen != rows {
        return Err(Error::parse(last, format!("declared {rows} rows, found {rows_seen}")));
    }
    HeightGrid::new(rows, cols, values)
}

/// Number of windows before `max_chunks` truncation.
pub fn chunk_count(rows: usize, cols: usize, spec: &ChunkSpec) -> usize {
    if spec.chunk_size > rows.min(cols) {
        return 0;
    }
    ((rows - spec.chunk_size) / spec.stride + 1) * ((cols - spec.chunk_size) / spec.stride + 1)
}

/// Row-major sliding windows, truncated to the first `max_chunks`.
pub fn chunk_grid(g: &HeightGrid, spec: &ChunkSpec) -> Result<Vec<Chunk>> {
    spec.validate()?;
    let s = spec.chunk_size;
    if s == 0 || s > g.rows().min(g.cols()) {
        return Err(Error::invalid(format!(
            "chunk size {s} does not fit a {}x{} grid",
            g.rows(),
            g.cols()
        )));
    }
    let limit = spec.max_chunks.unwrap_or(usize::MAX);
    let half = (s as f64 - 1.0) / 2.0;
    let mut out = Vec::new();
    'outer: for (row, r0) in (0..=g.rows() - s).step_by(spec.stride).enumerate() {
        for (col, c0) in (0..=g.cols() - s).step_by(spec.stride).enumerate() {
            if out.len() == limit {
                break 'outer;
            }
            out.push(Chunk {
                row,
                col,
                center: (c0 as f64 + half, r0 as f64 + half),
                grid: g.block(r0, c0, s, s)?,
            });
        }
    }
    Ok(out)
}

/// Mean over interior pixels of Riley's terrain ruggedness index, the root
/// sum of squared differences to the eight neighbours.
pub fn tri(g: &HeightGrid) -> Result<f64> {
    if g.rows() < 3 || g.cols() < 3 {
        return Err(Error::invalid(format!(
            "TRI needs at least 3x3, got {}x{}",
            g.rows(),
            g.cols()
        )));
    }
    let mut total = 0.0;
    for r in 1..g.rows() - 1 {
        for c in 1..g.cols() - 1 {
            let h = g.get(r, c);
            let mut ss = 0.0;
            for nr in r - 1..=r + 1 {
                for nc in c - 1..=c + 1 {
                    let d = g.get(nr, nc) - h;
                    ss += d * d;
                }
            }
            total += ss.sqrt();
        }
    }
    Ok(total / ((g.rows() - 2) * (g.cols() - 2)) as f64)
}

/// Planar distance between chunk centres scaled to ground units.
pub fn chunk_center_distance(c1: (f64, f64), c2: (f64, f64), resolution: f64) -> Result<f64> {
    if !(resolution > 0.0) || !resolution.is_finite() {
        return Err(Error::invalid("resolution must be positive"));
    }
    Ok((c1.0 - c2.0).hypot(c1.1 - c2.1) * resolution)
}

/// Chunk manifest `row,col,center_x,center_y,tri`.
pub fn chunk_manifest(chunks: &[Chunk], tris: &[f64]) -> String {
    let mut out = String::from("row,col,center_x,center_y,tri\n");
    for (c, t) in chunks.iter().zip(tris) {
        writeln!(out, "{},{},{},{},{}", c.row, c.col, c.center.0, c.center.1, t).unwrap();
    }
    out
}

/// Diamond-square surface of side `size = 2^k + 1` with unit amplitude.
pub fn synth_terrain(size: usize, roughness: f64, seed: u64) -> Result<HeightGrid> {
    synth_terrain_with(size, roughness, 1.0, seed)
}

/// Diamond-square surface; corners and displacements are uniform in
/// `[-amplitude/2, amplitude/2)`, the displacement range shrinking by
/// `roughness` at every halving of the step.
pub fn synth_terrain_with(size: usize, roughness: f64, amplitude: f64, seed: u64) -> Result<HeightGrid> {
    if size < 2 || !(size - 1).is_power_of_two() {
        return Err(Error::invalid(format!("terrain size must be 2^k + 1, got {size}")));
    }
    if !(roughness > 0.0 && roughness <= 1.0) {
        return Err(Error::invalid(format!("roughness {roughness} outside (0,1]")));
    }
    if !(amplitude >= 0.0) || !amplitude.is_finite() {
        return Err(Error::invalid("amplitude must be finite and non-negative"));
    }
    let mut r = rng(seed);
    let mut jitter = |scale: f64| scale * (uniform(&mut r) - 0.5);
    let n = size;
    let mut h = vec![0.0; n * n];
    let last = n - 1;
    for (rr, cc) in [(0, 0), (0, last), (last, 0), (last, last)] {
        h[rr * n + cc] = jitter(amplitude);
    }
    let mut step = last;
    let mut scale = amplitude;
    while step > 1 {
        let half = step / 2;
        // Diamond: square centres.
        for rr in (half..n).step_by(step) {
            for cc in (half..n).step_by(step) {
                let avg = (h[(rr - half) * n + cc - half]
                    + h[(rr - half) * n + cc + half]
                    + h[(rr + half) * n + cc - half]
                    + h[(rr + half) * n + cc + half])
                    / 4.0;
                h[rr * n + cc] = avg + jitter(scale);
            }
        }
        // Square: edge midpoints, averaging the in-bounds neighbours.
        for rr in (0..n).step_by(half) {
            let start = if (rr / half) % 2 == 0 { half } else { 0 };
            for cc in (start..n).step_by(step) {
                let mut sum = 0.0;
                let mut count = 0.0;
                if rr >= half {
                    sum += h[(rr - half) * n + cc];
                    count += 1.0;
                }
                if rr + half < n {
                    sum += h[(rr + half) * n + cc];
                    count += 1.0;
                }
                if cc >= half {
                    sum += h[rr * n + cc - half];
                    count += 1.0;
                }
                if cc + half < n {
                    sum += h[rr * n + cc + half];
                    count += 1.0;
                }
                h[rr * n + cc] = sum / count + jitter(scale);
            }
        }
        step = half;
        scale *= roughness;
    }
    HeightGrid::new(n, n, h)
}

/// Terrain whose ruggedness grows from west to east: a smooth and a rough
/// diamond-square surface blended by a linear column ramp.
pub fn synth_graded_terrain(size: usize, smooth: f64, rough: f64, seed: u64) -> Result<HeightGrid> {
    let a = synth_terrain(size, smooth, crate::rng::derive_seed(seed, 0))?;
    let b = synth_terrain(size, rough, crate::rng::derive_seed(seed, 1))?;
    let denom = (size - 1) as f64;
    let values = (0..size * size)
        .map(|k| {
            let m = (k % size) as f64 / denom;
            (1.0 - m) * a.values()[k] + m * b.values()[k]
        })
        .collect();
    HeightGrid::new(size, size, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(rows: &[&[f64]]) -> HeightGrid {
        HeightGrid::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn csv_grid() {
        assert_eq!(load_grid("1,2\n3,4").unwrap(), grid(&[&[1.0, 2.0], &[3.0, 4.0]]));
        match load_grid("1,2\n3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(load_grid("1,x\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn ascii_grid() {
        let g = load_grid("ncols 2\nnrows 1\n5 7\n").unwrap();
        assert_eq!(g, grid(&[&[5.0, 7.0]]));
        let g =
            load_grid("ncols 2\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 30\nNODATA_value -9999\n5 7\n").unwrap();
        assert_eq!(g.values(), &[5.0, 7.0]);
    }

    #[test]
    fn ascii_grid_errors() {
        assert!(matches!(
            load_grid("ncols 3\nnrows 1\n5 7\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(load_grid("ncols 2\nnrows 2\n5 7\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            load_grid("ncols 2\nnrows 1\nnodata_value -9999\n5 -9999\n"),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(matches!(
            load_grid("ncols\nnrows 1\n5\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(load_grid("bogus 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(load_grid("").is_err());
    }

    #[test]
    fn chunk_positions() {
        let g = HeightGrid::new(40, 40, (0..1600).map(f64::from).collect()).unwrap();
        let chunks = chunk_grid(&g, &ChunkSpec::new(20, 10, None).unwrap()).unwrap();
        assert_eq!(chunks.len(), 9);
        assert_eq!(chunk_count(40, 40, &ChunkSpec::new(20, 10, None).unwrap()), 9);
        assert_eq!(chunks[1].center, (19.5, 9.5));
        assert_eq!(chunks[1].grid.get(0, 0), 10.0);
        assert_eq!((chunks[5].row, chunks[5].col), (1, 2));

        let tiles = chunk_grid(&g, &ChunkSpec::new(20, 20, None).unwrap()).unwrap();
        assert_eq!(tiles.len(), 4);
        let firsts = chunk_grid(&g, &ChunkSpec::new(20, 10, Some(4)).unwrap()).unwrap();
        assert_eq!(firsts, chunks[..4].to_vec());

        assert!(chunk_grid(&g, &ChunkSpec::new(41, 10, None).unwrap()).is_err());
        assert!(ChunkSpec::new(10, 11, None).is_err());
        assert!(ChunkSpec::new(10, 0, None).is_err());
    }

    #[test]
    fn chunk_count_formula() {
        for (rows, cols, s, t) in [(33, 17, 8, 3), (20, 20, 5, 5), (9, 40, 9, 1)] {
            let g = HeightGrid::new(rows, cols, vec![0.0; rows * cols]).unwrap();
            let spec = ChunkSpec::new(s, t, None).unwrap();
            let expected = ((rows - s) / t + 1) * ((cols - s) / t + 1);
            assert_eq!(chunk_grid(&g, &spec).unwrap().len(), expected);
        }
    }

    #[test]
    fn tri_values() {
        assert_eq!(tri(&HeightGrid::new(4, 5, vec![2.0; 20]).unwrap()).unwrap(), 0.0);
        let g = grid(&[&[1.0, 1.0, 1.0], &[1.0, 0.0, 1.0], &[1.0, 1.0, 1.0]]);
        assert_eq!(tri(&g).unwrap(), 8f64.sqrt());
        assert!(tri(&grid(&[&[1.0, 2.0], &[3.0, 4.0]])).is_err());
    }

    #[test]
    fn tri_checkerboard() {
        let g = HeightGrid::new(4, 4, (0..16).map(|k| ((k / 4 + k % 4) % 2) as f64).collect()).unwrap();
        // Each interior pixel differs from its 4 edge neighbours and matches
        // its 4 diagonal ones: sqrt(4) = 2 everywhere.
        assert_eq!(tri(&g).unwrap(), 2.0);
    }

    #[test]
    fn tri_affine() {
        let g = synth_terrain(17, 0.6, 4).unwrap();
        let t = tri(&g).unwrap();
        assert!((tri(&g.map(|h| h + 100.0).unwrap()).unwrap() - t).abs() < 1e-9);
        assert!((tri(&g.map(|h| 3.0 * h).unwrap()).unwrap() - 3.0 * t).abs() < 1e-12);
    }

    #[test]
    fn center_distance() {
        assert_eq!(chunk_center_distance((3.0, 4.0), (3.0, 4.0), 10.0).unwrap(), 0.0);
        assert_eq!(chunk_center_distance((9.5, 9.5), (19.5, 9.5), 10.0).unwrap(), 100.0);
        assert_eq!(
            chunk_center_distance((0.0, 0.0), (3.0, 4.0), 2.0).unwrap(),
            chunk_center_distance((3.0, 4.0), (0.0, 0.0), 2.0).unwrap()
        );
        assert!(chunk_center_distance((0.0, 0.0), (1.0, 1.0), 0.0).is_err());
    }

    #[test]
    fn terrain_basics() {
        assert_eq!(synth_terrain(33, 0.5, 1).unwrap(), synth_terrain(33, 0.5, 1).unwrap());
        assert!(synth_terrain(32, 0.5, 1).is_err());
        assert!(synth_terrain(33, 0.0, 1).is_err());
        assert!(synth_terrain(33, 1.5, 1).is_err());
        let flat = synth_terrain_with(17, 0.5, 0.0, 1).unwrap();
        assert!(flat.values().iter().all(|&h| h == 0.0));
        assert_eq!(tri(&flat).unwrap(), 0.0);
    }

    #[test]
    fn roughness_raises_tri() {
        let mean = |rough: f64| {
            (0..10)
                .map(|s| tri(&synth_terrain(65, rough, s).unwrap()).unwrap())
                .sum::<f64>()
                / 10.0
        };
        assert!(mean(0.9) > mean(0.2));
    }

    #[test]
    fn graded_terrain_rougher_in_east() {
        let g = synth_graded_terrain(65, 0.3, 0.9, 7).unwrap();
        let chunks = chunk_grid(&g, &ChunkSpec::new(16, 16, None).unwrap()).unwrap();
        let west = tri(&chunks[0].grid).unwrap();
        let east = tri(&chunks[3].grid).unwrap();
        assert!(east > west);
    }

    #[test]
    fn manifest_format() {
        let g = HeightGrid::new(4, 4, vec![0.0; 16]).unwrap();
        let chunks = chunk_grid(&g, &ChunkSpec::new(3, 1, Some(2)).unwrap()).unwrap();
        assert_eq!(
            chunk_manifest(&chunks, &[0.0, 0.5]),
            "row,col,center_x,center_y,tri\n0,0,1,1,0\n0,1,2,1,0.5\n"
        );
    }
}
