//! Functional summaries of persistence: landscapes, Betti and Euler curves,
//! and cumulative cell counts.

use std::fmt::Write as _;

use crate::complexes::FilteredComplex;
use crate::error::{Error, Result};
use crate::persistence::PersistenceDiagram;

/// Persistence landscape stored as exact breakpoints.
///
/// Level `k` (1-based in [`PersistenceLandscape::eval`]) is the piecewise
/// linear function through its `(t, value)` breakpoints and zero outside
/// them. Trailing identically-zero levels are not stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PersistenceLandscape {
    levels: Vec<Vec<(f64, f64)>>,
}

impl PersistenceLandscape {
    pub fn levels(&self) -> &[Vec<(f64, f64)>] {
        &self.levels
    }

    pub fn level(&self, k: usize) -> Option<&[(f64, f64)]> {
        k.checked_sub(1).and_then(|i| self.levels.get(i)).map(Vec::as_slice)
    }

    /// Value of `λ_k(t)` for `k >= 1`.
    pub fn eval(&self, k: usize, t: f64) -> f64 {
        self.level(k).map_or(0.0, |bp| eval_piecewise(bp, t))
    }

    /// One line per level, alternating `t` and value fields.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for level in &self.levels {
            let fields: Vec<String> = level
                .iter()
                .flat_map(|&(t, v)| [t.to_string(), v.to_string()])
                .collect();
            writeln!(out, "{}", fields.join(" ")).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut levels = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let nums = line
                .split_whitespace()
                .map(|s| s.parse::<f64>().map_err(|_| Error::parse(lineno + 1, "bad number")))
                .collect::<Result<Vec<_>>>()?;
            if nums.len() % 2 != 0 {
                return Err(Error::parse(lineno + 1, "odd number of fields"));
            }
            let level: Vec<(f64, f64)> = nums.chunks(2).map(|c| (c[0], c[1])).collect();
            if level.windows(2).any(|w| w[1].0 < w[0].0) {
                return Err(Error::parse(lineno + 1, "breakpoints out of order"));
            }
            levels.push(level);
        }
        Ok(PersistenceLandscape { levels })
    }
}

pub(crate) fn eval_piecewise(bp: &[(f64, f64)], t: f64) -> f64 {
    let (Some(first), Some(last)) = (bp.first(), bp.last()) else {
        return 0.0;
    };
    if t < first.0 || t > last.0 {
        return 0.0;
    }
    let i = bp.partition_point(|&(x, _)| x <= t);
    if i == bp.len() {
        return last.1;
    }
    let (t0, v0) = bp[i - 1];
    let (t1, v1) = bp[i];
    if t == t0 {
        return v0;
    }
    v0 + (t - t0) * (v1 - v0) / (t1 - t0)
}

fn tent(b: f64, d: f64, t: f64) -> f64 {
    (t - b).min(d - t).max(0.0)
}

/// Exact landscape of all points of `d` (every degree contributes).
///
/// `k_max = None` keeps every non-zero level.
pub fn landscape_from_diagram(d: &PersistenceDiagram, k_max: Option<usize>) -> Result<PersistenceLandscape> {
    if k_max == Some(0) {
        return Err(Error::invalid("k_max must be at least 1"));
    }
    let bars: Vec<(f64, f64)> = d.points().iter().map(|p| (p.birth, p.death)).collect();
    let levels_wanted = k_max.unwrap_or(bars.len()).min(bars.len());
    if levels_wanted == 0 {
        return Ok(PersistenceLandscape::default());
    }

    // Between consecutive critical times every tent is linear and no two
    // tents swap order, so each level is linear there too.
    let mut ts = Vec::with_capacity(bars.len() * bars.len() + 3 * bars.len());
    for &(b, d) in &bars {
        ts.extend([b, d, 0.5 * (b + d)]);
    }
    for &(bi, _) in &bars {
        for &(bj, dj) in &bars {
            if bi < dj && bj < dj {
                ts.push(0.5 * (bi + dj));
            }
        }
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup();

    let mut levels: Vec<Vec<(f64, f64)>> = vec![Vec::with_capacity(ts.len()); levels_wanted];
    let mut vals = Vec::with_capacity(bars.len());
    for &t in &ts {
        vals.clear();
        vals.extend(bars.iter().map(|&(b, d)| tent(b, d, t)));
        vals.sort_by(|a, b| b.total_cmp(a));
        for (k, level) in levels.iter_mut().enumerate() {
            level.push((t, vals[k]));
        }
    }
    let mut levels: Vec<Vec<(f64, f64)>> = levels.into_iter().map(simplify).collect();
    while levels.last().is_some_and(Vec::is_empty) {
        levels.pop();
    }
    Ok(PersistenceLandscape { levels })
}

/// Drops collinear interior breakpoints and redundant zero runs at the ends.
fn simplify(points: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let first = points.iter().position(|p| p.1 != 0.0);
    let last = points.iter().rposition(|p| p.1 != 0.0);
    let (Some(first), Some(last)) = (first, last) else {
        return Vec::new();
    };
    let lo = first.saturating_sub(1);
    let hi = (last + 1).min(points.len() - 1);
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(hi - lo + 1);
    for &p in &points[lo..=hi] {
        if out.len() >= 2 {
            let (t0, v0) = out[out.len() - 2];
            let (t1, v1) = out[out.len() - 1];
            let s1 = (v1 - v0) / (t1 - t0);
            let s2 = (p.1 - v1) / (p.0 - t1);
            if s1 == s2 {
                out.pop();
            }
        }
        out.push(p);
    }
    out
}

/// Right-continuous integer step function.
///
/// `values[i]` holds on `[breakpoints[i], breakpoints[i + 1])`; the last
/// value holds from the last breakpoint on, and the function is zero before
/// the first breakpoint.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StepCurve {
    breakpoints: Vec<f64>,
    values: Vec<i64>,
}

impl StepCurve {
    pub fn new(breakpoints: Vec<f64>, values: Vec<i64>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::invalid("step curve needs one value per breakpoint"));
        }
        if breakpoints.iter().any(|t| !t.is_finite()) || breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid(
                "step curve breakpoints must be finite and strictly increasing",
            ));
        }
        Ok(Self::normalized(breakpoints, values))
    }

    pub fn zero() -> Self {
        StepCurve::default()
    }

    fn normalized(breakpoints: Vec<f64>, values: Vec<i64>) -> Self {
        let mut bp = Vec::with_capacity(breakpoints.len());
        let mut vs: Vec<i64> = Vec::with_capacity(values.len());
        let mut prev = 0;
        for (t, v) in breakpoints.into_iter().zip(values) {
            if v != prev {
                bp.push(t);
                vs.push(v);
                prev = v;
            }
        }
        StepCurve {
            breakpoints: bp,
            values: vs,
        }
    }

    /// Builds a curve from `(time, increment)` events.
    fn from_events(mut events: Vec<(f64, i64)>) -> Self {
        events.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut bp = Vec::new();
        let mut vs = Vec::new();
        let mut acc = 0;
        for (t, inc) in events {
            acc += inc;
            if bp.last() == Some(&t) {
                *vs.last_mut().unwrap() = acc;
            } else {
                bp.push(t);
                vs.push(acc);
            }
        }
        Self::normalized(bp, vs)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn eval(&self, t: f64) -> i64 {
        match self.breakpoints.partition_point(|&b| b <= t) {
            0 => 0,
            i => self.values[i - 1],
        }
    }

    /// Value after the last breakpoint.
    pub fn tail(&self) -> i64 {
        self.values.last().copied().unwrap_or(0)
    }

    /// Same curve, forced to zero from `end` on.
    pub fn truncated(&self, end: f64) -> Self {
        let mut bp = Vec::new();
        let mut vs = Vec::new();
        for (&t, &v) in self.breakpoints.iter().zip(&self.values) {
            if t >= end {
                break;
            }
            bp.push(t);
            vs.push(v);
        }
        if !bp.is_empty() {
            bp.push(end);
            vs.push(0);
        }
        Self::normalized(bp, vs)
    }

    /// `Σ coeff_i · curve_i` on the union of breakpoints.
    pub fn linear_combination(terms: &[(i64, &StepCurve)]) -> Self {
        let mut events = Vec::new();
        for &(coeff, c) in terms {
            let mut prev = 0;
            for (&t, &v) in c.breakpoints.iter().zip(&c.values) {
                events.push((t, coeff * (v - prev)));
                prev = v;
            }
        }
        Self::from_events(events)
    }

    /// CSV `breakpoint,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("breakpoint,value\n");
        for (t, v) in self.breakpoints.iter().zip(&self.values) {
            writeln!(out, "{t},{v}").unwrap();
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut bp = Vec::new();
        let mut vs = Vec::new();
        for (lineno, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split(',').map(str::trim);
            let t = it
                .next()
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| Error::parse(lineno + 1, "bad breakpoint"))?;
            let v = it
                .next()
                .and_then(|s| s.parse::<i64>().ok())
                .ok_or_else(|| Error::parse(lineno + 1, "bad value"))?;
            bp.push(t);
            vs.push(v);
        }
        Self::new(bp, vs)
    }
}

/// Number of bars of `degree` alive at each filtration value.
pub fn betti_curve(d: &PersistenceDiagram, degree: usize) -> StepCurve {
    let events = d
        .points()
        .iter()
        .filter(|p| p.degree == degree)
        .flat_map(|p| [(p.birth, 1), (p.death, -1)])
        .collect();
    StepCurve::from_events(events)
}

/// Alternating sum of Betti curves; `curves[k]` is the degree-`k` curve.
pub fn euler_curve(curves: &[StepCurve]) -> StepCurve {
    let terms: Vec<(i64, &StepCurve)> = curves
        .iter()
        .enumerate()
        .map(|(k, c)| (if k % 2 == 0 { 1 } else { -1 }, c))
        .collect();
    StepCurve::linear_combination(&terms)
}

/// Number of `dim`-cells present at each filtration value.
pub fn simplex_count_curve(cx: &FilteredComplex, dim: usize) -> StepCurve {
    let events = cx
        .cells()
        .iter()
        .filter(|c| c.dim == dim)
        .map(|c| (c.value, 1))
        .collect();
    StepCurve::from_events(events)
}
