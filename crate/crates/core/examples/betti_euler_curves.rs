//! Betti, Euler and simplex-count curves as exact step functions.

use topocorr::complexes::{build_flag_complex, WeightedGraph};
use topocorr::metrics::curve_distance;
use topocorr::persistence::compute_persistence;
use topocorr::summaries::{betti_curve, euler_curve, simplex_count_curve};

fn main() -> topocorr::Result<()> {
    // Square edges at 1, diagonals at 2: a loop lives on [1, 2).
    let g = WeightedGraph::from_fn(4, |i, j| if j - i == 2 { 2.0 } else { 1.0 })?;
    let cx = build_flag_complex(&g, 2)?;
    let d = compute_persistence(&cx, &[0, 1, 2], None)?;
    let curves: Vec<_> = (0..=2).map(|k| betti_curve(&d, k)).collect();
    let chi = euler_curve(&curves);
    let edges = simplex_count_curve(&cx, 1);
    for t in [0.0, 1.0, 1.5, 2.0] {
        println!(
            "t={t}: β0={} β1={} χ={} edges={}",
            curves[0].eval(t),
            curves[1].eval(t),
            chi.eval(t),
            edges.eval(t)
        );
    }
    println!("L1(β0, β1) = {}", curve_distance(&curves[0], &curves[1], 1.0)?);
    print!("{}", curves[1].to_csv());
    Ok(())
}
