//! Directed flag complex: simplices are ordered cliques of a digraph.

use topocorr::complexes::{build_directed_flag_complex, DirectedWeightedGraph};
use topocorr::models::gen_directed_er;
use topocorr::persistence::compute_persistence;

fn main() -> topocorr::Result<()> {
    // A directed 3-cycle has no ordered 2-clique, so its loop never fills.
    let cycle = DirectedWeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)])?;
    let cx = build_directed_flag_complex(&cycle, 2)?;
    println!("3-cycle cells by dimension: {:?}", cx.counts_by_dim());

    let g = gen_directed_er(10, 3)?;
    let cx = build_directed_flag_complex(&g, 2)?;
    let d = compute_persistence(&cx, &[1], None)?;
    println!("directed ER: {} cells, {} H1 points", cx.len(), d.len());
    Ok(())
}
