//! Random weighted graph → flag complex → persistence diagram.

use topocorr::complexes::build_flag_complex;
use topocorr::models::gen_er;
use topocorr::persistence::compute_persistence;

fn main() -> topocorr::Result<()> {
    let g = gen_er(12, 7)?;
    let cx = build_flag_complex(&g, 2)?;
    println!("cells by dimension: {:?}", cx.counts_by_dim());

    let d = compute_persistence(&cx, &[0, 1], None)?;
    println!("H0: {} points, H1: {} points", d.pairs(0).len(), d.pairs(1).len());
    for (b, dth) in d.pairs(1) {
        println!("  H1 [{b:.3}, {dth:.3})");
    }
    print!("{}", d.to_csv());
    Ok(())
}
