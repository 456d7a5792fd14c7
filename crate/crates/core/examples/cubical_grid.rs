//! Sublevel-set persistence of an image through the cubical T-construction.

use topocorr::complexes::{build_cubical_complex, HeightGrid};
use topocorr::persistence::compute_persistence;

fn main() -> topocorr::Result<()> {
    // Two basins separated by a ridge of height 5, inside a rim of 9.
    let grid = HeightGrid::from_rows(&[
        vec![9.0, 9.0, 9.0, 9.0, 9.0],
        vec![9.0, 1.0, 5.0, 2.0, 9.0],
        vec![9.0, 9.0, 9.0, 9.0, 9.0],
    ])?;
    let cx = build_cubical_complex(&grid)?;
    let d = compute_persistence(&cx, &[0, 1], None)?;
    for p in d.points() {
        println!("H{} [{}, {})", p.degree, p.birth, p.death);
    }
    Ok(())
}
