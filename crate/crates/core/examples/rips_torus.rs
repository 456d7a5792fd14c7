//! Vietoris–Rips persistence of points sampled from the flat torus.

use topocorr::complexes::build_rips_complex;
use topocorr::models::sample_torus;
use topocorr::persistence::compute_persistence;

fn main() -> topocorr::Result<()> {
    let pts = sample_torus(40, 11);
    let cx = build_rips_complex(&pts, 2, f64::INFINITY)?;
    let d = compute_persistence(&cx, &[1], None)?;
    let mut bars = d.pairs(1);
    bars.sort_by(|a, b| (b.1 - b.0).total_cmp(&(a.1 - a.0)));
    // Two long H1 bars should stand out: the torus's two circles.
    for (b, dth) in bars.iter().take(4) {
        println!("H1 [{b:.3}, {dth:.3})  persistence {:.3}", dth - b);
    }
    Ok(())
}
