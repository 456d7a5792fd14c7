//! Exact persistence landscapes and their L^p distances.

use topocorr::metrics::landscape_distance;
use topocorr::persistence::PersistenceDiagram;
use topocorr::summaries::landscape_from_diagram;

fn main() -> topocorr::Result<()> {
    let a = PersistenceDiagram::from_pairs(&[(0.0, 4.0), (1.0, 3.0)])?;
    let b = PersistenceDiagram::from_pairs(&[(0.0, 2.0), (2.0, 4.0)])?;
    let la = landscape_from_diagram(&a, None)?;
    let lb = landscape_from_diagram(&b, None)?;
    for (k, level) in la.levels().iter().enumerate() {
        println!("λ{} breakpoints {:?}", k + 1, level);
    }
    println!("λ1(1.5) = {}", la.eval(1, 1.5));
    for p in [1.0, 2.0, f64::INFINITY] {
        println!("L^{p} distance = {}", landscape_distance(&la, &lb, p)?);
    }
    Ok(())
}
