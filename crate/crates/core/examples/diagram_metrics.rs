//! Every diagram metric on one pair of diagrams, and by spec string.

use topocorr::metrics::{
    bottleneck, pss_distance, sliced_wasserstein, sw_kernel_distance, wasserstein, MetricSpec, Summary,
};
use topocorr::persistence::PersistenceDiagram;

fn main() -> topocorr::Result<()> {
    let a = PersistenceDiagram::from_pairs(&[(0.0, 2.0), (1.0, 1.5)])?;
    let b = PersistenceDiagram::from_pairs(&[(0.0, 2.5)])?;
    println!("W1         = {}", wasserstein(&a, &b, 1.0)?);
    println!("W2         = {}", wasserstein(&a, &b, 2.0)?);
    println!("bottleneck = {}", bottleneck(&a, &b));
    println!("PSS σ=0.1  = {}", pss_distance(&a, &b, 0.1)?);
    println!("SW (10)    = {}", sliced_wasserstein(&a, &b, 10)?);
    println!("SW kernel  = {}", sw_kernel_distance(&a, &b, 1.0, 10)?);

    let (sa, sb) = (Summary::Diagram(a), Summary::Diagram(b));
    for spec in ["wasserstein:p=inf", "pss:sigma=0.01", "swk:sigma=0.5,lines=50"] {
        let m: MetricSpec = spec.parse()?;
        println!("{m:<22} {}", m.distance(&sa, &sb)?);
    }
    Ok(())
}
