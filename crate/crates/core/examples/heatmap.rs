//! SVG heatmap of a dCor matrix; negative entries get a sentinel colour.

use topocorr::experiment::{render_heatmap, NEGATIVE_COLOR};

fn main() -> topocorr::Result<()> {
    let labels = vec!["W1".to_string(), "W2".to_string(), "bottleneck".to_string()];
    let values = [1.0, 0.97, 0.62, 0.97, 1.0, 0.7, 0.62, 0.7, 1.0];
    let mut negative = [false; 9];
    negative[2] = true;
    negative[6] = true;
    let svg = render_heatmap(&values, &labels, &negative)?;
    println!(
        "{} bytes, sentinel {NEGATIVE_COLOR} used: {}",
        svg.len(),
        svg.contains(NEGATIVE_COLOR)
    );
    Ok(())
}
