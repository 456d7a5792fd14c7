//! Correlation of summary metrics with the random/geometric mixing weight.

use topocorr::experiment::{run_parameter_correlation, RunConfig};

fn main() -> topocorr::Result<()> {
    let cfg = RunConfig::from_toml(
        r#"
seed = 2
degree = 1
metrics = ["wasserstein:p=1", "betti:p=1", "landscape:p=1", "swk:sigma=0.01"]
outputs = ""

[model]
kind = "interpolated"
n = 15

[sweep]
count = 30
"#,
    )?;
    for row in run_parameter_correlation(&cfg)? {
        println!("{:<26} dCor = {:.3}", row.metric, row.report.dCor);
    }
    Ok(())
}
