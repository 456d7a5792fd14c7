//! A small end-to-end experiment written to a temporary directory.

use topocorr::experiment::{run_experiment, RunConfig};

fn main() -> topocorr::Result<()> {
    let dir = tempfile::tempdir()?;
    let cfg = RunConfig::from_toml(&format!(
        r#"
seed = 1
repetitions = 12
degree = 1
metrics = ["wasserstein:p=1", "wasserstein:p=2", "bottleneck", "landscape:p=2", "betti:p=1"]
outputs = "{}"

[model]
kind = "er"
n = 12
"#,
        dir.path().display()
    ))?;
    let res = run_experiment(&cfg)?;
    print!("{}", res.dcor.expect("several metrics").to_csv());
    let mut files: Vec<_> = walk(dir.path());
    files.sort();
    println!("{} artifacts, e.g. {:?}", files.len(), &files[..3]);
    Ok(())
}

fn walk(dir: &std::path::Path) -> Vec<String> {
    std::fs::read_dir(dir)
        .unwrap()
        .flatten()
        .flat_map(|e| {
            if e.path().is_dir() {
                walk(&e.path())
            } else {
                vec![e.file_name().to_string_lossy().into_owned()]
            }
        })
        .collect()
}
