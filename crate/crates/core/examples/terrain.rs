//! Synthetic terrain → chunks → cubical persistence, against ruggedness.

use topocorr::dem::{chunk_grid, synth_graded_terrain, tri, ChunkSpec};
use topocorr::experiment::{run_dem, DemConfig, RunConfig};

fn main() -> topocorr::Result<()> {
    let grid = synth_graded_terrain(33, 0.3, 0.9, 4)?;
    let chunks = chunk_grid(&grid, &ChunkSpec::new(16, 8, None)?)?;
    for c in &chunks {
        println!(
            "chunk ({}, {}) centre {:?} TRI {:.4}",
            c.row,
            c.col,
            c.center,
            tri(&c.grid)?
        );
    }

    let cfg = RunConfig {
        metrics: vec!["wasserstein:p=2".into(), "landscape:p=2".into()],
        outputs: Default::default(),
        dem: Some(DemConfig::default()),
        ..RunConfig::default()
    };
    let res = run_dem(&cfg)?;
    println!("{} chunks", res.tri.len());
    print!("{}", res.dcor.to_csv());
    Ok(())
}
