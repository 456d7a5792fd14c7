//! The counterexamples to negative type, and the spectral check.

use topocorr::experiment::run_negtype_suite;
use topocorr::metrics::wasserstein;
use topocorr::negtype::{fixture_small_p, negtype_check, NegTypeVerdict};

fn main() -> topocorr::Result<()> {
    print!("{}", run_negtype_suite()?.to_text());

    let f = fixture_small_p();
    let d = f.distance_matrix("w1", |a, b| wasserstein(a, b, 1.0))?;
    if let NegTypeVerdict::Violated { form, .. } = negtype_check(&d, 1e-9)? {
        println!("spectral witness on the W1 fixture: form {form:.4}");
    }
    Ok(())
}
