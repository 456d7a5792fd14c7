//! Distance correlation between metric structures, with a permutation test.

use topocorr::dcor::{dcor_matrix, permutation_test, sample_dcor};
use topocorr::metrics::DistanceMatrix;
use topocorr::rng::{rng, uniform};

fn main() -> topocorr::Result<()> {
    let line = DistanceMatrix::from_values("x", &[0.0, 1.0, 2.0])?;
    println!("{}", sample_dcor(&line, &line)?.to_text());

    let mut r = rng(1);
    let xs: Vec<f64> = (0..200).map(|_| uniform(&mut r)).collect();
    let dependent: Vec<f64> = xs.iter().map(|x| (x - 0.5).powi(2)).collect();
    let noise: Vec<f64> = (0..200).map(|_| uniform(&mut r)).collect();
    let dx = DistanceMatrix::from_values("x", &xs)?;
    let dd = DistanceMatrix::from_values("(x-1/2)^2", &dependent)?;
    let dn = DistanceMatrix::from_values("noise", &noise)?;

    println!("p(x, (x-1/2)^2) = {}", permutation_test(&dx, &dd, 199, 5)?);
    println!("p(x, noise)     = {}", permutation_test(&dx, &dn, 199, 5)?);
    print!("{}", dcor_matrix(&[dx, dd, dn])?.to_csv());
    Ok(())
}
