//! Two-qubit measures on textbook states: Bell, Werner and random pure states.

use faer::c64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spinchaos::entanglement::{
    c_lambda, concurrence, entanglement_of_formation, haar_random_state, negativity, partial_trace,
    von_neumann_entropy, DensityMatrix,
};

fn werner(p: f64) -> spinchaos::Result<DensityMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let bell = [c64::new(0.0, 0.0), c64::new(s, 0.0), c64::new(-s, 0.0), c64::new(0.0, 0.0)];
    let pure = DensityMatrix::pure(&bell)?;
    let data = faer::Mat::from_fn(4, 4, |i, j| {
        let mixed = if i == j { c64::new(0.25, 0.0) } else { c64::new(0.0, 0.0) };
        pure.get(i, j) * p + mixed * (1.0 - p)
    });
    DensityMatrix::new(data)
}

fn main() -> spinchaos::Result<()> {
    println!("{:>5} {:>8} {:>8} {:>8} {:>8}", "p", "C", "c_λ", "E_F", "N");
    for k in 0..=5 {
        let p = k as f64 / 5.0;
        let rho = werner(p)?;
        println!(
            "{p:>5.1} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            concurrence(&rho)?,
            c_lambda(&rho)?,
            entanglement_of_formation(&rho)?,
            negativity(&rho)?
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = 8;
    let psi = haar_random_state(n, &mut rng);
    let one = partial_trace(&psi, n, &[0])?;
    let pair = partial_trace(&psi, n, &[0, 1])?;
    println!("\nrandom {n}-qubit state: S1 = {:.4}, C(0,1) = {:.4}, c_λ(0,1) = {:.4}",
        von_neumann_entropy(&one)?, concurrence(&pair)?, c_lambda(&pair)?);
    Ok(())
}
