//! Integrable-to-chaotic crossover of the 3×3 random-Ising torus.
//!
//! Sweeps `JL/δ` and prints the spacing parameter `γ` (1 Poisson, 0 Wigner)
//! together with the central-state participation number of the band at `−Δ₀`.
//!
//! ```text
//! cargo run --release --example lattice_level_statistics [realizations]
//! ```

use spinchaos::ensemble::{run_sweep, CouplingUnits, Measure, MeasureSpec, Scope, SweepPlan};
use spinchaos::hamiltonian::{Model2d, ModelSpec};

fn main() -> spinchaos::Result<()> {
    let realizations = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(40);
    let grid = vec![0.1, 0.3, 1.0, 2.0, 5.0, 10.0, 30.0];
    let mut plan = SweepPlan::new(ModelSpec::TwoD(Model2d::default()), grid.clone(), CouplingUnits::JlOverDelta);
    plan.realizations = realizations;
    plan.measures = vec![
        MeasureSpec::new(Measure::Gamma),
        MeasureSpec::scoped(Measure::Pn, Scope::Central),
    ];
    let table = run_sweep(&plan)?;

    println!("{:>8} {:>8} {:>10}", "JL/δ", "γ", "PN");
    for j in grid {
        let g = table.get("gamma", j).map_or(f64::NAN, |r| r.value);
        let pn = table.get("pn", j).map_or(f64::NAN, |r| r.value);
        println!("{j:>8} {g:>8.3} {pn:>10.2}");
    }
    println!("random-vector limit N_b/3 = {:.1}", 126.0 / 3.0);

    if let Some(h) = table.histogram("spacing", 10.0) {
        println!("\nP(s) at JL/δ = 10");
        for b in h.histogram.bins.iter().take(25) {
            println!("{:5.2} {:6.3} {}", b.left, b.density, "#".repeat((b.density * 40.0) as usize));
        }
    }
    Ok(())
}
