//! Distribution of the unclipped concurrence `c_λ` over nearest-neighbour pairs.
//!
//! Product-like eigenstates give `c_λ ≈ 0`; chaotic ones give mixed two-qubit
//! reductions and push `c_λ` towards −1/2.

use spinchaos::ensemble::{run_sweep, CouplingUnits, Measure, MeasureSpec, SweepPlan};
use spinchaos::hamiltonian::{Model1d, ModelSpec};

fn main() -> spinchaos::Result<()> {
    let grid = vec![0.01, 1.0, 100.0];
    let model = ModelSpec::OneD(Model1d {
        len: 8,
        range: 7,
        ..Model1d::default()
    });
    let mut plan = SweepPlan::new(model, grid.clone(), CouplingUnits::JOverJc);
    plan.realizations = 5;
    plan.measures = vec![MeasureSpec::new(Measure::Clambda)];
    let table = run_sweep(&plan)?;

    for j in grid {
        let mean = table.get("clambda", j).unwrap().value;
        println!("J/J_c = {j}: <c_λ> = {mean:.3}");
        let h = table.histogram("clambda", j).unwrap();
        for b in h.histogram.bins.iter().filter(|b| b.density > 0.05) {
            println!("  {:6.2} {}", b.left, "#".repeat((b.density * 4.0).ceil() as usize));
        }
    }
    Ok(())
}
