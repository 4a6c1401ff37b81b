//! Nearest-neighbour coupling delocalizes eigenstates long before the level
//! statistics turn Wigner; a longer range makes both happen together.

use spinchaos::ensemble::{run_sweep, CouplingUnits, Measure, MeasureSpec, SweepPlan};
use spinchaos::hamiltonian::{Model1d, ModelSpec};

fn main() -> spinchaos::Result<()> {
    let grid = vec![0.1, 0.3, 1.0, 3.0, 10.0];
    for (label, range) in [("nearest neighbour", 1), ("l_c = L/2", 5)] {
        let model = ModelSpec::OneD(Model1d {
            len: 10,
            range,
            ..Model1d::default()
        });
        let mut plan = SweepPlan::new(model, grid.clone(), CouplingUnits::JOverJc);
        plan.realizations = 5;
        plan.measures = [Measure::Gamma, Measure::Pn, Measure::Concurrence(1)]
            .into_iter()
            .map(MeasureSpec::new)
            .collect();
        let table = run_sweep(&plan)?;
        println!("{label}");
        println!("{:>8} {:>7} {:>8} {:>7}", "J/J_c", "γ", "PN", "C1");
        for &j in &grid {
            let v = |m: &str| table.get(m, j).unwrap().value;
            println!("{j:>8} {:>7.3} {:>8.2} {:>7.4}", v("gamma"), v("pn"), v("C1"));
        }
    }
    Ok(())
}
