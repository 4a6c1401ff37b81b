//! Delocalization of the central band of the all-to-all chain.
//!
//! The participation number grows from 1 to the in-band plateau `N_b/3` and
//! rises again once neighbouring bands mix.

use spinchaos::ensemble::{run_sweep, CouplingUnits, Measure, MeasureSpec, SweepPlan};
use spinchaos::hamiltonian::{Model1d, ModelSpec};
use spinchaos::basis::binomial;

fn main() -> spinchaos::Result<()> {
    let len = 10;
    let model = Model1d {
        len,
        range: len - 1,
        ..Model1d::default()
    };
    let grid = vec![0.01, 0.1, 0.35, 1.0, 3.0, 15.0, 100.0, 1000.0];
    let mut plan = SweepPlan::new(ModelSpec::OneD(model), grid.clone(), CouplingUnits::JOverJc);
    plan.realizations = 3;
    plan.measures = vec![MeasureSpec::new(Measure::Pn), MeasureSpec::new(Measure::Gamma)];
    let table = run_sweep(&plan)?;

    println!("L = {len}, N_b/3 = {:.1}", binomial(len, len / 2) as f64 / 3.0);
    println!("{:>8} {:>10} {:>8}", "J/J_c", "PN", "γ");
    for j in grid {
        let pn = table.get("pn", j).unwrap();
        let g = table.get("gamma", j).unwrap();
        println!("{j:>8} {:>10.2} {:>8.3}", pn.value, g.value);
    }
    Ok(())
}
