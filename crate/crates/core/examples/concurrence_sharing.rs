//! Pairwise entanglement is shared: it drops with qubit distance, with the
//! interaction range and with system size.

use spinchaos::ensemble::{run_sweep, CouplingUnits, Measure, MeasureSpec, SweepPlan};
use spinchaos::hamiltonian::{Model1d, ModelSpec};

fn chain(len: usize, range: usize) -> ModelSpec {
    ModelSpec::OneD(Model1d {
        len,
        range,
        ..Model1d::default()
    })
}

fn main() -> spinchaos::Result<()> {
    let grid = vec![0.1, 0.3, 1.0, 3.0, 10.0];

    println!("C_n versus distance, L = 10, l_c = 5");
    let mut plan = SweepPlan::new(chain(10, 5), grid.clone(), CouplingUnits::JOverJc);
    plan.realizations = 4;
    plan.measures = (1..=5).map(|n| MeasureSpec::new(Measure::Concurrence(n))).collect();
    let table = run_sweep(&plan)?;
    print!("{:>8}", "J/J_c");
    for n in 1..=5 {
        print!("{:>9}", format!("C{n}"));
    }
    println!();
    for &j in &grid {
        print!("{j:>8}");
        for n in 1..=5 {
            print!("{:>9.4}", table.get(&format!("C{n}"), j).unwrap().value);
        }
        println!();
    }

    println!("\nC_a versus size, all-to-all chain");
    for len in [6, 8, 10] {
        let mut plan = SweepPlan::new(chain(len, len - 1), grid.clone(), CouplingUnits::JOverJc);
        plan.realizations = 4;
        plan.measures = vec![MeasureSpec::new(Measure::ConcurrenceAll)];
        let series = run_sweep(&plan)?.series("Ca");
        let row: Vec<String> = series.iter().map(|(_, v)| format!("{v:.4}")).collect();
        println!("L = {len:>2}: {}", row.join("  "));
    }
    Ok(())
}
