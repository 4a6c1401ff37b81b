//! Entanglement entropies of chaotic eigenstates: single-qubit saturation,
//! block entropy versus block size, and half-chain entropy versus length.

use spinchaos::ensemble::{run_sweep, CouplingUnits, Measure, MeasureSpec, SweepPlan};
use spinchaos::hamiltonian::{Model1d, ModelSpec};
use spinchaos::stats::linear_fit;

fn main() -> spinchaos::Result<()> {
    let j = 15.0;
    let (mut lens, mut halves) = (Vec::new(), Vec::new());
    for len in [6, 8, 10] {
        let model = ModelSpec::OneD(Model1d {
            len,
            range: len - 1,
            ..Model1d::default()
        });
        let mut plan = SweepPlan::new(model, vec![j], CouplingUnits::JOverJc);
        plan.realizations = 3;
        plan.measures = std::iter::once(Measure::SingleEntropy)
            .chain((1..=len / 2).map(Measure::BlockEntropy))
            .chain(std::iter::once(Measure::HalfEntropy))
            .map(MeasureSpec::new)
            .collect();
        let table = run_sweep(&plan)?;
        let s1 = table.get("S1", j).unwrap().value;
        let sn: Vec<f64> = (1..=len / 2).map(|n| table.get(&format!("Sn{n}"), j).unwrap().value).collect();
        let half = table.get("Shalf", j).unwrap().value;
        let n: Vec<f64> = (1..=sn.len()).map(|n| n as f64).collect();
        let (slope, _) = linear_fit(&n, &sn);
        println!("L = {len:>2}: S1 = {s1:.4}  S_n slope = {slope:.3}  S_L/2 = {half:.3}");
        lens.push(len as f64);
        halves.push(half);
    }
    let (slope, _) = linear_fit(&lens, &halves);
    println!("S_L/2 grows by {slope:.3} bits per added qubit");
    Ok(())
}
