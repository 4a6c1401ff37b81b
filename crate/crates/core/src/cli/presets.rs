//! Built-in experiments, one per figure of the study.
//!
//! Desk-scale presets use few realizations so that each finishes in minutes
//! on one core; `full` restores the realization counts of the original runs.

use std::collections::BTreeMap;

use super::{
    EnsembleBlock, ExperimentConfig, LogGrid, MeasuresBlock, ModelBlock, OneOrMany, OutputBlock,
    RangeSpec, SweepBlock,
};
use crate::ensemble::{CouplingUnits, Measure, Scope};
use crate::error::{Error, Result};
use crate::spectral::{BandRule, Unfolding};

pub const PRESET_NAMES: [&str; 14] = [
    "fig-2d-gamma",
    "fig-2d-pn",
    "fig-2d-c12",
    "fig-2d-cmap",
    "fig-1d-pds",
    "fig-1d-pn",
    "fig-c-distance",
    "fig-c-range",
    "fig-c-size",
    "fig-clambda",
    "fig-s1",
    "fig-sn",
    "fig-shalf",
    "fig-weakchaos",
];

fn lattice() -> ModelBlock {
    ModelBlock::TwoD {
        lx: 3,
        ly: 3,
        mean_splitting: 1.0,
        splitting_spread: 0.09,
    }
}

fn chain(lens: &[usize], ranges: &[RangeSpec]) -> ModelBlock {
    let len = match lens {
        [l] => OneOrMany::One(*l),
        _ => OneOrMany::Many(lens.to_vec()),
    };
    let range = match ranges {
        [r] => OneOrMany::One(*r),
        _ => OneOrMany::Many(ranges.to_vec()),
    };
    ModelBlock::OneD {
        len,
        gradient: 1.0,
        rabi: 100.0,
        range,
    }
}

fn log(units: CouplingUnits, from: f64, to: f64, points: usize) -> SweepBlock {
    SweepBlock {
        units,
        values: None,
        log: Some(LogGrid { from, to, points }),
    }
}

fn values(units: CouplingUnits, v: &[f64]) -> SweepBlock {
    SweepBlock {
        units,
        values: Some(v.to_vec()),
        log: None,
    }
}

fn measures(names: &[&str], scope: &[(&str, Scope)]) -> MeasuresBlock {
    MeasuresBlock {
        names: names.iter().map(|n| n.parse::<Measure>().expect("preset measure")).collect(),
        scope: scope.iter().map(|(k, s)| (k.to_string(), *s)).collect::<BTreeMap<_, _>>(),
        bands: Vec::new(),
        band_rule: BandRule::Count,
        unfolding: Unfolding::default(),
        spacing_bin: 0.1,
    }
}

/// The named preset at desk scale, or at full scale when `full` is set.
pub fn preset(name: &str, full: bool) -> Result<ExperimentConfig> {
    use CouplingUnits::{JOverJc, JlOverDelta};
    use RangeSpec::{Aa, Fixed, Half, Nn};
    let central = Scope::Central;
    let r = |desk: usize, caption: usize| if full { caption } else { desk };
    let aa_grid = [0.01, 0.03, 0.1, 0.35, 1.0, 3.0, 10.0, 15.0, 30.0, 100.0, 300.0, 1000.0];

    let (model, sweep, mut meas, realizations) = match name {
        "fig-2d-gamma" => (lattice(), log(JlOverDelta, 0.1, 30.0, 13), measures(&["gamma"], &[]), r(200, 2000)),
        "fig-2d-pn" => (
            lattice(),
            log(JlOverDelta, 0.1, 30.0, 13),
            measures(&["pn"], &[("pn", central)]),
            r(200, 2000),
        ),
        "fig-2d-c12" => (
            lattice(),
            log(JlOverDelta, 0.05, 50.0, 13),
            measures(&["C1", "C2"], &[("C1", central), ("C2", central)]),
            r(200, 2000),
        ),
        "fig-2d-cmap" => {
            let mut m = measures(&["cmap", "C1"], &[("C1", Scope::CentralThird)]);
            m.bands = vec![0, 1, 2, 3, 4];
            (lattice(), log(JlOverDelta, 0.05, 50.0, 13), m, r(20, 200))
        }
        "fig-1d-pds" => (
            chain(&[12], &[Aa]),
            values(JOverJc, &[0.35, 15.0]),
            measures(&["gamma"], &[]),
            r(3, 10),
        ),
        "fig-1d-pn" => (chain(&[12], &[Aa]), values(JOverJc, &aa_grid), measures(&["pn"], &[]), r(2, 10)),
        "fig-c-distance" => (
            chain(&[10], &[Fixed(5)]),
            log(JOverJc, 0.01, 100.0, 9),
            measures(&["C1", "C2", "C3", "C4", "C5"], &[]),
            r(10, 30),
        ),
        "fig-c-range" => (
            chain(&[10], &[Nn, Fixed(2), Fixed(3)]),
            log(JOverJc, 0.01, 100.0, 9),
            measures(&["C3"], &[]),
            r(10, 30),
        ),
        "fig-c-size" => (
            chain(&[6, 8, 10, 12], &[Aa]),
            log(JOverJc, 0.01, 100.0, 9),
            measures(&["Ca"], &[]),
            r(3, 30),
        ),
        "fig-clambda" => (
            chain(&[12], &[Aa]),
            values(JOverJc, &[0.01, 0.1, 0.35, 1.0, 3.0, 15.0, 100.0]),
            measures(&["clambda"], &[]),
            r(2, 10),
        ),
        "fig-s1" => (
            chain(&[6, 8, 10, 12], &[Aa]),
            log(JOverJc, 0.01, 1000.0, 11),
            measures(&["S1"], &[]),
            r(3, 30),
        ),
        "fig-sn" => (
            chain(&[12], &[Aa]),
            values(JOverJc, &aa_grid),
            measures(&["Sn1", "Sn2", "Sn3", "Sn4", "Sn5"], &[]),
            r(2, 10),
        ),
        "fig-shalf" => (
            chain(&[6, 8, 10, 12], &[Aa]),
            values(JOverJc, &aa_grid),
            measures(&["Shalf"], &[]),
            r(2, 10),
        ),
        "fig-weakchaos" => (
            chain(&[10], &[Nn, Half]),
            log(JOverJc, 0.1, 10.0, 9),
            measures(&["gamma", "C1", "pn"], &[]),
            r(10, 30),
        ),
        other => {
            return Err(Error::arg(format!(
                "unknown preset '{other}'; available: {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    meas.spacing_bin = 0.1;
    Ok(ExperimentConfig {
        model,
        sweep,
        ensemble: EnsembleBlock {
            realizations: Some(realizations),
            base_seed: 0,
            workers: None,
        },
        measures: meas,
        output: OutputBlock {
            directory: format!("results/{name}"),
            ..OutputBlock::default()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::ModelSpec;

    #[test]
    fn every_preset_validates() {
        for name in PRESET_NAMES {
            for full in [false, true] {
                let c = preset(name, full).unwrap();
                c.validate(None).unwrap_or_else(|e| panic!("{name}: {e}"));
                let text = c.to_toml().unwrap();
                super::super::parse_config(&text).unwrap();
            }
        }
        assert!(preset("fig-99", false).is_err());
    }

    #[test]
    fn distance_preset() {
        let c = preset("fig-c-distance", true).unwrap();
        let plans = c.plans();
        assert_eq!(plans.len(), 1);
        let p = &plans[0];
        assert!(matches!(p.model, ModelSpec::OneD(m) if m.len == 10 && m.range == 5));
        let names: Vec<String> = p.measures.iter().map(|m| m.measure.to_string()).collect();
        assert_eq!(names, ["C1", "C2", "C3", "C4", "C5"]);
        assert_eq!(p.realizations, 30);
    }

    #[test]
    fn half_chain_preset() {
        let c = preset("fig-shalf", true).unwrap();
        let plans = c.plans();
        let shapes: Vec<_> = plans.iter().map(|p| (p.model.n_qubits(), p.model.range())).collect();
        assert_eq!(shapes, [(6, Some(5)), (8, Some(7)), (10, Some(9)), (12, Some(11))]);
        assert!(plans.iter().all(|p| p.realizations == 10));
        assert_eq!(plans[0].measures[0].measure, Measure::HalfEntropy);
    }

    #[test]
    fn weak_chaos_preset() {
        let c = preset("fig-weakchaos", true).unwrap();
        let plans = c.plans();
        let ranges: Vec<_> = plans.iter().map(|p| p.model.range().unwrap()).collect();
        assert_eq!(ranges, [1, 5]);
        assert!(plans.iter().all(|p| p.model.n_qubits() == 10 && p.realizations == 30));
        let names: Vec<String> = plans[0].measures.iter().map(|m| m.measure.to_string()).collect();
        assert_eq!(names, ["gamma", "C1", "pn"]);
    }

    #[test]
    fn spectral_preset_matches_caption() {
        let c = preset("fig-1d-pds", true).unwrap();
        let p = &c.plans()[0];
        assert_eq!(p.couplings, [0.35, 15.0]);
        assert_eq!(p.realizations, 10);
        assert!(matches!(p.model, ModelSpec::OneD(m) if m.len == 12 && m.range == 11));
    }
}
