use std::fs;
use std::process::Command;

use spinchaos::cli::{emit, parse_config, preset, run_experiment, RunMetadata, PRESET_NAMES};
use spinchaos::ensemble::ResultTable;
use spinchaos::Error;

const SMALL: &str = r#"
[model]
kind = "1d"
L = 6
range = "half"

[sweep]
units = "J_over_Jc"
values = [0.1, 1.0, 10.0]

[ensemble]
realizations = 2
base_seed = 17

[measures]
names = ["gamma", "pn", "C1", "S1"]
"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spinchaos"))
}

#[test]
fn one_row_per_measure_and_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let config = parse_config(SMALL).unwrap();
    let (table, _) = run_experiment(&config, dir.path(), None).unwrap();
    assert_eq!(table.records.len(), 4 * 3);
    let mut reader = csv::Reader::from_path(dir.path().join("results.csv")).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["measure", "J", "J_units", "value", "stderr", "n_samples", "L", "model", "l_c", "seed"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 12);
    for (row, rec) in rows.iter().zip(&table.records) {
        assert_eq!(row[3].parse::<f64>().unwrap(), rec.value, "values keep full precision");
        assert_eq!(&row[2], "J_over_Jc");
        assert_eq!(&row[8], "3");
        assert_eq!(&row[9], "17");
    }
}

#[test]
fn sidecar_allows_exact_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let config = parse_config(SMALL).unwrap();
    let (first, _) = run_experiment(&config, dir.path().join("a"), None).unwrap();
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("a/metadata.json")).unwrap()).unwrap();
    assert_eq!(meta["base_seed"], 17);
    assert_eq!(meta["grid"], serde_json::json!([0.1, 1.0, 10.0]));
    assert!(meta["timestamp_unix"].as_u64().is_some());

    let rebuilt: spinchaos::cli::ExperimentConfig = serde_json::from_value(meta["config"].clone()).unwrap();
    assert_eq!(rebuilt, config);
    let (second, _) = run_experiment(&rebuilt, dir.path().join("b"), None).unwrap();
    assert_eq!(first.records, second.records);
    assert_eq!(
        fs::read(dir.path().join("a/results.csv")).unwrap(),
        fs::read(dir.path().join("b/results.csv")).unwrap()
    );
}

#[test]
fn emit_is_idempotent_apart_from_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = preset("fig-2d-cmap", false).unwrap();
    config.ensemble.realizations = Some(2);
    config.sweep.log = None;
    config.sweep.values = Some(vec![0.5, 5.0]);
    config.measures.names.push("gamma".parse().unwrap());
    let err = config.validate(None).unwrap_err().to_string();
    assert!(err.contains("band n_up = 0 has 1"), "{err}");
    config.measures.bands = vec![3, 4];
    let table = spinchaos::ensemble::run_sweep(&config.plans()[0]).unwrap();
    let meta = RunMetadata::new(&config, 1.5, &table.failures);
    let a = emit(&table, &meta, dir.path().join("a")).unwrap();
    let b = emit(&table, &meta, dir.path().join("b")).unwrap();
    let names = |paths: &[std::path::PathBuf]| -> Vec<String> {
        paths.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect()
    };
    assert_eq!(
        names(&a),
        ["results.csv", "results.json", "spacing_histogram.csv", "map.csv", "metadata.json"]
    );
    for (pa, pb) in a.iter().zip(&b) {
        let (ta, tb) = (fs::read_to_string(pa).unwrap(), fs::read_to_string(pb).unwrap());
        let strip = |t: &str| t.lines().filter(|l| !l.contains("timestamp_unix")).collect::<Vec<_>>().join("\n");
        assert_eq!(strip(&ta), strip(&tb), "{}", pa.display());
    }

    let map = fs::read_to_string(dir.path().join("a/map.csv")).unwrap();
    assert!(map.starts_with("state_index,J,value\n"));
    assert_eq!(map.lines().count(), 1 + 512 * 2);
    let hist = fs::read_to_string(dir.path().join("a/spacing_histogram.csv")).unwrap();
    assert!(hist.starts_with("J,L,l_c,n_up,s_bin_left,s_bin_right,density\n"));
}

#[test]
fn empty_results_are_refused_with_usage() {
    let dir = tempfile::tempdir().unwrap();
    let config = parse_config(SMALL).unwrap();
    let meta = RunMetadata::new(&config, 0.0, &[]);
    let err = emit(&ResultTable::default(), &meta, dir.path()).unwrap_err();
    assert!(matches!(err, Error::Argument(ref m) if m.contains("names")), "{err}");

    let empty = SMALL.replace(r#"names = ["gamma", "pn", "C1", "S1"]"#, "names = []");
    let err = parse_config(&empty).unwrap_err().to_string();
    assert!(err.contains("no measures selected"), "{err}");
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let config = parse_config(SMALL).unwrap();
    let err = run_experiment(&config, blocker.join("out"), None).unwrap_err();
    assert!(matches!(err, Error::Io { .. }), "{err}");
}

#[test]
fn caption_presets() {
    for name in PRESET_NAMES {
        assert!(preset(name, true).unwrap().realizations() >= preset(name, false).unwrap().realizations());
    }
    let gamma = preset("fig-2d-gamma", true).unwrap();
    assert_eq!(gamma.realizations(), 2000);
    assert_eq!(preset("fig-2d-gamma", false).unwrap().realizations(), 200);
}

#[test]
fn binary_validate_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.toml");
    fs::write(&good, SMALL).unwrap();
    let out = bin().arg("validate").arg(&good).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok: 1 sweep(s)"));

    let bad = dir.path().join("bad.toml");
    fs::write(&bad, SMALL.replace("range = \"half\"", "range = 6")).unwrap();
    let out = bin().arg("validate").arg(&bad).output().unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 5") && err.contains("l_c = 6"), "{err}");

    let out = bin().args(["preset", "fig-00"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("fig-weakchaos"));

    let out = bin().arg("validate").arg(dir.path().join("missing.toml")).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn binary_run_and_preset() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, SMALL).unwrap();
    let out = bin()
        .arg("run")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("run"))
        .args(["--seed", "3"])
        .arg("--dump-eigenvalues")
        .arg(dir.path().join("eigs"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("run/results.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",3")));
    assert_eq!(fs::read_dir(dir.path().join("eigs")).unwrap().count(), 3 * 2);

    let out = bin().args(["preset", "fig-c-distance", "--print", "--full"]).output().unwrap();
    assert!(out.status.success());
    let printed = String::from_utf8_lossy(&out.stdout);
    let parsed = parse_config(&printed).unwrap();
    assert_eq!(parsed, preset("fig-c-distance", true).unwrap());

    let out = bin().args(["preset", "--list"]).output().unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), PRESET_NAMES.len());
}
