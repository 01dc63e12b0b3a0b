use std::path::Path;
use std::process::{Command, Output};

use riscomp::experiments::CsvTable;

fn riscomp(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_riscomp"))
        .args(args)
        .env("RISCOMP_OUT", out)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn validate_echoes_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let o = riscomp(&["validate"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for needle in [
        "cooperative BSs J       4",
        "RIS elements K          70",
        "-104.00 dBm",
        "ici=4",
    ] {
        assert!(text.contains(needle), "missing `{needle}` in\n{text}");
    }
}

#[test]
fn config_errors_exit_2_and_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "zeta = 0.3\n").unwrap();
    let o = riscomp(&["validate", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("zeta"));

    std::fs::write(&cfg, "[distances]\nbs_edge = -1\n").unwrap();
    let o = riscomp(
        &["sweep-j", "--config", cfg.to_str().unwrap(), "--trials", "5"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("distances.bs_edge"));

    std::fs::write(&cfg, "no_such_key = 1\n").unwrap();
    let o = riscomp(&["validate", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let bogus = dir.path().join("nope.csv");
    let o = riscomp(&["replot", bogus.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sweep_is_byte_identical_across_runs_and_workers() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let o = riscomp(
        &[
            "sweep-j",
            "--trials",
            "300",
            "--seed",
            "7",
            "--no-plot",
            "--workers",
            "1",
        ],
        a.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let o = riscomp(
        &[
            "sweep-j",
            "--trials",
            "300",
            "--seed",
            "7",
            "--no-plot",
            "--workers",
            "3",
        ],
        b.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let csv_a = std::fs::read(a.path().join("sweep-j.csv")).unwrap();
    assert_eq!(csv_a, std::fs::read(b.path().join("sweep-j.csv")).unwrap());
    assert!(!a.path().join("sweep-j.svg").exists());
    // One summary line per grid point: 6 values of J times 4 schemes.
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("sweep-j ")).count(), 24);
}

#[test]
fn point_matches_its_sweep_cell() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = dir.path().join("sweep");
    let point = dir.path().join("point");
    let common = ["--trials", "500", "--seed", "7", "--no-plot"];
    let mut args = vec!["sweep-j", "--out", sweep.to_str().unwrap()];
    args.extend(common);
    assert_eq!(riscomp(&args, dir.path()).status.code(), Some(0));
    let mut args = vec![
        "point",
        "--scheme",
        "ec",
        "--coop",
        "4",
        "--elements",
        "70",
        "--pt",
        "0",
        "--out",
        point.to_str().unwrap(),
    ];
    args.extend(common);
    assert_eq!(riscomp(&args, dir.path()).status.code(), Some(0));

    let sweep = CsvTable::parse(&std::fs::read_to_string(sweep.join("sweep-j.csv")).unwrap()).unwrap();
    let point = CsvTable::parse(&std::fs::read_to_string(point.join("point.csv")).unwrap()).unwrap();
    assert_eq!(point.rows.len(), 1);
    let cell = sweep.rows.iter().find(|r| r.scheme == "ec" && r.axes == [4.0]).unwrap();
    assert_eq!(point.rows[0].energy_efficiency, cell.energy_efficiency);
    assert_eq!(point.rows[0].outage_sum_rate, cell.outage_sum_rate);
}

#[test]
fn plots_manifest_and_replot() {
    let dir = tempfile::tempdir().unwrap();
    let o = riscomp(
        &["contour", "--trials", "50", "--pt", "-10,0,10", "--rth", "0.5,1,2"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let svg = std::fs::read_to_string(dir.path().join("contour.svg")).unwrap();
    assert!(svg.starts_with("<svg"));

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["subcommand"], "contour");
    assert_eq!(manifest["trials"], 50);
    assert_eq!(manifest["config"]["coop"], 4);
    assert_eq!(manifest["files"], serde_json::json!(["contour.csv", "contour.svg"]));
    assert_eq!(manifest["config_hash"].as_str().unwrap().len(), 64);

    let csv = dir.path().join("contour.csv");
    let replotted = dir.path().join("again.svg");
    let o = riscomp(
        &["replot", csv.to_str().unwrap(), "--output", replotted.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(replotted).unwrap(), svg);
}

#[test]
fn split_ratio_defaults_to_72_elements() {
    let dir = tempfile::tempdir().unwrap();
    let o = riscomp(
        &[
            "split-ratio",
            "--trials",
            "20",
            "--no-plot",
            "--coop",
            "1,6",
            "--ratio",
            "0,1",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["ris_elements"], 72);
    let table = CsvTable::parse(&std::fs::read_to_string(dir.path().join("split-ratio.csv")).unwrap()).unwrap();
    assert_eq!(table.rows.len(), 4);
}
