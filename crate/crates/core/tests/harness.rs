use std::path::Path;
use std::process::Command;

use nanbu::harness::{
    emit_report, experiment_k_sweep, experiment_n_sweep, nsweep_point_distance, parse_config,
    read_sidecar, reference_cloud, reference_config, sidecar_path, CsvTable, RunMetadata,
};
use nanbu::rng::REFERENCE_STREAM;
use nanbu::Error;

const BASE: &str = "
params.gamma = -0.5
params.nu = 0.7
sim.n = 40
sim.k = 4
sim.t = 0.3
sim.seed = 7
";

fn nanbu_cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nanbu"))
}

fn write_config(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn sidecar_round_trips_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = parse_config(&format!(
        "{BASE}\ninit.kind = \"uniform_ball\"\ninit.radius = 1.5\nsweep.k_lo = [1, 2]\nsweep.k_hi = 4\nreplicas = 3\n"
    ))
    .unwrap();
    let out = dir.path().join("r.csv");
    let meta = RunMetadata::new("ksweep", &cfg, 0.0, 1.0);
    let sidecar = emit_report(&CsvTable::ksweep(&[]), &meta, &out).unwrap();
    assert_eq!(sidecar, sidecar_path(&out));
    let back = read_sidecar(&sidecar).unwrap();
    assert_eq!(back.config, cfg);
    assert_eq!(back.version, format!("v{}", env!("CARGO_PKG_VERSION")));
    assert_eq!(
        std::fs::read_to_string(&out).unwrap(),
        "k_lo,mean_msd,stderr,replicas,elapsed_s\n"
    );
}

#[test]
fn unwritable_path_is_io_error() {
    let cfg = parse_config(BASE).unwrap();
    let meta = RunMetadata::new("simulate", &cfg, 0.0, 0.0);
    let err = emit_report(
        &CsvTable::couple(&[]),
        &meta,
        Path::new("/nonexistent-dir/report.csv"),
    )
    .unwrap_err();
    assert!(matches!(err, Error::Io { .. }));
    assert_eq!(err.exit_code(), 4);
    assert!(err.to_string().contains("/nonexistent-dir/report.csv"));
}

#[test]
fn k_sweep_rows_and_equal_cutoff() {
    let cfg = parse_config(&format!(
        "{BASE}\nsweep.k_lo = [1, 2, 4]\nsweep.k_hi = 4\nreplicas = 3\n"
    ))
    .unwrap();
    let rep = experiment_k_sweep(&cfg).unwrap();
    let ks: Vec<f64> = rep.rows.iter().map(|r| r.sweep_value).collect();
    assert_eq!(ks, [1.0, 2.0, 4.0]);
    assert!(rep.rows.iter().all(|r| r.replicas == 3 && r.stderr >= 0.0));
    assert_eq!(rep.rows[2].mean, 0.0);
    assert!((rep.theoretical_slope - (1.0 - 2.0 / 0.7)).abs() < 1e-15);
}

#[test]
fn n_sweep_rows_and_reference_identity() {
    let cfg = parse_config(&format!(
        "{BASE}\nsweep.n_values = [10, 20]\nsweep.n_ref = 60\nsweep.k_ref = 8\nreplicas = 2\n"
    ))
    .unwrap();
    let rep = experiment_n_sweep(&cfg).unwrap();
    assert_eq!(rep.rows.len(), 2);
    assert_eq!(rep.reference_n, 60);
    assert_eq!(rep.reference_k, 8.0);

    let reference = reference_cloud(&cfg).unwrap();
    let ref_cfg = reference_config(&cfg).unwrap();
    let d = nsweep_point_distance(
        &cfg.base,
        ref_cfg.n,
        ref_cfg.cutoff.value(),
        REFERENCE_STREAM,
        &reference,
    )
    .unwrap();
    assert_eq!(d, 0.0);
}

#[test]
fn stderr_shrinks_like_inverse_root_replicas() {
    let text = format!("{BASE}\nsweep.k_lo = [2]\nsweep.k_hi = 8\n");
    let mut cfg = parse_config(&text).unwrap();
    cfg.replicas = 10;
    let se10 = experiment_k_sweep(&cfg).unwrap().rows[0].stderr;
    cfg.replicas = 40;
    let se40 = experiment_k_sweep(&cfg).unwrap().rows[0].stderr;
    let ratio = se10 / se40;
    assert!((ratio - 2.0).abs() <= 0.3 * 2.0, "se10 {se10} se40 {se40}");
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), "bad.toml", &BASE.replace("-0.5", "-1.2"));
    let out = nanbu_cli()
        .args(["simulate", "--config"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gamma in (-1,0)"));

    let good = write_config(dir.path(), "good.toml", BASE);
    let out = nanbu_cli()
        .args(["simulate", "--config"])
        .arg(&good)
        .arg("--out")
        .arg(dir.path().join("missing/sub/report.csv"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));

    let out = nanbu_cli().arg("simulate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cli_simulate_and_couple_write_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.toml",
        &format!("{BASE}\ndiag.times = [0.0, 0.1, 0.3]\nsweep.k_hi = 16\n"),
    );
    for (cmd, header, rows) in [
        ("simulate", "t,m2,m4,px,py,pz,energy,blob_lp,events", 3),
        ("couple", "t,msd", 3),
    ] {
        let out_path = dir.path().join(format!("{cmd}.csv"));
        let status = nanbu_cli()
            .arg(cmd)
            .arg("--config")
            .arg(&cfg)
            .arg("--out")
            .arg(&out_path)
            .args(["--threads", "2", "--seed", "3"])
            .status()
            .unwrap();
        assert!(status.success());
        let text = std::fs::read_to_string(&out_path).unwrap();
        let table = CsvTable::parse(&text).unwrap();
        assert_eq!(table.header.join(","), header);
        assert_eq!(table.rows.len(), rows);
        let meta = read_sidecar(&sidecar_path(&out_path)).unwrap();
        assert_eq!(meta.seed, 3);
        assert_eq!(meta.command, cmd);
    }
}
