use std::fs;
use std::path::Path;
use std::process::Command as Process;

use dqpt_cli::output::read_manifest;
use dqpt_cli::{execute, Command, Overrides, RunConfig};

fn run(command: Command, dir: &Path, flags: Overrides) -> dqpt_cli::Manifest {
    let flags = Overrides {
        out: Some(dir.to_path_buf()),
        ..flags
    };
    let cfg = RunConfig::load(command, &flags).unwrap();
    execute(command, &cfg).unwrap()
}

fn rows(path: &Path) -> Vec<Vec<f64>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            l.split(',')
                .map(|x| x.parse().unwrap_or(f64::NAN))
                .collect()
        })
        .collect()
}

#[test]
fn trajectory_files_and_fixed_mode() {
    let dir = tempfile::tempdir().unwrap();
    let m = run(
        Command::Trajectory,
        dir.path(),
        Overrides {
            periods: Some(1),
            ..Default::default()
        },
    );
    assert_eq!(m.files.len(), 30);
    for f in &m.files {
        assert_eq!(rows(&dir.path().join(&f.path)).len(), 70);
    }
    // k = 0: the initial state is parallel to the rotation axis and never moves
    let first = rows(&dir.path().join("trajectories/mode_00.csv"));
    for r in &first {
        assert_eq!(r[0], 0.0);
        assert!((r[2] - first[0][2]).abs() < 1e-15 && (r[3] - first[0][3]).abs() < 1e-15);
        assert!((r[4] - first[0][4]).abs() < 1e-15);
    }
}

fn hashes(m: &dqpt_cli::Manifest) -> Vec<(String, String)> {
    m.files
        .iter()
        .map(|f| (f.path.clone(), f.sha256.clone()))
        .collect()
}

#[test]
fn reruns_and_worker_counts_are_byte_identical() {
    for command in [
        Command::Trajectory,
        Command::Rate,
        Command::Chern,
        Command::Skyrmion,
        Command::Sweep,
    ] {
        let base = Overrides {
            emulate: true,
            seed: Some(42),
            ..Default::default()
        };
        let dirs: Vec<_> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
        let a = run(
            command,
            dirs[0].path(),
            Overrides {
                workers: Some(1),
                ..base.clone()
            },
        );
        let b = run(
            command,
            dirs[1].path(),
            Overrides {
                workers: Some(4),
                ..base.clone()
            },
        );
        let c = run(command, dirs[2].path(), base);
        assert_eq!(hashes(&a), hashes(&b), "{command:?}");
        assert_eq!(hashes(&a), hashes(&c), "{command:?}");
        let manifests: Vec<_> = dirs
            .iter()
            .map(|d| fs::read(d.path().join("manifest.json")).unwrap())
            .collect();
        assert_eq!(manifests[0], manifests[1]);
        assert_eq!(manifests[0], manifests[2]);
    }
}

#[test]
fn manifest_config_reproduces_the_run() {
    let first = tempfile::tempdir().unwrap();
    let m = run(
        Command::Rate,
        first.path(),
        Overrides {
            gf: Some(vec![1.5, 0.8]),
            emulate: true,
            seed: Some(7),
            modes: Some(20),
            ..Default::default()
        },
    );
    let echoed = read_manifest(first.path()).unwrap();
    // the output directory is not echoed
    let mut expected = m.clone();
    expected.config.out = echoed.config.out.clone();
    assert_eq!(echoed, expected);

    let second = tempfile::tempdir().unwrap();
    let cfg = RunConfig {
        out: second.path().to_path_buf(),
        ..echoed.config
    };
    cfg.validate(Command::Rate).unwrap();
    let again = execute(Command::Rate, &cfg).unwrap();
    assert_eq!(hashes(&again), hashes(&m));
}

#[test]
fn rate_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let m = run(
        Command::Rate,
        dir.path(),
        Overrides {
            finite_size: true,
            ..Default::default()
        },
    );
    let names: Vec<&str> = m.files.iter().map(|f| f.path.as_str()).collect();
    for g in ["3.5", "2.5", "1.5", "0.9", "0.8", "0.7"] {
        assert!(names.contains(&format!("rate_gf{g}.csv").as_str()));
        let r = rows(&dir.path().join(format!("rate_gf{g}.csv")));
        assert_eq!(r.len(), 2 * 140);
        assert!(
            r[140..].iter().all(|row| row[2].is_infinite()),
            "second curve is the thermodynamic limit"
        );
        assert_eq!(
            rows(&dir.path().join(format!("finite_size_gf{g}.csv"))).len(),
            8 * 140
        );
    }

    let flat = tempfile::tempdir().unwrap();
    run(
        Command::Rate,
        flat.path(),
        Overrides {
            gi: Some(0.6),
            gf: Some(vec![0.6]),
            ..Default::default()
        },
    );
    // zero up to the rounding of |d̂|² = 1
    for r in rows(&flat.path().join("rate_gf0.6.csv")) {
        assert!(r[1].abs() < 1e-14, "{r:?}");
    }
}

#[test]
fn emulated_rate_has_error_bars() {
    let dir = tempfile::tempdir().unwrap();
    run(
        Command::Rate,
        dir.path(),
        Overrides {
            gf: Some(vec![1.5]),
            emulate: true,
            ..Default::default()
        },
    );
    let r = rows(&dir.path().join("rate_emulated_gf1.5.csv"));
    assert_eq!(r.len(), 140);
    assert!(r.iter().all(|row| row[2] >= 0.0));
}

fn chern_report(dir: &Path) -> serde_json::Value {
    serde_json::from_slice(&fs::read(dir.join("chern.json")).unwrap()).unwrap()
}

#[test]
fn chern_reports() {
    let dir = tempfile::tempdir().unwrap();
    run(Command::Chern, dir.path(), Overrides::default());
    let v = chern_report(dir.path());
    assert_eq!(v["fixed_point"], -1);
    assert!((v["integral"].as_f64().unwrap() + 1.0).abs() < 0.05);
    assert_eq!((v["nk"].as_u64(), v["nt"].as_u64()), (Some(200), Some(200)));

    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run(
        Command::Chern,
        a.path(),
        Overrides {
            gi: Some(0.2),
            gf: Some(vec![0.5]),
            ..Default::default()
        },
    );
    run(
        Command::Chern,
        b.path(),
        Overrides {
            gi: Some(0.5),
            gf: Some(vec![0.2]),
            ..Default::default()
        },
    );
    let (va, vb) = (chern_report(a.path()), chern_report(b.path()));
    assert_eq!(va["fixed_point"], 0);
    assert_eq!(vb["fixed_point"], 0);
    assert!(
        va["integral"].as_f64().unwrap().abs() < 0.05
            && vb["integral"].as_f64().unwrap().abs() < 0.05
    );
}

#[test]
fn skyrmion_outputs() {
    let dir = tempfile::tempdir().unwrap();
    run(Command::Skyrmion, dir.path(), Overrides::default());
    let texture = rows(&dir.path().join("texture_gf1.5.csv"));
    assert!(texture
        .iter()
        .filter(|r| r[1] == 0.0)
        .all(|r| (r[2] - 1.0).abs() < 1e-15));

    let k_star = (1.0f64 / 1.5).acos();
    let gap = (1.0 - 1.0 / 2.25 + (1.5 - 1.0 / 1.5f64).powi(2)).sqrt();
    let t_c = std::f64::consts::PI / (2.0 * gap);
    let minima = rows(&dir.path().join("minima_gf1.5.csv"));
    assert!(!minima.is_empty());
    assert!((minima[0][0] - k_star).abs() < 1e-6);
    assert!((minima[0][1] - t_c).abs() < 1e-6);
    assert!(rows(&dir.path().join("minima_gf0.5.csv")).is_empty());
}

#[test]
fn sweep_classifies_phases() {
    let dir = tempfile::tempdir().unwrap();
    run(Command::Sweep, dir.path(), Overrides::default());
    let text = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("g_i,g_f,dqpt,k_star,t_c0,chern"));
    let cells: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(cells.len(), 41 * 41);
    for c in &cells {
        let (g_i, g_f): (f64, f64) = (c[0].parse().unwrap(), c[1].parse().unwrap());
        let predicate = (1.0 - g_i.abs()) * (1.0 - g_f.abs()) < 0.0;
        assert_eq!(c[2] == "true", predicate, "{c:?}");
        if g_i == g_f {
            assert_eq!(c[2], "false");
        }
        if predicate {
            assert!(!c[5].is_empty() && c[5] != "0", "{c:?}");
            assert!(!c[3].is_empty() && !c[4].is_empty());
        }
    }
    // along g_i ≈ 0.2 the flag switches exactly past g_f = 1
    let row: Vec<_> = cells
        .iter()
        .filter(|c| (c[0].parse::<f64>().unwrap() - 0.2).abs() < 1e-9)
        .collect();
    for c in row {
        let g_f: f64 = c[1].parse().unwrap();
        assert_eq!(c[2] == "true", g_f.abs() > 1.0, "{c:?}");
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_dqpt");
    let dir = tempfile::tempdir().unwrap();
    let status = |args: &[&str]| Process::new(bin).args(args).status().unwrap().code();
    let out = dir.path().to_str().unwrap();
    assert_eq!(status(&["chern", "--out", out]), Some(0));
    assert_eq!(status(&["rate", "--modes", "0", "--out", out]), Some(2));
    assert_eq!(status(&["rate", "--gf", "1.0", "--out", out]), Some(3));
    assert_eq!(
        status(&["chern", "--config", "/definitely/not/here.json"]),
        Some(4)
    );

    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"device": {"t1_us": -1}}"#).unwrap();
    assert_eq!(
        status(&[
            "trajectory",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out
        ]),
        Some(2)
    );

    let output = Process::new(bin)
        .args(["rate", "--gf", "1.0", "--out", out])
        .output()
        .unwrap();
    let msg = String::from_utf8(output.stderr).unwrap();
    assert!(msg.contains("k = 0") && msg.contains("g=1"), "{msg}");
}
