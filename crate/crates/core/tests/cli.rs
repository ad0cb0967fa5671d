// Copyright 2026 The nvsense Authors
//
// Licensed under the Apache license, version 2.0 (the "license");
// you may not use this file except in compliance with the license.
// You may obtain a copy of the license at
//
//     http://www.apache.org/licenses/license-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the license is distributed on an "as is" basis,
// without warranties or conditions of any kind, either express or implied.
// See the license for the specific language governing permissions and
// limitations under the license.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn nvsense(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nvsense"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .expect("run nvsense")
}

fn rows(path: &Path) -> Vec<Vec<f64>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

const SMALL_MC: [&str; 8] = [
    "--set",
    "mc.n_particles=400",
    "--set",
    "mc.n_steps=1200",
    "--set",
    "mc.n_batches=6",
    "--set",
    "mc.lags=0,1e-7,4e-7",
];

#[test]
fn profile_writes_both_sides() {
    let dir = tempfile::tempdir().unwrap();
    let out = nvsense(dir.path(), &["profile"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let e = rows(&dir.path().join("electrolyte_profile.csv"));
    let d = rows(&dir.path().join("diamond_profile.csv"));
    assert!(e.len() >= 200 && d.len() >= 200);
    assert!(e.windows(2).all(|w| w[1][0] > w[0][0]));
    assert!(d.windows(2).all(|w| w[1][0] > w[0][0]));
    // same potential on both sides of the surface
    assert_eq!(e[0][1], d[0][1]);
    let ratio = 80.0 / 5.8;
    assert!((d[0][2] - ratio * e[0][2]).abs() <= 1e-9 * d[0][2].abs());
    let header = fs::read_to_string(dir.path().join("diamond_profile.csv")).unwrap();
    assert!(header.starts_with("depth_m,phi_V,E_Vpm\n"));
}

#[test]
fn zero_step_gives_zero_fields() {
    let dir = tempfile::tempdir().unwrap();
    let out = nvsense(
        dir.path(),
        &[
            "profile",
            "--set",
            "diamond.charge_model=neutral",
            "--set",
            "diamond.phi_bulk=1.5",
        ],
    );
    assert!(out.status.success());
    for f in ["electrolyte_profile.csv", "diamond_profile.csv"] {
        assert!(rows(&dir.path().join(f)).iter().all(|r| r[2] == 0.0), "{f}");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = nvsense(dir.path(), &["sweep", "--set", "electrolyte.cb=1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown key"));
    let out = nvsense(dir.path(), &["fit", "--set", "readout.alpha=-1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = nvsense(dir.path(), &["ramsey", "--set", "diamond.charge_model=neutral"]);
    assert_eq!(out.status.code(), Some(2));
    let out = nvsense(dir.path(), &["profile", "--set", "diamond.phi_bulk=30"]);
    assert_eq!(out.status.code(), Some(3));
    let missing = dir.path().join("missing.cfg");
    let out = nvsense(dir.path(), &["profile", "--config", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# ramsey at low concentration\nramsey.c_b = 0.5\nramsey.points = 11\n").unwrap();
    let out = nvsense(
        dir.path(),
        &["ramsey", "--config", cfg.to_str().unwrap(), "--set", "ramsey.points=21"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = rows(&dir.path().join("ramsey.csv"));
    assert_eq!(r.len(), 21);
    assert!(r.iter().all(|x| (0.0..=1.0).contains(&x[1])));
    let echo = fs::read_to_string(dir.path().join("config.txt")).unwrap();
    assert!(echo.contains("ramsey.c_b = 0.5\n"));
}

#[test]
fn sweep_rerun_from_manifest_is_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(nvsense(a.path(), &["sweep", "--set", "sweep.cb_points=9"]).status.success());
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(a.path().join("manifest.json")).unwrap()).unwrap();
    let lines: Vec<&str> = manifest["config"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    let cfg = a.path().join("again.cfg");
    fs::write(&cfg, lines.join("\n")).unwrap();
    assert!(nvsense(b.path(), &["sweep", "--config", cfg.to_str().unwrap()]).status.success());
    for f in ["sweep.csv", "stark.csv", "sweep_summary.json", "manifest.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let csv = fs::read_to_string(a.path().join("sweep.csv")).unwrap();
    assert!(csv.starts_with("c_b,phi0_V,E_e0_Vpm,E_nv_Vpm,transfer,plateau_V2pm2,inv_T2star_Hz"));
    assert_eq!(csv.lines().count(), 10);
    // nothing left behind by the atomic writes
    assert!(fs::read_dir(a.path()).unwrap().all(|e| !e.unwrap().file_name().to_string_lossy().starts_with('.')));
}

#[test]
fn fit_exponent_in_expected_band() {
    let dir = tempfile::tempdir().unwrap();
    let out = nvsense(dir.path(), &["fit"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let b: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("B = "))
        .expect("B line")
        .trim()
        .parse()
        .unwrap();
    assert!((0.37..=0.47).contains(&b), "B = {b}");
}

#[test]
fn sensitivity_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = nvsense(dir.path(), &["sensitivity"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let eta: f64 = text
        .lines()
        .find(|l| l.starts_with("eta("))
        .and_then(|l| l.split(" = ").nth(1))
        .and_then(|v| v.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    assert!((eta - 3.27).abs() <= 0.05, "{eta}");
}

#[test]
fn oracle_is_reproducible_for_a_seed() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let c = tempfile::tempdir().unwrap();
    let mut args = vec!["oracle", "--seed", "5"];
    args.extend(SMALL_MC);
    let ra = nvsense(a.path(), &args);
    let rb = nvsense(b.path(), &args);
    assert_eq!(ra.status.code(), rb.status.code());
    assert!(ra.status.code() == Some(0) || ra.status.code() == Some(1));
    for f in ["oracle_density.csv", "oracle_field.csv", "oracle_summary.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap());
    }
    args[2] = "6";
    nvsense(c.path(), &args);
    assert_ne!(
        fs::read(a.path().join("oracle_field.csv")).unwrap(),
        fs::read(c.path().join("oracle_field.csv")).unwrap()
    );
    let header = fs::read_to_string(a.path().join("oracle_field.csv")).unwrap();
    assert!(header.starts_with("lag_s,correlator,stderr\n"));
}

#[test]
fn correlator_full_and_simplified_agree_at_short_lags() {
    let dir = tempfile::tempdir().unwrap();
    let out = nvsense(dir.path(), &["correlator", "--set", "correlator.points=8", "--set", "correlator.t_max=1"]);
    assert!(out.status.success());
    let r = rows(&dir.path().join("correlator.csv"));
    assert_eq!(r.len(), 8);
    for x in &r {
        assert!((x[1] - x[2]).abs() < 1e-3 * x[3], "{x:?}");
        assert!(x[1] <= x[3]);
    }
}
