//! End-to-end checks of the `lmg` binary: file layouts, determinism and
//! exit codes.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lmg"))
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lmg-cli-{}-{tag}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    dir
}

#[test]
fn spectrum_row_count_and_files() {
    let dir = temp_dir("spectrum");
    let status = bin()
        .args([
            "spectrum",
            "--n",
            "100",
            "--grid",
            "0:1.5:0.01",
            "--h",
            "0.5",
            "--out",
        ])
        .arg(&dir)
        .status()
        .unwrap();
    assert!(status.success());
    let spectrum = fs::read_to_string(dir.join("spectrum.csv")).unwrap();
    // Header plus 151 h-points x 101 levels.
    assert_eq!(spectrum.lines().count(), 1 + 151 * 101);
    assert!(spectrum.starts_with("h,index,energy,parity\n"));
    assert!(dir.join("dos.csv").exists());
    assert!(dir.join("manifest.json").exists());
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn parameter_error_exit_code() {
    // Odd N is a parameter error: exit code 2.
    let status = bin()
        .args(["spectrum", "--n", "3", "--out"])
        .arg(temp_dir("oddn"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn unknown_figure_exit_code() {
    let status = bin()
        .args(["reproduce", "fig9", "--out"])
        .arg(temp_dir("fig9"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn quench_outputs_and_formats() {
    let dir = temp_dir("quench");
    let status = bin()
        .args([
            "quench", "--n", "200", "--hi", "0.5", "--hf", "0.75", "--state", "sym", "--out",
        ])
        .arg(&dir)
        .status()
        .unwrap();
    assert!(status.success());
    for f in ["quench.json", "work.csv", "survival.csv", "manifest.json"] {
        assert!(dir.join(f).exists(), "missing {f}");
    }
    let quench: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("quench.json")).unwrap()).unwrap();
    assert_eq!(quench["params"]["n"], 200);
    assert_eq!(quench["params"]["hf"], 0.75);
    assert_eq!(quench["state_kind"], "sym");
    assert!(quench["work"][0]["W"].is_f64());
    assert!(quench["moments"]["m1"].is_f64());
    // CSV fields carry 17 significant digits.
    let work = fs::read_to_string(dir.join("work.csv")).unwrap();
    let first_field = work.lines().nth(1).unwrap().split(',').next().unwrap();
    assert!(
        first_field.contains('e'),
        "expected scientific notation, got {first_field}"
    );
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn sweep_reruns_are_byte_identical() {
    let dir_a = temp_dir("sweep-a");
    let dir_b = temp_dir("sweep-b");
    for dir in [&dir_a, &dir_b] {
        let status = bin()
            .args([
                "sweep",
                "--sizes",
                "40,80",
                "--hi",
                "0.5",
                "--grid",
                "0.6:0.9:0.1",
                "--out",
            ])
            .arg(dir)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = fs::read(dir_a.join("sweep.csv")).unwrap();
    let b = fs::read(dir_b.join("sweep.csv")).unwrap();
    assert_eq!(a, b);
    let ma = fs::read(dir_a.join("manifest.json")).unwrap();
    let mb = fs::read(dir_b.join("manifest.json")).unwrap();
    assert_eq!(ma, mb);
    let _ = fs::remove_dir_all(&dir_a);
    let _ = fs::remove_dir_all(&dir_b);
}

#[test]
fn scaling_fit_document() {
    let dir = temp_dir("scaling");
    let status = bin()
        .args([
            "scaling",
            "--sizes",
            "40,80,160",
            "--hi",
            "0.5",
            "--grid",
            "0.7:0.8:0.01",
            "--out",
        ])
        .arg(&dir)
        .status()
        .unwrap();
    assert!(status.success());
    let fit: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("scaling.json")).unwrap()).unwrap();
    assert!(fit["slope"].as_f64().unwrap() > 0.0);
    assert!(fit["r2"].is_f64());
    assert_eq!(fit["points"].as_array().unwrap().len(), 3);
    assert!(fit["points"][0]["N"].is_u64());
    assert!(fit["points"][0]["Smax"].is_f64());
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn semiclassics_prints_json() {
    let out = bin()
        .args(["semiclassics", "--hi", "0.5", "--hf", "0.9", "--n", "2000"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["critical_field"], 0.75);
    assert_eq!(doc["quenched_energy"], -0.825);
    assert_eq!(doc["critical_energy_spectrum_units"], 0.0);
}

#[test]
fn reproduce_small_panel() {
    let dir = temp_dir("fig4a");
    let status = bin()
        .args(["reproduce", "fig4a", "--out"])
        .arg(&dir)
        .status()
        .unwrap();
    assert!(status.success());
    for f in [
        "work_fig4a_sym.csv",
        "work_fig4a_fsb.csv",
        "work_fig4a_sup.csv",
        "fig4a.gp",
        "manifest.json",
    ] {
        assert!(dir.join(f).exists(), "missing {f}");
    }
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn biased_quench_selects_branch() {
    // eps > 0 with fsb- runs the biased preparation; fsb+ is the wrong branch.
    let ok = bin()
        .args([
            "quench", "--n", "100", "--hi", "0.5", "--hf", "0.6", "--eps", "1e-4", "--state",
            "fsb-", "--out",
        ])
        .arg(temp_dir("bias-ok"))
        .status()
        .unwrap();
    assert!(ok.success());
    let bad = bin()
        .args([
            "quench", "--n", "100", "--hi", "0.5", "--hf", "0.6", "--eps", "1e-4", "--state",
            "fsb+", "--out",
        ])
        .arg(temp_dir("bias-bad"))
        .status()
        .unwrap();
    assert_eq!(bad.code(), Some(2));
}
