use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use superatom_cli::output::reserialize_csv;

const BIN: &str = env!("CARGO_BIN_EXE_superatom");

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn superatom(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(BIN);
    c.args(args);
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const EFFECTIVE: &str = r#"
unit = "1"
[scenario]
kind = "custom"
model = "effective"
method = "adaptive_rk"
initial = 2
[params]
n_atoms = 4
omega_0 = 10.0
omega_ge = 10.0
g = 1.0
G = 1.0
Omega = 1.0
gamma_m = 0.01
"#;

fn with_time(body: &str, time: &str) -> String {
    format!("{body}[time]\n{time}\n")
}

/// The machine line on stderr: one JSON object with the exit code it reports.
fn machine_error(out: &Output) -> serde_json::Value {
    let err = String::from_utf8_lossy(&out.stderr);
    let line = err.lines().last().expect("an error line");
    let v: serde_json::Value = serde_json::from_str(line).expect("error line is JSON");
    assert_eq!(v["exit_code"].as_i64(), out.status.code().map(i64::from));
    v
}

#[test]
fn validate_prints_effective_coupling() {
    let cfg = configs().join("strong_coupling.toml");
    let out = superatom(&["validate", cfg.to_str().unwrap()], &[]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    // ḡGΩ/(Δ_cΔ_e) = 31.62·10·10/100² MHz
    assert!(text.contains("G_eff      = 2π·0.316228 MHz"), "{text}");
    assert!(text.contains("strong coupling (√N g / loss ≥ 10): pass"));
}

#[test]
fn validate_warns_on_resonance_mismatch() {
    let tmp = tempfile::tempdir().unwrap();
    let body = EFFECTIVE.replace("gamma_m = 0.01", "gamma_m = 0.01\nomega_gr = 0.5");
    let cfg = write_config(tmp.path(), "c.toml", &with_time(&body, "t_end = 1.0\nn_steps = 10"));
    let out = superatom(&["validate", &cfg], &[]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("warnings:") && text.contains("resonance condition"), "{text}");
}

#[test]
fn zero_length_grid_is_a_validation_error() {
    let tmp = tempfile::tempdir().unwrap();
    for time in ["t_end = 0.0\nn_steps = 10", "t_end = 1.0\nn_steps = 0"] {
        let cfg = write_config(tmp.path(), "c.toml", &with_time(EFFECTIVE, time));
        let out = superatom(&["run", &cfg, "--out", tmp.path().join("o").to_str().unwrap()], &[]);
        assert_eq!(out.status.code(), Some(2), "{time}");
        assert_eq!(machine_error(&out)["error"], "validation");
    }
}

#[test]
fn bad_configs_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        EFFECTIVE.replace("n_atoms = 4", "n_atoms = 0"),
        EFFECTIVE.replace("gamma_m = 0.01", "gama_m = 0.01"),
        EFFECTIVE.replace("kind = \"custom\"", "kind = \"fig9\""),
        EFFECTIVE.replace("gamma_m = 0.01", "gamma_m = -1.0"),
    ];
    for body in cases {
        let cfg = write_config(tmp.path(), "c.toml", &with_time(&body, "t_end = 1.0\nn_steps = 10"));
        for cmd in ["run", "validate"] {
            let out = superatom(&[cmd, &cfg], &[]);
            assert_eq!(out.status.code(), Some(2), "{cmd}: {body}");
        }
    }
    let out = superatom(&["run", "/nonexistent/config.toml"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn superoperator_cap_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let body = EFFECTIVE.replace("method = \"adaptive_rk\"", "method = \"steady_state\"");
    let cfg = write_config(tmp.path(), "c.toml", &body);
    // the 4-state model needs a 16-entry superoperator
    let out = superatom(&["run", &cfg, "--out", tmp.path().join("o").to_str().unwrap()], &[("SUPERATOM_MAX_SUPEROP_DIM", "4")]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(machine_error(&out)["error"], "resource");
}

#[test]
fn stiff_generator_exits_4() {
    let tmp = tempfile::tempdir().unwrap();
    let body = EFFECTIVE.replace("gamma_m = 0.01", "gamma_m = 1e17");
    let cfg = write_config(tmp.path(), "c.toml", &with_time(&body, "t_end = 1.0\nn_steps = 2"));
    let out = superatom(&["run", &cfg, "--out", tmp.path().join("o").to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(machine_error(&out)["error"], "numerical");
}

#[test]
fn runs_are_byte_identical_and_csv_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = configs().join("custom.toml");
    let mut listings = Vec::new();
    for k in 0..2 {
        let dir = tmp.path().join(format!("run{k}"));
        let out = superatom(&["run", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap(), "--quiet"], &[]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.file_name().unwrap() != "meta.json")
            .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
            .collect();
        files.sort();
        listings.push(files);
        let meta: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.join("meta.json")).unwrap()).unwrap();
        assert_eq!(meta["seed"], 1);
        assert_eq!(meta["scenario"], "custom");
    }
    assert_eq!(listings[0], listings[1]);
    let csvs: Vec<_> = listings[0].iter().filter(|(n, _)| n.ends_with(".csv")).collect();
    assert!(!csvs.is_empty());
    for (name, bytes) in csvs {
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert!(text.starts_with("t,"), "{name} header");
        assert_eq!(reserialize_csv(&text).unwrap(), text, "{name}");
    }
}

#[test]
fn seed_override_reproduces_and_varies() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = configs().join("custom.toml");
    let body = std::fs::read_to_string(&cfg).unwrap().replace("adaptive_rk", "trajectories");
    let cfg = write_config(tmp.path(), "c.toml", &body);
    let read = |seed: &str| {
        let dir = tmp.path().join(format!("s{seed}"));
        let out = superatom(&["run", &cfg, "--out", dir.to_str().unwrap(), "--seed", seed, "--n-traj", "20", "--quiet"], &[]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let summary: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.join("summary.json")).unwrap()).unwrap();
        assert_eq!(summary["seed"].as_u64().unwrap().to_string(), seed);
        std::fs::read_dir(&dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|e| e == "csv"))
            .map(|p| std::fs::read(p).unwrap())
            .collect::<Vec<_>>()
    };
    let (a, b, c) = (read("3"), read("3"), read("4"));
    assert_eq!(a, b);
    assert_ne!(a, c);
}
