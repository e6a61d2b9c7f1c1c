//! End-to-end contract tests for the binary: exit codes, configuration
//! precedence, manifest contents, artifact atomicity, and the
//! documented flag spellings.

use std::path::Path;
use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_weyl-lab"))
}

fn run_in(cache: &Path, args: &[&str]) -> Output {
    binary()
        .arg("--cache-dir")
        .arg(cache)
        .args(args)
        .output()
        .unwrap()
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn invalid_parameters_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["counts", "--s", "0", "--k", "3", "--n", "10"][..],
        &["quadrature", "--s", "2", "--k", "2", "--x", "0"][..],
        &["multiplier", "sample", "--k", "2", "--lambda", "1.5", "--theta", "0.1", "--trunc", "10"][..],
        &["regions", "--k", "1", "--lambda", "0.5"][..],
        &["regions", "check", "--statement", "nonsense", "--k", "3", "--lambda", "0.9", "--inv-p", "0.8", "--inv-q", "0.7"][..],
        &["audit", "--name", "unknown"][..],
        &["operator", "witness-delta", "--k", "2", "--lambda", "0.5", "--q", "0.5"][..],
    ] {
        let out = run_in(dir.path(), args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn clap_usage_errors_exit_2() {
    let out = binary().args(["counts", "--s", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = binary().arg("no-such-command").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_overruns_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["counts", "--s", "2", "--k", "3", "--n", "99999999999"][..],
        &["multiplier", "sample", "--k", "2", "--lambda", "0.5", "--theta", "0.1", "--trunc", "999999999999"][..],
    ] {
        let out = run_in(dir.path(), args);
        assert_eq!(out.status.code(), Some(3), "{args:?}");
    }
}

#[test]
fn corrupt_cache_exits_4_and_quarantines() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["counts", "--s", "2", "--k", "2", "--n", "64"];
    assert!(run_in(dir.path(), &args).status.success());
    let entry = dir.path().join("r-s2-k2-n64-b0.wlct");
    let mut bytes = std::fs::read(&entry).unwrap();
    // Flip a record-length byte rather than truncating.
    let mid = bytes.len() / 2;
    bytes[mid] ^= 0xff;
    std::fs::write(&entry, &bytes).unwrap();
    let out = run_in(dir.path(), &args);
    assert_eq!(out.status.code(), Some(4));
    assert!(!entry.exists(), "corrupt entry must be moved aside");
    assert!(entry.with_extension("wlct.corrupt").exists() || {
        // Quarantine appends ".corrupt" to the full name.
        dir.path().join("r-s2-k2-n64-b0.wlct.corrupt").exists()
    });
    // The next run recomputes cleanly.
    assert!(run_in(dir.path(), &args).status.success());
}

#[test]
fn flag_beats_config_beats_env() {
    let dir = tempfile::tempdir().unwrap();
    let flag_dir = dir.path().join("from-flag");
    let conf_dir = dir.path().join("from-config");
    let env_dir = dir.path().join("from-env");
    let config = dir.path().join("conf.json");
    std::fs::write(
        &config,
        format!("{{\"cacheDir\": \"{}\"}}\n", conf_dir.display()),
    )
    .unwrap();

    // Flag wins over both.
    let out = binary()
        .env("WEYL_LAB_CACHE_DIR", &env_dir)
        .arg("--cache-dir")
        .arg(&flag_dir)
        .arg("--config")
        .arg(&config)
        .args(["cache", "path"])
        .output()
        .unwrap();
    assert_eq!(stdout_of(&out).trim(), flag_dir.display().to_string());

    // Config file wins over the environment.
    let out = binary()
        .env("WEYL_LAB_CACHE_DIR", &env_dir)
        .arg("--config")
        .arg(&config)
        .args(["cache", "path"])
        .output()
        .unwrap();
    assert_eq!(stdout_of(&out).trim(), conf_dir.display().to_string());

    // Environment wins over the default.
    let out = binary()
        .env("WEYL_LAB_CACHE_DIR", &env_dir)
        .args(["cache", "path"])
        .output()
        .unwrap();
    assert_eq!(stdout_of(&out).trim(), env_dir.display().to_string());

    let out = binary()
        .env("WEYL_LAB_THREADS", "not-a-number")
        .args(["cache", "path"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn manifest_records_config_and_digest() {
    let dir = tempfile::tempdir().unwrap();
    let artifact = dir.path().join("out.json");
    let manifest = dir.path().join("manifest.json");
    let out = binary()
        .arg("--cache-dir")
        .arg(dir.path().join("cache"))
        .arg("--out")
        .arg(&artifact)
        .arg("--manifest")
        .arg(&manifest)
        .args(["quadrature", "--s", "2", "--k", "2", "--x", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(manifest["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(manifest["config"]["command"]["counts"], serde_json::Value::Null);
    assert_eq!(manifest["config"]["command"]["quadrature"]["x"], 2);
    assert!(manifest["startedAt"].as_str().unwrap() <= manifest["finishedAt"].as_str().unwrap());

    let artifact_bytes = std::fs::read(&artifact).unwrap();
    let digest = {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        h.update(&artifact_bytes);
        format!("{:x}", h.finalize())
    };
    assert_eq!(manifest["artifacts"][0]["sha256"], digest);
    assert_eq!(
        manifest["artifacts"][0]["bytes"],
        artifact_bytes.len() as u64
    );
}

#[test]
fn atomic_write_leaves_no_temp_litter() {
    let dir = tempfile::tempdir().unwrap();
    let artifact = dir.path().join("ladder.csv");
    let out = binary()
        .arg("--no-cache")
        .arg("--out")
        .arg(&artifact)
        .args(["meanvalue", "--s", "2", "--k", "3", "--dyadic-from", "4", "--dyadic-to", "8", "--format", "csv"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    assert_eq!(names, vec!["ladder.csv".to_string()], "no temp files: {names:?}");
    let text = std::fs::read_to_string(&artifact).unwrap();
    assert!(text.starts_with("n,sum\n16,6\n32,10\n"), "{text}");
}

#[test]
fn uppercase_aliases_match_documented_examples() {
    let dir = tempfile::tempdir().unwrap();
    let lower = stdout_of(&run_in(
        dir.path(),
        &["counts", "--s", "2", "--k", "3", "--n", "120", "--format", "csv"],
    ));
    let upper = stdout_of(&run_in(
        dir.path(),
        &["counts", "--s", "2", "--k", "3", "--N", "120", "--format", "csv"],
    ));
    assert_eq!(lower, upper);
    assert!(lower.contains("9,2\n"), "r_2,3(9) = 2 from 1+8 and 8+1");

    let audit = run_in(
        dir.path(),
        &["audit", "--name", "parseval", "--s", "2", "--k", "2", "--X", "2"],
    );
    let summary = String::from_utf8_lossy(&audit.stderr);
    assert!(
        summary.contains("lattice=6") && summary.contains("quadrature=6.0") && summary.contains("pass"),
        "{summary}"
    );
}

#[test]
fn fit_reads_csv_with_header() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("series.csv");
    std::fs::write(&data, "x,y\n2,4\n4,16\n8,64\n16,256\n").unwrap();
    let out = binary()
        .args(["fit", "--data", data.to_str().unwrap()])
        .output()
        .unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let slope = parsed["slope"].as_f64().unwrap();
    assert!((slope - 2.0).abs() < 1e-9, "slope {slope}");
}

#[test]
fn seed_changes_audit_sampling() {
    let dir = tempfile::tempdir().unwrap();
    let a = stdout_of(&run_in(dir.path(), &["--seed", "1", "audit", "--name", "operator"]));
    let b = stdout_of(&run_in(dir.path(), &["--seed", "1", "audit", "--name", "operator"]));
    let c = stdout_of(&run_in(dir.path(), &["--seed", "2", "audit", "--name", "operator"]));
    assert_eq!(a, b, "same seed must reproduce byte-identically");
    let dev = |s: &str| {
        serde_json::from_str::<serde_json::Value>(s).unwrap()["maxDeviation"]
            .as_f64()
            .unwrap()
    };
    assert_ne!(dev(&a), dev(&c), "different seeds must sample different signals");
    assert!(dev(&a) <= 1e-8 && dev(&c) <= 1e-8);
}

#[test]
fn cache_clear_reports_removals() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_in(dir.path(), &["counts", "--s", "2", "--k", "2", "--n", "32"]).status.success());
    assert!(run_in(dir.path(), &["counts", "--s", "1", "--k", "2", "--n", "32"]).status.success());
    let out = run_in(dir.path(), &["cache", "clear"]);
    assert!(stdout_of(&out).starts_with("cleared 2 cached tables"));
    let out = run_in(dir.path(), &["cache", "clear"]);
    assert!(stdout_of(&out).starts_with("cleared 0 cached tables"));
}

#[test]
fn no_cache_leaves_directory_untouched() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("never-made");
    let out = binary()
        .arg("--cache-dir")
        .arg(&cache)
        .arg("--no-cache")
        .args(["counts", "--s", "2", "--k", "2", "--n", "32"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(!cache.exists());
}
