use std::path::Path;
use std::process::{Command, Output};

fn ccf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccf"))
        .args(args)
        .output()
        .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn small_bank(dir: &Path) -> String {
    let bank = dir.join("bank.fbk");
    let out = ccf(&[
        "gen-synthetic",
        "--base",
        "6",
        "--val",
        "5",
        "--novel",
        "5",
        "--dim",
        "8",
        "--per-class",
        "20",
        "--seed",
        "7",
        "-o",
        path(&bank),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    path(&bank).to_string()
}

#[test]
fn help_lists_every_subcommand_and_flag() {
    let out = ccf(&["--help"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for cmd in [
        "gen-synthetic",
        "train",
        "eval",
        "sweep",
        "analyze",
        "convert",
    ] {
        assert!(text.contains(cmd), "{cmd} missing from --help");
    }
    let eval = String::from_utf8(ccf(&["eval", "--help"]).stdout).unwrap();
    for flag in [
        "--way",
        "--shot",
        "--query",
        "--episodes",
        "--classifier",
        "--baseline",
        "--seed",
    ] {
        assert!(eval.contains(flag), "{flag} missing from eval --help");
    }
    let gen = String::from_utf8(ccf(&["gen-synthetic", "--help"]).stdout).unwrap();
    assert!(gen.contains("[default: 64]"));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(ccf(&["train", "--seed", "1"]).status.code(), Some(1));
    assert_eq!(ccf(&["bogus"]).status.code(), Some(1));
    assert_eq!(
        ccf(&["gen-synthetic", "-o", "x.fbk"]).status.code(),
        Some(1)
    );
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.fbk");
    let zero = ccf(&[
        "gen-synthetic",
        "--per-class",
        "0",
        "--seed",
        "1",
        "-o",
        path(&out),
    ]);
    assert_eq!(zero.status.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn missing_bank_path_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("m.ckpt");
    let out = ccf(&["train", "--seed", "1", "-o", path(&ckpt)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bank"));
}

#[test]
fn unreadable_or_corrupt_bank_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.fbk");
    std::fs::write(&bad, b"not a bank").unwrap();
    let out = ccf(&["eval", "--baseline", "--bank", path(&bad), "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let missing = dir.path().join("missing.fbk");
    let out = ccf(&[
        "eval",
        "--baseline",
        "--bank",
        path(&missing),
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.fbk"));
}

#[test]
fn diverging_training_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let bank = small_bank(dir.path());
    let ckpt = dir.path().join("m.ckpt");
    let out = ccf(&[
        "train",
        "--bank",
        &bank,
        "--seed",
        "1",
        "--hidden",
        "8",
        "--learning-rate",
        "1e200",
        "--set",
        "boxcox.enabled=false",
        "-o",
        path(&ckpt),
    ]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn config_file_unknown_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let bank = small_bank(dir.path());
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"train.temprature": 0.1}"#).unwrap();
    let out = ccf(&[
        "eval",
        "--baseline",
        "--bank",
        &bank,
        "--seed",
        "1",
        "--config",
        path(&cfg),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("temprature"));
}

#[test]
fn train_eval_analyze_round() {
    let dir = tempfile::tempdir().unwrap();
    let bank = small_bank(dir.path());
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"train.architecture.hidden_dim": 16, "train.max_epochs": 3, "train.val_episodes": 5,
            "train.learning_rate": 0.001, "episode.episodes": 20}"#,
    )
    .unwrap();
    let ckpt = dir.path().join("m.ckpt");
    let out = ccf(&[
        "train",
        "--config",
        path(&cfg),
        "--bank",
        &bank,
        "--seed",
        "2",
        "--temperature",
        "0.1",
        "--shot",
        "1",
        "-o",
        path(&ckpt),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let log: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("m.log.json")).unwrap()).unwrap();
    assert_eq!(log["config"]["train.temperature"], 0.1);
    assert_eq!(log["config"]["train.architecture.hidden_dim"], 16);
    let restored = ccf::model::load_checkpoint(&ckpt).unwrap();
    assert_eq!(restored.meta.provenance["train.seed"], 2);
    assert!(restored.meta.boxcox.is_some());

    let eval = ccf(&[
        "eval",
        "--config",
        path(&cfg),
        "--checkpoint",
        path(&ckpt),
        "--bank",
        &bank,
        "--seed",
        "4",
        "--classifier",
        "cosine",
    ]);
    assert!(eval.status.success());
    let report: serde_json::Value = serde_json::from_slice(&eval.stdout).unwrap();
    assert_eq!(report["mode"], "ccf");
    assert_eq!(report["report"]["n_episodes"], 20);
    assert_eq!(report["config"]["classifier.kind"], "cosine");
    let again = ccf(&[
        "eval",
        "--config",
        path(&cfg),
        "--checkpoint",
        path(&ckpt),
        "--bank",
        &bank,
        "--seed",
        "4",
        "--classifier",
        "cosine",
    ]);
    assert_eq!(eval.stdout, again.stdout);

    let analyze = ccf(&[
        "analyze",
        "--checkpoint",
        path(&ckpt),
        "--bank",
        &bank,
        "--split",
        "novel",
    ]);
    assert!(analyze.status.success());
    let a: serde_json::Value = serde_json::from_slice(&analyze.stdout).unwrap();
    assert!(a["distances"]["mean_d"].as_f64().unwrap() > 0.0);
    assert!(a["distances"]["mean_d_hat"].as_f64().is_some());
    assert_eq!(a["distances"]["per_class"].as_array().unwrap().len(), 5);
}

#[test]
fn sweep_writes_one_row_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    let bank = small_bank(dir.path());
    let csv = dir.path().join("sweep.csv");
    let out = ccf(&[
        "sweep",
        "--bank",
        &bank,
        "--temps",
        "0.02,0.05,0.1,0.5,1,2",
        "--seeds",
        "3",
        "--seed",
        "0",
        "--episodes",
        "5",
        "--set",
        "train.architecture.hidden_dim=4",
        "--set",
        "train.max_epochs=1",
        "--set",
        "train.val_episodes=0",
        "-o",
        path(&csv),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 18);
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("sweep.json")).unwrap()).unwrap();
    assert_eq!(
        report["config"]["sweep.seeds"],
        serde_json::json!([0, 1, 2])
    );

    let empty = ccf(&[
        "sweep",
        "--bank",
        &bank,
        "--temps",
        "",
        "--seed",
        "0",
        "-o",
        path(&csv),
    ]);
    assert_eq!(empty.status.code(), Some(1));
}

#[test]
fn convert_round_trips_between_formats() {
    let dir = tempfile::tempdir().unwrap();
    let bank = small_bank(dir.path());
    let csv = dir.path().join("bank.csv");
    let back = dir.path().join("back.fbk");
    assert!(ccf(&["convert", &bank, path(&csv)]).status.success());
    assert!(dir.path().join("bank.splits.json").exists());
    assert!(ccf(&["convert", path(&csv), path(&back)]).status.success());
    assert_eq!(std::fs::read(&bank).unwrap(), std::fs::read(&back).unwrap());
}
