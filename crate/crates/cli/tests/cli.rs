use std::process::{Command, Output};

fn labs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_labs")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_bundled_dataset() {
    let o = labs(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("ok ")).count(), 51);
    assert!(text.contains("ok L=301 published=7.7173 E=5870"));
    assert!(text.ends_with("51 of 51 records verified\n"));
}

#[test]
fn verify_mismatch_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "5 2.0000 1D\n").unwrap();
    let o = labs(&["verify", "--dataset", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(labs(&["eval", "1"]).status.code(), Some(2));
    assert_eq!(
        labs(&["search", "--length", "12", "--mode", "triangle"]).status.code(),
        Some(2)
    );
    assert_eq!(
        labs(&["search", "--length", "12", "--mode", "skew"]).status.code(),
        Some(2)
    );
    assert_eq!(labs(&["eval", "XYZ", "--length", "4"]).status.code(), Some(2));
    assert_eq!(
        labs(&["spectrum", "0", "--length", "1", "--samples", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn eval_barker4() {
    let o = labs(&["eval", "1", "--length", "4"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "length: 4\nenergy: 2\nmerit_factor: 4.0000\nmerit_factor_full: 4.0\npsl: 1\nskew_symmetric: false\n"
    );
}

#[test]
fn spectrum_csv() {
    let o = labs(&["spectrum", "0", "--length", "1", "--samples", "4"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,modulus"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    assert!(rows
        .iter()
        .all(|r| r.split(',').nth(1).unwrap().parse::<f64>().unwrap() == 1.0));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let o = labs(&[
        "spectrum",
        "00CA",
        "--length",
        "13",
        "--samples",
        "64",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(path).unwrap().lines().count(), 65);
}

#[test]
fn search_appends_and_rechecks() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("runs.jsonl");
    let out = path.to_str().unwrap();
    for seed in ["1", "2"] {
        let o = labs(&[
            "search",
            "--length",
            "21",
            "--seed",
            seed,
            "--workers",
            "2",
            "--max-flips",
            "20000",
            "--out",
            out,
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let rec: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
        assert_eq!(rec["mode"], "skew");
        assert_eq!(rec["energy"], 26);
    }
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 2);

    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    let hex = first["hex"].as_str().unwrap();
    let o = labs(&["eval", hex, "--length", "21"]);
    assert!(stdout(&o).contains("energy: 26\nmerit_factor: 8.4808\n"));
    assert!(stdout(&o).contains("skew_symmetric: true"));

    let o = labs(&["recheck", out]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2 of 2 records reproduce their energy\n");

    std::fs::write(&path, text.replace("\"energy\":26", "\"energy\":25")).unwrap();
    assert_eq!(labs(&["recheck", out]).status.code(), Some(1));
}

#[test]
fn budget_env_override() {
    let o = Command::new(env!("CARGO_BIN_EXE_labs"))
        .args(["search", "--length", "101", "--seed", "3"])
        .env("LABS_MAX_FLIPS", "777")
        .output()
        .unwrap();
    assert!(o.status.success());
    let rec: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(rec["flips"], 777);
    assert_eq!(rec["config"]["max_flips"], 777);
}

#[test]
fn oracle_and_codec_commands() {
    let o = labs(&["oracle", "--length", "11"]);
    assert!(stdout(&o).contains("optimal_energy: 5\n"));
    let o = labs(&["encode", "+++++--++-+-+"]);
    assert_eq!(stdout(&o), "13 00CA\n");
    let o = labs(&["decode", "00ca", "--length", "13"]);
    assert_eq!(stdout(&o), "+++++--++-+-+\n");
}
