use std::fs;
use std::process::{Command, Output};

fn lmcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lmcalc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn export_is_canonical_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dims.json");
    let o = lmcalc(&["export", "ring-dims", "--n", "4", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(&path).unwrap(), "[\n  1,\n  11,\n  11,\n  1\n]\n");
    let a = lmcalc(&["export", "series", "--n", "2", "--order", "3", "--seed", "9"]);
    let b = lmcalc(&["export", "series", "--n", "2", "--order", "3", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
    let parts: serde_json::Value = serde_json::from_str(&stdout(&lmcalc(&["export", "partitions", "--n", "3"]))).unwrap();
    assert_eq!(parts.as_array().unwrap().len(), 13);
}

#[test]
fn suites_exit_codes() {
    let o = lmcalc(&["verify", "lemma", "--n", "3", "--format", "json"]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["config"]["lemma_n_max"], 3);
    assert!(report["version"].is_string());
    assert!(report.get("wall_time_ms").is_none());
    let again = lmcalc(&["verify", "lemma", "--n", "3", "--format", "json"]);
    assert_eq!(o.stdout, again.stdout);

    let p = lmcalc(&["verify", "poincare", "--n", "6"]);
    assert!(p.status.success());
    assert!(stdout(&p).contains("p_4 = q^3 + 11q^2 + 11q + 1"));

    assert_eq!(lmcalc(&["homology", "--n", "3", "--flipped"]).status.code(), Some(1));
    assert_eq!(lmcalc(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(lmcalc(&["ring", "--n", "9"]).status.code(), Some(2));
}

#[test]
fn correlator_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    fs::write(
        &good,
        r#"{"dimF": 2, "indices": [{"label": 1, "parity": 0}, {"label": 2, "parity": 0}],
            "top": [{"seq": [1], "matrix": [["1","1"],["0","1"]]},
                    {"seq": [2], "matrix": [["2","0"],["0","2"]]},
                    {"seq": [1, 2], "matrix": [["2","2"],["0","2"]]}]}"#,
    )
    .unwrap();
    let o = lmcalc(&["correlators", "--check", good.to_str().unwrap(), "--exhaustive"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(lmcalc(&["correlators", "--roundtrip", good.to_str().unwrap()]).status.success());

    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        r#"{"dimF": 2, "indices": [{"label": 1, "parity": 0}, {"label": 2, "parity": 0}],
            "top": [{"seq": [1], "matrix": [["0","1"],["0","0"]]},
                    {"seq": [2], "matrix": [["0","0"],["1","0"]]}]}"#,
    )
    .unwrap();
    let o = lmcalc(&["correlators", "--check", bad.to_str().unwrap(), "--order", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL linear relations"));

    let series = dir.path().join("series.json");
    let o = lmcalc(&["export", "series", "--n", "2", "--order", "4", "--out", series.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(lmcalc(&["correlators", "--from-series", series.to_str().unwrap()]).status.success());
    assert_eq!(
        lmcalc(&["correlators", "--from-series", series.to_str().unwrap(), "--order", "9"]).status.code(),
        Some(2)
    );
}
