use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn convexa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_convexa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn load(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn equator_exit_codes() {
    let ok = convexa(&[
        "equator-verify",
        "--kappa",
        "4",
        "--tau",
        "0.5",
        "--theta",
        "0",
        "--grid",
        "101",
    ]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    assert_eq!(
        code(&convexa(&[
            "equator-verify",
            "--kappa",
            "-1",
            "--tau",
            "0.5"
        ])),
        2
    );
    assert_eq!(code(&convexa(&["equator-verify", "--kappa", "4"])), 2);
    assert_eq!(
        code(&convexa(&[
            "equator-verify",
            "--kappa",
            "4",
            "--tau",
            "0.5",
            "--grid",
            "4"
        ])),
        2
    );
    assert_eq!(
        code(&convexa(&["equator-verify", "--space", "heisenberg tau=1"])),
        2
    );
    let round = convexa(&[
        "equator-verify",
        "--space",
        "berger kappa=4 tau=1",
        "--grid",
        "21",
    ]);
    assert_eq!(code(&round), 0);
    assert!(stdout(&round).contains("K_e vanishes identically"));
}

#[test]
fn malformed_specs_are_input_errors() {
    for args in [
        vec!["heis-planes", "--surface", "heis-plane a=0 b=0 c=0 d=1"],
        vec!["vertical-planes", "--surface", "equator theta=0"],
        vec!["pinching", "--base", "torus r=1"],
        vec!["comparability", "--kappa", "0"],
        vec!["inequalities", "--pair", "1"],
        vec!["classify", "--surface", "equator theta=0"],
        vec!["gen-fixture", "klein-bottle"],
        vec!["no-such-command"],
    ] {
        assert_eq!(code(&convexa(&args)), 2, "{args:?}");
    }
}

#[test]
fn classify_exit_codes_follow_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    for (name, verdict, exit) in [
        ("sphere", "Sphere", 0),
        ("remark-tube", "NonEmbedded", 1),
        ("torus", "Undetermined", 3),
        ("heis-paraboloid", "PlaneTopEnd", 0),
    ] {
        let mesh = dir.path().join(format!("{name}.obj"));
        assert_eq!(code(&convexa(&["gen-fixture", name, "--out", p(&mesh)])), 0);
        let spec = format!("custom mesh={}", p(&mesh));
        let o = convexa(&["classify", "--surface", &spec]);
        assert_eq!(stdout(&o).lines().next(), Some(verdict), "{name}");
        assert_eq!(code(&o), exit, "{name}");
    }
}

#[test]
fn bad_meshes_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("none.off");
    assert_eq!(code(&convexa(&["classify", "--mesh", p(&missing)])), 2);

    let garbage = dir.path().join("garbage.off");
    std::fs::write(&garbage, "OFF\n3 1 0\n0 0 0\n1 0 0\n").unwrap();
    assert_eq!(
        code(&convexa(&[
            "classify",
            "--mesh",
            p(&garbage),
            "--space",
            "heisenberg tau=1"
        ])),
        2
    );

    // three triangles on one edge
    let fan = dir.path().join("fan.off");
    std::fs::write(
        &fan,
        "OFF\n# space: heisenberg tau=1\n5 3 0\n0 0 0\n1 0 0\n0 1 1\n0 -1 1\n0 0 -1\n3 0 1 2\n3 0 1 3\n3 0 1 4\n",
    )
    .unwrap();
    assert_eq!(code(&convexa(&["classify", "--mesh", p(&fan)])), 2);

    // open mesh without a truncation header
    let open = dir.path().join("open.off");
    std::fs::write(
        &open,
        "OFF\n# space: heisenberg tau=1\n3 1 0\n0 0 0\n1 0 0\n0 1 1\n3 0 1 2\n",
    )
    .unwrap();
    assert_eq!(code(&convexa(&["classify", "--mesh", p(&open)])), 2);

    // no space anywhere
    let bare = dir.path().join("bare.off");
    std::fs::write(&bare, "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 1\n3 0 1 2\n").unwrap();
    assert_eq!(code(&convexa(&["classify", "--mesh", p(&bare)])), 2);
}

#[test]
fn artifacts_are_deterministic_apart_from_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let o = convexa(&[
            "heis-planes",
            "--tau",
            "0.5",
            "--random",
            "3",
            "--grid",
            "12",
            "--out",
            p(dir.path()),
            "--name",
            name,
        ]);
        assert_eq!(code(&o), 0);
        let mut doc = load(&dir.path().join(format!("{name}.json")));
        assert!(doc["metadata"]["generated_unix"].is_u64());
        doc.as_object_mut().unwrap().remove("metadata");
        serde_json::to_string(&doc).unwrap()
    };
    assert_eq!(run("a"), run("b"));

    let csv = |threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_convexa"))
            .env("CONVEXA_THREADS", threads)
            .args(["comparability", "--samples", "200", "--format", "csv"])
            .output()
            .unwrap();
        assert_eq!(code(&o), 0);
        stdout(&o)
    };
    assert_eq!(csv("1"), csv("3"));
}

#[test]
fn report_aggregates_runs() {
    let dir = tempfile::tempdir().unwrap();
    let d = p(dir.path());
    let empty = convexa(&["report", "--dir", d]);
    assert_eq!(code(&empty), 2);
    assert_eq!(
        code(&convexa(&["report", "--dir", &format!("{d}/missing")])),
        2
    );

    assert_eq!(
        code(&convexa(&[
            "equator-verify",
            "--kappa",
            "4",
            "--tau",
            "0.5",
            "--grid",
            "41",
            "--out",
            d
        ])),
        0
    );
    assert_eq!(code(&convexa(&["inequalities", "--out", d])), 0);
    assert_eq!(code(&convexa(&["pinching", "--out", d])), 0);

    let profile = std::fs::read_to_string(dir.path().join("equator-verify_profile.csv")).unwrap();
    let mut rows = profile.lines();
    assert_eq!(rows.next(), Some("x,k1,k2,H,Ke_oracle,Ke_closed"));
    let first: Vec<&str> = rows.next().unwrap().split(',').collect();
    assert_eq!(first[0], "0");
    assert_eq!(first[5], "-2.25");

    let summary = dir.path().join("summary.json");
    let table = dir.path().join("summary.csv");
    let o = convexa(&[
        "report",
        "--dir",
        d,
        "--out",
        p(&summary),
        "--csv",
        p(&table),
    ]);
    assert_eq!(code(&o), 0);
    let doc = load(&summary);
    let checks = doc["checks"].as_array().unwrap();
    // equator + adjudication, 3 pinching + 3 bonnet + 3 radius, 2 pinching ratios
    assert_eq!(checks.len(), 13);
    assert_eq!(doc["profiles"][0], "equator-verify_profile.csv");
    let names: Vec<&str> = checks
        .iter()
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert_eq!(std::fs::read_to_string(&table).unwrap().lines().count(), 14);

    // the summary itself is not an input on a second pass
    let again = convexa(&["report", "--dir", d]);
    assert_eq!(serde_json::from_str::<Value>(&stdout(&again)).unwrap(), doc);
}

#[test]
fn failing_checks_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let d = p(dir.path());
    let art = serde_json::json!({
        "schema": "convexa.artifact.v1",
        "command": "x",
        "exit_code": 1,
        "reports": [{"check": "c", "params": {}, "metrics": {}, "max_residual": 1.0, "slack": null, "pass": false, "notes": []}],
        "details": null,
    });
    std::fs::write(dir.path().join("x.json"), art.to_string()).unwrap();
    assert_eq!(code(&convexa(&["report", "--dir", d])), 1);
}

#[test]
fn gen_fixture_writes_every_mesh() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&convexa(&["gen-fixture", "all", "--out", p(dir.path())])),
        0
    );
    let mut names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(names.len(), convexa_core::fixtures::FIXTURE_NAMES.len());
    let text = std::fs::read_to_string(dir.path().join("graph.off")).unwrap();
    assert!(text.contains("# space: product base=(sphere r=1) fiber=(line)"));
    assert!(text.contains("# truncation: 20"));
}
