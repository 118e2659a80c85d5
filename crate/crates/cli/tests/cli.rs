use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_convexdist"))
        .args(args)
        .current_dir(dir)
        .env("CONVEXDIST_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn prove_two_four_thirds_prints_table_row() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "prove",
            "--targets",
            "2",
            "--alpha",
            "4/3",
            "--out",
            "c.toml",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let row = out.lines().nth(1).unwrap();
    let cols: Vec<&str> = row.split_whitespace().collect();
    assert_eq!(&cols[..3], ["{2}", "4/3", "4"]);
    assert!(stderr(&o).contains("level   1"));
    let cert = fs::read_to_string(dir.path().join("c.toml")).unwrap();
    assert!(cert.contains("kind = \"PROVED\""));
}

#[test]
fn prove_below_tightness_exhausts_with_survivors() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "prove",
            "--targets",
            "3",
            "--alpha",
            "7/5",
            "--max-levels",
            "5",
            "--out",
            "c.toml",
        ],
    );
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stdout(&o).contains("survivor 1:"));
    let cert = fs::read_to_string(dir.path().join("c.toml")).unwrap();
    assert!(cert.contains("[[survivors]]"));
}

#[test]
fn prove_rejects_bad_arguments() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["prove", "--targets", "2", "--alpha", "1/1"][..],
        &["prove", "--targets", "2", "--alpha", "2/3"],
        &["prove", "--alpha", "3/2"],
        &[
            "prove",
            "--targets",
            "2",
            "--alpha",
            "3/2",
            "--anchor",
            "left",
        ],
        &[
            "prove",
            "--targets",
            "2",
            "--alpha",
            "3/2",
            "--threads",
            "0",
        ],
        &["bogus"],
    ] {
        let o = run(dir.path(), args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn node_budget_exhausts() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "prove",
            "--targets",
            "3",
            "--alpha",
            "3/2",
            "--node-budget",
            "50",
            "--out",
            "c.toml",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("nodes budget"));
}

#[test]
fn replay_matches_fresh_certificates() {
    let dir = tempfile::tempdir().unwrap();
    run(
        dir.path(),
        &[
            "prove",
            "--targets",
            "2",
            "--alpha",
            "4/3",
            "--out",
            "p.toml",
        ],
    );
    let o = run(dir.path(), &["replay", "--cert", "p.toml"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("match: PROVED at L = 4"));

    run(
        dir.path(),
        &[
            "prove",
            "--targets",
            "3",
            "--alpha",
            "7/5",
            "--max-levels",
            "3",
            "--out",
            "e.toml",
        ],
    );
    let o = run(dir.path(), &["replay", "--cert", "e.toml"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("match: EXHAUSTED"));
}

#[test]
fn replay_detects_mismatch_and_foreign_rules() {
    let dir = tempfile::tempdir().unwrap();
    run(
        dir.path(),
        &[
            "prove",
            "--targets",
            "2",
            "--alpha",
            "4/3",
            "--out",
            "p.toml",
        ],
    );
    let text = fs::read_to_string(dir.path().join("p.toml")).unwrap();

    let forged = text.replace("levels = 4", "levels = 3");
    assert_ne!(forged, text);
    fs::write(dir.path().join("m.toml"), forged).unwrap();
    let o = run(dir.path(), &["replay", "--cert", "m.toml"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("mismatch"));

    let line = text
        .lines()
        .find(|l| l.starts_with("rule_version"))
        .unwrap();
    let foreign = text.replace(line, "rule_version = \"0000\"");
    fs::write(dir.path().join("r.toml"), foreign).unwrap();
    let o = run(dir.path(), &["replay", "--cert", "r.toml"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("incomparable"), "{}", stderr(&o));
}

#[test]
fn census_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["census", "--polygon", "regular:25", "--k", "4"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("m_<=4 = 100"));

    let o = run(
        dir.path(),
        &["census", "--polygon", "random:30,9", "--k", "3"],
    );
    let out = stdout(&o);
    let max: usize = out
        .lines()
        .find_map(|l| l.strip_prefix("max per level = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(max <= 5);

    fs::write(dir.path().join("sq.txt"), "4 2\n0 1\n1 1\n1 0\n0 0\n").unwrap();
    let o = run(dir.path(), &["census", "--polygon", "file:sq.txt"]);
    let out = stdout(&o);
    assert!(out.contains("m_1 = 2") && out.contains("m_2 = 4"), "{out}");

    fs::write(dir.path().join("bad.txt"), "4 2\n0 1\n1 0\n1 1\n0 0\n").unwrap();
    let o = run(dir.path(), &["census", "--polygon", "file:bad.txt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("points [0, 1, 2]"), "{}", stderr(&o));

    let o = run(dir.path(), &["census", "--polygon", "regular:9"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn soundness_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["soundness", "--trials", "300", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("fact1  narrowings"));

    let o = run(dir.path(), &["soundness", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"));

    let o = run(
        dir.path(),
        &["soundness", "--trials", "300", "--mutate", "flip-fact1"],
    );
    assert_eq!(o.status.code(), Some(1));
    let cx = fs::read_to_string(dir.path().join("convexdist-counterexample.txt")).unwrap();
    assert!(cx.contains("configuration:"));
}

#[test]
fn threads_flag_overrides_env() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_convexdist"))
        .args([
            "prove",
            "--targets",
            "2",
            "--alpha",
            "4/3",
            "--threads",
            "1",
            "--out",
            "c.toml",
        ])
        .current_dir(dir.path())
        .env("CONVEXDIST_THREADS", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let cert = fs::read_to_string(dir.path().join("c.toml")).unwrap();
    assert!(cert.contains("workers = 1"));
}
