use std::path::Path;
use std::process::{Command, Output};

use vishift_cli::report::Report;

fn vishift(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vishift"))
        .args(args)
        .arg("--cache-dir")
        .arg(cache)
        .env_remove("VISHIFT_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Report {
    serde_json::from_str(&stdout(o)).unwrap()
}

fn column(r: &Report, table: &str, col: &str) -> Vec<String> {
    let t = r.body.table(table).unwrap();
    t.column(col)
        .unwrap()
        .into_iter()
        .map(String::from)
        .collect()
}

#[test]
fn dims_of_residue_field() {
    let dir = tempfile::tempdir().unwrap();
    let o = vishift(
        &["dims", "k0.vimod", "--max", "4", "--format", "json"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r.schema, 1);
    assert_eq!(column(&r, "dims", "dim"), ["1", "0", "0", "0", "0"]);
}

#[test]
fn dims_of_algebra_object() {
    let dir = tempfile::tempdir().unwrap();
    let r = json(&vishift(
        &["dims", "A.vimod", "--format", "json"],
        dir.path(),
    ));
    assert_eq!(column(&r, "dims", "dim"), ["1"; 6]);
}

#[test]
fn fit_of_lines() {
    let dir = tempfile::tempdir().unwrap();
    let o = vishift(
        &["fit", "itriv1.vimod", "--max", "5", "--from", "1"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("P(X) = X - 1"), "{}", stdout(&o));
}

#[test]
fn selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = vishift(
        &[
            "selftest",
            "--q",
            "2",
            "--q",
            "3",
            "--format",
            "json",
            "--no-cache",
        ],
        dir.path(),
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let r = json(&o);
    assert!(r.body.verdicts.len() >= 10);
    assert!(r.passed());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("pq.vimod");
    std::fs::write(
        &bad,
        r#"{"q": 3, "coeff": "mod 3", "generators": [{"degree": 0, "rep": "trivial"}]}"#,
    )
    .unwrap();
    let o = vishift(&["dims", bad.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unsupported field"));

    let float = dir.path().join("float.vimod");
    std::fs::write(
        &float,
        r#"{"q": 2, "generators": [{"degree": 0, "rep": "trivial"}],
            "relations": [{"degree": 1, "rep": "trivial", "map": [[0.5]]}]}"#,
    )
    .unwrap();
    assert_eq!(
        vishift(&["dims", float.to_str().unwrap()], dir.path())
            .status
            .code(),
        Some(2)
    );

    assert_eq!(
        vishift(&["dims", "k0", "--max", "6"], dir.path())
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        vishift(&["certify", "k0"], dir.path()).status.code(),
        Some(4)
    );
    assert_eq!(
        vishift(&["certify", "k0", "--bar", "1"], dir.path())
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        vishift(&["dims", "no-such-module"], dir.path())
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn equivariance_violation_names_degree_and_generator() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.vimod");
    std::fs::write(
        &path,
        r#"{"q": 3, "generators": [{"degree": 0, "rep": "trivial"}],
            "relations": [{"degree": 1, "rep": "regular", "map": [[1, 0]]}]}"#,
    )
    .unwrap();
    let o = vishift(&["dims", path.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(
        err.contains("degree 1") && err.contains("generator 0"),
        "{err}"
    );
}

#[test]
fn deterministic_and_cache_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["localcoh", "itriv1_k0", "--format", "json", "--compare"];
    let cold = vishift(&args, dir.path());
    let warm = vishift(&args, dir.path());
    let mut uncached = args.to_vec();
    uncached.push("--no-cache");
    let none = vishift(&uncached, dir.path());
    assert_eq!(cold.status.code(), Some(0));
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(cold.stdout, none.stdout);
    assert!(!stdout(&cold).contains("timestamp"));

    let with_meta = json(&vishift(
        &["localcoh", "itriv1_k0", "--format", "json"],
        dir.path(),
    ));
    let meta = with_meta.meta.unwrap();
    assert_eq!((meta.cache.hits, meta.cache.misses), (1, 0));
}

#[test]
fn env_var_overrides_flag() {
    let flag_dir = tempfile::tempdir().unwrap();
    let env_dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_vishift"))
        .args(["h0", "A", "--cache-dir"])
        .arg(flag_dir.path())
        .env("VISHIFT_CACHE_DIR", env_dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(flag_dir.path()).unwrap().count(), 0);
    assert_eq!(std::fs::read_dir(env_dir.path()).unwrap().count(), 1);
}

#[test]
fn tsv_and_human_formats() {
    let dir = tempfile::tempdir().unwrap();
    let tsv = stdout(&vishift(
        &["h1", "k0", "--max", "3", "--format", "tsv"],
        dir.path(),
    ));
    assert!(
        tsv.contains("## H1\nn\tdim\n0\t0\n1\t1\n2\t0\n3\t0\n"),
        "{tsv}"
    );
    let human = stdout(&vishift(
        &["regularity", "itriv1_k0", "--max", "4"],
        dir.path(),
    ));
    assert!(human.contains("PASS  t1 - 1 <= r"), "{human}");
}

#[test]
fn shift_commands() {
    let dir = tempfile::tempdir().unwrap();
    let r = json(&vishift(
        &["shift", "itriv1", "--max", "4", "--format", "json"],
        dir.path(),
    ));
    assert_eq!(column(&r, "dims", "dim"), ["1", "3", "7", "15"]);
    let r = json(&vishift(
        &["shift", "k0", "--bar", "--max", "3", "--format", "json"],
        dir.path(),
    ));
    assert_eq!(column(&r, "dims", "dim"), ["0", "0", "0"]);
    let r = json(&vishift(
        &["shift", "A", "--bar", "--count", "2", "--format", "json"],
        dir.path(),
    ));
    assert_eq!(column(&r, "dims", "dim"), ["1", "1", "1", "1"]);
}

#[test]
fn torsion_oracle_and_delta() {
    let dir = tempfile::tempdir().unwrap();
    let o = vishift(
        &[
            "torsion",
            "itriv1_k0",
            "--max",
            "3",
            "--oracle",
            "--format",
            "json",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(
        column(&r, "torsion", "dim"),
        column(&r, "torsion", "brute_force")
    );
    assert_eq!(r.body.get("h0"), Some("0"));
    let r = json(&vishift(
        &["delta", "itriv2", "--format", "json"],
        dir.path(),
    ));
    assert_eq!(r.body.get("delta"), Some("2"));
}

#[test]
fn modular_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let r = json(&vishift(
        &["fit", "itriv2", "--coeff", "mod 5", "--format", "json"],
        dir.path(),
    ));
    assert_eq!(r.body.get("P(X)"), Some("1/6*X^2 - 1/2*X + 1/3"));
    assert!(r.passed());
}
