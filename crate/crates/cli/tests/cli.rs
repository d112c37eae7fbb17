//! Drives the `ansec` binary end to end.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn ansec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ansec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ansec-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_recipe(dir: &Path, body: &str) -> String {
    let path = dir.join("recipe.toml");
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const SMALL: &str = r#"
[scenario]
t = 4
r = 3
e = 2
snr_db = 5.0

[sweep]
variable = "snr_db"
grid = [0.0, 10.0]
s1 = [1, 3]
methods = ["exact", "monte-carlo"]
trials = 1000
seed = 9
"#;

#[test]
fn sweep_writes_one_row_per_combination() {
    let dir = scratch("rows");
    let recipe = write_recipe(&dir, SMALL);
    let out = dir.join("rates.csv");
    let run = ansec(&["sweep", &recipe, "--out", out.to_str().unwrap()]);
    assert_eq!(
        run.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );

    let mut reader = csv::Reader::from_path(&out).unwrap();
    let header: Vec<String> = reader
        .headers()
        .unwrap()
        .iter()
        .map(str::to_owned)
        .collect();
    assert_eq!(
        header,
        [
            "variable",
            "value",
            "s1",
            "method",
            "rate_bits",
            "stderr",
            "wall_ms"
        ]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2 * 2 * 2);
    for row in &rows {
        assert_eq!(&row[0], "snr_db");
        let rate: f64 = row[4].parse().unwrap();
        assert!(rate.is_finite() && rate >= 0.0);
        assert_eq!(row[5].is_empty(), &row[3] == "exact");
        assert_eq!(&row[6], "0");
    }
}

#[test]
fn seed_flag_changes_only_simulated_rows() {
    let dir = scratch("seed");
    let recipe = write_recipe(&dir, SMALL);
    let a = ansec(&["sweep", &recipe, "--seed", "1"]);
    let b = ansec(&["sweep", &recipe, "--seed", "2"]);
    let (a, b) = (
        String::from_utf8(a.stdout).unwrap(),
        String::from_utf8(b.stdout).unwrap(),
    );
    for (x, y) in a.lines().zip(b.lines()) {
        if x.contains(",exact,") {
            assert_eq!(x, y);
        } else if x.contains(",monte-carlo,") {
            assert_ne!(x, y);
        }
    }
}

#[test]
fn infeasible_split_is_an_in_row_error() {
    let dir = scratch("inrow");
    let recipe = write_recipe(
        &dir,
        &SMALL.replace(
            "variable = \"snr_db\"\ngrid = [0.0, 10.0]",
            "variable = \"r_antennas\"\ngrid = [2.0, 3.0]",
        ),
    );
    let run = ansec(&["sweep", &recipe, "--trials", "1000"]);
    assert_eq!(run.status.code(), Some(2));
    let text = String::from_utf8(run.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 2 * 2);
    // s1 = 3 cannot fit three receive antennas short
    assert!(
        text.lines()
            .any(|l| l.starts_with("r_antennas,2,3,exact,NaN,error:")),
        "{text}"
    );
    assert!(text
        .lines()
        .any(|l| l.starts_with("r_antennas,3,3,exact,") && !l.contains("NaN")));
}

#[test]
fn configuration_errors_exit_with_one() {
    let dir = scratch("config");
    let missing = dir.join("absent.toml");
    assert_eq!(
        ansec(&["sweep", missing.to_str().unwrap()]).status.code(),
        Some(1)
    );

    let typo = write_recipe(&dir, &SMALL.replace("snr_db = 5.0", "snr_dB = 5.0"));
    assert_eq!(ansec(&["sweep", &typo]).status.code(), Some(1));

    let recipe = write_recipe(&dir, SMALL);
    assert_eq!(
        ansec(&["sweep", &recipe, "--trials", "10"]).status.code(),
        Some(1)
    );
    assert_eq!(
        ansec(&["sweep", &recipe, "--tolerance", "0"]).status.code(),
        Some(1)
    );

    let eve_too_big = write_recipe(&dir, &SMALL.replace("e = 2", "e = 4"));
    assert_eq!(ansec(&["sweep", &eve_too_big]).status.code(), Some(1));
}

#[test]
fn search_reports_the_best_split() {
    let run = ansec(&["search-s1", "--snr-db", "10"]);
    assert_eq!(run.status.code(), Some(0));
    let text = String::from_utf8(run.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("s1,rate_bits"));
    assert_eq!(text.lines().last(), Some("# best s1 = 2"));
}

#[test]
fn negative_control_fails_validation() {
    let run = ansec(&["validate", "--trials", "10000", "--negative-control"]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8(run.stdout).unwrap().contains("mismatch"));
}

#[test]
fn pdf_dump_writes_one_table_per_eigenvalue() {
    let dir = scratch("pdf");
    let run = ansec(&[
        "pdf-dump",
        "--antennas",
        "3",
        "--b",
        "2",
        "--points",
        "20",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(
        run.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    for k in 1..=2 {
        let text = std::fs::read_to_string(dir.join(format!("pdf_k{k}.txt"))).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(format!("# a=3 b=2 k={k}").as_str()));
        assert_eq!(lines.next(), Some("# x pdf"));
        let values: Vec<f64> = lines
            .map(|l| l.split(' ').nth(1).unwrap().parse().unwrap())
            .collect();
        assert_eq!(values.len(), 20);
        assert!(values.iter().all(|&p| p >= 0.0));
    }
    assert!(!dir.join("pdf_k3.txt").exists());
}
