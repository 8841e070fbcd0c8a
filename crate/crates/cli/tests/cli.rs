use std::path::Path;
use std::process::{Command, Output};

const PROBLEM: &str = r#"
seed = 3

[mesh]
a = 0.0
b = 1.0
n = 32

[nfunction]
family = "power"
p = 3.0

[problem]
s = 0.5
alpha = 0.5
beta = 0.5
f = 1
k = 1
epsilon_min = 1e-4
"#;

fn orlicz(dir: &Path, config: &str, args: &[&str]) -> Output {
    let cfg = dir.join("config.toml");
    std::fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_orlicz"))
        .args(args)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn verify_writes_one_row_per_suite() {
    let dir = tempfile::tempdir().unwrap();
    let o = orlicz(dir.path(), "seed = 7\n[verify]\nsuites = [\"young\", \"picone\"]\nsamples = 1e4\n", &["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("out/report.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "name,samples,violations,min_gap,witness");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("young,40000,0,"));
    assert!(lines[2].starts_with("picone,40000,0,"));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn verify_rejects_empty_suite_list() {
    let dir = tempfile::tempdir().unwrap();
    let o = orlicz(dir.path(), "[verify]\nsuites = []\nsamples = 10\n", &["verify"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no suites selected"));
}

#[test]
fn malformed_config_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let o = orlicz(dir.path(), "[mesh]\na = 0.0\nb = \n", &["solve"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn missing_config_is_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_orlicz")).arg("norm").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

fn norm_config(u: &str) -> String {
    format!("[mesh]\na = 0.0\nb = 1.0\nn = 50\n[nfunction]\nfamily = \"power\"\np = 2.0\n[norm]\nu = {u}\nkind = \"LG\"\n")
}

fn norm_value(o: &Output) -> f64 {
    let text = stdout(o);
    let field = text.split("value = ").nth(1).unwrap();
    field.split_whitespace().next().unwrap().parse().unwrap()
}

#[test]
fn norm_examples() {
    let dir = tempfile::tempdir().unwrap();
    let o = orlicz(dir.path(), &norm_config("1"), &["norm"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("norm = 0.70711"), "{}", stdout(&o));
    let o = orlicz(dir.path(), &norm_config("0"), &["norm"]);
    assert_eq!(norm_value(&o), 0.0);
    let one = norm_value(&orlicz(dir.path(), &norm_config("\"x + bump(0.3, 0.1)\""), &["norm"]));
    let two = norm_value(&orlicz(dir.path(), &norm_config("\"2 * (x + bump(0.3, 0.1))\""), &["norm"]));
    assert!((two - 2.0 * one).abs() < 1e-12 * two);
}

#[test]
fn expression_error_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = orlicz(dir.path(), &norm_config("\"1 + sin(x)\""), &["norm"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 9, column 10"), "{}", stderr(&o));
}

#[test]
fn torsion_solve_reports_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "[mesh]\na = -1.0\nb = 1.0\nn = 100\n[problem]\ns = 0.5\npreset = \"torsion\"\n";
    let o = orlicz(dir.path(), cfg, &["solve"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("torsion relative L2 error"));
    let err: f64 = std::fs::read_to_string(dir.path().join("out/torsion_error.txt"))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!(err < 0.05);
    let manifest = std::fs::read_to_string(dir.path().join("out/manifest.txt")).unwrap();
    for line in manifest.lines().filter_map(|l| l.strip_prefix("output = ")) {
        assert!(dir.path().join("out").join(line).exists(), "{line}");
    }
    assert!(manifest.contains("warning = out-of-hypothesis: beta = 0"));
}

#[test]
fn compare_ordered_data_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = orlicz(dir.path(), &format!("{PROBLEM}\n[compare]\nf = 2\n"), &["compare"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("PASS violated_nodes=0"));
}

#[test]
fn compare_rejects_unordered_data() {
    let dir = tempfile::tempdir().unwrap();
    let o = orlicz(dir.path(), &format!("{PROBLEM}\n[compare]\nf = 0.5\n"), &["compare"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn uniqueness_flags_large_beta() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = PROBLEM.replace("beta = 0.5", "beta = 2.5");
    let o = orlicz(dir.path(), &cfg, &["uniqueness"]);
    assert_ne!(o.status.code(), Some(2), "{}", stderr(&o));
    let manifest = std::fs::read_to_string(dir.path().join("out/manifest.txt")).unwrap();
    assert!(manifest.contains("warning = out-of-hypothesis: uniqueness needs beta < p- - 1"));
}

#[test]
fn symmetry_with_asymmetric_data_is_a_control_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = PROBLEM.replace("f = 1", "f = \"1 + x\"");
    let o = orlicz(dir.path(), &format!("{cfg}\n[init]\nguess = \"random\"\n"), &["symmetry"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("CONTROL asymmetry="));
}

#[test]
fn nonconvergence_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let o = orlicz(dir.path(), &format!("{PROBLEM}\n[solver]\nmax_iter = 2\n"), &["solve"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("INCONCLUSIVE"));
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!("{PROBLEM}\n[init]\nguess = \"random\"\n[solver]\nmax_iter = 1\n");
    orlicz(dir.path(), &cfg, &["solve", "--seed", "42"]);
    let manifest = std::fs::read_to_string(dir.path().join("out/manifest.txt")).unwrap();
    assert!(manifest.contains("seed = 42\n"));
}

#[test]
fn custom_nonlinearity_checked() {
    let dir = tempfile::tempdir().unwrap();
    let bad = format!("{PROBLEM}nonlinearity = \"pow(u, 3)\"\n");
    let o = orlicz(dir.path(), &bad, &["solve"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nonincreasing"), "{}", stderr(&o));
    let good = format!("{PROBLEM}nonlinearity = \"pow(u, -0.5) + pow(u, 0.5)\"\n");
    let o = orlicz(dir.path(), &good, &["solve"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}
