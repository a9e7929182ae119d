use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use oneshot_cli::{run, ExperimentConfig, ExperimentKind, EXIT_CONFIG};

fn oneshot(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oneshot"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn sample_writes_halton_points() {
    let dir = tempfile::tempdir().unwrap();
    let o = oneshot(&["sample", "--method", "Halton", "-n", "3", "-d", "2", "--seed", "1"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("points.csv")).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows, vec![vec![0.5, 1.0 / 3.0], vec![0.25, 2.0 / 3.0], vec![0.75, 1.0 / 9.0]]);
}

#[test]
fn unbounded_sample_with_middle_point_starts_at_origin() {
    let dir = tempfile::tempdir().unwrap();
    let o = oneshot(&["sample", "--method", "RandomPlusMiddlePoint", "-n", "4", "-d", "3", "--unbounded", "--seed", "2"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("points.csv")).unwrap();
    assert_eq!(text.lines().nth(1).unwrap(), "0,0,0");
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn bench_with_one_method_and_one_replica_writes_one_record() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.toml");
    fs::write(
        &config,
        "seed = 4\nreplicas = 1\nmethods = [\"ScrHammersley\"]\n[grid]\ndims = [[10, 5]]\nbudgets = [20]\nfunctions = [\"Cigar\"]\nprior = \"NormalStd\"\n",
    )
    .unwrap();
    let o = oneshot(&["bench", "--config", config.to_str().unwrap()], &dir.path().join("out"));
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("out/results.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "function,d,d_prime,budget,method,replica,regret,min_distance,seed");
    assert!(lines[1].starts_with("Cigar,10,5,20,ScrHammersley,0,"));
    assert!(!dir.path().join("out/win_table.txt").exists());
}

#[test]
fn check_bounds_writes_one_line_per_bound() {
    let dir = tempfile::tempdir().unwrap();
    let o = oneshot(&["check-bounds", "--seed", "9", "--replicas", "2000"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("bounds.txt")).unwrap();
    let names: Vec<&str> = text.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(names, ["check=lhs_corner_bound", "check=projected_jittered", "check=middle_point_theorem"]);
    assert!(text.lines().all(|l| l.contains(" pass=true")));
}

#[test]
fn config_errors_exit_2_with_one_line_and_no_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = oneshot(&["sample", "--method", "Hallton", "--seed", "1"], dir.path());
    assert_eq!(o.status.code(), Some(EXIT_CONFIG));
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error kind=config code=2 message="));
    assert!(err.contains("nearest valid name: Halton"));
    assert!(!dir.path().join("points.csv").exists());

    let missing_seed = oneshot(&["sample"], dir.path());
    assert_eq!(missing_seed.status.code(), Some(EXIT_CONFIG));
    let bad_flag = oneshot(&["sample", "--bogus"], dir.path());
    assert_eq!(bad_flag.status.code(), Some(EXIT_CONFIG));
    assert_eq!(stderr(&bad_flag).lines().count(), 1);
}

#[test]
fn too_small_samples_are_rejected_without_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = oneshot(&["sample", "--method", "RescaleRandom", "-n", "1", "--seed", "1"], dir.path());
    assert_eq!(o.status.code(), Some(EXIT_CONFIG), "{}", stderr(&o));
    assert!(stderr(&o).contains("rescaling needs at least two points"));
    assert!(!dir.path().join("points.csv").exists());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sample", "--method", "QORctg0.4ScrHammersley", "-n", "50", "-d", "7", "--seed", "11"];
    assert!(oneshot(&args, &dir.path().join("a")).status.success());
    assert!(oneshot(&args, &dir.path().join("b")).status.success());
    assert_eq!(
        fs::read(dir.path().join("a/points.csv")).unwrap(),
        fs::read(dir.path().join("b/points.csv")).unwrap()
    );
}

#[test]
fn bench_then_report() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = ExperimentConfig::new(ExperimentKind::Bench, 5);
    c.out = dir.path().to_path_buf();
    c.replicas = Some(4);
    c.methods = vec!["Random".into(), "MetaRctgScrHammersley".into()];
    c.grid.dims = vec![[6, 6]];
    c.grid.budgets = vec![10, 40];
    let outcome = run(&c).unwrap();
    assert_eq!(outcome.exit_code(), 0);
    let table = fs::read_to_string(dir.path().join("win_table.txt")).unwrap();
    assert!(table.contains("replicas=4"));
    assert!(table.lines().any(|l| l.starts_with("6 (6)")));

    let mut r = ExperimentConfig::new(ExperimentKind::Report, 5);
    r.out = dir.path().to_path_buf();
    run(&r).unwrap();
    let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(lines[0], "function,d,d_prime,budget,method,replicas,mean_regret,stderr_regret,q0.1,q0.5,q0.9");
    // 3 functions x 2 budgets x 2 methods
    assert_eq!(lines.len(), 13);
    assert!(lines[1..].iter().all(|l| l.split(',').nth(5) == Some("4")));
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.toml");
    fs::write(&config, "kind = \"sample\"\nseed = 1\n[sample]\nmethod = \"Sobol\"\nn = 4\nd = 2\ntarget = \"UnitCube\"\n").unwrap();
    let o = oneshot(&["sample", "--config", config.to_str().unwrap(), "-n", "2"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("points.csv")).unwrap();
    assert_eq!(text, "x0,x1\n0.5,0.5\n0.75,0.25\n");
    let wrong_kind = oneshot(&["bench", "--config", config.to_str().unwrap()], dir.path());
    assert_eq!(wrong_kind.status.code(), Some(EXIT_CONFIG));
}
