use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_scramblekit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn machine(o: &Output) -> Vec<String> {
    stdout(o).lines().filter(|l| l.starts_with("::")).map(str::to_string).collect()
}

fn value(o: &Output, key: &str) -> Option<String> {
    let prefix = format!("::{key}=");
    stdout(o).lines().find_map(|l| l.strip_prefix(&prefix).map(str::to_string))
}

fn generate(dir: &Path, name: &str, family: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut args = vec!["gen"];
    args.extend_from_slice(family);
    args.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let o = run(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn gen_writes_graph_and_dot() {
    let o = run(&["gen", "torus", "4", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("n 16\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("e ")).count(), 32);
    let o = run(&["gen", "plied-path", "3", "--dot"]);
    assert!(stdout(&o).contains("0 -- 1 [label=3];"));
}

#[test]
fn gen_rejects_bad_parameters() {
    assert_eq!(run(&["gen", "cycle", "1"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "torus", "4"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "grid", "a", "2"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "nonsense"]).status.code(), Some(2));
}

#[test]
fn invariants_on_prism() {
    let dir = TempDir::new().unwrap();
    let g = generate(dir.path(), "y42.txt", &["prism", "4", "2"]);
    let o = run(&["invariants", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value(&o, "tw").as_deref(), Some("3"));
    assert_eq!(value(&o, "sn_lower").as_deref(), Some("4"));
    assert_eq!(value(&o, "gon").as_deref(), Some("4"));
    assert_eq!(value(&o, "sandwich_ok").as_deref(), Some("true"));
}

#[test]
fn invariants_across_a_subdivision_and_on_a_torus() {
    let dir = TempDir::new().unwrap();
    let left = generate(dir.path(), "l.txt", &["fig4-left"]);
    let right = generate(dir.path(), "r.txt", &["fig4-right"]);
    let torus = generate(dir.path(), "t.txt", &["torus", "3", "3"]);
    let gon = |p: &Path| value(&run(&["invariants", p.to_str().unwrap(), "--gon"]), "gon");
    assert_eq!(gon(&left).as_deref(), Some("2"));
    assert_eq!(gon(&right).as_deref(), Some("3"));
    let o = run(&["invariants", torus.to_str().unwrap(), "--gon", "--sn-lower"]);
    assert_eq!(value(&o, "gon").as_deref(), Some("6"));
    assert_eq!(value(&o, "sn_lower").as_deref(), Some("6"));
    assert_eq!(value(&o, "tw"), None);
}

#[test]
fn invariants_exit_codes() {
    let dir = TempDir::new().unwrap();
    let point = generate(dir.path(), "p.txt", &["path", "1"]);
    assert_eq!(run(&["invariants", point.to_str().unwrap()]).status.code(), Some(2));
    let prism = generate(dir.path(), "y.txt", &["prism", "4", "2"]);
    let o = run(&["invariants", prism.to_str().unwrap(), "--sn-exact"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["invariants", prism.to_str().unwrap(), "--tw", "--tw-cap", "5"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["invariants", prism.to_str().unwrap(), "--gon", "--gon-cap", "3"]);
    assert_eq!(o.status.code(), Some(3));
    let bad = write(dir.path(), "bad.txt", "n 3\ne 0 1 1\n");
    assert_eq!(run(&["invariants", bad.to_str().unwrap()]).status.code(), Some(2));
    let garbage = write(dir.path(), "garbage.txt", "n 2\nedge 0 1\n");
    let o = run(&["tw", garbage.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let missing = dir.path().join("missing.txt");
    assert_eq!(run(&["tw", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn order_prints_certificates() {
    let dir = TempDir::new().unwrap();
    let wheel = generate(dir.path(), "w.txt", &["fig2"]);
    let s = write(dir.path(), "s.txt", "egg 0 3\negg 1 4\negg 5 6\negg 2\n");
    let o = run(&["order", wheel.to_str().unwrap(), s.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(value(&o, "order").as_deref(), Some("4"));
    assert!(stdout(&o).contains("hitting-set: "));
    assert!(stdout(&o).contains("cut-pair: "));

    let p = generate(dir.path(), "g3.txt", &["plied-path", "3"]);
    let singles = write(dir.path(), "v.txt", "egg 0\negg 1\negg 2\n");
    assert_eq!(value(&run(&["order", p.to_str().unwrap(), singles.to_str().unwrap()]), "order").as_deref(), Some("3"));

    let p3 = generate(dir.path(), "p3.txt", &["path", "3"]);
    let whole = write(dir.path(), "all.txt", "egg 0 1 2\n");
    let o = run(&["order", p3.to_str().unwrap(), whole.to_str().unwrap()]);
    assert_eq!(value(&o, "order").as_deref(), Some("1"));
    assert_eq!(value(&o, "cut").as_deref(), Some("inf"));

    let split = write(dir.path(), "split.txt", "egg 0 2\n");
    assert_eq!(run(&["order", p3.to_str().unwrap(), split.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn divisor_commands() {
    let dir = TempDir::new().unwrap();
    let c4 = generate(dir.path(), "c4.txt", &["cycle", "4"]);
    let d = write(dir.path(), "d.txt", "# two chips on v0\nd 4\nc 0 2\n");
    let o = run(&["reduce", c4.to_str().unwrap(), d.to_str().unwrap(), "2"]);
    assert!(o.status.success());
    assert_eq!(value(&o, "reduced").as_deref(), Some("0 0 2 0"));
    assert!(machine(&o).iter().any(|l| l.starts_with("::fire=")));
    let o = run(&["rank", c4.to_str().unwrap(), d.to_str().unwrap()]);
    assert_eq!(value(&o, "positive_rank").as_deref(), Some("true"));
    let one = write(dir.path(), "one.txt", "d 4\nc 0 1\n");
    let o = run(&["rank", c4.to_str().unwrap(), one.to_str().unwrap()]);
    assert_eq!(value(&o, "positive_rank").as_deref(), Some("false"));
    let o = run(&["gonality", c4.to_str().unwrap()]);
    assert_eq!(value(&o, "gon").as_deref(), Some("2"));
    let negative = write(dir.path(), "neg.txt", "d 4\nc 0 -1\n");
    assert_eq!(run(&["rank", c4.to_str().unwrap(), negative.to_str().unwrap()]).status.code(), Some(2));
    let wrong = write(dir.path(), "wrong.txt", "d 3\nc 0 1\n");
    assert_eq!(run(&["rank", c4.to_str().unwrap(), wrong.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn treewidth_and_scramble_search() {
    let dir = TempDir::new().unwrap();
    let y = generate(dir.path(), "y.txt", &["prism", "4", "2"]);
    let o = run(&["tw", y.to_str().unwrap()]);
    assert_eq!(value(&o, "tw").as_deref(), Some("3"));
    assert_eq!(value(&o, "tw.order").unwrap().split(' ').count(), 8);
    let o = run(&["sn-lower", y.to_str().unwrap()]);
    assert_eq!(value(&o, "sn_lower").as_deref(), Some("4"));
    let c4 = generate(dir.path(), "c4.txt", &["cycle", "4"]);
    let o = run(&["sn-exact", c4.to_str().unwrap()]);
    assert_eq!(value(&o, "sn_exact").as_deref(), Some("2"));
    assert_eq!(value(&o, "sn_exact.exhaustive").as_deref(), Some("true"));
    assert_eq!(run(&["sn-exact", y.to_str().unwrap()]).status.code(), Some(3));
    let o = run(&["export-dot", c4.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("graph \"c4\" {"));
}

#[test]
fn sweep_grids_and_random() {
    let o = run(&["sweep", "grid", "1..4", "1..4", "--gon"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = machine(&o);
    let instances: Vec<&String> = lines.iter().filter(|l| l.starts_with("::instance")).collect();
    assert_eq!(instances.len(), 16);
    for m in 1..=4 {
        for n in 1..=4 {
            let line = instances.iter().find(|l| l.contains(&format!("family=grid({m},{n}) "))).unwrap();
            if m * n > 1 {
                assert!(line.contains(&format!(" gon={} ", m.min(n))), "{line}");
            }
        }
    }
    let o = run(&["sweep", "random", "6", "0.5", "2", "--seeds", "50", "--sn-exact", "--tw", "--gon", "--sn-lower"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("::sweep instances=50 ok=50 violations=0"));
}

#[test]
fn sweep_budget_and_bad_ranges() {
    let o = run(&["sweep", "cycle", "3..40", "--budget", "0"]);
    assert!(stdout(&o).contains("skipped=38"));
    assert_eq!(run(&["sweep", "cycle", "5..3"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "grid", "1..2"]).status.code(), Some(2));
}

#[test]
fn machine_output_is_stable_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let g = generate(dir.path(), "r.txt", &["random", "7", "0.5", "2", "--seed", "11"]);
    let runs: Vec<Vec<String>> = ["1", "4"]
        .iter()
        .map(|t| {
            let o = bin()
                .args(["invariants", g.to_str().unwrap()])
                .env("SCRAMBLEKIT_THREADS", t)
                .output()
                .unwrap();
            assert!(o.status.success());
            machine(&o)
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert!(!runs[0].iter().any(|l| l.contains("µs") || l.contains("ms")));
    let o = bin().args(["tw", g.to_str().unwrap()]).env("SCRAMBLEKIT_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}
