use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_debtclear"))
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("debtclear-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn stdout_of(cmd: &mut Command) -> String {
    let out = cmd.output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn solve_prints_plan() {
    let file = scratch("example.txt", "5 5\n1 2 10\n2 3 5\n3 1 5\n1 4 5\n4 5 10\n");
    assert_eq!(stdout_of(bin().arg("solve").arg(&file)), "2\n1 5 10\n4 2 5\n");
}

#[test]
fn solve_reports_line_of_bad_input() {
    let file = scratch("loop.txt", "2 1\n1 1 5\n");
    let out = bin().arg("solve").arg(&file).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn run_executes_script() {
    let file = scratch("script.txt", "NODE a\nNODE b\nNODE c\nARC a b 5\nARC b c 5\nQUERY\n");
    assert_eq!(stdout_of(bin().arg("run").arg(&file)), "query 1\na c 5\n");
}

#[test]
fn gen_then_oracle() {
    let text = stdout_of(bin().args(["gen", "3"]));
    assert!(text.starts_with("8 7\n1 2 1\n"));
    let file = scratch("three.txt", &text);
    assert_eq!(stdout_of(bin().arg("oracle").arg(&file)), "active 8\nparts 1\ntransactions 7\n");
}

#[test]
fn oracle_refuses_large_instances() {
    let file = scratch("six.txt", &stdout_of(bin().args(["gen", "6"])));
    let out = bin().arg("oracle").arg(&file).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("limit 16"));
}

#[test]
fn bench_writes_csv() {
    let dir = std::env::temp_dir().join(format!("debtclear-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("bench.csv");
    stdout_of(bin().args(["bench", "--tests", "1,2", "--reps", "1", "--csv"]).arg(&csv));
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().nth(1).unwrap().starts_with("1,static,once,1,"));
}
