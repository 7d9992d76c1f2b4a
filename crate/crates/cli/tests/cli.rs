use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_domino-orbits"))
        .args(args)
        .env_remove("DOMINO_ROW_POLICY")
        .env_remove("DOMINO_CONVENTION_NAMING")
        .env_remove("DOMINO_MOVE_SELECTION")
        .env_remove("DOMINO_MOVE_SET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_rank_two() {
    let o = run(&["classify", "--rank", "2", "--element", "-2,-1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("orbit: (2,2) II"), "{s}");
    assert!(s.contains("1 2\n1 2\n"), "{s}");
}

#[test]
fn rs_rank_one_is_vertical() {
    let o = run(&["rs", "--rank", "1", "--element", "-1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(s.matches("1\n1\n1:1,1;2,1").count(), 2, "{s}");
}

#[test]
fn cells_rank_two_has_four_classes() {
    let o = run(&["cells", "--rank", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("# classes 4\n"), "{s}");
    assert_eq!(s.lines().filter(|l| !l.starts_with('#')).count(), 8);
}

#[test]
fn json_mirrors_text() {
    let o = run(&["--format", "json", "classify", "--rank", "2", "--element", "-2,-1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["orbit"], "(2,2) II");
    assert_eq!(v["tableau"]["serialized"], "1:1,1;2,1\n2:1,2;2,2");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["classify", "--rank", "2", "--element", "1,x"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--rank", "3", "--element", "-2,-1"]).status.code(), Some(2));
    assert_eq!(run(&["cells", "--rank", "9"]).status.code(), Some(2));
    assert_eq!(run(&["op", "nope", "--rank", "2", "--element", "1,2"]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_one() {
    // H needs a hook shape; (2,2) is not one.
    let o = run(&["op", "H", "--rank", "2", "--element", "-2,-1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn op_on_a_pair_matches_op_on_the_element() {
    let by_element = stdout(&run(&["op", "H", "--rank", "2", "--element", "1,2"]));
    let by_pair = stdout(&run(&[
        "op", "H", "--rank", "2", "--left", "1:1,1;1,2 2:1,3;1,4", "--right", "1:1,1;1,2 2:1,3;1,4",
    ]));
    assert_eq!(by_element, by_pair);
}

#[test]
fn cycles_report_both_conventions() {
    let s = stdout(&run(&["cycles", "--rank", "3", "--element", "3,-1,2"]));
    assert!(s.contains("convention D:\n  {1,2,3} open removes (2,3) adds (1,4)"), "{s}");
    assert!(s.contains("{1} anchored"), "{s}");
}

#[test]
fn output_is_independent_of_jobs() {
    let one = run(&["--jobs", "1", "cells", "--rank", "3"]);
    let many = run(&["--jobs", "4", "cells", "--rank", "3"]);
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("domino-orbits-cli-{}.tsv", std::process::id()));
    let o = run(&["--output", path.to_str().unwrap(), "classify", "--rank", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(written.lines().count(), 8);
    assert!(written.contains("-2,-1\t(2,2) II\t"), "{written}");
}

#[test]
fn verify_is_reproducible() {
    let a = run(&["verify"]);
    let b = run(&["verify"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with("10 passed, 0 failed\n"));
}
