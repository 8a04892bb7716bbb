//! Black-box tests of the `halin` binary: exit codes, byte-stable stdout,
//! and stderr routing, driven through real process invocations.

use std::io::Write;
use std::process::{Command, Output, Stdio};

const BIN: &str = env!("CARGO_BIN_EXE_halin");

const PRISM: &str = "a b\nb c\nc a\na d\nb e\nc f\nd e\ne f\nf d\n";
const CUBE: &str = "a b\nb c\nc d\nd a\ne f\nf g\ng h\nh e\na e\nb f\nc g\nd h\n";
const K4: &str = "a b\na c\na d\nb c\nb d\nc d\n";
const K4_MINUS_EDGE: &str = "a b\na c\na d\nb c\nb d\n";

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .take()
        .expect("stdin piped")
        .write_all(stdin.as_bytes())
        .expect("stdin accepts input");
    child.wait_with_output().expect("binary terminates")
}

fn stdout_of(out: &Output) -> &str {
    std::str::from_utf8(&out.stdout).expect("stdout is UTF-8")
}

fn stderr_of(out: &Output) -> &str {
    std::str::from_utf8(&out.stderr).expect("stderr is UTF-8")
}

#[test]
fn recognize_accepts_the_prism_as_halin() {
    let out = run(&["recognize", "--class", "halin"], PRISM);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out), "result: yes\n");
    assert!(stderr_of(&out).is_empty());
}

#[test]
fn recognize_rejects_the_truncated_tetrahedron_as_halin_but_not_as_d3() {
    let gen = run(&["generate", "--kind", "truncated-tetrahedron"], "");
    assert_eq!(gen.status.code(), Some(0));
    let graph = stdout_of(&gen).to_string();

    let halin = run(&["recognize", "--class", "halin"], &graph);
    assert_eq!(halin.status.code(), Some(1));
    assert_eq!(stdout_of(&halin), "result: no\n");

    let d3 = run(&["recognize", "--class", "d3"], &graph);
    assert_eq!(d3.status.code(), Some(0));
    assert_eq!(stdout_of(&d3), "result: yes\n");
}

#[test]
fn hamiltonian_reports_no_on_the_cube() {
    let out = run(&["hamiltonian"], CUBE);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_of(&out), "result: no\n");
}

#[test]
fn hamiltonian_emits_one_cycle_line_on_a_wheel() {
    let gen = run(&["generate", "--kind", "wheel", "--size", "10"], "");
    let out = run(&["hamiltonian"], stdout_of(&gen));
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.starts_with("result: yes\ncycle: "), "unexpected output: {text}");
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn decompose_splits_the_prism_into_tree_and_cycle() {
    let out = run(&["decompose"], PRISM);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_of(&out),
        "result: yes\n\
         tree-edge: a b\n\
         tree-edge: a c\n\
         tree-edge: a d\n\
         tree-edge: d e\n\
         tree-edge: d f\n\
         cycle-edge: b c\n\
         cycle-edge: b e\n\
         cycle-edge: c f\n\
         cycle-edge: e f\n"
    );
}

#[test]
fn embed_output_is_byte_stable_on_the_smallest_wheel() {
    let gen = run(&["generate", "--kind", "wheel", "--size", "4"], "");
    let out = run(&["embed"], stdout_of(&gen));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_of(&out),
        "result: yes\n\
         rotation h: r0 r1 r2\n\
         rotation r0: r1 h r2\n\
         rotation r1: r2 h r0\n\
         rotation r2: r0 h r1\n"
    );
}

#[test]
fn trace_flag_appends_events_and_a_dot_digraph() {
    let gen = run(&["generate", "--kind", "wheel", "--size", "5"], "");
    let out = run(&["recognize", "--class", "d3", "--trace"], stdout_of(&gen));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_of(&out),
        "result: yes\n\
         D3b r1 r0 r3 apex h\n\
         digraph trace {\n\
         \x20 e0 [label=\"D3b r1 r0 r3 apex h\"];\n\
         }\n"
    );
}

#[test]
fn generate_is_deterministic_and_output_parses_back() {
    let a = run(&["generate", "--kind", "random-d3", "--size", "25", "--seed", "4"], "");
    let b = run(&["generate", "--kind", "random-d3", "--size", "25", "--seed", "4"], "");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let check = run(&["recognize", "--class", "d3"], stdout_of(&a));
    assert_eq!(check.status.code(), Some(0));

    let glued = run(&["generate", "--kind", "glued", "--size", "3", "--seed", "9"], "");
    let check = run(&["recognize", "--class", "d3"], stdout_of(&glued));
    assert_eq!(check.status.code(), Some(0));
}

#[test]
fn oracle_reports_membership_and_3connectivity() {
    let out = run(&["oracle"], K4);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out), "result: yes\n3-connected: yes\n");

    let out = run(&["oracle"], K4_MINUS_EDGE);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_of(&out), "result: no\n3-connected: no\nwitness: cut pair a b\n");
}

#[test]
fn oracle_rejects_graphs_beyond_its_size_limit() {
    let gen = run(&["generate", "--kind", "wheel", "--size", "20"], "");
    let out = run(&["oracle"], stdout_of(&gen));
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(stderr_of(&out).contains("at most 12"));
}

#[test]
fn malformed_input_exits_2_with_a_line_number() {
    let out = run(&["recognize"], "lonely\n");
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(stderr_of(&out).contains("line 1"));
}

#[test]
fn unknown_flags_exit_2() {
    let out = run(&["recognize", "--bogus"], "");
    assert_eq!(out.status.code(), Some(2));
}
