//! End-to-end runs of the binary: outputs byte-for-byte where the
//! format is contractual, exit codes everywhere.

use std::process::{Command, Output};

fn natdens(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_natdens")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn density_closed_form_lines() {
    let out = natdens(&["density", "reg([1],[1,0])", "--precision", "8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "1/2 (closed form), approximant error ≤ 1/8\napproximant at n=8: 209/417\n"
    );
}

#[test]
fn density_decimal_rendering_is_marked() {
    let out = natdens(&["density", "reg([],[1])", "--precision", "4", "--decimal", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("1 (closed form)"), "{text}");
    assert!(text.contains("(decimal rendering: 1.000)"), "{text}");
}

#[test]
fn density_without_certificate_is_a_usage_error() {
    let out = natdens(&["density", "blocks()"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("no convergence certificate"));
}

#[test]
fn density_accepts_a_supplied_rate() {
    let out = natdens(&["density", "blocks()", "--modulus", "4n", "--precision", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("taken on trust"), "{text}");
    // frequency of the oscillator at 4*2 = 8: bits 1,0,1,1,0,0,1,1
    assert!(text.contains("approximant at n=2: 5/8"), "{text}");
}

#[test]
fn malformed_modulus_is_a_usage_error() {
    let out = natdens(&["density", "blocks()", "--modulus", "n^2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("modulus"));
    let out = natdens(&["density", "blocks()", "--modulus", "0n+3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("strictly increasing"));
}

#[test]
fn parse_errors_carry_positions_and_exit_2() {
    let out = natdens(&["freq", "reg([1],[", "--upto", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("syntax error at 1:10"));
    let out = natdens(&["decide", "reg([1],[])"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("period"));
}

#[test]
fn freq_formats() {
    let out = natdens(&["freq", "reg([],[1,0])", "--upto", "4", "--format", "tsv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1\t1\t1\n2\t1\t2\n3\t2\t3\n4\t1\t2\n");
    let out = natdens(&["freq", "reg([],[1,0])", "--upto", "2"]);
    assert_eq!(stdout(&out), "freq(1) = 1\nfreq(2) = 1/2\n");
}

#[test]
fn check_accepts_honest_certificates() {
    let out = natdens(&["check", "reg([1],[1,0])"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("consistent: modulus 52n+1"));
}

#[test]
fn check_refutes_a_lying_rate_with_exit_1() {
    // 0,0,0,0,1,1,…: the identity rate claims settling long before the
    // flip to 1s arrives
    let out = natdens(&["check", "reg([0,0,0,0],[1])", "--modulus", "n", "--grid-n", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("REFUTED"));
}

#[test]
fn decide_verbs() {
    let out = natdens(&["decide", "reg([0,0],[0])"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "AllZero\n");

    let out = natdens(&["decide", "reg([0,0],[0,1])"]);
    assert_eq!(stdout(&out), "WitnessAt(4)\n");

    let out = natdens(&["decide", "--pp", "reg([],[1,0])"]);
    assert_eq!(stdout(&out), "ProbPositive(1/2)\n");

    let out = natdens(&["decide", "--pp", "reg([1],[0])"]);
    assert_eq!(stdout(&out), "ProbZero\n");

    // budgeted search on a non-periodic expression never answers AllZero
    let out = natdens(&["decide", "blocks() and bot", "--budget", "8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "Undecided(8)\n");

    let out = natdens(&["decide", "blocks()", "--budget", "8"]);
    assert_eq!(stdout(&out), "WitnessAt(1)\n");

    // probability-level decision through a supplied rate
    let out = natdens(&["decide", "--pp", "blocks()", "--modulus", "4n", "--budget", "8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "WitnessAt(1)\n");

    let out = natdens(&["decide", "--pp", "blocks() and bot"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oscillate_report_shapes() {
    let out = natdens(&["oscillate", "blocks()", "--upto", "64"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("tail window"), "{text}");
    assert!(text.contains("persistent gap"), "{text}");

    let out = natdens(&["oscillate", "blocks()", "--upto", "64", "--format", "tsv"]);
    let text = stdout(&out);
    // boundary rows only: index, numerator, denominator, min, max
    for line in text.lines() {
        assert_eq!(line.split('\t').count(), 5, "{line}");
    }
    assert!(text.lines().count() >= 8);
    assert!(text.starts_with("1\t1\t1\t1\t1\n2\t1\t2\t1/2\t1\n"), "{text}");
}

#[test]
fn audit_exit_codes_follow_the_report() {
    let out = natdens(&["audit", "kolmogorov", "--size", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("regular-subalgebra"));

    let out = natdens(&["audit", "kolmogorov", "--fault"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("strictness"));
    assert!(text.contains("FAIL"));
    assert!(text.contains("1/10"));

    let out = natdens(&["audit", "fuzzy", "--size", "2"]);
    assert_eq!(out.status.code(), Some(0));

    let out = natdens(&["audit", "density", "--samples", "10", "--seed", "11"]);
    assert_eq!(out.status.code(), Some(0));

    let out = natdens(&["audit", "fuzzy", "--fault"]);
    assert_eq!(out.status.code(), Some(2));

    let out = natdens(&["audit", "fuzzy", "--size", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommands_exit_2() {
    let out = natdens(&["integrate", "bot"]);
    assert_eq!(out.status.code(), Some(2));
}
