//! Final acceptance criterion: repeating any CLI invocation with the same
//! configuration and seed produces byte-identical output.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mq2"))
        .args(args)
        .env_remove("MQ2_OUT_DIR")
        .output()
        .expect("the mq2 binary must run")
}

#[test]
fn criterion_10_repeated_invocations_are_byte_identical() {
    let invocations: &[&[&str]] = &[
        &["dj", "--n", "6", "--builtin", "neither-demo"],
        &["dj", "--n", "10", "--builtin", "parity"],
        &["shor", "--N", "15", "--x", "7", "--bit", "2"],
        &["shor", "--N", "15", "--x", "7", "--bit", "2", "--format", "csv"],
        &["shor", "--N", "21", "--x", "2", "--bit", "1"],
        &["classical", "--builtin", "biased-majority", "--input", "", "--mode", "BPP"],
        &["classical", "--builtin", "scan-accept", "--input", "101", "--mode", "P"],
        &["verify", "--machine", "dj", "--n", "5", "--exact"],
        &["verify", "--machine", "shor", "--N", "15", "--x", "7", "--sampled", "100", "--seed", "1"],
        &["verify", "--broken-demo", "overweight"],
    ];
    for args in invocations {
        let first = run(args);
        let second = run(args);
        assert_eq!(
            first.status.code(),
            second.status.code(),
            "exit codes diverged for {args:?}"
        );
        assert_eq!(
            first.stdout, second.stdout,
            "stdout bytes diverged for {args:?}"
        );
        assert_eq!(
            first.stderr, second.stderr,
            "stderr bytes diverged for {args:?}"
        );
        assert!(
            !first.stdout.is_empty(),
            "every invocation in this list is expected to print a report: {args:?}"
        );
    }
}
