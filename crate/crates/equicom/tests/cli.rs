//! Binary-level tests: exit codes, stdout formats, and file flows through
//! the real `equicom` executable, plus fast in-process loops.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn equicom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equicom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).to_string()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn arg(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

/// The worked toy example: openings (5,7) and (2,8) of Z=16 under B=8.
#[test]
fn extract_prints_the_toy_trapdoor() {
    let dir = TempDir::new().unwrap();
    let o1 = path(&dir, "first.open");
    let o2 = path(&dir, "second.open");
    std::fs::write(&o1, [5u8, 7]).unwrap();
    std::fs::write(&o2, [2u8, 8]).unwrap();

    let output = equicom(&[
        "extract",
        "--toy",
        "--opening1",
        arg(&o1),
        "--opening2",
        arg(&o2),
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout(&output), "b=3\n");

    // Hex mode prints the bare fixed-width scalar.
    let output = equicom(&[
        "extract",
        "--toy",
        "--opening1",
        arg(&o1),
        "--opening2",
        arg(&o2),
        "--output",
        "hex",
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout(&output), "03\n");
}

#[test]
fn extract_rejects_degenerate_openings_as_malformed() {
    let dir = TempDir::new().unwrap();
    let o1 = path(&dir, "first.open");
    std::fs::write(&o1, [5u8, 7]).unwrap();
    let output = equicom(&[
        "extract",
        "--toy",
        "--opening1",
        arg(&o1),
        "--opening2",
        arg(&o1),
    ]);
    assert_eq!(output.status.code(), Some(3));
    assert!(stdout(&output).is_empty(), "diagnostics stay off stdout");
}

#[test]
fn hiding_check_reports_full_agreement_on_the_toy_group() {
    let output = equicom(&["hiding-check", "--toy"]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout(&output), "identical distributions: 11/11 values\n");
}

#[test]
fn commit_verify_equivocate_extract_chain() {
    let dir = TempDir::new().unwrap();
    let params = path(&dir, "group.params");
    let key = path(&dir, "commit.key");
    let trapdoor = path(&dir, "trapdoor.secret");
    let commitment = path(&dir, "value.commitment");
    let opening = path(&dir, "value.opening");
    let reopened = path(&dir, "revised.opening");

    let output = equicom(&[
        "gen-params",
        "--q-bits",
        "64",
        "--seed",
        "chain",
        "--out",
        arg(&params),
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).contains("p = 0x"));

    let output = equicom(&[
        "setup",
        "--params",
        arg(&params),
        "--trapdoor",
        "--seed",
        "chain-setup",
        "--out",
        arg(&key),
        "--secret-out",
        arg(&trapdoor),
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).starts_with("B = 0x"));

    let output = equicom(&[
        "commit",
        "--key",
        arg(&key),
        "--value",
        "41",
        "--seed",
        "chain-commit",
        "--commitment-out",
        arg(&commitment),
        "--opening-out",
        arg(&opening),
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).starts_with("Z = 0x"));

    let output = equicom(&[
        "verify",
        "--key",
        arg(&key),
        "--commitment",
        arg(&commitment),
        "--opening",
        arg(&opening),
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout(&output), "verified\n");

    let output = equicom(&[
        "equivocate",
        "--key",
        arg(&key),
        "--trapdoor",
        arg(&trapdoor),
        "--opening",
        arg(&opening),
        "--new-value",
        "1000",
        "--opening-out",
        arg(&reopened),
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).is_empty(), "openings never reach stdout");

    let output = equicom(&[
        "verify",
        "--key",
        arg(&key),
        "--commitment",
        arg(&commitment),
        "--opening",
        arg(&reopened),
    ]);
    assert_eq!(
        output.status.code(),
        Some(0),
        "equivocated opening verifies"
    );

    // The double opening gives back exactly the trapdoor written by setup.
    let output = equicom(&[
        "extract",
        "--params",
        arg(&params),
        "--opening1",
        arg(&opening),
        "--opening2",
        arg(&reopened),
        "--output",
        "hex",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let extracted = stdout(&output).trim().to_string();
    let trapdoor_hex = hex::encode(std::fs::read(&trapdoor).unwrap());
    assert_eq!(extracted, trapdoor_hex);

    // Extract output fed back into equivocate works as a trapdoor: the
    // opening it produces is accepted by verify.
    let stolen = path(&dir, "stolen.trapdoor");
    std::fs::write(&stolen, hex::decode(&extracted).unwrap()).unwrap();
    let third = path(&dir, "third.opening");
    let output = equicom(&[
        "equivocate",
        "--key",
        arg(&key),
        "--trapdoor",
        arg(&stolen),
        "--opening",
        arg(&opening),
        "--new-value",
        "77",
        "--opening-out",
        arg(&third),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let output = equicom(&[
        "verify",
        "--key",
        arg(&key),
        "--commitment",
        arg(&commitment),
        "--opening",
        arg(&third),
    ]);
    assert_eq!(output.status.code(), Some(0), "stolen trapdoor equivocates");
}

#[test]
fn verify_rejects_a_tampered_opening_with_exit_1() {
    let dir = TempDir::new().unwrap();
    let key = path(&dir, "commit.key");
    let commitment = path(&dir, "value.commitment");
    let opening = path(&dir, "value.opening");

    equicom(&[
        "setup",
        "--toy",
        "--public-seed",
        "tamper",
        "--out",
        arg(&key),
    ]);
    equicom(&[
        "commit",
        "--key",
        arg(&key),
        "--value",
        "5",
        "--seed",
        "tamper",
        "--commitment-out",
        arg(&commitment),
        "--opening-out",
        arg(&opening),
    ]);

    let mut bytes = std::fs::read(&opening).unwrap();
    bytes[0] = (bytes[0] + 1) % 11;
    std::fs::write(&opening, bytes).unwrap();

    let output = equicom(&[
        "verify",
        "--key",
        arg(&key),
        "--commitment",
        arg(&commitment),
        "--opening",
        arg(&opening),
    ]);
    assert_eq!(output.status.code(), Some(1));
    assert_eq!(stdout(&output), "rejected\n");
}

#[test]
fn malformed_key_file_exits_3() {
    let dir = TempDir::new().unwrap();
    let key = path(&dir, "bad.key");
    std::fs::write(&key, [0u8, 1, 22, 11, 2, 8]).unwrap(); // p=22 is composite
    let output = equicom(&["hiding-check", "--toy", "--key", arg(&key)]);
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_2() {
    let output = equicom(&["commit", "--key"]);
    assert_eq!(output.status.code(), Some(2));
    let output = equicom(&["extract", "--toy"]);
    assert_eq!(output.status.code(), Some(2));
    // Two group sources at once.
    let dir = TempDir::new().unwrap();
    let o1 = path(&dir, "o1");
    std::fs::write(&o1, [5u8, 7]).unwrap();
    let output = equicom(&[
        "extract",
        "--toy",
        "--gen-q-bits",
        "16",
        "--gen-seed",
        "s",
        "--opening1",
        arg(&o1),
        "--opening2",
        arg(&o1),
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn demo_protocol_runs_over_loopback_and_tcp() {
    let dir = TempDir::new().unwrap();
    let transcript = path(&dir, "run.eqct");

    let output = equicom(&[
        "demo-protocol",
        "--toy",
        "--sessions",
        "3",
        "--seed",
        "demo",
        "--values",
        "5,0,9",
        "--transcript",
        arg(&transcript),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("session 0: accepted value=5"));
    assert!(text.contains("session 1: accepted value=0"));
    assert!(text.contains("session 2: accepted value=9"));
    assert!(transcript.exists());

    let output = equicom(&[
        "demo-protocol",
        "--toy",
        "--sessions",
        "2",
        "--seed",
        "demo-tcp",
        "--tcp",
        "--trapdoor-receiver",
    ]);
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn demo_protocol_is_reproducible_per_seed() {
    let run = || {
        stdout(&equicom(&[
            "demo-protocol",
            "--toy",
            "--sessions",
            "2",
            "--seed",
            "fixed",
        ]))
    };
    assert_eq!(run(), run());
}

#[test]
fn simulate_runs_a_schedule_file() {
    let dir = TempDir::new().unwrap();
    let schedule = path(&dir, "two.schedule");
    std::fs::write(
        &schedule,
        "# two interleaved sessions\n0:first_msg\n1:first_msg\n0:commit\n1:commit\n0:open\n1:open\n",
    )
    .unwrap();
    let report = path(&dir, "run.report");
    let transcript = path(&dir, "run.eqct");

    let output = equicom(&[
        "simulate",
        "--toy",
        "--schedule",
        arg(&schedule),
        "--strategy",
        "equivocator",
        "--revised",
        "4,9",
        "--receiver",
        "trapdoor",
        "--seed",
        "sim",
        "--report",
        arg(&report),
        "--transcript",
        arg(&transcript),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("strategy: equivocator"));
    assert!(text.contains("session 0: outcome=accepted opened=4"));
    assert!(text.contains("session 1: outcome=accepted opened=9"));
    assert_eq!(std::fs::read_to_string(&report).unwrap(), text);
    assert!(transcript.exists());

    // Same run again: byte-identical report.
    let again = equicom(&[
        "simulate",
        "--toy",
        "--schedule",
        arg(&schedule),
        "--strategy",
        "equivocator",
        "--revised",
        "4,9",
        "--receiver",
        "trapdoor",
        "--seed",
        "sim",
    ]);
    assert_eq!(stdout(&again), text);
}

#[test]
fn simulate_equivocator_needs_trapdoor_receiver() {
    let dir = TempDir::new().unwrap();
    let schedule = path(&dir, "one.schedule");
    std::fs::write(&schedule, "0:first_msg\n0:commit\n0:open\n").unwrap();
    let output = equicom(&[
        "simulate",
        "--toy",
        "--schedule",
        arg(&schedule),
        "--strategy",
        "equivocator",
        "--seed",
        "sim",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn simulate_rejects_bad_schedule_files_as_malformed() {
    let dir = TempDir::new().unwrap();
    let schedule = path(&dir, "bad.schedule");
    std::fs::write(&schedule, "0:open\n").unwrap();
    let output = equicom(&[
        "simulate",
        "--toy",
        "--schedule",
        arg(&schedule),
        "--strategy",
        "honest",
        "--seed",
        "sim",
    ]);
    assert_eq!(output.status.code(), Some(3));
}

/// In-process loop: commit-then-verify round-trips through files for 100
/// seeds, exit 0 each time.
#[test]
fn hundred_seed_commit_verify_round_trip() {
    let dir = TempDir::new().unwrap();
    let key = path(&dir, "commit.key");
    assert_eq!(
        equicom::cli::run([
            "equicom",
            "setup",
            "--toy",
            "--public-seed",
            "loop",
            "--out",
            arg(&key),
        ]),
        0
    );
    for seed in 0..100u32 {
        let commitment = path(&dir, "loop.commitment");
        let opening = path(&dir, "loop.opening");
        let seed_text = format!("seed-{seed}");
        let value = format!("{}", seed * 7 + 1);
        assert_eq!(
            equicom::cli::run([
                "equicom",
                "commit",
                "--key",
                arg(&key),
                "--value",
                &value,
                "--seed",
                &seed_text,
                "--commitment-out",
                arg(&commitment),
                "--opening-out",
                arg(&opening),
            ]),
            0
        );
        assert_eq!(
            equicom::cli::run([
                "equicom",
                "verify",
                "--key",
                arg(&key),
                "--commitment",
                arg(&commitment),
                "--opening",
                arg(&opening),
            ]),
            0,
            "seed {seed} failed to verify"
        );
    }
}

/// Fixed seeds must give bit-identical artifacts across invocations.
#[test]
fn randomized_subcommands_are_bit_reproducible() {
    let dir = TempDir::new().unwrap();
    let mut artifacts = Vec::new();
    for round in 0..2 {
        let params = path(&dir, &format!("params-{round}"));
        let key = path(&dir, &format!("key-{round}"));
        let secret = path(&dir, &format!("secret-{round}"));
        let commitment = path(&dir, &format!("z-{round}"));
        let opening = path(&dir, &format!("o-{round}"));
        equicom(&[
            "gen-params",
            "--q-bits",
            "32",
            "--seed",
            "repro",
            "--out",
            arg(&params),
        ]);
        equicom(&[
            "setup",
            "--params",
            arg(&params),
            "--trapdoor",
            "--seed",
            "repro",
            "--out",
            arg(&key),
            "--secret-out",
            arg(&secret),
        ]);
        equicom(&[
            "commit",
            "--key",
            arg(&key),
            "--value",
            "12345",
            "--seed",
            "repro",
            "--commitment-out",
            arg(&commitment),
            "--opening-out",
            arg(&opening),
        ]);
        artifacts.push((
            std::fs::read(&params).unwrap(),
            std::fs::read(&key).unwrap(),
            std::fs::read(&secret).unwrap(),
            std::fs::read(&commitment).unwrap(),
            std::fs::read(&opening).unwrap(),
        ));
    }
    assert_eq!(artifacts[0], artifacts[1]);
}
