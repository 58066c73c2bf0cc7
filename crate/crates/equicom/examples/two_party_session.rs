//! A full two-party protocol run over the in-process loopback wire, with
//! both transcripts printed at the end.
//!
//! ```bash
//! cargo run -p equicom --example two_party_session
//! ```

use std::thread;

use equicom::group::fixed_test_params;
use equicom::protocol::{
    loopback_pair, run_committer_over_wire, run_receiver_over_wire, ReceiverMode,
};
use num_bigint::BigUint;

fn main() {
    let group = fixed_test_params();
    let (mut receiver_wire, mut committer_wire) = loopback_pair();

    // The receiver thread announces the group, then serves three sessions:
    // FIRST_MSG out, COMMIT and OPEN in, verdict out.
    let receiver_group = group.clone();
    let receiver = thread::spawn(move || {
        run_receiver_over_wire(
            &mut receiver_wire,
            receiver_group,
            ReceiverMode::Honest {
                seed: b"two-party example".to_vec(),
            },
            3,
        )
        .expect("receiver run succeeds")
    });

    let values = [
        BigUint::from(5u32),
        BigUint::from(0u32),
        BigUint::from(10u32),
    ];
    let committer_report = run_committer_over_wire(&mut committer_wire, &values, b"committer seed")
        .expect("committer run succeeds");
    let receiver_report = receiver.join().unwrap();

    for outcome in &receiver_report.outcomes {
        match (&outcome.accepted, &outcome.value) {
            (true, Some(value)) => println!("session {}: accepted value={value}", outcome.session),
            _ => println!("session {}: rejected", outcome.session),
        }
    }

    println!(
        "\ncommitter transcript ({} frames):",
        committer_report.transcript.len()
    );
    for entry in committer_report.transcript.entries() {
        println!(
            "  step {:2} session {} {:4} {}",
            entry.step,
            entry.message.session,
            entry.direction.label(),
            entry.message.kind()
        );
    }
    assert!(receiver_report.all_accepted());
}
