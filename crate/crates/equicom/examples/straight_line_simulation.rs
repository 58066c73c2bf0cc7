//! Straight-line simulation: with per-session trapdoors, a simulator
//! commits before knowing what it will open to, never replays a message,
//! and still gets every session accepted.
//!
//! ```bash
//! cargo run -p equicom --example straight_line_simulation
//! ```

use equicom::group::fixed_test_params;
use equicom::simulator::{straight_line_simulate, Schedule};

fn main() {
    let group = fixed_test_params();

    // The values each session will eventually open to. The simulator only
    // consults these at open time, after the commitments are on the wire.
    let revised: Vec<_> = [7u64, 2, 0, 10, 5]
        .iter()
        .map(|&v| group.scalar_from_u64(v))
        .collect();

    let report = straight_line_simulate(
        &group,
        &Schedule::round_robin(5),
        &revised,
        b"straight-line example",
    )
    .expect("simulation succeeds");

    assert!(report.all_accepted());
    for session in &report.sessions {
        println!(
            "session {}: accepted, opened to {} (commit at step {}, value fixed at step {})",
            session.session,
            session.opened_value.as_ref().unwrap(),
            session.commit_step.unwrap(),
            session.value_fixed_step.unwrap(),
        );
        assert!(session.commit_step.unwrap() < session.value_fixed_step.unwrap());
        // Four messages and only four: nothing is requested twice.
        assert_eq!(report.transcript.per_session(session.wire_id).len(), 4);
    }
    println!("\nevery commitment predates its value; no message was ever re-requested");
    println!("full report:\n\n{}", report.to_text());
}
