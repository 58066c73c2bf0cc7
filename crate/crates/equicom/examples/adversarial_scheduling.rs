//! The adversarial interleaving: a malicious committer collects the first
//! messages of all m sessions before committing anywhere, then commits in
//! session 1 to a function of all of them.
//!
//! The run report logs the inputs and output of that function, making the
//! cross-session correlation explicit and recomputable from the transcript
//! alone. The simulator stops at materializing this scenario; whether any
//! extraction strategy survives it is a question about extractors, not
//! about this code.
//!
//! ```bash
//! cargo run -p equicom --example adversarial_scheduling
//! ```

use equicom::group::fixed_test_params;
use equicom::simulator::{
    run, AdversarialFn, CommitterStrategy, ReceiverRunMode, RunConfig, Schedule,
};

fn main() {
    let group = fixed_test_params();
    let config = RunConfig {
        group: group.clone(),
        receiver_mode: ReceiverRunMode::Honest,
        seed: b"adversarial example".to_vec(),
    };

    // round_robin delivers all first messages before any commitment, which
    // is exactly the ordering the adversarial committer insists on.
    let schedule = Schedule::round_robin(3);
    let strategy = CommitterStrategy::Adversarial {
        f: AdversarialFn::SumOfDigests,
    };
    let report = run(&config, &schedule, &strategy).expect("run succeeds");
    assert!(report.all_accepted());

    let record = report.adversarial.as_ref().expect("adversarial runs log f");
    println!("first messages (B_1, B_2, B_3) collected before any commitment:");
    for (i, input) in record.inputs.iter().enumerate() {
        println!("  session {i}: B = {input}");
    }
    println!(
        "session 0 then committed to f(B_1, B_2, B_3) = {} ({})",
        record.output, record.function
    );

    // Anyone holding the transcript can recompute the committed value.
    let recomputed = record.function.evaluate(&group, &report.first_messages());
    assert_eq!(recomputed, record.output);
    assert_eq!(
        report.sessions[0].opened_value.as_ref(),
        Some(&record.output)
    );
    println!("recomputed from the transcript's first messages: {recomputed} (matches)");

    println!(
        "\nsessions 1 and 2 completed honestly with fresh values: {}, {}",
        report.sessions[1].opened_value.as_ref().unwrap(),
        report.sessions[2].opened_value.as_ref().unwrap()
    );
    println!("\nfull report:\n\n{}", report.to_text());
}
