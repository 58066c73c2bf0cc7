//! The same two-party protocol over a real TCP socket on localhost.
//!
//! ```bash
//! cargo run -p equicom --example tcp_session
//! ```

use std::net::{TcpListener, TcpStream};
use std::thread;

use equicom::group::generate_params;
use equicom::protocol::{run_committer_over_wire, run_receiver_over_wire, ReceiverMode, TcpWire};
use num_bigint::BigUint;

fn main() {
    let group = generate_params(64, b"tcp example").expect("group generates");
    let listener = TcpListener::bind("127.0.0.1:0").expect("bind localhost");
    let addr = listener.local_addr().unwrap();
    println!("receiver listening on {addr}");

    let receiver_group = group.clone();
    let receiver = thread::spawn(move || {
        let (stream, peer) = listener.accept().expect("accept");
        println!("receiver: connection from {peer}");
        let mut wire = TcpWire::new(stream);
        run_receiver_over_wire(
            &mut wire,
            receiver_group,
            ReceiverMode::Trapdoor {
                seed: b"tcp example receiver".to_vec(),
            },
            2,
        )
        .expect("receiver run succeeds")
    });

    let mut wire = TcpWire::new(TcpStream::connect(addr).expect("connect"));
    let values = [BigUint::from(314u32), BigUint::from(2718u32)];
    let committer_report =
        run_committer_over_wire(&mut wire, &values, b"tcp example committer").expect("committer");
    let receiver_report = receiver.join().unwrap();

    for outcome in &receiver_report.outcomes {
        match (&outcome.accepted, &outcome.value) {
            (true, Some(value)) => println!("session {}: accepted value={value}", outcome.session),
            _ => println!("session {}: rejected", outcome.session),
        }
    }
    assert!(committer_report.all_accepted());
    println!(
        "{} frames crossed the socket",
        committer_report.transcript.len()
    );
}
