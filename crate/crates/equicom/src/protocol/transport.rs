//! Byte-stream transports and end-to-end session drivers.
//!
//! Endpoints are transport-agnostic; anything implementing [`FrameWire`]
//! carries them. Two transports are provided: an in-process loopback built
//! on channels (deterministic, used by tests) and a TCP binding (a real
//! wire, used by the demo). [`run_receiver_over_wire`] and
//! [`run_committer_over_wire`] drive honest endpoints across a wire and
//! record transcripts from their own perspective.

use std::io::{self, Read, Write};
use std::net::TcpStream;
use std::sync::mpsc::{channel, Receiver, Sender};
use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

use crate::group::GroupParams;
use crate::seeding;

use super::codec::{
    decode_message, encode_message, peek_session, CodecError, MAX_FRAME_LEN, MIN_FRAME_LEN,
};
use super::endpoint::{
    CommitterEndpoint, CommitterEvent, ProtocolError, ReceiverEndpoint, ReceiverEvent, ReceiverMode,
};
use super::transcript::{Direction, Transcript};
use super::{MessageKind, Phase, ProtocolMessage, SessionId};

/// A reliable, ordered duplex stream of frames.
pub trait FrameWire {
    /// Writes one already-encoded frame.
    fn send_frame(&mut self, frame: &[u8]) -> io::Result<()>;
    /// Blocks until one complete frame arrives (length prefix included).
    fn recv_frame(&mut self) -> io::Result<Vec<u8>>;
}

/// In-process wire: a crossed pair of channels.
pub struct LoopbackWire {
    tx: Sender<Vec<u8>>,
    rx: Receiver<Vec<u8>>,
}

/// Two connected loopback endpoints.
pub fn loopback_pair() -> (LoopbackWire, LoopbackWire) {
    let (tx_a, rx_b) = channel();
    let (tx_b, rx_a) = channel();
    (
        LoopbackWire { tx: tx_a, rx: rx_a },
        LoopbackWire { tx: tx_b, rx: rx_b },
    )
}

impl FrameWire for LoopbackWire {
    fn send_frame(&mut self, frame: &[u8]) -> io::Result<()> {
        self.tx
            .send(frame.to_vec())
            .map_err(|_| io::Error::new(io::ErrorKind::BrokenPipe, "peer hung up"))
    }

    fn recv_frame(&mut self) -> io::Result<Vec<u8>> {
        self.rx
            .recv()
            .map_err(|_| io::Error::new(io::ErrorKind::UnexpectedEof, "peer hung up"))
    }
}

/// TCP binding of the frame wire.
pub struct TcpWire {
    stream: TcpStream,
}

impl TcpWire {
    pub fn new(stream: TcpStream) -> Self {
        TcpWire { stream }
    }
}

impl FrameWire for TcpWire {
    fn send_frame(&mut self, frame: &[u8]) -> io::Result<()> {
        self.stream.write_all(frame)
    }

    fn recv_frame(&mut self) -> io::Result<Vec<u8>> {
        let mut header = [0u8; 4];
        self.stream.read_exact(&mut header)?;
        let declared = u32::from_be_bytes(header) as usize;
        if !(MIN_FRAME_LEN..=MAX_FRAME_LEN).contains(&declared) {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                format!("frame length {declared} out of bounds"),
            ));
        }
        let mut frame = vec![0u8; declared];
        frame[..4].copy_from_slice(&header);
        self.stream.read_exact(&mut frame[4..])?;
        Ok(frame)
    }
}

#[derive(Debug, Error)]
pub enum WireError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error("expected a {expected} frame, got {got}")]
    UnexpectedMessage {
        expected: &'static str,
        got: MessageKind,
    },
}

/// Per-session result of a wire run.
#[derive(Debug, Clone)]
pub struct WireSessionOutcome {
    pub session: SessionId,
    pub accepted: bool,
    /// The value the session opened to, when accepted.
    pub value: Option<BigUint>,
}

/// Result of driving one side over a wire.
#[derive(Debug)]
pub struct WireRunReport {
    pub outcomes: Vec<WireSessionOutcome>,
    pub transcript: Transcript,
}

impl WireRunReport {
    pub fn all_accepted(&self) -> bool {
        !self.outcomes.is_empty() && self.outcomes.iter().all(|o| o.accepted)
    }
}

struct Recorder {
    transcript: Transcript,
    next_step: u64,
}

impl Recorder {
    fn new() -> Self {
        Recorder {
            transcript: Transcript::new(),
            next_step: 0,
        }
    }

    fn record(&mut self, direction: Direction, message: &ProtocolMessage) {
        self.transcript
            .push(self.next_step, direction, message.clone());
        self.next_step += 1;
    }
}

/// Drives the receiver side: announces the group, then runs `sessions`
/// commitment sessions to completion, one after the other.
pub fn run_receiver_over_wire<W: FrameWire>(
    wire: &mut W,
    group: Arc<GroupParams>,
    mode: ReceiverMode,
    sessions: usize,
) -> Result<WireRunReport, WireError> {
    let mut endpoint = ReceiverEndpoint::new(group, mode);
    let mut recorder = Recorder::new();

    let announce = endpoint.announce_params();
    wire.send_frame(&encode_message(&announce))?;
    recorder.record(Direction::Sent, &announce);

    let mut outcomes = Vec::with_capacity(sessions);
    for _ in 0..sessions {
        let id = endpoint.allocate_session();
        for message in endpoint.step(ReceiverEvent::Start(id))? {
            wire.send_frame(&encode_message(&message))?;
            recorder.record(Direction::Sent, &message);
        }
        // Serve frames until this session reaches a terminal phase.
        loop {
            let phase = endpoint.session(id).expect("session exists").phase;
            if phase == Phase::Opened || phase == Phase::Failed {
                break;
            }
            let frame = wire.recv_frame()?;
            let replies = match decode_message(&frame, Some(endpoint.group())) {
                Ok(message) => {
                    recorder.record(Direction::Received, &message);
                    endpoint.step(ReceiverEvent::Incoming(message))?
                }
                Err(err) => {
                    // Undecodable frame: fail the session it names and
                    // refuse it; only a frame too short to carry a header
                    // kills the connection.
                    match peek_session(&frame).and_then(|id| {
                        endpoint
                            .session(id)
                            .is_some()
                            .then(|| endpoint.fail_session(id))
                    }) {
                        Some(Ok(replies)) => replies,
                        _ => return Err(err.into()),
                    }
                }
            };
            for reply in replies {
                wire.send_frame(&encode_message(&reply))?;
                recorder.record(Direction::Sent, &reply);
            }
        }
        let session = endpoint.session(id).expect("session exists");
        outcomes.push(WireSessionOutcome {
            session: id,
            accepted: session.phase == Phase::Opened,
            value: session.opened_value.as_ref().map(|v| v.value().clone()),
        });
    }
    Ok(WireRunReport {
        outcomes,
        transcript: recorder.transcript,
    })
}

/// Drives an honest committer: waits for the group announcement, then
/// commits to and opens each of `values` in its own session.
pub fn run_committer_over_wire<W: FrameWire>(
    wire: &mut W,
    values: &[BigUint],
    seed: &[u8],
) -> Result<WireRunReport, WireError> {
    let mut endpoint =
        CommitterEndpoint::new(None, &seeding::derive_seed(seed, "wire.committer", 0));
    let mut recorder = Recorder::new();

    let frame = wire.recv_frame()?;
    let announce = decode_message(&frame, None)?;
    if announce.kind() != MessageKind::Params {
        return Err(WireError::UnexpectedMessage {
            expected: "params",
            got: announce.kind(),
        });
    }
    recorder.record(Direction::Received, &announce);
    endpoint.step(CommitterEvent::Incoming(announce))?;
    let group = endpoint.group().expect("group was just announced").clone();

    let mut outcomes = Vec::with_capacity(values.len());
    for value in values {
        let frame = wire.recv_frame()?;
        let message = decode_message(&frame, Some(&group))?;
        if message.kind() != MessageKind::FirstMsg {
            return Err(WireError::UnexpectedMessage {
                expected: "first_msg",
                got: message.kind(),
            });
        }
        let id = message.session;
        recorder.record(Direction::Received, &message);
        endpoint.step(CommitterEvent::Incoming(message))?;

        let value = group.scalar_from_biguint(value.clone());
        for message in endpoint.step(CommitterEvent::Commit {
            session: id,
            value,
            blinding: None,
        })? {
            wire.send_frame(&encode_message(&message))?;
            recorder.record(Direction::Sent, &message);
        }
        for message in endpoint.step(CommitterEvent::Open {
            session: id,
            opening: None,
        })? {
            wire.send_frame(&encode_message(&message))?;
            recorder.record(Direction::Sent, &message);
        }

        let frame = wire.recv_frame()?;
        let verdict = decode_message(&frame, Some(&group))?;
        recorder.record(Direction::Received, &verdict);
        endpoint.step(CommitterEvent::Incoming(verdict))?;

        let session = endpoint.session(id).expect("session exists");
        outcomes.push(WireSessionOutcome {
            session: id,
            accepted: session.phase == Phase::Opened,
            value: session.opening.as_ref().map(|o| o.value().value().clone()),
        });
    }
    Ok(WireRunReport {
        outcomes,
        transcript: recorder.transcript,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::fixed_test_params;
    use std::thread;

    #[test]
    fn loopback_delivers_frames_in_order() {
        let (mut a, mut b) = loopback_pair();
        a.send_frame(&[1, 2, 3]).unwrap();
        a.send_frame(&[4, 5]).unwrap();
        assert_eq!(b.recv_frame().unwrap(), vec![1, 2, 3]);
        assert_eq!(b.recv_frame().unwrap(), vec![4, 5]);
        b.send_frame(&[9]).unwrap();
        assert_eq!(a.recv_frame().unwrap(), vec![9]);
    }

    #[test]
    fn loopback_reports_hangup() {
        let (mut a, b) = loopback_pair();
        drop(b);
        assert!(a.send_frame(&[1]).is_err());
        assert!(a.recv_frame().is_err());
    }

    #[test]
    fn honest_sessions_over_loopback() {
        let group = fixed_test_params();
        let (mut receiver_wire, mut committer_wire) = loopback_pair();
        let receiver_group = group.clone();

        let receiver = thread::spawn(move || {
            run_receiver_over_wire(
                &mut receiver_wire,
                receiver_group,
                ReceiverMode::Honest {
                    seed: b"loopback".to_vec(),
                },
                3,
            )
            .unwrap()
        });

        let values = [
            BigUint::from(5u32),
            BigUint::from(0u32),
            BigUint::from(9u32),
        ];
        let committer_report =
            run_committer_over_wire(&mut committer_wire, &values, b"loopback").unwrap();
        let receiver_report = receiver.join().unwrap();

        assert!(committer_report.all_accepted());
        assert!(receiver_report.all_accepted());
        for (i, outcome) in receiver_report.outcomes.iter().enumerate() {
            assert_eq!(outcome.value.as_ref(), Some(&values[i]));
        }
        // Mirror images: one side's sent bytes are the other's received.
        for id in 0..3u32 {
            let id = SessionId(id);
            let from_committer: Vec<Vec<u8>> = committer_report
                .transcript
                .per_session(id)
                .iter()
                .map(|e| encode_message(&e.message))
                .collect();
            let from_receiver: Vec<Vec<u8>> = receiver_report
                .transcript
                .per_session(id)
                .iter()
                .map(|e| encode_message(&e.message))
                .collect();
            assert_eq!(from_committer, from_receiver);
        }
    }

    #[test]
    fn honest_session_over_tcp() {
        let group = fixed_test_params();
        let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        let receiver_group = group.clone();

        let receiver = thread::spawn(move || {
            let (stream, _) = listener.accept().unwrap();
            let mut wire = TcpWire::new(stream);
            run_receiver_over_wire(
                &mut wire,
                receiver_group,
                ReceiverMode::Trapdoor {
                    seed: b"tcp".to_vec(),
                },
                1,
            )
            .unwrap()
        });

        let mut wire = TcpWire::new(TcpStream::connect(addr).unwrap());
        let committer_report =
            run_committer_over_wire(&mut wire, &[BigUint::from(7u32)], b"tcp").unwrap();
        let receiver_report = receiver.join().unwrap();

        assert!(committer_report.all_accepted());
        assert_eq!(receiver_report.outcomes[0].value, Some(BigUint::from(7u32)));
    }

    #[test]
    fn malformed_frame_fails_the_session_not_the_connection() {
        use crate::protocol::{MessageBody, ProtocolMessage, SessionId};

        let group = fixed_test_params();
        let (mut receiver_wire, mut raw) = loopback_pair();
        let receiver_group = group.clone();
        let receiver = thread::spawn(move || {
            run_receiver_over_wire(
                &mut receiver_wire,
                receiver_group,
                ReceiverMode::Honest {
                    seed: b"malformed".to_vec(),
                },
                1,
            )
            .unwrap()
        });

        // Speak the wire by hand: accept PARAMS and FIRST_MSG, send a
        // valid COMMIT, then an OPEN whose scalar is out of range.
        let _params = raw.recv_frame().unwrap();
        let first = decode_message(&raw.recv_frame().unwrap(), Some(&group)).unwrap();
        let id = first.session;
        let commit = ProtocolMessage::new(
            id,
            MessageBody::Commit(group.generator().pow(&group.scalar_from_u64(4))),
        );
        raw.send_frame(&encode_message(&commit)).unwrap();
        let bad_open = vec![
            0x00, 0x00, 0x00, 0x0B, // length 11
            0x00, 0x00, 0x00, 0x00, // session 0
            0x04, // OPEN
            0x0B, 0x03, // x = 11 >= q
        ];
        raw.send_frame(&bad_open).unwrap();
        let verdict = decode_message(&raw.recv_frame().unwrap(), Some(&group)).unwrap();
        assert_eq!(verdict.kind(), MessageKind::Reject);
        assert_eq!(verdict.session, SessionId(0));

        let report = receiver.join().unwrap();
        assert!(!report.outcomes[0].accepted);
    }

    #[test]
    fn tcp_wire_rejects_out_of_bound_lengths() {
        let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        let sender = thread::spawn(move || {
            let mut stream = TcpStream::connect(addr).unwrap();
            stream.write_all(&3u32.to_be_bytes()).unwrap();
            stream.flush().unwrap();
        });
        let (stream, _) = listener.accept().unwrap();
        let mut wire = TcpWire::new(stream);
        let err = wire.recv_frame().unwrap_err();
        assert_eq!(err.kind(), io::ErrorKind::InvalidData);
        sender.join().unwrap();
    }
}
