//! Recorded message flows and the `.eqct` file format.
//!
//! A transcript is an ordered list of (direction, message) pairs with
//! strictly increasing step indices. On disk, each entry is one direction
//! byte (0 = sent, 1 = received) followed by the message's length-prefixed
//! frame; entries are simply concatenated. Decoding a file and re-encoding
//! it reproduces the input bytes exactly.

use std::sync::Arc;

use crate::group::GroupParams;

use super::codec::{decode_message, encode_message, CodecError};
use super::{MessageBody, ProtocolMessage, SessionId};

/// Direction of a recorded message, relative to the recording party.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Sent,
    Received,
}

impl Direction {
    pub fn byte(self) -> u8 {
        match self {
            Direction::Sent => 0,
            Direction::Received => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Direction::Sent => "sent",
            Direction::Received => "recv",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptEntry {
    pub step: u64,
    pub direction: Direction,
    pub message: ProtocolMessage,
}

/// An append-only record of a protocol run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    entries: Vec<TranscriptEntry>,
}

impl Transcript {
    pub fn new() -> Self {
        Transcript::default()
    }

    /// Appends an entry. Step indices must strictly increase.
    pub fn push(&mut self, step: u64, direction: Direction, message: ProtocolMessage) {
        if let Some(last) = self.entries.last() {
            assert!(step > last.step, "transcript steps must strictly increase");
        }
        self.entries.push(TranscriptEntry {
            step,
            direction,
            message,
        });
    }

    pub fn entries(&self) -> &[TranscriptEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn per_session(&self, session: SessionId) -> Vec<&TranscriptEntry> {
        self.entries
            .iter()
            .filter(|e| e.message.session == session)
            .collect()
    }

    /// One session's wire bytes (direction byte plus frame, per entry).
    /// Step indices are deliberately excluded so byte-level comparisons
    /// are meaningful across differently interleaved runs.
    pub fn session_frames(&self, session: SessionId) -> Vec<Vec<u8>> {
        self.per_session(session)
            .into_iter()
            .map(|e| {
                let mut bytes = vec![e.direction.byte()];
                bytes.extend_from_slice(&encode_message(&e.message));
                bytes
            })
            .collect()
    }

    /// Serializes to the `.eqct` format.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for entry in &self.entries {
            out.push(entry.direction.byte());
            out.extend_from_slice(&encode_message(&entry.message));
        }
        out
    }

    /// Parses a `.eqct` byte stream.
    ///
    /// `group` may be `None` if the stream announces its own parameters
    /// with a PARAMS frame before any group-dependent message; the
    /// announced group is adopted for the remainder of the stream.
    pub fn from_bytes(
        bytes: &[u8],
        group: Option<&Arc<GroupParams>>,
    ) -> Result<Transcript, CodecError> {
        let mut transcript = Transcript::new();
        let mut group = group.cloned();
        let mut offset = 0usize;
        let mut step = 0u64;
        while offset < bytes.len() {
            let direction = match bytes[offset] {
                0 => Direction::Sent,
                1 => Direction::Received,
                other => {
                    // Reuse the tag error: direction bytes are tags too.
                    return Err(CodecError::UnknownTag(other));
                }
            };
            offset += 1;
            if bytes.len() < offset + 4 {
                return Err(CodecError::Truncated {
                    expected: offset + 4,
                    got: bytes.len(),
                });
            }
            let declared = u32::from_be_bytes([
                bytes[offset],
                bytes[offset + 1],
                bytes[offset + 2],
                bytes[offset + 3],
            ]) as usize;
            if bytes.len() < offset + declared {
                return Err(CodecError::Truncated {
                    expected: offset + declared,
                    got: bytes.len(),
                });
            }
            let message = decode_message(&bytes[offset..offset + declared], group.as_ref())?;
            if let MessageBody::Params(announced) = &message.body {
                group = Some(announced.clone());
            }
            offset += declared;
            transcript.push(step, direction, message);
            step += 1;
        }
        Ok(transcript)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::fixed_test_params;
    use crate::protocol::MessageKind;

    fn sample_transcript() -> (Transcript, Arc<GroupParams>) {
        let group = fixed_test_params();
        let base = group.generator().pow(&group.scalar_from_u64(3));
        let z = group.generator().pow(&group.scalar_from_u64(4));
        let mut t = Transcript::new();
        t.push(
            0,
            Direction::Received,
            ProtocolMessage::new(SessionId(0), MessageBody::FirstMsg(base)),
        );
        t.push(
            2,
            Direction::Sent,
            ProtocolMessage::new(SessionId(0), MessageBody::Commit(z)),
        );
        t.push(
            5,
            Direction::Sent,
            ProtocolMessage::new(
                SessionId(0),
                MessageBody::Open {
                    value: group.scalar_from_u64(5),
                    blinding: group.scalar_from_u64(7),
                },
            ),
        );
        t.push(
            6,
            Direction::Received,
            ProtocolMessage::new(SessionId(0), MessageBody::Accept),
        );
        (t, group)
    }

    #[test]
    fn replaying_a_transcript_reproduces_identical_bytes() {
        let (transcript, group) = sample_transcript();
        let bytes = transcript.to_bytes();
        let reread = Transcript::from_bytes(&bytes, Some(&group)).unwrap();
        assert_eq!(reread.to_bytes(), bytes);
        let kinds: Vec<MessageKind> = reread.entries().iter().map(|e| e.message.kind()).collect();
        assert_eq!(
            kinds,
            vec![
                MessageKind::FirstMsg,
                MessageKind::Commit,
                MessageKind::Open,
                MessageKind::Accept
            ]
        );
    }

    #[test]
    fn leading_params_frame_supplies_the_group() {
        let (transcript, group) = sample_transcript();
        let mut with_params = Transcript::new();
        with_params.push(
            0,
            Direction::Received,
            ProtocolMessage::new(SessionId(0), MessageBody::Params(group.clone())),
        );
        for (i, entry) in transcript.entries().iter().enumerate() {
            with_params.push(i as u64 + 1, entry.direction, entry.message.clone());
        }
        let bytes = with_params.to_bytes();
        let reread = Transcript::from_bytes(&bytes, None).unwrap();
        assert_eq!(reread.to_bytes(), bytes);
    }

    #[test]
    fn bad_direction_byte_is_rejected() {
        let (transcript, group) = sample_transcript();
        let mut bytes = transcript.to_bytes();
        bytes[0] = 7;
        assert_eq!(
            Transcript::from_bytes(&bytes, Some(&group)).err(),
            Some(CodecError::UnknownTag(7))
        );
    }

    #[test]
    fn truncated_stream_is_rejected() {
        let (transcript, group) = sample_transcript();
        let bytes = transcript.to_bytes();
        assert!(matches!(
            Transcript::from_bytes(&bytes[..bytes.len() - 1], Some(&group)),
            Err(CodecError::Truncated { .. })
        ));
    }

    #[test]
    #[should_panic(expected = "strictly increase")]
    fn non_increasing_steps_panic() {
        let group = fixed_test_params();
        let mut t = Transcript::new();
        let accept = ProtocolMessage::new(SessionId(0), MessageBody::Accept);
        let _ = &group;
        t.push(3, Direction::Sent, accept.clone());
        t.push(3, Direction::Sent, accept);
    }

    #[test]
    fn session_frames_filter_by_session() {
        let (transcript, _) = sample_transcript();
        assert_eq!(transcript.session_frames(SessionId(0)).len(), 4);
        assert!(transcript.session_frames(SessionId(1)).is_empty());
    }
}
