//! Bit-exact wire framing.
//!
//! ```text
//! +----------------+----------------+------+-----------------+
//! | total length   | session id     | kind | payload         |
//! | u32 big-endian | u32 big-endian | u8   | kind-specific   |
//! +----------------+----------------+------+-----------------+
//! ```
//!
//! The length field counts the whole frame, itself included. Payloads use
//! the group module's fixed-width encodings: PARAMS carries serialized
//! group parameters, FIRST_MSG and COMMIT one element each, OPEN two
//! scalars, ACCEPT and REJECT nothing. Every element is validated for
//! subgroup membership on decode; nothing off the wire is trusted.

use std::sync::Arc;

use thiserror::Error;

use crate::group::{GroupError, GroupParams};

use super::{MessageBody, MessageKind, ProtocolMessage, SessionId};

/// Frames smaller than the fixed header cannot exist.
pub const MIN_FRAME_LEN: usize = 9;

/// Upper bound on a frame; anything larger is rejected before allocation.
pub const MAX_FRAME_LEN: usize = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("frame truncated: need {expected} bytes, got {got}")]
    Truncated { expected: usize, got: usize },
    #[error("declared frame length {0} is smaller than the 9-byte header")]
    HeaderLength(u32),
    #[error("declared frame length {0} exceeds the {MAX_FRAME_LEN}-byte maximum")]
    Oversized(u32),
    #[error("frame declares {declared} bytes but {got} were provided")]
    TrailingBytes { declared: usize, got: usize },
    #[error("unknown message kind tag {0}")]
    UnknownTag(u8),
    #[error("payload of {got} bytes does not fit kind {kind} (expected {expected})")]
    PayloadLength {
        kind: MessageKind,
        expected: usize,
        got: usize,
    },
    #[error("group parameters are required to decode this message kind")]
    MissingParams,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Encodes a message as one length-prefixed frame.
pub fn encode_message(message: &ProtocolMessage) -> Vec<u8> {
    let payload = match &message.body {
        MessageBody::Params(group) => group.to_bytes(),
        MessageBody::FirstMsg(element) | MessageBody::Commit(element) => element.to_bytes(),
        MessageBody::Open { value, blinding } => {
            let mut bytes = value.to_bytes();
            bytes.extend_from_slice(&blinding.to_bytes());
            bytes
        }
        MessageBody::Accept | MessageBody::Reject => Vec::new(),
    };
    let total = MIN_FRAME_LEN + payload.len();
    let mut frame = Vec::with_capacity(total);
    frame.extend_from_slice(&u32::try_from(total).expect("frame fits u32").to_be_bytes());
    frame.extend_from_slice(&message.session.0.to_be_bytes());
    frame.push(message.kind().tag());
    frame.extend_from_slice(&payload);
    frame
}

/// Decodes exactly one frame.
///
/// `group` must be the negotiated group parameters; only PARAMS frames can
/// be decoded without them. The input must be the complete frame, nothing
/// more: short input is [`CodecError::Truncated`], extra bytes are
/// [`CodecError::TrailingBytes`].
pub fn decode_message(
    bytes: &[u8],
    group: Option<&Arc<GroupParams>>,
) -> Result<ProtocolMessage, CodecError> {
    if bytes.len() < 4 {
        return Err(CodecError::Truncated {
            expected: 4,
            got: bytes.len(),
        });
    }
    let declared = u32::from_be_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]);
    if (declared as usize) < MIN_FRAME_LEN {
        return Err(CodecError::HeaderLength(declared));
    }
    if declared as usize > MAX_FRAME_LEN {
        return Err(CodecError::Oversized(declared));
    }
    if bytes.len() < declared as usize {
        return Err(CodecError::Truncated {
            expected: declared as usize,
            got: bytes.len(),
        });
    }
    if bytes.len() > declared as usize {
        return Err(CodecError::TrailingBytes {
            declared: declared as usize,
            got: bytes.len(),
        });
    }
    let session = SessionId(u32::from_be_bytes([bytes[4], bytes[5], bytes[6], bytes[7]]));
    let kind = MessageKind::from_tag(bytes[8]).ok_or(CodecError::UnknownTag(bytes[8]))?;
    let payload = &bytes[MIN_FRAME_LEN..];

    let expect_len = |expected: usize| -> Result<(), CodecError> {
        if payload.len() != expected {
            Err(CodecError::PayloadLength {
                kind,
                expected,
                got: payload.len(),
            })
        } else {
            Ok(())
        }
    };

    let body = match kind {
        MessageKind::Params => MessageBody::Params(GroupParams::from_bytes(payload)?),
        MessageKind::FirstMsg | MessageKind::Commit => {
            let group = group.ok_or(CodecError::MissingParams)?;
            expect_len(group.element_width())?;
            let element = group.decode_element(payload)?;
            if kind == MessageKind::FirstMsg {
                MessageBody::FirstMsg(element)
            } else {
                MessageBody::Commit(element)
            }
        }
        MessageKind::Open => {
            let group = group.ok_or(CodecError::MissingParams)?;
            let width = group.scalar_width();
            expect_len(2 * width)?;
            MessageBody::Open {
                value: group.decode_scalar(&payload[..width])?,
                blinding: group.decode_scalar(&payload[width..])?,
            }
        }
        MessageKind::Accept => {
            expect_len(0)?;
            MessageBody::Accept
        }
        MessageKind::Reject => {
            expect_len(0)?;
            MessageBody::Reject
        }
    };
    Ok(ProtocolMessage { session, body })
}

/// Payload bytes of a message, as they appear inside its frame.
pub fn payload_bytes(message: &ProtocolMessage) -> Vec<u8> {
    encode_message(message)[MIN_FRAME_LEN..].to_vec()
}

/// Reads just the session id field, if the header is physically present.
/// Lets a peer fail the right session when the rest of the frame is
/// garbage.
pub fn peek_session(bytes: &[u8]) -> Option<SessionId> {
    if bytes.len() < MIN_FRAME_LEN {
        return None;
    }
    Some(SessionId(u32::from_be_bytes([
        bytes[4], bytes[5], bytes[6], bytes[7],
    ])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::fixed_test_params;

    fn toy_open(session: u32, value: u64, blinding: u64) -> ProtocolMessage {
        let group = fixed_test_params();
        ProtocolMessage::new(
            SessionId(session),
            MessageBody::Open {
                value: group.scalar_from_u64(value),
                blinding: group.scalar_from_u64(blinding),
            },
        )
    }

    #[test]
    fn open_frame_matches_hand_framing() {
        // 4-byte length (11) | 4-byte session (1) | tag 4 | x=5 | r=7
        let frame = encode_message(&toy_open(1, 5, 7));
        assert_eq!(
            frame,
            vec![0x00, 0x00, 0x00, 0x0B, 0x00, 0x00, 0x00, 0x01, 0x04, 0x05, 0x07]
        );
    }

    #[test]
    fn all_kinds_round_trip() {
        let group = fixed_test_params();
        let element = group.generator().pow(&group.scalar_from_u64(4));
        let messages = vec![
            ProtocolMessage::new(SessionId(0), MessageBody::Params(group.clone())),
            ProtocolMessage::new(SessionId(7), MessageBody::FirstMsg(element.clone())),
            ProtocolMessage::new(SessionId(7), MessageBody::Commit(element)),
            toy_open(7, 5, 7),
            ProtocolMessage::new(SessionId(7), MessageBody::Accept),
            ProtocolMessage::new(SessionId(9), MessageBody::Reject),
        ];
        for message in messages {
            let frame = encode_message(&message);
            let decoded = decode_message(&frame, Some(&group)).unwrap();
            assert_eq!(decoded, message);
        }
    }

    #[test]
    fn params_decodes_without_negotiated_group() {
        let group = fixed_test_params();
        let frame = encode_message(&ProtocolMessage::new(
            SessionId(0),
            MessageBody::Params(group.clone()),
        ));
        let decoded = decode_message(&frame, None).unwrap();
        assert_eq!(decoded.body, MessageBody::Params(group));
    }

    #[test]
    fn non_params_without_group_is_missing_params() {
        let group = fixed_test_params();
        let frame = encode_message(&toy_open(1, 5, 7));
        assert_eq!(
            decode_message(&frame, None).err(),
            Some(CodecError::MissingParams)
        );
        assert!(decode_message(&frame, Some(&group)).is_ok());
    }

    #[test]
    fn truncation_and_trailing_bytes_are_distinct_errors() {
        let group = fixed_test_params();
        let frame = encode_message(&toy_open(1, 5, 7));
        assert_eq!(
            decode_message(&frame[..3], Some(&group)).err(),
            Some(CodecError::Truncated {
                expected: 4,
                got: 3
            })
        );
        assert_eq!(
            decode_message(&frame[..10], Some(&group)).err(),
            Some(CodecError::Truncated {
                expected: 11,
                got: 10
            })
        );
        let mut long = frame.clone();
        long.push(0);
        assert_eq!(
            decode_message(&long, Some(&group)).err(),
            Some(CodecError::TrailingBytes {
                declared: 11,
                got: 12
            })
        );
    }

    #[test]
    fn header_length_bounds_are_enforced() {
        let group = fixed_test_params();
        let mut frame = encode_message(&toy_open(1, 5, 7));
        frame[3] = 8; // below the header minimum
        assert_eq!(
            decode_message(&frame, Some(&group)).err(),
            Some(CodecError::HeaderLength(8))
        );
        let huge = ((MAX_FRAME_LEN + 1) as u32).to_be_bytes();
        let bytes = [huge.as_slice(), &[0u8; 16]].concat();
        assert_eq!(
            decode_message(&bytes, Some(&group)).err(),
            Some(CodecError::Oversized((MAX_FRAME_LEN + 1) as u32))
        );
    }

    #[test]
    fn unknown_tag_is_rejected() {
        let group = fixed_test_params();
        let mut frame = encode_message(&toy_open(1, 5, 7));
        frame[8] = 9;
        assert_eq!(
            decode_message(&frame, Some(&group)).err(),
            Some(CodecError::UnknownTag(9))
        );
    }

    #[test]
    fn payload_length_mismatch_is_rejected() {
        let group = fixed_test_params();
        let element = group.generator();
        let mut frame = encode_message(&ProtocolMessage::new(
            SessionId(1),
            MessageBody::Commit(element),
        ));
        // Flip COMMIT into ACCEPT: the element payload no longer fits.
        frame[8] = MessageKind::Accept.tag();
        assert_eq!(
            decode_message(&frame, Some(&group)).err(),
            Some(CodecError::PayloadLength {
                kind: MessageKind::Accept,
                expected: 0,
                got: 1
            })
        );
    }

    #[test]
    fn commit_with_non_subgroup_element_is_rejected() {
        let group = fixed_test_params();
        // 5 is not a quadratic residue mod 23.
        let frame = vec![0x00, 0x00, 0x00, 0x0A, 0x00, 0x00, 0x00, 0x01, 0x03, 0x05];
        assert_eq!(
            decode_message(&frame, Some(&group)).err(),
            Some(CodecError::Group(GroupError::NotInSubgroup))
        );
    }

    #[test]
    fn encoding_is_injective_over_distinct_messages() {
        let group = fixed_test_params();
        let mut frames = std::collections::HashSet::new();
        for session in 0..3u32 {
            for value in 0..11u64 {
                for blinding in 0..11u64 {
                    assert!(frames.insert(encode_message(&toy_open(session, value, blinding))));
                }
            }
            for kind in [MessageBody::Accept, MessageBody::Reject] {
                assert!(frames.insert(encode_message(&ProtocolMessage::new(
                    SessionId(session),
                    kind
                ))));
            }
            for k in 0..11u64 {
                let element = group.generator().pow(&group.scalar_from_u64(k));
                for body in [
                    MessageBody::FirstMsg(element.clone()),
                    MessageBody::Commit(element.clone()),
                ] {
                    assert!(frames.insert(encode_message(&ProtocolMessage::new(
                        SessionId(session),
                        body
                    ))));
                }
            }
        }
    }
}
