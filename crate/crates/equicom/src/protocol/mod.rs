//! Two-party commitment protocol over an abstract reliable byte stream.
//!
//! A session is one commitment exchanged between a committer and a
//! receiver. The receiver opens a session by sending its first message — a
//! freshly chosen blinding base `B` — then waits for a commitment and an
//! opening, and answers with a verdict:
//!
//! ```text
//! receiver                      committer
//!    | -- FIRST_MSG(B) ----------> |
//!    | <------------- COMMIT(Z) -- |
//!    | <------------ OPEN(x, r) -- |
//!    | -- ACCEPT / REJECT -------> |
//! ```
//!
//! Many sessions share one connection; frames carry a session id and are
//! routed independently ([`route`]). Sessions fail closed: any malformed
//! or out-of-phase frame moves the session to [`Phase::Failed`]
//! permanently.
//!
//! Submodules: [`codec`] (bit-exact framing), [`endpoint`] (the two state
//! machines), [`transcript`] (recorded runs, `.eqct` files), and
//! [`transport`] (loopback and TCP byte streams plus session drivers).

use std::fmt;
use std::sync::Arc;

use crate::group::{GroupElement, GroupParams, Scalar};

pub mod codec;
pub mod endpoint;
pub mod transcript;
pub mod transport;

pub use codec::{decode_message, encode_message, peek_session, CodecError, MAX_FRAME_LEN};
pub use endpoint::{
    route, CommitterEndpoint, CommitterEvent, CommitterSession, ProtocolError, ReceiverEndpoint,
    ReceiverEvent, ReceiverMode, ReceiverSession, Role, Routing,
};
pub use transcript::{Direction, Transcript, TranscriptEntry};
pub use transport::{
    loopback_pair, run_committer_over_wire, run_receiver_over_wire, FrameWire, LoopbackWire,
    TcpWire, WireError, WireRunReport, WireSessionOutcome,
};

/// Identifier of one session on a connection. Assigned by the receiver
/// side, monotonically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SessionId(pub u32);

impl fmt::Display for SessionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Payload of a protocol message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MessageBody {
    /// Group announcement; payload is the serialized group parameters.
    Params(Arc<GroupParams>),
    /// The receiver's per-session blinding base `B`.
    FirstMsg(GroupElement),
    /// The committer's commitment `Z`.
    Commit(GroupElement),
    /// The opening `(x, r)`.
    Open { value: Scalar, blinding: Scalar },
    /// Verdict: the opening verified.
    Accept,
    /// Verdict or failure notice.
    Reject,
}

/// One frame on the wire: a session id plus a body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolMessage {
    pub session: SessionId,
    pub body: MessageBody,
}

impl ProtocolMessage {
    pub fn new(session: SessionId, body: MessageBody) -> Self {
        ProtocolMessage { session, body }
    }

    pub fn kind(&self) -> MessageKind {
        match self.body {
            MessageBody::Params(_) => MessageKind::Params,
            MessageBody::FirstMsg(_) => MessageKind::FirstMsg,
            MessageBody::Commit(_) => MessageKind::Commit,
            MessageBody::Open { .. } => MessageKind::Open,
            MessageBody::Accept => MessageKind::Accept,
            MessageBody::Reject => MessageKind::Reject,
        }
    }
}

/// Message kind, as carried in the frame tag byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MessageKind {
    Params,
    FirstMsg,
    Commit,
    Open,
    Accept,
    Reject,
}

impl MessageKind {
    pub fn tag(self) -> u8 {
        match self {
            MessageKind::Params => 1,
            MessageKind::FirstMsg => 2,
            MessageKind::Commit => 3,
            MessageKind::Open => 4,
            MessageKind::Accept => 5,
            MessageKind::Reject => 6,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            1 => Some(MessageKind::Params),
            2 => Some(MessageKind::FirstMsg),
            3 => Some(MessageKind::Commit),
            4 => Some(MessageKind::Open),
            5 => Some(MessageKind::Accept),
            6 => Some(MessageKind::Reject),
            _ => None,
        }
    }
}

impl fmt::Display for MessageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            MessageKind::Params => "params",
            MessageKind::FirstMsg => "first_msg",
            MessageKind::Commit => "commit",
            MessageKind::Open => "open",
            MessageKind::Accept => "accept",
            MessageKind::Reject => "reject",
        };
        f.write_str(name)
    }
}

/// Session lifecycle. The only forward path is
/// `Init → AwaitCommit → Committed → Opened`; `Failed` is reachable from
/// everywhere and absorbing in practice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    Init,
    AwaitCommit,
    Committed,
    Opened,
    Failed,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Phase::Init => "init",
            Phase::AwaitCommit => "await_commit",
            Phase::Committed => "committed",
            Phase::Opened => "opened",
            Phase::Failed => "failed",
        };
        f.write_str(name)
    }
}
