//! Committer and receiver state machines with session multiplexing.
//!
//! Both endpoints hold a table of per-session states and process one event
//! at a time, returning the messages to put on the wire. Transitions are
//! deterministic given the endpoint's seed material. Wire-level problems
//! (out-of-phase frames, wrong-direction kinds, an identity blinding base)
//! permanently fail the affected session and answer REJECT; local command
//! misuse is returned as an error without touching the wire.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::commitment::{
    self, commit_with_randomness, setup_honest, setup_with_trapdoor, verify, CommitParams,
    Commitment, Opening, Trapdoor,
};
use crate::group::{GroupParams, Scalar};
use crate::seeding;

use super::{MessageBody, MessageKind, Phase, ProtocolMessage, SessionId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProtocolError {
    #[error("no session with id {0}")]
    UnknownSession(SessionId),
    #[error("command not valid for session {session} in phase {phase}")]
    BadCommand { session: SessionId, phase: Phase },
    #[error("peer announced different group parameters")]
    ParamsMismatch,
    #[error("group parameters are not known yet")]
    MissingParams,
    #[error("no trapdoor configured for session {0}")]
    MissingTrapdoor(SessionId),
}

/// Which side of the protocol an endpoint plays.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Committer,
    Receiver,
}

/// Where an incoming message should go.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Routing {
    /// Deliver to the existing session.
    Existing(SessionId),
    /// First contact: create the session, then deliver.
    Create(SessionId),
    /// Connection-level message (PARAMS), not tied to a session.
    Connection,
}

/// Routes a message by session id.
///
/// PARAMS is connection-level. A FIRST_MSG for an unknown id creates a
/// session on the committer side (that is how sessions reach the
/// committer); any other unknown id is a routing error.
pub fn route(role: Role, known: bool, message: &ProtocolMessage) -> Result<Routing, ProtocolError> {
    match message.kind() {
        MessageKind::Params => Ok(Routing::Connection),
        MessageKind::FirstMsg if role == Role::Committer && !known => {
            Ok(Routing::Create(message.session))
        }
        _ if known => Ok(Routing::Existing(message.session)),
        _ => Err(ProtocolError::UnknownSession(message.session)),
    }
}

// ---------------------------------------------------------------------------
// Receiver
// ---------------------------------------------------------------------------

/// How the receiver picks each session's blinding base.
#[derive(Debug, Clone)]
pub enum ReceiverMode {
    /// Hash-to-group from a public seed; nobody learns the discrete log.
    Honest { seed: Vec<u8> },
    /// Sample a fresh trapdoor per session from the given seed and keep it.
    Trapdoor { seed: Vec<u8> },
    /// Explicit per-session trapdoor exponents, for deterministic replay.
    FixedTrapdoors(Vec<Scalar>),
}

#[derive(Debug, Clone)]
pub struct ReceiverSession {
    pub phase: Phase,
    pub commit_params: Option<CommitParams>,
    pub trapdoor: Option<Trapdoor>,
    pub commitment: Option<Commitment>,
    /// Set when an opening was accepted.
    pub opened_value: Option<Scalar>,
    /// Set when an opening was checked and failed, as opposed to a
    /// protocol-order failure.
    pub rejected_open: bool,
}

impl ReceiverSession {
    fn new() -> Self {
        ReceiverSession {
            phase: Phase::Init,
            commit_params: None,
            trapdoor: None,
            commitment: None,
            opened_value: None,
            rejected_open: false,
        }
    }
}

#[derive(Debug)]
pub enum ReceiverEvent {
    /// Start the allocated session: choose `B`, emit FIRST_MSG.
    Start(SessionId),
    /// A frame from the committer.
    Incoming(ProtocolMessage),
}

/// The receiver side: allocates sessions, hands out first messages,
/// verifies openings.
#[derive(Debug)]
pub struct ReceiverEndpoint {
    group: Arc<GroupParams>,
    mode: ReceiverMode,
    sessions: BTreeMap<SessionId, ReceiverSession>,
    next_id: u32,
}

impl ReceiverEndpoint {
    pub fn new(group: Arc<GroupParams>, mode: ReceiverMode) -> Self {
        ReceiverEndpoint {
            group,
            mode,
            sessions: BTreeMap::new(),
            next_id: 0,
        }
    }

    pub fn group(&self) -> &Arc<GroupParams> {
        &self.group
    }

    /// Allocates the next session id. Ids are assigned monotonically and
    /// never reused.
    pub fn allocate_session(&mut self) -> SessionId {
        let id = SessionId(self.next_id);
        self.next_id += 1;
        self.sessions.insert(id, ReceiverSession::new());
        id
    }

    /// The connection-level group announcement.
    pub fn announce_params(&self) -> ProtocolMessage {
        ProtocolMessage::new(SessionId(0), MessageBody::Params(self.group.clone()))
    }

    pub fn session(&self, id: SessionId) -> Option<&ReceiverSession> {
        self.sessions.get(&id)
    }

    pub fn sessions(&self) -> impl Iterator<Item = (&SessionId, &ReceiverSession)> {
        self.sessions.iter()
    }

    /// The trapdoor held for a session, if the mode keeps one. This is the
    /// simulator's receiver-in-the-head hook.
    pub fn trapdoor(&self, id: SessionId) -> Option<&Trapdoor> {
        self.sessions.get(&id).and_then(|s| s.trapdoor.as_ref())
    }

    /// Permanently fails a session (e.g. after its peer sent an
    /// undecodable frame) and produces the REJECT notice.
    pub fn fail_session(&mut self, id: SessionId) -> Result<Vec<ProtocolMessage>, ProtocolError> {
        let session = self
            .sessions
            .get_mut(&id)
            .ok_or(ProtocolError::UnknownSession(id))?;
        session.phase = Phase::Failed;
        Ok(vec![ProtocolMessage::new(id, MessageBody::Reject)])
    }

    pub fn step(&mut self, event: ReceiverEvent) -> Result<Vec<ProtocolMessage>, ProtocolError> {
        match event {
            ReceiverEvent::Start(id) => self.start_session(id),
            ReceiverEvent::Incoming(message) => self.handle_incoming(message),
        }
    }

    fn start_session(&mut self, id: SessionId) -> Result<Vec<ProtocolMessage>, ProtocolError> {
        let (params, trapdoor) = match &self.mode {
            ReceiverMode::Honest { seed } => {
                let session_seed =
                    seeding::derive_seed(seed, "receiver.first-msg", u64::from(id.0));
                (setup_honest(&self.group, &session_seed), None)
            }
            ReceiverMode::Trapdoor { seed } => {
                let mut rng = seeding::derive_rng(seed, "receiver.trapdoor", u64::from(id.0));
                let (params, td) = commitment::setup_trapdoor(&self.group, &mut rng);
                (params, Some(td))
            }
            ReceiverMode::FixedTrapdoors(exponents) => {
                let b = exponents
                    .get(id.0 as usize)
                    .cloned()
                    .ok_or(ProtocolError::MissingTrapdoor(id))?;
                let (params, td) = setup_with_trapdoor(&self.group, b)
                    .map_err(|_| ProtocolError::MissingTrapdoor(id))?;
                (params, Some(td))
            }
        };
        let session = self
            .sessions
            .get_mut(&id)
            .ok_or(ProtocolError::UnknownSession(id))?;
        if session.phase != Phase::Init {
            return Err(ProtocolError::BadCommand {
                session: id,
                phase: session.phase,
            });
        }
        let first = params.blinding_base().clone();
        session.commit_params = Some(params);
        session.trapdoor = trapdoor;
        session.phase = Phase::AwaitCommit;
        Ok(vec![ProtocolMessage::new(id, MessageBody::FirstMsg(first))])
    }

    fn handle_incoming(
        &mut self,
        message: ProtocolMessage,
    ) -> Result<Vec<ProtocolMessage>, ProtocolError> {
        let id = message.session;
        match route(Role::Receiver, self.sessions.contains_key(&id), &message)? {
            Routing::Connection => {
                // The receiver is the params authority; a peer announcing
                // params is out of protocol but harmless to ignore.
                Ok(Vec::new())
            }
            Routing::Create(_) => unreachable!("receiver never creates sessions from the wire"),
            Routing::Existing(id) => {
                let session = self.sessions.get_mut(&id).expect("routed to existing");
                match (message.body, session.phase) {
                    (MessageBody::Commit(element), Phase::AwaitCommit) => {
                        session.commitment = Some(Commitment::from_element(element));
                        session.phase = Phase::Committed;
                        Ok(Vec::new())
                    }
                    (MessageBody::Open { value, blinding }, Phase::Committed) => {
                        let params = session.commit_params.as_ref().expect("set at start");
                        let commitment = session.commitment.as_ref().expect("set on commit");
                        let opening = Opening::new(value, blinding);
                        if verify(params, commitment, &opening) {
                            session.phase = Phase::Opened;
                            session.opened_value = Some(opening.value().clone());
                            Ok(vec![ProtocolMessage::new(id, MessageBody::Accept)])
                        } else {
                            session.phase = Phase::Failed;
                            session.rejected_open = true;
                            Ok(vec![ProtocolMessage::new(id, MessageBody::Reject)])
                        }
                    }
                    // Anything else is out of phase or flowing the wrong
                    // way; fail closed.
                    _ => {
                        session.phase = Phase::Failed;
                        Ok(vec![ProtocolMessage::new(id, MessageBody::Reject)])
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Committer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct CommitterSession {
    pub phase: Phase,
    pub commit_params: Option<CommitParams>,
    pub commitment: Option<Commitment>,
    /// The opening most recently produced or sent for this session.
    pub opening: Option<Opening>,
    open_sent: bool,
}

impl CommitterSession {
    fn new() -> Self {
        CommitterSession {
            phase: Phase::Init,
            commit_params: None,
            commitment: None,
            opening: None,
            open_sent: false,
        }
    }
}

#[derive(Debug)]
pub enum CommitterEvent {
    /// A frame from the receiver.
    Incoming(ProtocolMessage),
    /// Commit to `value`. With `blinding: None` the endpoint draws the
    /// blinding scalar from its own generator; passing `Some` makes the
    /// commitment fully deterministic.
    Commit {
        session: SessionId,
        value: Scalar,
        blinding: Option<Scalar>,
    },
    /// Send an opening. `None` sends the opening stored at commit time; a
    /// trapdoor holder may pass a different one (an equivocation).
    Open {
        session: SessionId,
        opening: Option<Opening>,
    },
}

/// The committer side: consumes first messages, produces commitments and
/// openings on command.
#[derive(Debug)]
pub struct CommitterEndpoint {
    group: Option<Arc<GroupParams>>,
    sessions: BTreeMap<SessionId, CommitterSession>,
    rng: rand_chacha::ChaCha20Rng,
}

impl CommitterEndpoint {
    /// `group` may be `None` when the connection starts with a PARAMS
    /// announcement. The seed feeds blinding-scalar draws for
    /// [`CommitterEvent::Commit`] commands without explicit randomness.
    pub fn new(group: Option<Arc<GroupParams>>, seed: &[u8]) -> Self {
        CommitterEndpoint {
            group,
            sessions: BTreeMap::new(),
            rng: seeding::derive_rng(seed, "committer.blinding", 0),
        }
    }

    pub fn group(&self) -> Option<&Arc<GroupParams>> {
        self.group.as_ref()
    }

    pub fn session(&self, id: SessionId) -> Option<&CommitterSession> {
        self.sessions.get(&id)
    }

    pub fn sessions(&self) -> impl Iterator<Item = (&SessionId, &CommitterSession)> {
        self.sessions.iter()
    }

    pub fn step(&mut self, event: CommitterEvent) -> Result<Vec<ProtocolMessage>, ProtocolError> {
        match event {
            CommitterEvent::Incoming(message) => self.handle_incoming(message),
            CommitterEvent::Commit {
                session,
                value,
                blinding,
            } => self.handle_commit(session, value, blinding),
            CommitterEvent::Open { session, opening } => self.handle_open(session, opening),
        }
    }

    fn handle_incoming(
        &mut self,
        message: ProtocolMessage,
    ) -> Result<Vec<ProtocolMessage>, ProtocolError> {
        let id = message.session;
        match route(Role::Committer, self.sessions.contains_key(&id), &message)? {
            Routing::Connection => {
                let MessageBody::Params(params) = message.body else {
                    unreachable!("connection routing only applies to PARAMS");
                };
                match &self.group {
                    None => {
                        self.group = Some(params);
                        Ok(Vec::new())
                    }
                    Some(known) if *known == params => Ok(Vec::new()),
                    Some(_) => Err(ProtocolError::ParamsMismatch),
                }
            }
            Routing::Create(id) => {
                let MessageBody::FirstMsg(base) = message.body else {
                    unreachable!("sessions are created by FIRST_MSG only");
                };
                let group = self.group.clone().ok_or(ProtocolError::MissingParams)?;
                let mut session = CommitterSession::new();
                let reply = match CommitParams::new(group, base) {
                    Ok(params) => {
                        session.commit_params = Some(params);
                        session.phase = Phase::AwaitCommit;
                        Vec::new()
                    }
                    Err(_) => {
                        // Identity base: refuse the session outright.
                        session.phase = Phase::Failed;
                        vec![ProtocolMessage::new(id, MessageBody::Reject)]
                    }
                };
                self.sessions.insert(id, session);
                Ok(reply)
            }
            Routing::Existing(id) => {
                let session = self.sessions.get_mut(&id).expect("routed to existing");
                match (message.body, session.phase) {
                    (MessageBody::Accept, Phase::Committed) if session.open_sent => {
                        session.phase = Phase::Opened;
                        Ok(Vec::new())
                    }
                    (MessageBody::Reject, _) => {
                        session.phase = Phase::Failed;
                        Ok(Vec::new())
                    }
                    _ => {
                        session.phase = Phase::Failed;
                        Ok(vec![ProtocolMessage::new(id, MessageBody::Reject)])
                    }
                }
            }
        }
    }

    fn handle_commit(
        &mut self,
        id: SessionId,
        value: Scalar,
        blinding: Option<Scalar>,
    ) -> Result<Vec<ProtocolMessage>, ProtocolError> {
        let session = self
            .sessions
            .get_mut(&id)
            .ok_or(ProtocolError::UnknownSession(id))?;
        if session.phase != Phase::AwaitCommit {
            return Err(ProtocolError::BadCommand {
                session: id,
                phase: session.phase,
            });
        }
        let params = session
            .commit_params
            .as_ref()
            .expect("set on first message");
        let blinding = blinding.unwrap_or_else(|| params.group().random_scalar(&mut self.rng));
        let commitment = commit_with_randomness(params, &value, &blinding);
        let element = commitment.element().clone();
        session.commitment = Some(commitment);
        session.opening = Some(Opening::new(value, blinding));
        session.phase = Phase::Committed;
        Ok(vec![ProtocolMessage::new(id, MessageBody::Commit(element))])
    }

    fn handle_open(
        &mut self,
        id: SessionId,
        opening: Option<Opening>,
    ) -> Result<Vec<ProtocolMessage>, ProtocolError> {
        let session = self
            .sessions
            .get_mut(&id)
            .ok_or(ProtocolError::UnknownSession(id))?;
        if session.phase != Phase::Committed || session.open_sent {
            return Err(ProtocolError::BadCommand {
                session: id,
                phase: session.phase,
            });
        }
        let opening = opening.unwrap_or_else(|| session.opening.clone().expect("set on commit"));
        session.opening = Some(opening.clone());
        session.open_sent = true;
        Ok(vec![ProtocolMessage::new(
            id,
            MessageBody::Open {
                value: opening.value().clone(),
                blinding: opening.blinding().clone(),
            },
        )])
    }
}
