//! Deterministic concurrent-session scheduler.
//!
//! [`run`] executes a [`Schedule`] — an adversarially chosen interleaving
//! of commitment sessions — against a receiver endpoint, with the
//! committer played by a pluggable [`CommitterStrategy`]:
//!
//! * `Honest` commits to fixed values and opens them truthfully.
//! * `Equivocator` commits to placeholder values, then opens each session
//!   to a revised value using the receiver's per-session trapdoor. This is
//!   straight-line simulation: every message is produced and consumed
//!   exactly once, and the run report proves the commitment bytes were on
//!   the wire strictly before the revised value was fixed.
//! * `Adversarial` reproduces the scheduling pattern where the committer
//!   first collects every session's first message and only then commits,
//!   in session 1, to `f(B_1, ..., B_m)` — a value correlated with all of
//!   them. Remaining sessions complete honestly with fresh random values.
//!
//! For adversarial runs the report logs the inputs and output of `f`, so
//! the cross-session correlation is visible and recomputable from the
//! transcript. The toolkit deliberately stops there: it materializes the
//! scheduling scenario and its data; it does not model extraction or
//! attempt any claim about extractors.
//!
//! Everything is keyed by one master seed, fanned out per purpose and per
//! session, so reports are byte-reproducible and independent of the
//! interleaving order.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::commitment::equivocate;
use crate::group::{GroupElement, GroupParams, Scalar};
use crate::protocol::codec::payload_bytes;
use crate::protocol::{
    CommitterEndpoint, CommitterEvent, Direction, MessageBody, MessageKind, Phase, ProtocolError,
    ProtocolMessage, ReceiverEndpoint, ReceiverEvent, ReceiverMode, SessionId, Transcript,
};
use crate::seeding;

pub mod schedule;

pub use schedule::{enumerate_schedules, Schedule, ScheduleStep, SessionAction};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimulatorError {
    #[error("schedule step {index} references session {session}, but only {sessions} exist")]
    SessionOutOfRange {
        index: usize,
        session: usize,
        sessions: usize,
    },
    #[error("schedule step {index} violates per-session protocol order")]
    OutOfOrder { index: usize },
    #[error("strategy carries {got} values but the schedule has {expected} sessions")]
    ArityMismatch { expected: usize, got: usize },
    #[error("equivocating strategies need a trapdoor-mode receiver")]
    TrapdoorRequired,
    #[error("exhaustive enumeration supports 1 to 3 sessions, got {0}")]
    TooManySessions(usize),
    #[error("a full schedule needs {needed} steps, over the {max_steps}-step budget")]
    StepBudget { needed: usize, max_steps: usize },
    #[error("schedule line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

/// How the receiver chooses its per-session blinding bases during a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReceiverRunMode {
    /// Hash-to-group: nobody knows the discrete logs.
    Honest,
    /// Fresh trapdoor per session, kept by the receiver (and visible to
    /// the simulator).
    Trapdoor,
}

impl fmt::Display for ReceiverRunMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReceiverRunMode::Honest => "honest",
            ReceiverRunMode::Trapdoor => "trapdoor",
        })
    }
}

/// A pure function from the sessions' first messages to a committed value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdversarialFn {
    /// Sum of per-element digests, mod q.
    SumOfDigests,
    /// One digest over the concatenation of all elements, mod q.
    HashOfConcat,
}

impl AdversarialFn {
    pub fn label(self) -> &'static str {
        match self {
            AdversarialFn::SumOfDigests => "sum-of-digests",
            AdversarialFn::HashOfConcat => "hash-of-concat",
        }
    }

    /// Evaluates the function over the first messages, in session order.
    pub fn evaluate(self, group: &Arc<GroupParams>, first_messages: &[GroupElement]) -> Scalar {
        match self {
            AdversarialFn::SumOfDigests => first_messages
                .iter()
                .map(|element| group.scalar_from_biguint(digest_int(&element.to_bytes())))
                .fold(group.scalar_from_u64(0), |acc, s| acc.add(&s)),
            AdversarialFn::HashOfConcat => {
                let mut bytes = Vec::new();
                for element in first_messages {
                    bytes.extend_from_slice(&element.to_bytes());
                }
                group.scalar_from_biguint(digest_int(&bytes))
            }
        }
    }
}

impl fmt::Display for AdversarialFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn digest_int(bytes: &[u8]) -> BigUint {
    BigUint::from_bytes_be(&Sha256::digest(bytes))
}

/// The committer behavior a run is executed with.
#[derive(Debug, Clone)]
pub enum CommitterStrategy {
    /// Commit to `values[i]` in session `i` and open truthfully.
    Honest { values: Vec<Scalar> },
    /// Commit to `initial[i]`, then open to `revised[i]` via the
    /// receiver's trapdoor.
    Equivocator {
        initial: Vec<Scalar>,
        revised: Vec<Scalar>,
    },
    /// Defer every commitment until all first messages are delivered, then
    /// commit session 0 to `f` over them; later sessions commit to fresh
    /// random values.
    Adversarial { f: AdversarialFn },
}

impl CommitterStrategy {
    pub fn label(&self) -> &'static str {
        match self {
            CommitterStrategy::Honest { .. } => "honest",
            CommitterStrategy::Equivocator { .. } => "equivocator",
            CommitterStrategy::Adversarial { .. } => "adversarial",
        }
    }
}

/// Configuration shared by every session of a run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub group: Arc<GroupParams>,
    pub receiver_mode: ReceiverRunMode,
    pub seed: Vec<u8>,
}

/// Terminal status of one session.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SessionOutcome {
    /// The opening verified.
    Accepted,
    /// A well-formed opening failed verification.
    Rejected,
    /// The session broke protocol order, violated the strategy, or never
    /// finished.
    Failed,
}

impl fmt::Display for SessionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SessionOutcome::Accepted => "accepted",
            SessionOutcome::Rejected => "rejected",
            SessionOutcome::Failed => "failed",
        })
    }
}

/// Per-session record in a [`RunReport`].
#[derive(Debug, Clone)]
pub struct SessionReport {
    pub session: usize,
    pub wire_id: SessionId,
    pub outcome: SessionOutcome,
    pub opened_value: Option<Scalar>,
    /// Step at which the COMMIT message entered the transcript.
    pub commit_step: Option<u64>,
    /// Step at which the value the session would open to was decided.
    /// For equivocating runs this lies strictly after `commit_step`.
    pub value_fixed_step: Option<u64>,
}

/// The correlation data of an adversarial run.
#[derive(Debug, Clone)]
pub struct AdversarialRecord {
    pub function: AdversarialFn,
    /// The first messages `f` was evaluated over, in session order.
    pub inputs: Vec<GroupElement>,
    pub output: Scalar,
}

/// Everything a run produced.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub sessions: Vec<SessionReport>,
    pub transcript: Transcript,
    pub adversarial: Option<AdversarialRecord>,
    pub strategy_label: &'static str,
    pub receiver_mode: ReceiverRunMode,
}

impl RunReport {
    pub fn all_accepted(&self) -> bool {
        !self.sessions.is_empty()
            && self
                .sessions
                .iter()
                .all(|s| s.outcome == SessionOutcome::Accepted)
    }

    /// The first messages present in the transcript, ordered by session id.
    pub fn first_messages(&self) -> Vec<GroupElement> {
        let mut found: Vec<(SessionId, GroupElement)> = self
            .transcript
            .entries()
            .iter()
            .filter_map(|entry| match &entry.message.body {
                MessageBody::FirstMsg(element) => Some((entry.message.session, element.clone())),
                _ => None,
            })
            .collect();
        found.sort_by_key(|(id, _)| *id);
        found.into_iter().map(|(_, element)| element).collect()
    }

    /// Structured text: header lines, then one transcript record per line
    /// (`step session direction kind payload-hex`).
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "sessions: {}", self.sessions.len());
        let _ = writeln!(out, "strategy: {}", self.strategy_label);
        let _ = writeln!(out, "receiver: {}", self.receiver_mode);
        for report in &self.sessions {
            let _ = write!(
                out,
                "session {}: outcome={}",
                report.session, report.outcome
            );
            if let Some(value) = &report.opened_value {
                let _ = write!(out, " opened={value}");
            }
            if let Some(step) = report.commit_step {
                let _ = write!(out, " commit_step={step}");
            }
            if let Some(step) = report.value_fixed_step {
                let _ = write!(out, " value_fixed_step={step}");
            }
            out.push('\n');
        }
        if let Some(record) = &self.adversarial {
            let inputs: Vec<String> = record
                .inputs
                .iter()
                .map(|e| hex::encode(e.to_bytes()))
                .collect();
            let _ = writeln!(
                out,
                "adversarial: f={} output={} inputs={}",
                record.function,
                record.output,
                inputs.join(",")
            );
        }
        let _ = writeln!(out, "transcript:");
        for entry in self.transcript.entries() {
            let payload = payload_bytes(&entry.message);
            let payload = if payload.is_empty() {
                "-".to_string()
            } else {
                hex::encode(payload)
            };
            let _ = writeln!(
                out,
                "{} {} {} {} {}",
                entry.step,
                entry.message.session,
                entry.direction.label(),
                entry.message.kind(),
                payload
            );
        }
        out
    }
}

/// Internal step/transcript bookkeeping. Transcript entries and
/// value-fixing events share one strictly increasing step counter, from
/// the committer's perspective (sent = committer to receiver).
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

    fn record(&mut self, direction: Direction, message: &ProtocolMessage) -> u64 {
        let step = self.next_step;
        self.transcript.push(step, direction, message.clone());
        self.next_step += 1;
        step
    }

    /// Consumes a step for a non-message event.
    fn note(&mut self) -> u64 {
        let step = self.next_step;
        self.next_step += 1;
        step
    }
}

/// Executes a schedule under a strategy. Deterministic for a fixed
/// configuration; schedule-level violations surface as failed sessions,
/// never as a crash.
pub fn run(
    config: &RunConfig,
    schedule: &Schedule,
    strategy: &CommitterStrategy,
) -> Result<RunReport, SimulatorError> {
    let m = schedule.sessions();
    match strategy {
        CommitterStrategy::Honest { values } if values.len() != m => {
            return Err(SimulatorError::ArityMismatch {
                expected: m,
                got: values.len(),
            });
        }
        CommitterStrategy::Equivocator { initial, revised } => {
            if initial.len() != m || revised.len() != m {
                return Err(SimulatorError::ArityMismatch {
                    expected: m,
                    got: initial.len().min(revised.len()),
                });
            }
            if config.receiver_mode != ReceiverRunMode::Trapdoor {
                return Err(SimulatorError::TrapdoorRequired);
            }
        }
        _ => {}
    }

    let seed = config.seed.as_slice();
    let receiver_mode = match config.receiver_mode {
        ReceiverRunMode::Honest => ReceiverMode::Honest {
            seed: seeding::derive_seed(seed, "sim.receiver", 0).to_vec(),
        },
        ReceiverRunMode::Trapdoor => ReceiverMode::Trapdoor {
            seed: seeding::derive_seed(seed, "sim.receiver", 0).to_vec(),
        },
    };
    let mut receiver = ReceiverEndpoint::new(config.group.clone(), receiver_mode);
    let mut committer = CommitterEndpoint::new(
        Some(config.group.clone()),
        &seeding::derive_seed(seed, "sim.committer", 0),
    );

    // Wire ids are allocated for all sessions up front, in session order,
    // so id assignment (and with it every frame byte) is independent of
    // the interleaving being replayed.
    let ids: Vec<SessionId> = (0..m).map(|_| receiver.allocate_session()).collect();

    let mut recorder = Recorder::new();
    let mut records: Vec<SessionReport> = (0..m)
        .map(|i| SessionReport {
            session: i,
            wire_id: ids[i],
            outcome: SessionOutcome::Failed,
            opened_value: None,
            commit_step: None,
            value_fixed_step: None,
        })
        .collect();
    let mut violated = vec![false; m];
    let mut first_messages: Vec<Option<GroupElement>> = vec![None; m];
    let mut adversarial_record = None;

    for step in schedule.steps() {
        let i = step.session;
        let id = ids[i];
        match step.action {
            SessionAction::DeliverFirstMsg => match receiver.step(ReceiverEvent::Start(id)) {
                Ok(messages) => {
                    for message in &messages {
                        if let MessageBody::FirstMsg(element) = &message.body {
                            first_messages[i] = Some(element.clone());
                        }
                    }
                    exchange_from_receiver(
                        &mut receiver,
                        &mut committer,
                        &mut recorder,
                        &mut records,
                        &ids,
                        messages,
                    );
                }
                Err(_) => violated[i] = true,
            },
            SessionAction::DeliverCommit => {
                let value = match strategy {
                    CommitterStrategy::Honest { values } => Some(values[i].clone()),
                    CommitterStrategy::Equivocator { initial, .. } => Some(initial[i].clone()),
                    CommitterStrategy::Adversarial { f } => {
                        if first_messages.iter().any(|b| b.is_none()) {
                            // The adversarial committer refuses to commit
                            // before it has seen every first message.
                            None
                        } else if i == 0 {
                            let inputs: Vec<GroupElement> =
                                first_messages.iter().map(|b| b.clone().unwrap()).collect();
                            let output = f.evaluate(&config.group, &inputs);
                            adversarial_record = Some(AdversarialRecord {
                                function: *f,
                                inputs,
                                output: output.clone(),
                            });
                            Some(output)
                        } else {
                            let mut rng = seeding::derive_rng(seed, "sim.session-value", i as u64);
                            Some(config.group.random_scalar(&mut rng))
                        }
                    }
                };
                let Some(value) = value else {
                    violated[i] = true;
                    continue;
                };
                // The opened value is decided here for honest and
                // adversarial runs; equivocators decide at open time.
                if !matches!(strategy, CommitterStrategy::Equivocator { .. }) {
                    records[i].value_fixed_step = Some(recorder.note());
                }
                let mut rng = seeding::derive_rng(seed, "sim.session-blinding", i as u64);
                let blinding = config.group.random_scalar(&mut rng);
                match committer.step(CommitterEvent::Commit {
                    session: id,
                    value,
                    blinding: Some(blinding),
                }) {
                    Ok(messages) => exchange_from_committer(
                        &mut receiver,
                        &mut committer,
                        &mut recorder,
                        &mut records,
                        &ids,
                        messages,
                    ),
                    Err(_) => violated[i] = true,
                }
            }
            SessionAction::DeliverOpen => {
                let opening = match strategy {
                    CommitterStrategy::Honest { .. } | CommitterStrategy::Adversarial { .. } => {
                        None
                    }
                    CommitterStrategy::Equivocator { revised, .. } => {
                        let trapdoor = receiver.trapdoor(id).cloned();
                        let initial = committer.session(id).and_then(|s| s.opening.clone());
                        match (trapdoor, initial) {
                            (Some(td), Some(initial)) => {
                                // The revised value is fixed only now,
                                // strictly after the commitment went out.
                                records[i].value_fixed_step = Some(recorder.note());
                                Some(equivocate(&td, &initial, &revised[i]))
                            }
                            _ => None,
                        }
                    }
                };
                match committer.step(CommitterEvent::Open {
                    session: id,
                    opening,
                }) {
                    Ok(messages) => exchange_from_committer(
                        &mut receiver,
                        &mut committer,
                        &mut recorder,
                        &mut records,
                        &ids,
                        messages,
                    ),
                    Err(_) => violated[i] = true,
                }
            }
        }
    }

    for i in 0..m {
        let session = receiver.session(ids[i]).expect("allocated up front");
        records[i].outcome = if violated[i] {
            SessionOutcome::Failed
        } else {
            match session.phase {
                Phase::Opened => SessionOutcome::Accepted,
                Phase::Failed if session.rejected_open => SessionOutcome::Rejected,
                _ => SessionOutcome::Failed,
            }
        };
        records[i].opened_value = session.opened_value.clone();
    }

    Ok(RunReport {
        sessions: records,
        transcript: recorder.transcript,
        adversarial: adversarial_record,
        strategy_label: strategy.label(),
        receiver_mode: config.receiver_mode,
    })
}

/// Trapdoor-based straight-line simulation: commit every session to zero,
/// then open each to its revised value. No message is requested or
/// consumed twice; the transcript is exactly one honest run's worth of
/// messages.
pub fn straight_line_simulate(
    group: &Arc<GroupParams>,
    schedule: &Schedule,
    revised: &[Scalar],
    seed: &[u8],
) -> Result<RunReport, SimulatorError> {
    let m = schedule.sessions();
    if revised.len() != m {
        return Err(SimulatorError::ArityMismatch {
            expected: m,
            got: revised.len(),
        });
    }
    let config = RunConfig {
        group: group.clone(),
        receiver_mode: ReceiverRunMode::Trapdoor,
        seed: seed.to_vec(),
    };
    let strategy = CommitterStrategy::Equivocator {
        initial: vec![group.scalar_from_u64(0); m],
        revised: revised.to_vec(),
    };
    run(&config, schedule, &strategy)
}

/// Delivers receiver output to the committer, bouncing replies until both
/// sides are quiescent. Directions are from the committer's perspective.
fn exchange_from_receiver(
    receiver: &mut ReceiverEndpoint,
    committer: &mut CommitterEndpoint,
    recorder: &mut Recorder,
    records: &mut [SessionReport],
    ids: &[SessionId],
    messages: Vec<ProtocolMessage>,
) {
    let queue: VecDeque<(bool, ProtocolMessage)> =
        messages.into_iter().map(|m| (false, m)).collect();
    pump(receiver, committer, recorder, records, ids, queue);
}

/// Delivers committer output to the receiver, bouncing replies likewise.
fn exchange_from_committer(
    receiver: &mut ReceiverEndpoint,
    committer: &mut CommitterEndpoint,
    recorder: &mut Recorder,
    records: &mut [SessionReport],
    ids: &[SessionId],
    messages: Vec<ProtocolMessage>,
) {
    let queue: VecDeque<(bool, ProtocolMessage)> =
        messages.into_iter().map(|m| (true, m)).collect();
    pump(receiver, committer, recorder, records, ids, queue);
}

fn pump(
    receiver: &mut ReceiverEndpoint,
    committer: &mut CommitterEndpoint,
    recorder: &mut Recorder,
    records: &mut [SessionReport],
    ids: &[SessionId],
    mut queue: VecDeque<(bool, ProtocolMessage)>,
) {
    while let Some((to_receiver, message)) = queue.pop_front() {
        if to_receiver {
            let step = recorder.record(Direction::Sent, &message);
            if message.kind() == MessageKind::Commit {
                if let Some(i) = ids.iter().position(|id| *id == message.session) {
                    records[i].commit_step = Some(step);
                }
            }
            if let Ok(replies) = receiver.step(ReceiverEvent::Incoming(message)) {
                queue.extend(replies.into_iter().map(|m| (false, m)));
            }
        } else {
            recorder.record(Direction::Received, &message);
            if let Ok(replies) = committer.step(CommitterEvent::Incoming(message)) {
                queue.extend(replies.into_iter().map(|m| (true, m)));
            }
        }
    }
}
