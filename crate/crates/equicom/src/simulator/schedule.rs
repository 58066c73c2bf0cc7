//! Interleaving schedules.
//!
//! A schedule is an ordered list of `(session, action)` steps over `m`
//! sessions. Each session contributes at most three actions, in protocol
//! order: deliver the receiver's first message, deliver the commitment,
//! deliver the opening. A schedule is the simulator-level description of
//! one adversarially chosen interleaving.
//!
//! The text form is one `session:action` per line, with `#` comments and
//! blank lines ignored:
//!
//! ```text
//! 0:first_msg
//! 1:first_msg
//! 0:commit
//! ...
//! ```

use std::fmt;

use super::SimulatorError;

/// One per-session protocol stage the scheduler can deliver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SessionAction {
    DeliverFirstMsg,
    DeliverCommit,
    DeliverOpen,
}

impl SessionAction {
    /// Position in the per-session protocol order.
    fn rank(self) -> usize {
        match self {
            SessionAction::DeliverFirstMsg => 0,
            SessionAction::DeliverCommit => 1,
            SessionAction::DeliverOpen => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SessionAction::DeliverFirstMsg => "first_msg",
            SessionAction::DeliverCommit => "commit",
            SessionAction::DeliverOpen => "open",
        }
    }

    fn from_label(label: &str) -> Option<Self> {
        match label {
            "first_msg" => Some(SessionAction::DeliverFirstMsg),
            "commit" => Some(SessionAction::DeliverCommit),
            "open" => Some(SessionAction::DeliverOpen),
            _ => None,
        }
    }
}

impl fmt::Display for SessionAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScheduleStep {
    pub session: usize,
    pub action: SessionAction,
}

/// A validated interleaving of `sessions` three-action sessions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    sessions: usize,
    steps: Vec<ScheduleStep>,
}

impl Schedule {
    /// Validates that every step references a session below `sessions` and
    /// that each session's actions appear in protocol order without
    /// duplicates or skips. Incomplete sessions are allowed.
    pub fn new(sessions: usize, steps: Vec<ScheduleStep>) -> Result<Self, SimulatorError> {
        let mut progress = vec![0usize; sessions];
        for (index, step) in steps.iter().enumerate() {
            if step.session >= sessions {
                return Err(SimulatorError::SessionOutOfRange {
                    index,
                    session: step.session,
                    sessions,
                });
            }
            if step.action.rank() != progress[step.session] {
                return Err(SimulatorError::OutOfOrder { index });
            }
            progress[step.session] += 1;
        }
        Ok(Schedule { sessions, steps })
    }

    pub fn sessions(&self) -> usize {
        self.sessions
    }

    pub fn steps(&self) -> &[ScheduleStep] {
        &self.steps
    }

    /// Sessions executed back to back: `0:first_msg 0:commit 0:open 1:...`.
    pub fn sequential(sessions: usize) -> Schedule {
        let steps = (0..sessions)
            .flat_map(|session| {
                [
                    SessionAction::DeliverFirstMsg,
                    SessionAction::DeliverCommit,
                    SessionAction::DeliverOpen,
                ]
                .into_iter()
                .map(move |action| ScheduleStep { session, action })
            })
            .collect();
        Schedule { sessions, steps }
    }

    /// Action-major round robin: all first messages in session order, then
    /// all commitments, then all openings. This is the interleaving where
    /// every commit happens only after every session's first message, which
    /// is what an adversarial committer waits for.
    pub fn round_robin(sessions: usize) -> Schedule {
        let mut steps = Vec::with_capacity(3 * sessions);
        for action in [
            SessionAction::DeliverFirstMsg,
            SessionAction::DeliverCommit,
            SessionAction::DeliverOpen,
        ] {
            for session in 0..sessions {
                steps.push(ScheduleStep { session, action });
            }
        }
        Schedule { sessions, steps }
    }

    /// Parses the `session:action` line format. The session count is
    /// inferred as one past the highest session index seen.
    pub fn parse(text: &str) -> Result<Schedule, SimulatorError> {
        let mut steps = Vec::new();
        let mut sessions = 0usize;
        for (number, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse = |reason: &str| SimulatorError::Parse {
                line: number + 1,
                reason: reason.to_string(),
            };
            let (session, action) = line
                .split_once(':')
                .ok_or_else(|| parse("expected `session:action`"))?;
            let session: usize = session
                .trim()
                .parse()
                .map_err(|_| parse("session index is not a number"))?;
            let action = SessionAction::from_label(action.trim())
                .ok_or_else(|| parse("action must be first_msg, commit, or open"))?;
            sessions = sessions.max(session + 1);
            steps.push(ScheduleStep { session, action });
        }
        Schedule::new(sessions, steps)
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            writeln!(f, "{}:{}", step.session, step.action)?;
        }
        Ok(())
    }
}

/// Number of sessions above which exhaustive enumeration is refused.
pub const ENUMERATION_SESSION_LIMIT: usize = 3;

/// Enumerates every complete interleaving of `sessions` three-action
/// sessions, in lexicographic session order.
///
/// The count is the multinomial `(3m)! / (3!)^m` — 1, 20, 1680 for one,
/// two, three sessions — which is why `sessions` is capped at
/// [`ENUMERATION_SESSION_LIMIT`] and the total step count at `max_steps`.
pub fn enumerate_schedules(
    sessions: usize,
    max_steps: usize,
) -> Result<Vec<Schedule>, SimulatorError> {
    if sessions == 0 || sessions > ENUMERATION_SESSION_LIMIT {
        return Err(SimulatorError::TooManySessions(sessions));
    }
    let needed = 3 * sessions;
    if needed > max_steps {
        return Err(SimulatorError::StepBudget { needed, max_steps });
    }
    let mut out = Vec::new();
    let mut progress = vec![0usize; sessions];
    let mut current = Vec::with_capacity(needed);
    fill(sessions, needed, &mut progress, &mut current, &mut out);
    Ok(out)
}

fn fill(
    sessions: usize,
    needed: usize,
    progress: &mut [usize],
    current: &mut Vec<ScheduleStep>,
    out: &mut Vec<Schedule>,
) {
    if current.len() == needed {
        out.push(Schedule {
            sessions,
            steps: current.clone(),
        });
        return;
    }
    for session in 0..sessions {
        let action = match progress[session] {
            0 => SessionAction::DeliverFirstMsg,
            1 => SessionAction::DeliverCommit,
            2 => SessionAction::DeliverOpen,
            _ => continue,
        };
        progress[session] += 1;
        current.push(ScheduleStep { session, action });
        fill(sessions, needed, progress, current, out);
        current.pop();
        progress[session] -= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Binomial coefficient, the independent counting oracle.
    fn choose(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        let mut result = 1u64;
        for i in 0..k {
            result = result * (n - i) / (i + 1);
        }
        result
    }

    #[test]
    fn single_session_has_one_schedule() {
        let schedules = enumerate_schedules(1, 100).unwrap();
        assert_eq!(schedules.len(), 1);
        assert_eq!(schedules[0], Schedule::sequential(1));
    }

    #[test]
    fn two_sessions_have_twenty_schedules() {
        // Oracle: choosing which 3 of 6 slots belong to session 0 fixes
        // everything, so the count is C(6, 3) = 20.
        let schedules = enumerate_schedules(2, 100).unwrap();
        assert_eq!(schedules.len() as u64, choose(6, 3));
        let unique: std::collections::HashSet<String> =
            schedules.iter().map(|s| s.to_string()).collect();
        assert_eq!(unique.len(), 20, "schedules are distinct");
    }

    #[test]
    fn three_sessions_match_the_multinomial() {
        // 9! / (3!)^3 = C(9,3) * C(6,3) = 84 * 20 = 1680.
        let schedules = enumerate_schedules(3, 100).unwrap();
        assert_eq!(schedules.len() as u64, choose(9, 3) * choose(6, 3));
    }

    #[test]
    fn every_enumerated_schedule_validates() {
        for schedule in enumerate_schedules(2, 100).unwrap() {
            assert!(Schedule::new(2, schedule.steps().to_vec()).is_ok());
        }
    }

    #[test]
    fn enumeration_guards() {
        assert_eq!(
            enumerate_schedules(4, 100).err(),
            Some(SimulatorError::TooManySessions(4))
        );
        assert_eq!(
            enumerate_schedules(0, 100).err(),
            Some(SimulatorError::TooManySessions(0))
        );
        assert_eq!(
            enumerate_schedules(3, 8).err(),
            Some(SimulatorError::StepBudget {
                needed: 9,
                max_steps: 8
            })
        );
    }

    #[test]
    fn validation_rejects_bad_schedules() {
        let bad_session = vec![ScheduleStep {
            session: 2,
            action: SessionAction::DeliverFirstMsg,
        }];
        assert!(matches!(
            Schedule::new(2, bad_session),
            Err(SimulatorError::SessionOutOfRange { session: 2, .. })
        ));

        let out_of_order = vec![ScheduleStep {
            session: 0,
            action: SessionAction::DeliverCommit,
        }];
        assert_eq!(
            Schedule::new(1, out_of_order).err(),
            Some(SimulatorError::OutOfOrder { index: 0 })
        );

        let duplicate = vec![
            ScheduleStep {
                session: 0,
                action: SessionAction::DeliverFirstMsg,
            },
            ScheduleStep {
                session: 0,
                action: SessionAction::DeliverFirstMsg,
            },
        ];
        assert_eq!(
            Schedule::new(1, duplicate).err(),
            Some(SimulatorError::OutOfOrder { index: 1 })
        );
    }

    #[test]
    fn text_round_trip() {
        for schedule in enumerate_schedules(2, 100).unwrap() {
            assert_eq!(Schedule::parse(&schedule.to_string()).unwrap(), schedule);
        }
    }

    #[test]
    fn parse_accepts_comments_and_reports_line_numbers() {
        let text = "# a comment\n\n0:first_msg\n 0:commit \n0:open\n";
        let schedule = Schedule::parse(text).unwrap();
        assert_eq!(schedule, Schedule::sequential(1));

        let err = Schedule::parse("0:first_msg\n0:sing").err().unwrap();
        assert_eq!(
            err,
            SimulatorError::Parse {
                line: 2,
                reason: "action must be first_msg, commit, or open".to_string()
            }
        );
    }

    #[test]
    fn round_robin_defers_commits_past_all_first_messages() {
        let schedule = Schedule::round_robin(3);
        let first_commit = schedule
            .steps()
            .iter()
            .position(|s| s.action == SessionAction::DeliverCommit)
            .unwrap();
        let last_first_msg = schedule
            .steps()
            .iter()
            .rposition(|s| s.action == SessionAction::DeliverFirstMsg)
            .unwrap();
        assert!(last_first_msg < first_commit);
    }
}
