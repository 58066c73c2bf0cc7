//! Trapdoor-equivocal commitments over Schnorr groups.
//!
//! The toolkit is built around one commitment scheme: commit to `x` by
//! sampling `r` and publishing `Z = g^x · B^r` in a prime-order group; open
//! by revealing `(x, r)`. The scheme is perfectly hiding, and it is binding
//! exactly as long as nobody knows the discrete log of `B`. Both failure
//! modes of that caveat are implemented as features:
//!
//! * whoever knows `b = dlog_g(B)` can reopen any commitment to any value
//!   ([`commitment::equivocate`]), and
//! * any two openings of the same `Z` to different values reveal `b`
//!   ([`commitment::extract`]).
//!
//! On top of the scheme sit a two-party protocol layer ([`protocol`]) with a
//! bit-exact wire codec and multiplexed sessions, and a deterministic
//! scheduler ([`simulator`]) that replays concurrent-session interleavings
//! with honest, equivocating, or adversarial committers.
//!
//! # Security
//!
//! This is a research and teaching artifact. Arithmetic is variable-time
//! big-integer math with no side-channel hardening, groups are sized for
//! desk-scale experiments, and secrets are written to ordinary files by the
//! CLI. Do not use any of this to protect real data.
//!
//! # Layout
//!
//! * [`group`] — Schnorr-subgroup arithmetic, parameter generation, fixed
//!   encodings.
//! * [`commitment`] — the commitment scheme itself: setup, commit, verify,
//!   equivocate, extract.
//! * [`protocol`] — committer/receiver state machines, framing codec,
//!   transcripts, loopback and TCP transports.
//! * [`simulator`] — schedules, committer strategies, deterministic runs.
//! * [`cli`] — the `equicom` command-line front end.
//!
//! Runnable walkthroughs for each capability live in the crate's
//! `examples/` directory.

pub mod cli;
pub mod commitment;
pub mod group;
pub mod protocol;
pub mod simulator;

pub(crate) mod seeding;
