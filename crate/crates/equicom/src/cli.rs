//! The `equicom` command-line front end.
//!
//! Exit codes: 0 success (or verified), 1 verification failure or a
//! rejected/failed session, 2 usage error, 3 malformed input. Values go to
//! stdout; diagnostics go to stderr; secrets (trapdoors, unrevealed
//! openings) go to files only, mirroring the protocol's information flow.

use std::ffi::OsString;
use std::fs;
use std::net::{TcpListener, TcpStream};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::thread;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use crate::commitment::{
    self, commit_with_randomness, equivocate, extract, hiding_distribution, setup_honest, verify,
    CommitParams, Commitment, Opening, Trapdoor,
};
use crate::group::{fixed_test_params, generate_params, GroupParams};
use crate::protocol::{
    loopback_pair, run_committer_over_wire, run_receiver_over_wire, ReceiverMode, TcpWire,
    WireRunReport,
};
use crate::seeding;
use crate::simulator::{
    run as run_simulation, AdversarialFn, CommitterStrategy, ReceiverRunMode, RunConfig, Schedule,
};

const EXIT_OK: i32 = 0;
const EXIT_REJECTED: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_MALFORMED: i32 = 3;

/// Equivocal commitments: keys, commitments, openings, trapdoor games, and
/// a concurrent-session simulator.
#[derive(Debug, Parser)]
#[command(name = "equicom", version, max_term_width = 100)]
struct Cli {
    /// Output style: human-oriented text or bare hex for shell pipelines.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    output: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Hex,
}

/// Where the group parameters come from. Exactly one source must be given.
#[derive(Debug, Args)]
struct GroupSource {
    /// Use the built-in toy group (p=23, q=11, g=2).
    #[arg(long)]
    toy: bool,
    /// Load group parameters written by gen-params.
    #[arg(long, value_name = "FILE")]
    params: Option<PathBuf>,
    /// Generate a group with a subgroup order of this many bits
    /// (requires --gen-seed).
    #[arg(long, value_name = "BITS")]
    gen_q_bits: Option<u32>,
    /// Seed for --gen-q-bits.
    #[arg(long, value_name = "SEED")]
    gen_seed: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate group parameters (a safe-prime Schnorr group).
    GenParams {
        /// Bit length of the subgroup order q.
        #[arg(long, value_name = "BITS")]
        q_bits: u32,
        /// Seed; a fixed seed always yields the same group.
        #[arg(long, value_name = "SEED")]
        seed: String,
        /// Where to write the parameters.
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Derive a commitment key, trapdoored or honest.
    Setup {
        #[command(flatten)]
        group: GroupSource,
        /// Sample a trapdoored key (requires --seed and --secret-out).
        #[arg(long)]
        trapdoor: bool,
        /// Seed for trapdoor sampling.
        #[arg(long, value_name = "SEED")]
        seed: Option<String>,
        /// Public seed for the honest hash-to-group key.
        #[arg(long, value_name = "SEED")]
        public_seed: Option<String>,
        /// Where to write the commitment key.
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Where to write the trapdoor exponent (kept out of stdout).
        #[arg(long, value_name = "FILE")]
        secret_out: Option<PathBuf>,
    },
    /// Commit to a value.
    Commit {
        /// Commitment key written by setup.
        #[arg(long, value_name = "FILE")]
        key: PathBuf,
        /// The value to commit to (decimal or 0x-hex), reduced mod q.
        #[arg(long, value_name = "VALUE")]
        value: String,
        /// Seed for the blinding scalar.
        #[arg(long, value_name = "SEED")]
        seed: String,
        /// Where to write the commitment.
        #[arg(long, value_name = "FILE")]
        commitment_out: PathBuf,
        /// Where to write the opening (kept out of stdout until revealed).
        #[arg(long, value_name = "FILE")]
        opening_out: PathBuf,
    },
    /// Check an opening against a commitment.
    Verify {
        #[arg(long, value_name = "FILE")]
        key: PathBuf,
        #[arg(long, value_name = "FILE")]
        commitment: PathBuf,
        #[arg(long, value_name = "FILE")]
        opening: PathBuf,
    },
    /// Reopen a commitment to a different value using a trapdoor.
    Equivocate {
        #[arg(long, value_name = "FILE")]
        key: PathBuf,
        /// Trapdoor file written by setup --trapdoor.
        #[arg(long, value_name = "FILE")]
        trapdoor: PathBuf,
        /// The opening to rewrite.
        #[arg(long, value_name = "FILE")]
        opening: PathBuf,
        /// The value the new opening should reveal.
        #[arg(long, value_name = "VALUE")]
        new_value: String,
        /// Where to write the new opening.
        #[arg(long, value_name = "FILE")]
        opening_out: PathBuf,
    },
    /// Recover the trapdoor from two openings of one commitment.
    Extract {
        #[command(flatten)]
        group: GroupSource,
        #[arg(long, value_name = "FILE")]
        opening1: PathBuf,
        #[arg(long, value_name = "FILE")]
        opening2: PathBuf,
    },
    /// Run honest end-to-end sessions between two endpoints over a wire.
    DemoProtocol {
        #[command(flatten)]
        group: GroupSource,
        /// Number of sessions to run.
        #[arg(long, default_value_t = 1)]
        sessions: u32,
        /// Master seed for values, blinding, and receiver bases.
        #[arg(long, value_name = "SEED")]
        seed: String,
        /// Use a real TCP socket on localhost instead of the in-process
        /// loopback.
        #[arg(long)]
        tcp: bool,
        /// Give the receiver per-session trapdoors instead of honest bases.
        #[arg(long)]
        trapdoor_receiver: bool,
        /// Comma-separated values to commit to (default: derived from the
        /// seed).
        #[arg(long, value_name = "CSV")]
        values: Option<String>,
        /// Write the committer-side transcript here (.eqct).
        #[arg(long, value_name = "FILE")]
        transcript: Option<PathBuf>,
    },
    /// Replay a schedule of interleaved sessions under a committer strategy.
    Simulate {
        #[command(flatten)]
        group: GroupSource,
        /// Schedule file: one session:action line per step.
        #[arg(long, value_name = "FILE")]
        schedule: PathBuf,
        #[arg(long, value_enum)]
        strategy: StrategyKind,
        /// Honest values or equivocator initial values (CSV; defaults to
        /// zeros).
        #[arg(long, value_name = "CSV")]
        values: Option<String>,
        /// Equivocator revised values (CSV; defaults derived from seed).
        #[arg(long, value_name = "CSV")]
        revised: Option<String>,
        /// Adversarial function over the first messages.
        #[arg(long, value_enum, default_value_t = AdvFnKind::SumOfDigests)]
        f: AdvFnKind,
        #[arg(long, value_enum, default_value_t = ReceiverKind::Honest)]
        receiver: ReceiverKind,
        #[arg(long, value_name = "SEED")]
        seed: String,
        /// Also write the report here.
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
        /// Write the transcript here (.eqct).
        #[arg(long, value_name = "FILE")]
        transcript: Option<PathBuf>,
    },
    /// Exhaustively compare commitment distributions across all values
    /// (small groups only).
    HidingCheck {
        #[command(flatten)]
        group: GroupSource,
        /// Commitment key to check (default: an honest key from
        /// --public-seed).
        #[arg(long, value_name = "FILE")]
        key: Option<PathBuf>,
        /// Public seed for the default key.
        #[arg(long, value_name = "SEED", default_value = "hiding-check")]
        public_seed: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyKind {
    Honest,
    Equivocator,
    Adversarial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AdvFnKind {
    SumOfDigests,
    HashOfConcat,
}

impl From<AdvFnKind> for AdversarialFn {
    fn from(kind: AdvFnKind) -> Self {
        match kind {
            AdvFnKind::SumOfDigests => AdversarialFn::SumOfDigests,
            AdvFnKind::HashOfConcat => AdversarialFn::HashOfConcat,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReceiverKind {
    Honest,
    Trapdoor,
}

impl From<ReceiverKind> for ReceiverRunMode {
    fn from(kind: ReceiverKind) -> Self {
        match kind {
            ReceiverKind::Honest => ReceiverRunMode::Honest,
            ReceiverKind::Trapdoor => ReceiverRunMode::Trapdoor,
        }
    }
}

/// A failure with its exit code; the message goes to stderr.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_MALFORMED,
            message: message.into(),
        }
    }
}

/// Parses `args` and runs the selected subcommand, returning the process
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err)
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) =>
        {
            print!("{err}");
            return EXIT_OK;
        }
        Err(err) => {
            eprint!("{err}");
            return EXIT_USAGE;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, Failure> {
    let output = cli.output;
    match cli.command {
        Command::GenParams { q_bits, seed, out } => cmd_gen_params(output, q_bits, &seed, &out),
        Command::Setup {
            group,
            trapdoor,
            seed,
            public_seed,
            out,
            secret_out,
        } => cmd_setup(
            output,
            &group,
            trapdoor,
            seed,
            public_seed,
            &out,
            secret_out,
        ),
        Command::Commit {
            key,
            value,
            seed,
            commitment_out,
            opening_out,
        } => cmd_commit(output, &key, &value, &seed, &commitment_out, &opening_out),
        Command::Verify {
            key,
            commitment,
            opening,
        } => cmd_verify(output, &key, &commitment, &opening),
        Command::Equivocate {
            key,
            trapdoor,
            opening,
            new_value,
            opening_out,
        } => cmd_equivocate(&key, &trapdoor, &opening, &new_value, &opening_out),
        Command::Extract {
            group,
            opening1,
            opening2,
        } => cmd_extract(output, &group, &opening1, &opening2),
        Command::DemoProtocol {
            group,
            sessions,
            seed,
            tcp,
            trapdoor_receiver,
            values,
            transcript,
        } => cmd_demo(
            &group,
            sessions,
            &seed,
            tcp,
            trapdoor_receiver,
            values,
            transcript,
        ),
        Command::Simulate {
            group,
            schedule,
            strategy,
            values,
            revised,
            f,
            receiver,
            seed,
            report,
            transcript,
        } => cmd_simulate(
            &group, &schedule, strategy, values, revised, f, receiver, &seed, report, transcript,
        ),
        Command::HidingCheck {
            group,
            key,
            public_seed,
        } => cmd_hiding_check(&group, key, &public_seed),
    }
}

// ---------------------------------------------------------------------------
// Shared parsing and IO helpers
// ---------------------------------------------------------------------------

impl GroupSource {
    fn resolve(&self) -> Result<Arc<GroupParams>, Failure> {
        let chosen = usize::from(self.toy)
            + usize::from(self.params.is_some())
            + usize::from(self.gen_q_bits.is_some());
        if chosen != 1 {
            return Err(Failure::usage(
                "pick exactly one group source: --toy, --params FILE, or --gen-q-bits BITS --gen-seed SEED",
            ));
        }
        if self.gen_seed.is_some() != self.gen_q_bits.is_some() {
            return Err(Failure::usage("--gen-q-bits and --gen-seed go together"));
        }
        if self.toy {
            return Ok(fixed_test_params());
        }
        if let Some(path) = &self.params {
            let bytes = read_file(path)?;
            return GroupParams::from_bytes(&bytes)
                .map_err(|e| Failure::input(format!("{}: {e}", path.display())));
        }
        let bits = self.gen_q_bits.expect("checked above");
        let seed = self.gen_seed.as_ref().expect("checked above");
        generate_params(bits, seed.as_bytes()).map_err(|e| Failure::usage(e.to_string()))
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes)
        .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn parse_biguint(text: &str) -> Result<BigUint, Failure> {
    let text = text.trim();
    let (digits, radix) = match text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
        Some(hex) => (hex, 16),
        None => (text, 10),
    };
    BigUint::parse_bytes(digits.as_bytes(), radix)
        .ok_or_else(|| Failure::usage(format!("cannot parse `{text}` as a number")))
}

fn parse_csv_values(text: &str) -> Result<Vec<BigUint>, Failure> {
    text.split(',').map(parse_biguint).collect()
}

fn load_key(path: &Path) -> Result<CommitParams, Failure> {
    let bytes = read_file(path)?;
    CommitParams::from_bytes(&bytes).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_opening(path: &Path, group: &Arc<GroupParams>) -> Result<Opening, Failure> {
    let bytes = read_file(path)?;
    Opening::from_bytes(&bytes, group)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn cmd_gen_params(
    output: OutputFormat,
    q_bits: u32,
    seed: &str,
    out: &Path,
) -> Result<i32, Failure> {
    let params =
        generate_params(q_bits, seed.as_bytes()).map_err(|e| Failure::usage(e.to_string()))?;
    write_file(out, &params.to_bytes())?;
    match output {
        OutputFormat::Text => {
            println!("p = 0x{:x}", params.p());
            println!("q = 0x{:x}", params.q());
            println!("g = 0x{:x}", params.g());
        }
        OutputFormat::Hex => println!("{}", hex::encode(params.to_bytes())),
    }
    Ok(EXIT_OK)
}

fn cmd_setup(
    output: OutputFormat,
    group: &GroupSource,
    trapdoor: bool,
    seed: Option<String>,
    public_seed: Option<String>,
    out: &Path,
    secret_out: Option<PathBuf>,
) -> Result<i32, Failure> {
    let group = group.resolve()?;
    let key = if trapdoor {
        let seed = seed.ok_or_else(|| Failure::usage("--trapdoor requires --seed"))?;
        let secret_out =
            secret_out.ok_or_else(|| Failure::usage("--trapdoor requires --secret-out"))?;
        let mut rng = seeding::derive_rng(seed.as_bytes(), "cli.setup", 0);
        let (key, td) = commitment::setup_trapdoor(&group, &mut rng);
        write_file(&secret_out, &td.to_bytes())?;
        key
    } else {
        let public_seed =
            public_seed.ok_or_else(|| Failure::usage("honest setup requires --public-seed"))?;
        setup_honest(&group, public_seed.as_bytes())
    };
    write_file(out, &key.to_bytes())?;
    match output {
        OutputFormat::Text => println!("B = 0x{:x}", key.blinding_base().value()),
        OutputFormat::Hex => println!("{}", hex::encode(key.to_bytes())),
    }
    Ok(EXIT_OK)
}

fn cmd_commit(
    output: OutputFormat,
    key: &Path,
    value: &str,
    seed: &str,
    commitment_out: &Path,
    opening_out: &Path,
) -> Result<i32, Failure> {
    let key = load_key(key)?;
    let value = key.group().scalar_from_biguint(parse_biguint(value)?);
    let mut rng = seeding::derive_rng(seed.as_bytes(), "cli.commit", 0);
    let (commitment, opening) = commitment::commit(&key, &value, &mut rng);
    write_file(commitment_out, &commitment.to_bytes())?;
    write_file(opening_out, &opening.to_bytes())?;
    match output {
        OutputFormat::Text => println!("Z = 0x{:x}", commitment.element().value()),
        OutputFormat::Hex => println!("{}", hex::encode(commitment.to_bytes())),
    }
    Ok(EXIT_OK)
}

fn cmd_verify(
    output: OutputFormat,
    key: &Path,
    commitment: &Path,
    opening: &Path,
) -> Result<i32, Failure> {
    let key = load_key(key)?;
    let commitment_bytes = read_file(commitment)?;
    let commitment = Commitment::from_bytes(&commitment_bytes, key.group())
        .map_err(|e| Failure::input(format!("{}: {e}", commitment.display())))?;
    let opening = load_opening(opening, key.group())?;
    let ok = verify(&key, &commitment, &opening);
    match output {
        OutputFormat::Text | OutputFormat::Hex => {
            println!("{}", if ok { "verified" } else { "rejected" })
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_REJECTED })
}

fn cmd_equivocate(
    key: &Path,
    trapdoor: &Path,
    opening: &Path,
    new_value: &str,
    opening_out: &Path,
) -> Result<i32, Failure> {
    let key = load_key(key)?;
    let trapdoor_bytes = read_file(trapdoor)?;
    let trapdoor = Trapdoor::from_bytes(&trapdoor_bytes, key.group())
        .map_err(|e| Failure::input(format!("{}: {e}", trapdoor.display())))?;
    if !trapdoor.matches(&key) {
        return Err(Failure::input("trapdoor does not open this commitment key"));
    }
    let opening = load_opening(opening, key.group())?;
    let new_value = key.group().scalar_from_biguint(parse_biguint(new_value)?);
    let reopened = equivocate(&trapdoor, &opening, &new_value);
    debug_assert_eq!(
        commit_with_randomness(&key, reopened.value(), reopened.blinding()),
        commit_with_randomness(&key, opening.value(), opening.blinding()),
    );
    write_file(opening_out, &reopened.to_bytes())?;
    Ok(EXIT_OK)
}

fn cmd_extract(
    output: OutputFormat,
    group: &GroupSource,
    opening1: &Path,
    opening2: &Path,
) -> Result<i32, Failure> {
    let group = group.resolve()?;
    let first = load_opening(opening1, &group)?;
    let second = load_opening(opening2, &group)?;
    let b = extract(&first, &second).map_err(|e| Failure::input(e.to_string()))?;
    match output {
        OutputFormat::Text => println!("b={b}"),
        OutputFormat::Hex => println!("{}", hex::encode(b.to_bytes())),
    }
    Ok(EXIT_OK)
}

fn cmd_demo(
    group: &GroupSource,
    sessions: u32,
    seed: &str,
    tcp: bool,
    trapdoor_receiver: bool,
    values: Option<String>,
    transcript: Option<PathBuf>,
) -> Result<i32, Failure> {
    let group = group.resolve()?;
    let seed = seed.as_bytes();
    let values: Vec<BigUint> = match values {
        Some(csv) => {
            let parsed = parse_csv_values(&csv)?;
            if parsed.len() != sessions as usize {
                return Err(Failure::usage(format!(
                    "--values carries {} entries for {} sessions",
                    parsed.len(),
                    sessions
                )));
            }
            parsed
        }
        None => {
            let mut rng = seeding::derive_rng(seed, "cli.demo-values", 0);
            (0..sessions)
                .map(|_| group.random_scalar(&mut rng).value().clone())
                .collect()
        }
    };
    let mode = if trapdoor_receiver {
        ReceiverMode::Trapdoor {
            seed: seeding::derive_seed(seed, "cli.demo-receiver", 0).to_vec(),
        }
    } else {
        ReceiverMode::Honest {
            seed: seeding::derive_seed(seed, "cli.demo-receiver", 0).to_vec(),
        }
    };

    let fail = |e: String| Failure::input(format!("protocol run failed: {e}"));
    let (receiver_report, committer_report): (WireRunReport, WireRunReport) = if tcp {
        let listener = TcpListener::bind("127.0.0.1:0")
            .map_err(|e| Failure::input(format!("cannot bind: {e}")))?;
        let addr = listener
            .local_addr()
            .map_err(|e| Failure::input(e.to_string()))?;
        let receiver_group = group.clone();
        let n = sessions as usize;
        let handle = thread::spawn(move || -> Result<WireRunReport, String> {
            let (stream, _) = listener.accept().map_err(|e| e.to_string())?;
            let mut wire = TcpWire::new(stream);
            run_receiver_over_wire(&mut wire, receiver_group, mode, n).map_err(|e| e.to_string())
        });
        let stream = TcpStream::connect(addr).map_err(|e| Failure::input(e.to_string()))?;
        let mut wire = TcpWire::new(stream);
        let committer =
            run_committer_over_wire(&mut wire, &values, seed).map_err(|e| fail(e.to_string()))?;
        let receiver = handle
            .join()
            .map_err(|_| Failure::input("receiver thread panicked"))?
            .map_err(fail)?;
        (receiver, committer)
    } else {
        let (mut receiver_wire, mut committer_wire) = loopback_pair();
        let receiver_group = group.clone();
        let n = sessions as usize;
        let handle = thread::spawn(move || -> Result<WireRunReport, String> {
            run_receiver_over_wire(&mut receiver_wire, receiver_group, mode, n)
                .map_err(|e| e.to_string())
        });
        let committer = run_committer_over_wire(&mut committer_wire, &values, seed)
            .map_err(|e| fail(e.to_string()))?;
        let receiver = handle
            .join()
            .map_err(|_| Failure::input("receiver thread panicked"))?
            .map_err(fail)?;
        (receiver, committer)
    };

    for outcome in &receiver_report.outcomes {
        match (&outcome.accepted, &outcome.value) {
            (true, Some(value)) => println!("session {}: accepted value={value}", outcome.session),
            _ => println!("session {}: rejected", outcome.session),
        }
    }
    if let Some(path) = transcript {
        write_file(&path, &committer_report.transcript.to_bytes())?;
    }
    Ok(if receiver_report.all_accepted() {
        EXIT_OK
    } else {
        EXIT_REJECTED
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    group: &GroupSource,
    schedule: &Path,
    strategy: StrategyKind,
    values: Option<String>,
    revised: Option<String>,
    f: AdvFnKind,
    receiver: ReceiverKind,
    seed: &str,
    report_out: Option<PathBuf>,
    transcript: Option<PathBuf>,
) -> Result<i32, Failure> {
    let group = group.resolve()?;
    let text = fs::read_to_string(schedule)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", schedule.display())))?;
    let schedule = Schedule::parse(&text)
        .map_err(|e| Failure::input(format!("{}: {e}", schedule.display())))?;
    let m = schedule.sessions();

    let parse_scalars = |csv: Option<String>, default: &dyn Fn(usize) -> BigUint| {
        let values = match csv {
            Some(csv) => parse_csv_values(&csv)?,
            None => (0..m).map(default).collect(),
        };
        Ok::<_, Failure>(
            values
                .into_iter()
                .map(|v| group.scalar_from_biguint(v))
                .collect::<Vec<_>>(),
        )
    };
    let zero = |_: usize| BigUint::from(0u32);
    let seeded = |domain: &'static str| {
        let group = group.clone();
        let seed = seed.as_bytes().to_vec();
        move |i: usize| {
            let mut rng = seeding::derive_rng(&seed, domain, i as u64);
            group.random_scalar(&mut rng).value().clone()
        }
    };

    let strategy = match strategy {
        StrategyKind::Honest => CommitterStrategy::Honest {
            values: parse_scalars(values, &seeded("cli.sim-values"))?,
        },
        StrategyKind::Equivocator => CommitterStrategy::Equivocator {
            initial: parse_scalars(values, &zero)?,
            revised: parse_scalars(revised, &seeded("cli.sim-revised"))?,
        },
        StrategyKind::Adversarial => CommitterStrategy::Adversarial { f: f.into() },
    };
    let config = RunConfig {
        group,
        receiver_mode: receiver.into(),
        seed: seed.as_bytes().to_vec(),
    };
    let report = run_simulation(&config, &schedule, &strategy).map_err(|e| {
        use crate::simulator::SimulatorError as E;
        match e {
            E::ArityMismatch { .. } | E::TrapdoorRequired | E::TooManySessions(_) => {
                Failure::usage(e.to_string())
            }
            other => Failure::input(other.to_string()),
        }
    })?;

    let text = report.to_text();
    print!("{text}");
    if let Some(path) = report_out {
        write_file(&path, text.as_bytes())?;
    }
    if let Some(path) = transcript {
        write_file(&path, &report.transcript.to_bytes())?;
    }
    Ok(if report.all_accepted() {
        EXIT_OK
    } else {
        EXIT_REJECTED
    })
}

fn cmd_hiding_check(
    group: &GroupSource,
    key: Option<PathBuf>,
    public_seed: &str,
) -> Result<i32, Failure> {
    let group = group.resolve()?;
    let key = match key {
        Some(path) => {
            let key = load_key(&path)?;
            if key.group() != &group {
                return Err(Failure::input(
                    "commitment key belongs to a different group",
                ));
            }
            key
        }
        None => setup_honest(&group, public_seed.as_bytes()),
    };

    let sorted = |x: u64| -> Result<Vec<BigUint>, Failure> {
        let dist = hiding_distribution(&key, &group.scalar_from_u64(x))
            .map_err(|e| Failure::usage(e.to_string()))?;
        let mut values: Vec<BigUint> = dist.into_iter().map(|e| e.value().clone()).collect();
        values.sort();
        Ok(values)
    };
    let q = u64::try_from(group.q()).map_err(|_| {
        Failure::usage("subgroup order exceeds the exhaustive-enumeration limit of 2^16")
    })?;
    let reference = sorted(0)?;
    let mut matches = 0u64;
    for x in 0..q {
        if sorted(x)? == reference {
            matches += 1;
        }
    }
    println!("identical distributions: {matches}/{q} values");
    Ok(if matches == q { EXIT_OK } else { EXIT_REJECTED })
}
