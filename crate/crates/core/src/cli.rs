//! The `syncgame` command line. [`run`] takes explicit streams so the whole
//! surface can be driven from tests.

use std::fs;
use std::io::{BufRead, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::automaton::{export_dot, iterate, parse_dfa, serialize_dfa, Dfa, PairAutomaton};
use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::oracle::rt_exact;
use crate::potential::{component_tree, extract_reset_word, level_profile};
use crate::sim::{
    alice_characteristic, alice_optimal, bob_optimal, simulate, AliceStrategy, BobStrategy,
    EchoPowerBob, FixedLettersAlice, FixedWordBob, GameConfig, Move, Mover, Outcome, PassBob,
    Position, RandomAlice, RandomBob, Transcript,
};
use crate::solver::{decide, decide_m_omega, game_level, Certificate, GameOutcome, KBound, Level, Winner};
use crate::suites::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "syncgame", version, about = "Synchronization games on finite automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// DFA file, or `-` for standard input.
    file: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a member of a named family.
    Gen {
        family: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Decide the k-game (default omega) or, with -m, the m/omega-game.
    Decide {
        #[arg(short, long)]
        k: Option<KBound>,
        #[arg(short, long)]
        m: Option<usize>,
        /// Print the certificate summary.
        #[arg(long)]
        certificate: bool,
        #[command(flatten)]
        input: Input,
    },
    /// Largest k for which Alice wins the k-game.
    Level {
        /// Also print the pair levels d and the component tree.
        #[arg(long)]
        profile: bool,
        #[command(flatten)]
        input: Input,
    },
    /// Exact reset threshold with a shortest reset word.
    Rt {
        #[command(flatten)]
        input: Input,
    },
    /// Reset word built by Alice's strategy in the m/omega-game against a passing Bob.
    ResetWord {
        #[arg(short, long, default_value_t = 1)]
        m: usize,
        #[command(flatten)]
        input: Input,
    },
    /// The 2-subset automaton, with pair names as comments.
    Pairs {
        #[command(flatten)]
        input: Input,
    },
    /// The iteration automaton over words of length at most m.
    Iterate {
        #[arg(short, long)]
        m: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Play one game between two strategies and print the transcript.
    Simulate {
        #[arg(short, long)]
        k: KBound,
        /// optimal, characteristic, random, or scripted:<letters>
        #[arg(long, default_value = "optimal")]
        alice: String,
        /// optimal, random, pass, echo:<power>, or scripted:<letters>
        #[arg(long, default_value = "optimal")]
        bob: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Side::Bob)]
        first: Side,
        #[arg(long)]
        horizon: Option<usize>,
        /// Also write the transcript to this file.
        #[arg(long)]
        out: Option<String>,
        #[command(flatten)]
        input: Input,
    },
    /// Play interactively against a strategy, reading moves from standard input.
    Play {
        #[arg(short, long)]
        k: KBound,
        #[arg(long, value_enum)]
        side: Side,
        /// optimal, random, pass, or scripted:<letters>
        #[arg(long, default_value = "optimal")]
        opponent: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Side::Bob)]
        first: Side,
        #[arg(long)]
        transcript: Option<String>,
        /// DFA file; standard input carries the moves, so `-` is not accepted here.
        file: String,
    },
    /// Run a verification suite and print a pass/fail table.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Graphviz rendering of the automaton.
    ExportDot {
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Side {
    Alice,
    Bob,
}

impl From<Side> for Mover {
    fn from(s: Side) -> Mover {
        match s {
            Side::Alice => Mover::Alice,
            Side::Bob => Mover::Bob,
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } => EXIT_CAP,
        Error::NotSynchronizing | Error::Precondition(_) => EXIT_NEGATIVE,
        Error::Parse { .. } | Error::InvalidDfa(_) | Error::InvalidWord(_) | Error::InvalidArgument(_) => {
            EXIT_USAGE
        }
    }
}

struct Io<'a> {
    stdin: &'a mut dyn BufRead,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Runs the command line; `args` includes the program name.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    let mut io = Io {
        stdin,
        out: stdout,
        err: stderr,
    };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io.err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("i/o: {e}"))
}

fn read_dfa(path: &str, stdin: &mut dyn BufRead) -> Result<Dfa> {
    let text = if path == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s).map_err(io_err)?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("cannot read {path}: {e}")))?
    };
    parse_dfa(&text)
}

macro_rules! out {
    ($io:expr, $($arg:tt)*) => {
        writeln!($io.out, $($arg)*).map_err(io_err)?
    };
}

fn dispatch(command: Command, io: &mut Io<'_>) -> Result<i32> {
    match command {
        Command::Gen { family, n, k, m } => {
            let dfa = FamilySpec::from_parts(&family, n, k, m)?.build()?;
            write!(io.out, "{}", serialize_dfa(&dfa)).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Decide { k, m, certificate, input } => {
            let dfa = read_dfa(&input.file, io.stdin)?;
            let outcome = match (m, k) {
                (Some(_), Some(KBound::Finite(_))) => {
                    return Err(Error::InvalidArgument(
                        "-m selects the m/omega-game and cannot be combined with a finite -k".into(),
                    ))
                }
                (Some(m), _) => decide_m_omega(&dfa, m)?,
                (None, k) => decide(&dfa, k.unwrap_or(KBound::Omega))?,
            };
            if certificate {
                describe_outcome(&dfa, &outcome, io)?;
            }
            out!(io, "result: {}", outcome.winner);
            Ok(winner_code(outcome.winner))
        }
        Command::Level { profile, input } => {
            let dfa = read_dfa(&input.file, io.stdin)?;
            if profile {
                print_profile(&dfa, io)?;
            }
            let level = game_level(&dfa)?;
            out!(io, "result: {level}");
            Ok(if level == Level::NotSynchronizing {
                EXIT_NEGATIVE
            } else {
                EXIT_OK
            })
        }
        Command::Rt { input } => {
            let dfa = read_dfa(&input.file, io.stdin)?;
            match rt_exact(&dfa) {
                Ok(r) => {
                    out!(io, "witness: {}", dfa.format_word(&r.witness));
                    out!(io, "result: {}", r.rt);
                    Ok(EXIT_OK)
                }
                Err(Error::NotSynchronizing) => {
                    out!(io, "result: none");
                    Ok(EXIT_NEGATIVE)
                }
                Err(e) => Err(e),
            }
        }
        Command::ResetWord { m, input } => {
            let dfa = read_dfa(&input.file, io.stdin)?;
            let w = extract_reset_word(&dfa, m)?;
            out!(io, "length: {}", w.len());
            out!(io, "result: {}", dfa.format_word(&w));
            Ok(EXIT_OK)
        }
        Command::Pairs { input } => {
            let dfa = read_dfa(&input.file, io.stdin)?;
            let pairs = PairAutomaton::new(&dfa)?;
            for i in 0..pairs.dfa().n() {
                out!(io, "# {i} = {}", pairs.describe(i));
            }
            write!(io.out, "{}", serialize_dfa(pairs.dfa())).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Iterate { m, input } => {
            let dfa = read_dfa(&input.file, io.stdin)?;
            write!(io.out, "{}", serialize_dfa(&iterate(&dfa, m)?)).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Simulate {
            k,
            alice,
            bob,
            seed,
            first,
            horizon,
            out,
            input,
        } => {
            if seed.is_none() && (alice == "random" || bob == "random") {
                return Err(Error::InvalidArgument("random strategies need --seed".into()));
            }
            let dfa = read_dfa(&input.file, io.stdin)?;
            let mut alice = make_alice(&dfa, k, &alice, seed)?;
            let mut bob = make_bob(&dfa, k, &bob, seed)?;
            let mut config = GameConfig::new(dfa.n(), k).first(first.into());
            if let Some(h) = horizon {
                config = config.horizon(h);
            }
            let t = simulate(&dfa, &config, &mut alice, &mut bob)?;
            let text = t.dump(&dfa);
            write!(io.out, "{text}").map_err(io_err)?;
            if let Some(path) = out {
                fs::write(&path, &text).map_err(|e| Error::InvalidArgument(format!("cannot write {path}: {e}")))?;
            }
            match t.outcome {
                Outcome::AliceWon { alice_moves } => out!(io, "result: alice {alice_moves}"),
                Outcome::BobSurvived { horizon } => out!(io, "result: bob {horizon}"),
                Outcome::Illegal { mover, .. } => {
                    out!(io, "result: illegal {mover}");
                    return Ok(EXIT_NEGATIVE);
                }
            }
            Ok(EXIT_OK)
        }
        Command::Play {
            k,
            side,
            opponent,
            seed,
            first,
            transcript,
            file,
        } => {
            if file == "-" {
                return Err(Error::InvalidArgument(
                    "play reads moves from standard input; pass the DFA as a file".into(),
                ));
            }
            if seed.is_none() && opponent == "random" {
                return Err(Error::InvalidArgument("a random opponent needs --seed".into()));
            }
            let dfa = read_dfa(&file, io.stdin)?;
            play(&dfa, k, side, &opponent, seed, first.into(), transcript.as_deref(), io)
        }
        Command::Verify { suite } => {
            let suite: Suite = suite.parse()?;
            let mut all_passed = true;
            for report in run_suite(suite) {
                out!(io, "== {} ({:.2?})", report.suite, report.elapsed());
                for c in &report.checks {
                    let tag = if c.passed { "PASS" } else { "FAIL" };
                    out!(io, "{tag}  {}  [{:.2?}]  {}", c.name, c.elapsed, c.detail);
                }
                all_passed &= report.passed();
            }
            out!(io, "result: {}", if all_passed { "pass" } else { "fail" });
            Ok(if all_passed { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::ExportDot { input } => {
            let dfa = read_dfa(&input.file, io.stdin)?;
            write!(io.out, "{}", export_dot(&dfa)).map_err(io_err)?;
            Ok(EXIT_OK)
        }
    }
}

fn winner_code(w: Winner) -> i32 {
    match w {
        Winner::Alice => EXIT_OK,
        Winner::Bob => EXIT_NEGATIVE,
    }
}

fn describe_outcome(dfa: &Dfa, outcome: &GameOutcome, io: &mut Io<'_>) -> Result<()> {
    match &outcome.certificate {
        Certificate::Trivial => out!(io, "certificate: trivial"),
        Certificate::Marking(m) => {
            let firm = m.firm.iter().filter(|f| f.is_some()).count();
            out!(io, "certificate: marking, {firm}/{} states firm after {} rounds", m.firm.len(), m.iterations);
        }
        Certificate::Escape(_) => out!(io, "certificate: every pair escapes its component"),
        Certificate::Trapped { state } => out!(io, "certificate: trapped pair state {state}"),
        Certificate::SinkCount { sinks } => out!(io, "certificate: {} sinks", sinks.len()),
    }
    if let Some((p, q)) = outcome.witness_pair {
        out!(io, "witness: {{{p},{q}}} of {} states", dfa.n());
    }
    Ok(())
}

fn print_profile(dfa: &Dfa, io: &mut Io<'_>) -> Result<()> {
    let profile = level_profile(dfa)?;
    let n = dfa.n();
    for q in 1..n {
        for p in 0..q {
            match profile.d(p, q) {
                Some(l) => out!(io, "d({p},{q}) = {l}"),
                None => out!(io, "d({p},{q}) = inf"),
            }
        }
    }
    if !profile.all_finite() {
        out!(io, "tree: none (some pair has infinite level)");
        return Ok(());
    }
    let tree = component_tree(&profile)?;
    for id in n..tree.len() {
        let node = tree.node(id);
        let children: Vec<String> = node.children.iter().map(|c| format!("C{c}")).collect();
        out!(io, "C{id} h={} members={} children=[{}]", node.h, node.members, children.join(","));
    }
    Ok(())
}

fn need_seed(seed: Option<u64>, who: &str) -> Result<u64> {
    seed.ok_or_else(|| Error::InvalidArgument(format!("a random {who} needs --seed")))
}

fn scripted_word(dfa: &Dfa, spec: &str) -> Result<crate::automaton::Word> {
    dfa.parse_word(&spec.replace(',', " "))
}

fn make_alice(dfa: &Dfa, k: KBound, spec: &str, seed: Option<u64>) -> Result<Box<dyn AliceStrategy>> {
    Ok(match spec {
        "optimal" => alice_optimal(dfa, k)?,
        "characteristic" => Box::new(alice_characteristic(dfa)?),
        "random" => Box::new(RandomAlice::new(dfa.num_letters(), need_seed(seed, "alice")?)),
        _ => match spec.strip_prefix("scripted:") {
            Some(w) => Box::new(FixedLettersAlice::new(scripted_word(dfa, w)?)?),
            None => return Err(Error::InvalidArgument(format!("unknown alice strategy {spec:?}"))),
        },
    })
}

fn make_bob(dfa: &Dfa, k: KBound, spec: &str, seed: Option<u64>) -> Result<Box<dyn BobStrategy>> {
    Ok(match spec {
        "optimal" => Box::new(bob_optimal(dfa, k)?),
        "random" => Box::new(RandomBob::new(dfa, k, need_seed(seed, "bob")?)),
        "pass" => Box::new(PassBob),
        _ => {
            if let Some(p) = spec.strip_prefix("echo:") {
                let power = p
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad echo power {p:?}")))?;
                Box::new(EchoPowerBob { power })
            } else if let Some(w) = spec.strip_prefix("scripted:") {
                Box::new(FixedWordBob {
                    word: scripted_word(dfa, w)?,
                })
            } else {
                return Err(Error::InvalidArgument(format!("unknown bob strategy {spec:?}")));
            }
        }
    })
}

fn board(dfa: &Dfa, pos: &Position) -> String {
    (0..dfa.n())
        .map(|q| {
            if pos.tokens.contains(q) {
                format!("[{q}*]")
            } else {
                format!("[{q} ]")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Reads one move for the human side, re-prompting on illegal input. `None`
/// at end of input.
fn read_human_move(dfa: &Dfa, k: KBound, side: Mover, io: &mut Io<'_>) -> Result<Option<crate::automaton::Word>> {
    loop {
        match side {
            Mover::Alice => write!(io.out, "alice> ").map_err(io_err)?,
            Mover::Bob => write!(io.out, "bob> ").map_err(io_err)?,
        }
        io.out.flush().map_err(io_err)?;
        let mut line = String::new();
        if io.stdin.read_line(&mut line).map_err(io_err)? == 0 {
            out!(io, "");
            return Ok(None);
        }
        let w = match dfa.parse_word(&line) {
            Ok(w) => w,
            Err(e) => {
                out!(io, "illegal: {e}");
                continue;
            }
        };
        let problem = match side {
            Mover::Alice if w.len() != 1 => Some("Alice plays exactly one letter".to_string()),
            Mover::Bob if !k.allows(w.len()) => Some(format!("Bob's word must be shorter than {k}")),
            _ => None,
        };
        match problem {
            Some(p) => out!(io, "illegal: {p}"),
            None => return Ok(Some(w)),
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn play(
    dfa: &Dfa,
    k: KBound,
    side: Side,
    opponent: &str,
    seed: Option<u64>,
    first: Mover,
    transcript: Option<&str>,
    io: &mut Io<'_>,
) -> Result<i32> {
    let human: Mover = side.into();
    let mut alice = (human == Mover::Bob)
        .then(|| make_alice(dfa, k, opponent, seed))
        .transpose()?;
    let mut bob = (human == Mover::Alice)
        .then(|| make_bob(dfa, k, opponent, seed))
        .transpose()?;
    let config = GameConfig::new(dfa.n(), k).first(first);
    let mut pos = Position::start(dfa.n(), first);
    let mut moves: Vec<Move> = Vec::new();
    let mut alice_moves = 0;
    out!(io, "board: {}", board(dfa, &pos));
    let outcome = loop {
        if pos.is_won() {
            break Outcome::AliceWon { alice_moves };
        }
        if pos.to_move == Mover::Alice && alice_moves >= config.horizon {
            break Outcome::BobSurvived {
                horizon: config.horizon,
            };
        }
        let word = if pos.to_move == human {
            match read_human_move(dfa, k, human, io)? {
                Some(w) => w,
                None => {
                    out!(io, "result: abandoned");
                    return Ok(EXIT_NEGATIVE);
                }
            }
        } else {
            let w = match (&mut alice, &mut bob) {
                (Some(a), _) => crate::automaton::Word::new(vec![a.choose(&pos, &moves)?]),
                (_, Some(b)) => b.respond(&pos, &moves)?,
                _ => unreachable!("one computer side"),
            };
            if pos.to_move == Mover::Bob && !k.allows(w.len()) {
                return Err(Error::Precondition(format!("opponent played an illegal word of length {}", w.len())));
            }
            out!(io, "{} plays {}", pos.to_move, dfa.format_word(&w));
            w
        };
        if pos.to_move == Mover::Alice {
            alice_moves += 1;
        }
        pos.tokens = dfa.apply_set(&pos.tokens, &word);
        pos.history.extend_from(&word);
        moves.push(Move {
            mover: pos.to_move,
            word,
            after: pos.tokens.clone(),
        });
        pos.to_move = pos.to_move.other();
        out!(io, "board: {}", board(dfa, &pos));
    };
    let t = Transcript {
        k,
        first,
        seed: seed.unwrap_or(0),
        n: dfa.n(),
        moves,
        outcome: outcome.clone(),
    };
    if let Some(path) = transcript {
        fs::write(path, t.dump(dfa)).map_err(|e| Error::InvalidArgument(format!("cannot write {path}: {e}")))?;
    }
    let winner = t.winner().expect("legal game");
    match outcome {
        Outcome::AliceWon { alice_moves } => out!(io, "result: alice {alice_moves}"),
        _ => out!(io, "result: bob {}", config.horizon),
    }
    let human_won = matches!(
        (winner, human),
        (Winner::Alice, Mover::Alice) | (Winner::Bob, Mover::Bob)
    );
    Ok(if human_won { EXIT_OK } else { EXIT_NEGATIVE })
}
