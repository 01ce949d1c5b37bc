//! Named verification suites run by `verify` and the acceptance target.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::automaton::{num_pairs, Dfa, PairAutomaton, StateSet};
use crate::error::{Error, Result};
use crate::families;
use crate::oracle::{self, verify_hamiltonian, HamiltonVariant};
use crate::potential::{extract_reset_word, first_letter_iterated};
use crate::sim::{
    alice_characteristic, alice_optimal, bob_optimal, simulate, worst_case_alice_moves, GameConfig,
    Outcome, RandomAlice, RandomBob, Transcript, DEFAULT_POSITION_CAP,
};
use crate::solver::{
    decide, decide_k, decide_k_sink, decide_m_omega, decide_omega, decide_omega_sink, game_level,
    KBound, Level, Winner,
};

/// Seed of the random automata in the oracle suite.
pub const ORACLE_SEED: u64 = 20_240_611;
pub const ORACLE_RANDOM_SAMPLES: usize = 10_000;
pub const GAMES_PER_INSTANCE: u64 = 1_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    CernyRt,
    Hierarchy,
    TheoremMain,
    OracleEquivalenceN4,
    Collapse,
    LSeries,
    Iteration,
    Hamiltonian,
    DSeries,
    Simulation,
    Scaling,
    All,
}

impl Suite {
    /// Every concrete suite, in criterion order.
    pub const EACH: [Suite; 11] = [
        Suite::CernyRt,
        Suite::Hierarchy,
        Suite::TheoremMain,
        Suite::OracleEquivalenceN4,
        Suite::Collapse,
        Suite::LSeries,
        Suite::Iteration,
        Suite::Hamiltonian,
        Suite::DSeries,
        Suite::Simulation,
        Suite::Scaling,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::CernyRt => "cerny-rt",
            Suite::Hierarchy => "hierarchy",
            Suite::TheoremMain => "theorem-main",
            Suite::OracleEquivalenceN4 => "oracle-equivalence-n4",
            Suite::Collapse => "collapse",
            Suite::LSeries => "l-series",
            Suite::Iteration => "iteration",
            Suite::Hamiltonian => "hamiltonian",
            Suite::DSeries => "d-series",
            Suite::Simulation => "simulation",
            Suite::Scaling => "scaling",
            Suite::All => "all",
        }
    }

    /// Acceptance criterion number, `None` for the scaling smoke check.
    pub fn criterion(self) -> Option<u8> {
        Suite::EACH[..10]
            .iter()
            .position(|&s| s == self)
            .map(|i| i as u8 + 1)
    }

    fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => Suite::EACH.to_vec(),
            s => vec![s],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain([&Suite::All])
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| {
                let names: Vec<_> = Suite::EACH.iter().map(|x| x.name()).collect();
                Error::InvalidArgument(format!(
                    "unknown suite {s:?}; expected all or one of {}",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn elapsed(&self) -> Duration {
        self.checks.iter().map(|c| c.elapsed).sum()
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Runs a suite (or every suite for [`Suite::All`]).
pub fn run_suite(suite: Suite) -> Vec<SuiteReport> {
    suite
        .expand()
        .into_iter()
        .map(|s| SuiteReport {
            suite: s,
            checks: checks_of(s),
        })
        .collect()
}

fn checks_of(suite: Suite) -> Vec<CheckResult> {
    match suite {
        Suite::CernyRt => cerny_rt(),
        Suite::Hierarchy => hierarchy(),
        Suite::TheoremMain => theorem_main(),
        Suite::OracleEquivalenceN4 => oracle_equivalence(),
        Suite::Collapse => collapse(),
        Suite::LSeries => l_series(),
        Suite::Iteration => iteration(),
        Suite::Hamiltonian => hamiltonian(),
        Suite::DSeries => d_series(),
        Suite::Simulation => simulation(),
        Suite::Scaling => scaling(),
        Suite::All => unreachable!("expanded above"),
    }
}

/// A check body returns whether it passed and a one-line detail. Errors count
/// as failures.
fn check(name: impl Into<String>, body: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    let start = Instant::now();
    let (passed, detail) = body().unwrap_or_else(|e| (false, format!("error: {e}")));
    CheckResult {
        name: name.into(),
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

fn expect_eq<T: PartialEq + fmt::Debug>(what: &str, got: T, want: T) -> (bool, String) {
    let ok = got == want;
    let detail = if ok {
        format!("{what} = {got:?}")
    } else {
        format!("{what} = {got:?}, expected {want:?}")
    };
    (ok, detail)
}

fn winner(outcome: Result<crate::solver::GameOutcome>) -> Result<Winner> {
    Ok(outcome?.winner)
}

/// Automata tested, automata failing, and the first failure (index, message).
type SweepTally = (usize, usize, Option<(u128, String)>);

/// Counts automata in `0..count` of the `n`-state binary enumeration failing
/// `test`, keeping the smallest failing index and its message.
fn sweep(
    n: usize,
    m: usize,
    filter: impl Fn(&Dfa) -> Result<bool> + Sync,
    test: impl Fn(&Dfa) -> Result<Option<String>> + Sync,
) -> Result<SweepTally> {
    let count = oracle::dfa_count(n, m).expect("small enumeration");
    let results: Vec<Result<Option<Option<String>>>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let dfa = oracle::dfa_at(n, m, i);
            if !filter(&dfa)? {
                return Ok(None);
            }
            Ok(Some(test(&dfa)?))
        })
        .collect();
    let mut tested = 0;
    let mut failed = 0;
    let mut first = None;
    for (i, r) in results.into_iter().enumerate() {
        if let Some(failure) = r? {
            tested += 1;
            if let Some(msg) = failure {
                failed += 1;
                first.get_or_insert((i as u128, msg));
            }
        }
    }
    Ok((tested, failed, first))
}

fn sweep_detail(n: usize, (tested, failed, first): SweepTally) -> (bool, String) {
    match first {
        None => (true, format!("n={n}: {tested} automata, 0 failures")),
        Some((i, msg)) => (
            false,
            format!("n={n}: {failed}/{tested} failures, first at index {i}: {msg}"),
        ),
    }
}

fn cerny_rt() -> Vec<CheckResult> {
    (2..=7)
        .map(|n| {
            check(format!("rt(cerny({n})) = {}", (n - 1) * (n - 1)), || {
                let dfa = families::cerny(n)?;
                let rt = oracle::rt_exact(&dfa)?.rt;
                let witness = families::cerny_reset_word(n);
                let (ok, detail) = expect_eq("rt", rt, (n - 1) * (n - 1));
                let resets = dfa.is_reset_word(&witness);
                Ok((
                    ok && resets && witness.len() == rt,
                    format!("{detail}; witness {} resets: {resets}", dfa.format_word_compact(&witness)),
                ))
            })
        })
        .collect()
}

fn hierarchy() -> Vec<CheckResult> {
    let mut out = Vec::new();
    for n in 3..=8 {
        out.push(check(format!("level(e_series({n})) = {}", n - 1), || {
            let level = game_level(&families::e_series(n)?)?;
            Ok(expect_eq("level", level, Level::Finite(n as u32 - 1)))
        }));
    }
    for n in 3..=8 {
        out.push(check(format!("cerny({n}): k=1 alice, k=2 bob"), || {
            let dfa = families::cerny(n)?;
            let got = (winner(decide_k(&dfa, 1))?, winner(decide_k(&dfa, 2))?);
            Ok(expect_eq("winners", got, (Winner::Alice, Winner::Bob)))
        }));
    }
    out
}

/// The three claims of the main theorem on one A_ω automaton; `None` if all
/// hold.
fn theorem_main_on(dfa: &Dfa) -> Result<Option<String>> {
    let n = dfa.n();
    if n < 2 {
        return Ok(None);
    }
    let rt = oracle::rt_exact(dfa)?.rt;
    if rt >= n {
        return Ok(Some(format!("rt = {rt} >= n")));
    }
    let mut alice = alice_characteristic(dfa)?;
    let mut bob = bob_optimal(dfa, KBound::Omega)?;
    let t = simulate(dfa, &GameConfig::new(n, KBound::Omega), &mut alice, &mut bob)?;
    if !matches!(t.outcome, Outcome::AliceWon { alice_moves } if alice_moves < n) {
        return Ok(Some(format!("game against optimal Bob: {:?}", t.outcome)));
    }
    let pot = alice.potential();
    let worst = worst_case_alice_moves(dfa, KBound::Omega, |s| pot.avoiding_letter(s), DEFAULT_POSITION_CAP)?;
    if !worst.is_some_and(|w| w < n) {
        return Ok(Some(format!("worst case over all Bobs: {worst:?}")));
    }
    let w = extract_reset_word(dfa, 1)?;
    if w.len() >= n || !dfa.is_reset_word(&w) {
        return Ok(Some(format!("extracted word {} of length {}", dfa.format_word_compact(&w), w.len())));
    }
    Ok(None)
}

fn is_a_omega(dfa: &Dfa) -> Result<bool> {
    Ok(decide_omega(dfa)?.alice_wins())
}

fn theorem_main() -> Vec<CheckResult> {
    let mut out: Vec<_> = (2..=4)
        .map(|n| {
            check(format!("all A_omega binary automata, n={n}"), || {
                Ok(sweep_detail(n, sweep(n, 2, is_a_omega, theorem_main_on)?))
            })
        })
        .collect();
    let mut named = vec![("b2".to_string(), families::b2())];
    for n in 3..=8 {
        named.push((format!("one_way_line({n})"), families::one_way_line(n).expect("n >= 1")));
    }
    for (name, dfa) in named {
        out.push(check(name, || {
            if !is_a_omega(&dfa)? {
                return Ok((false, "not an A_omega automaton".into()));
            }
            Ok(match theorem_main_on(&dfa)? {
                None => (true, format!("n={}: rt, game and extracted word below n", dfa.n())),
                Some(msg) => (false, msg),
            })
        }));
    }
    out
}

const ORACLE_KS: [u32; 4] = [1, 2, 3, 6];

/// Disagreements between the solver and both brute-force routes.
fn oracle_agreement(dfa: &Dfa) -> Result<Option<String>> {
    let bounds = ORACLE_KS
        .iter()
        .map(|&k| KBound::Finite(k))
        .chain([KBound::Omega]);
    for k in bounds {
        let solver = match k {
            KBound::Finite(k) => decide_k(dfa, k)?.winner,
            KBound::Omega => decide_omega(dfa)?.winner,
        };
        let pairs = oracle::decide_k_bruteforce(dfa, k)?;
        let positions = oracle::decide_full_position_bruteforce(dfa, k)?;
        if solver != pairs || solver != positions {
            return Ok(Some(format!(
                "k={k}: solver {solver}, pair oracle {pairs}, position oracle {positions}"
            )));
        }
    }
    Ok(None)
}

fn oracle_equivalence() -> Vec<CheckResult> {
    vec![
        check("all 65536 binary automata, n=4", || {
            Ok(sweep_detail(4, sweep(4, 2, |_| Ok(true), oracle_agreement)?))
        }),
        check(
            format!("{ORACLE_RANDOM_SAMPLES} random 3-letter automata, n=5, seed {ORACLE_SEED}"),
            || {
                let mut rng = ChaCha8Rng::seed_from_u64(ORACLE_SEED);
                let sample: Vec<Dfa> = (0..ORACLE_RANDOM_SAMPLES)
                    .map(|_| oracle::random_dfa(5, 3, &mut rng))
                    .collect();
                let results: Vec<Result<Option<String>>> = sample.par_iter().map(oracle_agreement).collect();
                let mut failed = 0;
                let mut first = None;
                for (i, r) in results.into_iter().enumerate() {
                    if let Some(msg) = r? {
                        failed += 1;
                        first.get_or_insert(format!("sample {i}: {msg}"));
                    }
                }
                Ok(match first {
                    None => (true, format!("{ORACLE_RANDOM_SAMPLES} automata, 0 disagreements")),
                    Some(msg) => (false, format!("{failed} disagreements, first {msg}")),
                })
            },
        ),
    ]
}

fn collapse() -> Vec<CheckResult> {
    let mut out: Vec<_> = (2..=4)
        .map(|n| {
            check(format!("k = C({n},2) agrees with omega, n={n}"), move || {
                let k = num_pairs(n) as u32;
                let result = sweep(
                    n,
                    2,
                    |_| Ok(true),
                    |dfa| {
                        let (a, b) = (decide_k(dfa, k)?.winner, decide_omega(dfa)?.winner);
                        Ok((a != b).then(|| format!("k-game {a}, omega {b}")))
                    },
                )?;
                Ok(sweep_detail(n, result))
            })
        })
        .collect();
    out.push(check("sink automata: k = n-1 agrees with omega, n=4", || {
        let result = sweep(
            4,
            2,
            |dfa| Ok(!dfa.sinks().is_empty()),
            |dfa| {
                let a = decide_k_sink(dfa, 3)?.winner;
                let b = decide_omega_sink(dfa).winner;
                Ok((a != b).then(|| format!("k-game {a}, omega {b}")))
            },
        )?;
        Ok(sweep_detail(4, result))
    }));
    out
}

fn l_series() -> Vec<CheckResult> {
    let mut out = Vec::new();
    for k in 1..=7 {
        for m in 1..=(8 - k) {
            let n = k + m + 1;
            out.push(check(format!("l_series({k},{m})"), move || {
                let dfa = families::l_series(k, m)?;
                let level = game_level(&dfa)?;
                let rt = oracle::rt_exact(&dfa)?.rt;
                let formula: usize = (1..=k + m).map(|q| q.div_ceil(k)).sum();
                let ok = level == Level::Finite(k as u32) && rt == formula && 2 * k * rt >= n * (n - 1);
                Ok((ok, format!("n={n}: level {level}, rt {rt}, formula {formula}, n(n-1)/2k = {:.2}", (n * (n - 1)) as f64 / (2 * k) as f64)))
            }));
        }
    }
    out
}

fn iteration() -> Vec<CheckResult> {
    let mut out = Vec::new();
    for n in 4..=7 {
        out.push(check(format!("flower({n}) with m=2"), move || {
            let dfa = families::flower(n)?;
            let win = decide_m_omega(&dfa, 2)?.winner;
            let rt = oracle::rt_exact(&dfa)?.rt;
            let w = extract_reset_word(&dfa, 2)?;
            let first = first_letter_iterated(&dfa, 2)?;
            let ok = win == Winner::Alice
                && w.len() == 2 * n - 3
                && rt == 2 * n - 3
                && dfa.is_reset_word(&w)
                && w.first() == Some(&first);
            Ok((
                ok,
                format!(
                    "winner {win}, |w| = {} ({}), rt = {rt}, 2n-3 = {}, first letter {}",
                    w.len(),
                    dfa.format_word_compact(&w),
                    2 * n - 3,
                    dfa.letter_name(first)
                ),
            ))
        }));
    }
    out.push(check("cerny(5): m=10 alice, m=9 bob", || {
        let dfa = families::cerny(5)?;
        let got = (decide_m_omega(&dfa, 10)?.winner, decide_m_omega(&dfa, 9)?.winner);
        Ok(expect_eq("winners", got, (Winner::Alice, Winner::Bob)))
    }));
    for k in 1..=5 {
        for m in 1..=(6 - k) {
            let n = k + m + 1;
            out.push(check(format!("l_series({k},{m}) with m={}", n - 1), move || {
                let dfa = families::l_series(k, m)?;
                Ok(expect_eq("winner", decide_m_omega(&dfa, n - 1)?.winner, Winner::Alice))
            }));
        }
    }
    out
}

fn hamiltonian() -> Vec<CheckResult> {
    let mut out = Vec::new();
    for n in 3..=9 {
        out.push(check(format!("w_forward({n}) from {{0,1}}"), move || {
            let pairs = PairAutomaton::new(&families::cerny(n)?)?;
            let w = families::w_forward(n)?;
            let ok = verify_hamiltonian(&pairs, pairs.index(0, 1), &w, HamiltonVariant::Forward);
            Ok((
                ok && w.len() == num_pairs(n) - 1,
                format!("|w| = {}, C(n,2)-1 = {}, hamiltonian: {ok}", w.len(), num_pairs(n) - 1),
            ))
        }));
        // The start pair is taken literally as {⌈n/2⌉+1, 1}.
        let p = (n.div_ceil(2) + 1) % n;
        out.push(check(format!("w_backward({n}) from {{{p},1}}"), move || {
            let dfa = families::cerny(n)?;
            let pairs = PairAutomaton::new(&dfa)?;
            let w = families::w_backward(n)?;
            let ok = verify_hamiltonian(&pairs, pairs.index(p, 1), &w, HamiltonVariant::Backward);
            let mut detail = format!("|w| = {}, C(n,2) = {}, hamiltonian: {ok}", w.len(), num_pairs(n));
            if !ok {
                let sink = StateSet::singleton(pairs.dfa().n(), pairs.sink());
                let shortest = pairs.dfa().shortest_word_into(pairs.index(p, 1), &sink).map(|u| u.len());
                detail.push_str(&format!("; shortest word to s from {{{p},1}} has length {shortest:?}"));
                let alt = families::w_backward_start(n)?;
                let alt_ok = verify_hamiltonian(&pairs, alt, &w, HamiltonVariant::Backward);
                detail.push_str(&format!("; from {} it is hamiltonian: {alt_ok}", pairs.describe(alt)));
            }
            Ok((ok && w.len() == num_pairs(n), detail))
        }));
    }
    out
}

fn d_series() -> Vec<CheckResult> {
    let mut out = Vec::new();
    for n in 4..=6 {
        out.push(check(format!("level(d_series({n})) = {}", num_pairs(n) - 1), move || {
            let level = game_level(&families::d_series(n)?)?;
            Ok(expect_eq("level", level, Level::Finite(num_pairs(n) as u32 - 1)))
        }));
    }
    for k in 5..=8 {
        out.push(check(format!("level(d_series_k(5,{k})) = {k}"), move || {
            let level = game_level(&families::d_series_k(5, k)?)?;
            Ok(expect_eq("level", level, Level::Finite(k as u32)))
        }));
    }
    out
}

/// Instances of the simulation suite.
pub fn simulation_instances() -> Vec<(String, Dfa, KBound)> {
    let mut out = Vec::new();
    let mut add = |name: String, dfa: Result<Dfa>, ks: &[KBound]| {
        let dfa = dfa.expect("family parameters are valid");
        for &k in ks {
            out.push((format!("{name} k={k}"), dfa.clone(), k));
        }
    };
    use KBound::{Finite as F, Omega};
    for n in 3..=5 {
        add(format!("cerny({n})"), families::cerny(n), &[F(1), F(2), Omega]);
    }
    for n in 4..=5 {
        add(format!("e_series({n})"), families::e_series(n), &[F(n as u32 - 1), F(n as u32), Omega]);
    }
    add("b2".into(), Ok(families::b2()), &[F(2), Omega]);
    add("flower(5)".into(), families::flower(5), &[F(1), Omega]);
    add("l_series(2,2)".into(), families::l_series(2, 2), &[F(2), F(3)]);
    add("d_series(4)".into(), families::d_series(4), &[F(5), F(6)]);
    add("one_way_line(5)".into(), families::one_way_line(5), &[Omega]);
    add("two_way_line(4)".into(), families::two_way_line(4), &[F(1), F(2), Omega]);
    out
}

/// Plays one seeded game: the solver's winner uses its optimal strategy and
/// the loser plays at random.
pub fn seeded_game(dfa: &Dfa, k: KBound, expected: Winner, seed: u64) -> Result<Transcript> {
    let config = GameConfig::new(dfa.n(), k);
    match expected {
        Winner::Alice => {
            let mut alice = alice_optimal(dfa, k)?;
            let mut bob = RandomBob::new(dfa, k, seed);
            simulate(dfa, &config, &mut alice, &mut bob)
        }
        Winner::Bob => {
            let mut alice = RandomAlice::new(dfa.num_letters(), seed);
            let mut bob = bob_optimal(dfa, k)?;
            simulate(dfa, &config, &mut alice, &mut bob)
        }
    }
}

fn simulation() -> Vec<CheckResult> {
    simulation_instances()
        .into_iter()
        .map(|(name, dfa, k)| {
            check(name, move || {
                let expected = decide(&dfa, k)?.winner;
                let horizon = crate::sim::default_horizon(dfa.n());
                let failures: Vec<String> = (0..GAMES_PER_INSTANCE)
                    .into_par_iter()
                    .map(|seed| -> Result<Option<String>> {
                        let t = seeded_game(&dfa, k, expected, seed)?;
                        let again = seeded_game(&dfa, k, expected, seed)?;
                        let verdict_ok = match (&t.outcome, expected) {
                            (Outcome::AliceWon { .. }, Winner::Alice) => true,
                            (Outcome::BobSurvived { horizon: h }, Winner::Bob) => *h == horizon,
                            _ => false,
                        };
                        let problem = if !verdict_ok {
                            Some(format!("outcome {:?}", t.outcome))
                        } else if !t.replay(&dfa) {
                            Some("transcript does not replay".into())
                        } else if again.dump(&dfa) != t.dump(&dfa) {
                            Some("rerun differs".into())
                        } else {
                            None
                        };
                        Ok(problem.map(|p| format!("seed {seed}: {p}")))
                    })
                    .filter_map(|r| r.transpose())
                    .collect::<Result<_>>()?;
                Ok(match failures.first() {
                    None => (
                        true,
                        format!("{GAMES_PER_INSTANCE} games, winner {expected}, horizon {horizon}"),
                    ),
                    Some(first) => (false, format!("{} bad games, first {first}", failures.len())),
                })
            })
        })
        .collect()
}

fn time_once(f: &mut impl FnMut()) -> Duration {
    let start = Instant::now();
    f();
    start.elapsed()
}

fn scaling() -> Vec<CheckResult> {
    vec![check("decide_omega_sink on one_way_line, n = 2^15 vs 2^16", || {
        let small = families::one_way_line(1 << 15)?;
        let large = families::one_way_line(1 << 16)?;
        let mut ok = true;
        let mut run_small = || ok &= decide_omega_sink(&small).alice_wins();
        let mut t_small = Duration::MAX;
        let mut t_large = Duration::MAX;
        // Alternate the sizes so both see the same machine state; keep the best.
        for _ in 0..7 {
            t_small = t_small.min(time_once(&mut run_small));
            t_large = t_large.min(time_once(&mut || {
                std::hint::black_box(decide_omega_sink(&large));
            }));
        }
        let ratio = t_large.as_secs_f64() / t_small.as_secs_f64().max(1e-9);
        Ok((
            ok && decide_omega_sink(&large).alice_wins() && ratio < 3.5,
            format!("{t_small:?} vs {t_large:?}, ratio {ratio:.2} (limit 3.5)"),
        ))
    })]
}
