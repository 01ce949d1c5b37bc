use proptest::prelude::*;

use syncgame::automaton::{greedy_reset_word, is_synchronizing, num_pairs, parse_dfa, serialize_dfa, Dfa};
use syncgame::oracle::{decide_k_bruteforce, default_letters, rt_exact};
use syncgame::potential::level_profile;
use syncgame::sim::{alice_characteristic, simulate, GameConfig, Mover, Outcome, RandomBob, Transcript};
use syncgame::solver::{decide_k, decide_k_sink, decide_omega, decide_omega_sink, KBound, Winner};
use syncgame::{PairAutomaton, StateSet};

fn dfa_strategy(max_n: usize, max_m: usize) -> impl Strategy<Value = Dfa> {
    (2..=max_n, 1..=max_m).prop_flat_map(|(n, m)| {
        prop::collection::vec(0..n, n * m)
            .prop_map(move |table| Dfa::new(n, default_letters(m), table).unwrap())
    })
}

/// Automata whose state 0 is a sink.
fn sink_dfa_strategy(max_n: usize) -> impl Strategy<Value = Dfa> {
    (3..=max_n, 1..=3usize).prop_flat_map(|(n, m)| {
        prop::collection::vec(0..n, (n - 1) * m).prop_map(move |rest| {
            let mut table = vec![0; m];
            table.extend(rest);
            Dfa::new(n, default_letters(m), table).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn text_format_round_trips(dfa in dfa_strategy(8, 4)) {
        let text = serialize_dfa(&dfa);
        prop_assert_eq!(parse_dfa(&text).unwrap(), dfa.clone());
        prop_assert_eq!(serialize_dfa(&parse_dfa(&text).unwrap()), text);
    }

    #[test]
    fn k_games_are_monotone(dfa in dfa_strategy(6, 3), k in 1u32..8) {
        let stronger = decide_k(&dfa, k + 1).unwrap().winner;
        let weaker = decide_k(&dfa, k).unwrap().winner;
        prop_assert!(stronger == Winner::Bob || weaker == Winner::Alice);
    }

    #[test]
    fn one_game_is_synchronization(dfa in dfa_strategy(7, 3)) {
        prop_assert_eq!(decide_k(&dfa, 1).unwrap().alice_wins(), is_synchronizing(&dfa).unwrap());
    }

    #[test]
    fn pair_count_game_is_omega(dfa in dfa_strategy(6, 3)) {
        let k = num_pairs(dfa.n()) as u32;
        prop_assert_eq!(decide_k(&dfa, k).unwrap().winner, decide_omega(&dfa).unwrap().winner);
    }

    #[test]
    fn solver_matches_oracle(dfa in dfa_strategy(5, 3), k in 1u32..5) {
        prop_assert_eq!(
            decide_k(&dfa, k).unwrap().winner,
            decide_k_bruteforce(&dfa, KBound::Finite(k)).unwrap()
        );
        prop_assert_eq!(
            decide_omega(&dfa).unwrap().winner,
            decide_k_bruteforce(&dfa, KBound::Omega).unwrap()
        );
    }

    #[test]
    fn sink_collapse(dfa in sink_dfa_strategy(6)) {
        let n = dfa.n() as u32;
        prop_assert_eq!(decide_k_sink(&dfa, n - 1).unwrap().winner, decide_omega_sink(&dfa).winner);
    }

    #[test]
    fn reset_words_reset(dfa in dfa_strategy(7, 3)) {
        match rt_exact(&dfa) {
            Ok(r) => {
                prop_assert!(dfa.is_reset_word(&r.witness));
                prop_assert_eq!(r.witness.len(), r.rt);
                let greedy = greedy_reset_word(&dfa).unwrap();
                prop_assert!(dfa.is_reset_word(&greedy));
                prop_assert!(greedy.len() >= r.rt);
            }
            Err(_) => prop_assert!(!is_synchronizing(&dfa).unwrap()),
        }
    }

    #[test]
    fn levels_are_stable_under_letters(dfa in dfa_strategy(7, 3)) {
        let profile = level_profile(&dfa).unwrap();
        let n = dfa.n();
        for q in 1..n {
            for p in 0..q {
                let Some(l) = profile.d(p, q) else { continue };
                for a in 0..dfa.num_letters() {
                    let (x, y) = (dfa.step(p, a), dfa.step(q, a));
                    if x != y {
                        prop_assert!(profile.d(x, y).is_some_and(|m| m <= l), "d({x},{y}) vs {l}");
                    }
                }
            }
        }
    }

    #[test]
    fn pair_automaton_shares_reset_words(dfa in dfa_strategy(6, 3)) {
        let pairs = PairAutomaton::new(&dfa).unwrap();
        if let Ok(r) = rt_exact(&dfa) {
            for i in 0..pairs.dfa().n() {
                prop_assert_eq!(pairs.dfa().apply(i, &r.witness), pairs.sink());
            }
        }
    }

    #[test]
    fn characteristic_alice_wins_fast(dfa in dfa_strategy(6, 3), seed in any::<u64>()) {
        prop_assume!(decide_omega(&dfa).unwrap().alice_wins());
        let n = dfa.n();
        let mut alice = alice_characteristic(&dfa).unwrap();
        let mut bob = RandomBob::new(&dfa, KBound::Omega, seed);
        let t = simulate(&dfa, &GameConfig::new(n, KBound::Omega), &mut alice, &mut bob).unwrap();
        let won_fast = matches!(t.outcome, Outcome::AliceWon { alice_moves } if alice_moves < n);
        prop_assert!(won_fast, "{:?}", t.outcome);
        prop_assert!(t.replay(&dfa));
        prop_assert_eq!(Transcript::parse(&dfa, &t.dump(&dfa)).unwrap(), t.clone());
        for m in t.moves.iter().filter(|m| m.mover == Mover::Bob) {
            prop_assert!(m.word.len() <= syncgame::sim::default_bob_word_cap(n));
        }
    }

    #[test]
    fn state_sets_behave_like_sets(n in 1usize..100, xs in prop::collection::vec(0usize..100, 0..40), ys in prop::collection::vec(0usize..100, 0..40)) {
        use std::collections::BTreeSet;
        let xs: BTreeSet<usize> = xs.into_iter().filter(|&x| x < n).collect();
        let ys: BTreeSet<usize> = ys.into_iter().filter(|&y| y < n).collect();
        let a = StateSet::from_states(n, xs.iter().copied());
        let b = StateSet::from_states(n, ys.iter().copied());
        prop_assert_eq!(a.len(), xs.len());
        let mut u = a.clone();
        u.union_with(&b);
        prop_assert_eq!(u.to_vec(), xs.union(&ys).copied().collect::<Vec<_>>());
        let mut i = a.clone();
        i.intersect_with(&b);
        prop_assert_eq!(i.to_vec(), xs.intersection(&ys).copied().collect::<Vec<_>>());
        prop_assert_eq!(a.is_subset(&b), xs.is_subset(&ys));
        prop_assert_eq!(a.complement().len(), n - xs.len());
    }
}
