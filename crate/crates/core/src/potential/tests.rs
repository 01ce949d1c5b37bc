use super::*;
use crate::families;
use crate::oracle;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn components(states: &[usize], joined: impl Fn(usize, usize) -> bool) -> usize {
    let mut label: Vec<usize> = (0..states.len()).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..states.len() {
            for j in 0..states.len() {
                if label[j] < label[i] && joined(states[i], states[j]) {
                    label[i] = label[j];
                    changed = true;
                }
            }
        }
    }
    label.sort_unstable();
    label.dedup();
    label.len()
}

/// γ straight from the definition: minimize over vertex sets `A ⊆ V ⊆ C_A`
/// with `(V, E_ℓ)` connected; for a fixed `V` the fewest level-`ℓ` edges is
/// the number of components of `(V, E_{ℓ-1})` minus one.
fn gamma_brute(pot: &Potential, set: &StateSet) -> u32 {
    let tree = pot.tree();
    let profile = pot.profile();
    let c = tree.least_containing(set);
    let level = tree.h(c);
    if level == 0 {
        return 0;
    }
    let extra: Vec<usize> = tree
        .node(c)
        .members
        .iter()
        .filter(|&q| !set.contains(q))
        .collect();
    let mut best = u32::MAX;
    for mask in 0u32..1 << extra.len() {
        let mut v = set.to_vec();
        v.extend((0..extra.len()).filter(|i| mask >> i & 1 == 1).map(|i| extra[i]));
        let d = |p: usize, q: usize| profile.d(p, q).unwrap();
        if components(&v, |p, q| d(p, q) <= level) != 1 {
            continue;
        }
        best = best.min(components(&v, |p, q| d(p, q) < level) as u32 - 1);
    }
    best
}

fn subsets(n: usize) -> impl Iterator<Item = StateSet> {
    (1u32..1 << n).map(move |m| StateSet::from_states(n, (0..n).filter(|&q| m >> q & 1 == 1)))
}

fn random_omega_automata(n: usize, letters: usize, count: usize, seed: u64) -> Vec<Dfa> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let dfa = oracle::random_dfa(n, letters, &mut rng);
        if level_profile(&dfa).unwrap().all_finite() {
            out.push(dfa);
        }
    }
    out
}

#[test]
fn gamma_matches_definition() {
    for n in 3..=7 {
        for dfa in random_omega_automata(n, 2, 12, n as u64) {
            let pot = Potential::new(&dfa).unwrap();
            for set in subsets(n) {
                assert_eq!(pot.gamma(&set).unwrap(), gamma_brute(&pot, &set), "{dfa:?} {set}");
            }
        }
    }
}

#[test]
fn gamma_of_components_and_singletons() {
    for dfa in random_omega_automata(6, 3, 30, 3) {
        let pot = Potential::new(&dfa).unwrap();
        let tree = pot.tree();
        let mut total = 0;
        for (id, node) in tree.nodes().iter().enumerate() {
            let chi = pot.characteristic(&node.members).unwrap();
            assert_eq!(chi.component, id);
            let expected = node.children.len().saturating_sub(1) as u32;
            assert_eq!(chi.gamma, expected);
            total += chi.gamma;
        }
        assert_eq!(total, 5);
        let nontrivial: HashSet<Characteristic> = subsets(6)
            .map(|s| pot.characteristic(&s).unwrap())
            .filter(|c| !c.is_trivial())
            .collect();
        assert!(nontrivial.len() <= 5);
        for q in 0..6 {
            let chi = pot.characteristic(&StateSet::singleton(6, q)).unwrap();
            assert!(chi.is_trivial() && tree.is_leaf(chi.component));
        }
        let root = pot.characteristic(&StateSet::full(6)).unwrap();
        assert_eq!(root.component, tree.root());
    }
}

#[test]
fn least_component_matches_linear_scan() {
    for dfa in random_omega_automata(6, 2, 20, 5) {
        let pot = Potential::new(&dfa).unwrap();
        let tree = pot.tree();
        for set in subsets(6) {
            let scan = (0..tree.len())
                .filter(|&id| set.is_subset(&tree.node(id).members))
                .min_by_key(|&id| tree.node(id).members.len())
                .unwrap();
            assert_eq!(tree.least_containing(&set), scan);
            let chi = pot.characteristic(&set).unwrap();
            assert_eq!(chi.is_trivial(), set.len() == 1);
            let cap = tree.node(chi.component).children.len().saturating_sub(1) as u32;
            assert!(chi.gamma <= cap);
        }
    }
}

fn check_avoidance(dfa: &Dfa) {
    let pot = Potential::new(dfa).unwrap();
    for set in subsets(dfa.n()).filter(|s| s.len() > 1) {
        let x = pot.avoiding_letter(&set).unwrap();
        let chi = pot.characteristic(&set).unwrap();
        assert!(pot.avoids(&dfa.step_set(&set, x), chi).unwrap(), "{dfa:?} {set}");
    }
}

#[test]
fn avoidance_contract_exhaustive_small() {
    for n in 2..=3 {
        for dfa in oracle::enumerate_dfas(n, 2).unwrap() {
            if level_profile(&dfa).unwrap().all_finite() {
                check_avoidance(&dfa);
            }
        }
    }
}

#[test]
fn avoidance_contract_random() {
    for n in 4..=7 {
        for dfa in random_omega_automata(n, 2, 15, 100 + n as u64) {
            check_avoidance(&dfa);
        }
    }
}

#[test]
fn b2_starts_with_a() {
    let dfa = families::b2();
    let pot = Potential::new(&dfa).unwrap();
    let x = pot.avoiding_letter(&StateSet::full(3)).unwrap();
    assert_eq!(dfa.letter_name(x), "a");
}

#[test]
fn merging_pair_gets_merging_letter() {
    let dfa = families::one_way_line(5).unwrap();
    let pot = Potential::new(&dfa).unwrap();
    for p in 0..5 {
        for q in 0..p {
            if pot.profile().d(p, q) != Some(1) {
                continue;
            }
            let set = StateSet::from_states(5, [p, q]);
            let x = pot.avoiding_letter(&set).unwrap();
            assert_eq!(dfa.step(p, x), dfa.step(q, x));
        }
    }
}

#[test]
fn one_way_line_reset_words() {
    for n in 2..=9 {
        let dfa = families::one_way_line(n).unwrap();
        let w = extract_reset_word(&dfa, 1).unwrap();
        assert!(dfa.is_reset_word(&w));
        assert!(w.len() < n, "n={n} len={}", w.len());
        if n <= 8 {
            assert_eq!(oracle::rt_exact(&dfa).unwrap().rt, n - 1);
        }
    }
}

#[test]
fn flower_first_letter_and_word() {
    for n in 3..=6 {
        let dfa = families::flower(n).unwrap();
        let x = first_letter_iterated(&dfa, 2).unwrap();
        assert!(x < dfa.num_letters());
        let w = extract_reset_word(&dfa, 2).unwrap();
        assert!(dfa.is_reset_word(&w));
        assert!(w.len() <= 2 * n - 3, "n={n} len={}", w.len());
    }
}

#[test]
fn first_letter_for_m1_is_avoiding_letter() {
    for dfa in random_omega_automata(5, 2, 10, 9) {
        let pot = Potential::new(&dfa).unwrap();
        assert_eq!(
            first_letter_iterated(&dfa, 1).unwrap(),
            pot.avoiding_letter(&StateSet::full(5)).unwrap()
        );
    }
}

#[test]
fn iterated_words_stay_within_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut checked = 0;
    while checked < 40 {
        let dfa = oracle::random_dfa(5, 2, &mut rng);
        if !decide_m_omega(&dfa, 2).unwrap().alice_wins() {
            continue;
        }
        checked += 1;
        let w = extract_reset_word(&dfa, 2).unwrap();
        assert!(dfa.is_reset_word(&w));
        assert!(w.len() <= 2 * 3 + 1);
    }
}

#[test]
fn losing_inputs_are_rejected() {
    let dfa = families::two_way_line(4).unwrap();
    assert!(matches!(first_letter_iterated(&dfa, 1), Err(Error::Precondition(_))));
    assert!(matches!(extract_reset_word(&dfa, 1), Err(Error::Precondition(_))));
    assert!(matches!(Potential::new(&dfa), Err(Error::Precondition(_))));
}
