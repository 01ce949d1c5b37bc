use crate::automaton::{num_pairs, pair_index, Dfa, PairAutomaton};
use crate::error::Result;

/// The level function `d` on pairs of states: `d(p,q)` is the least `ℓ` with
/// `(p,q)` in `E_ℓ`, `None` when the pair lies in no `E_ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelProfile {
    n: usize,
    levels: Vec<Option<u32>>,
    max_finite: u32,
}

impl LevelProfile {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `d(p,q)`; zero on the diagonal.
    pub fn d(&self, p: usize, q: usize) -> Option<u32> {
        if p == q {
            Some(0)
        } else {
            self.levels[pair_index(p, q)]
        }
    }

    /// `d` by pair index (colex order, see [`pair_index`]).
    pub fn level_of_pair(&self, i: usize) -> Option<u32> {
        self.levels[i]
    }

    pub fn levels(&self) -> &[Option<u32>] {
        &self.levels
    }

    /// The stabilization level: the largest finite value of `d`.
    pub fn max_finite(&self) -> u32 {
        self.max_finite
    }

    pub fn all_finite(&self) -> bool {
        self.levels.iter().all(Option::is_some)
    }
}

/// Computes `E_0 ⊆ E_1 ⊆ …` until it stabilizes.
///
/// A pair is good for level `ℓ` when some letter sends it into `E_ℓ` or merges
/// it. `E_{ℓ+1}` is the set of pairs all of whose forward images are good,
/// obtained as the complement of the backward closure of the bad pairs.
pub fn level_profile(dfa: &Dfa) -> Result<LevelProfile> {
    let n = dfa.n();
    if n < 2 {
        return Ok(LevelProfile {
            n,
            levels: Vec::new(),
            max_finite: 0,
        });
    }
    let pairs = PairAutomaton::new(dfa)?;
    let pd = pairs.dfa();
    let sink = pairs.sink();
    let total = num_pairs(n);
    let (offsets, sources) = pd.reverse_edges();

    let mut levels: Vec<Option<u32>> = vec![None; total];
    let mut max_finite = 0;
    let mut stack = Vec::new();
    for level in 1.. {
        let in_prev = |t: usize| t == sink || levels[t].is_some();
        let mut outside = vec![false; total];
        for i in 0..total {
            if !pd.row(i).iter().any(|&t| in_prev(t as usize)) {
                outside[i] = true;
                stack.push(i);
            }
        }
        while let Some(t) = stack.pop() {
            for &p in &sources[offsets[t]..offsets[t + 1]] {
                let p = p as usize;
                if p != sink && !outside[p] {
                    outside[p] = true;
                    stack.push(p);
                }
            }
        }
        let mut grew = false;
        for i in 0..total {
            if !outside[i] && levels[i].is_none() {
                levels[i] = Some(level);
                grew = true;
            }
        }
        if !grew {
            break;
        }
        max_finite = level;
    }
    Ok(LevelProfile {
        n,
        levels,
        max_finite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::oracle;
    use crate::solver::{decide_omega, KBound, Winner};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn check_d_properties(dfa: &Dfa, profile: &LevelProfile, rng: &mut ChaCha8Rng) {
        use rand::RngExt;
        let n = dfa.n();
        for p in 0..n {
            for q in 0..n {
                let d = profile.d(p, q);
                assert_eq!(d == Some(0), p == q);
                assert_eq!(d, profile.d(q, p));
                let Some(d) = d else { continue };
                if d > 0 {
                    assert!((0..dfa.num_letters())
                        .any(|x| profile.d(dfa.step(p, x), dfa.step(q, x)).unwrap() < d));
                }
                for a in 0..dfa.num_letters() {
                    let img = profile.d(dfa.step(p, a), dfa.step(q, a));
                    assert!(img.is_some_and(|e| e <= d));
                }
                for _ in 0..4 {
                    let len = rng.random_range(0..6);
                    let w: Vec<usize> = (0..len)
                        .map(|_| rng.random_range(0..dfa.num_letters()))
                        .collect();
                    let img = profile.d(dfa.apply(p, &w), dfa.apply(q, &w));
                    assert!(img.is_some_and(|e| e <= d));
                }
            }
        }
    }

    #[test]
    fn one_way_line_levels() {
        // With a single letter Bob's words are powers of it, so a pair's level
        // is the number of letters it takes to merge.
        for n in 2..=7 {
            let dfa = families::one_way_line(n).unwrap();
            let profile = level_profile(&dfa).unwrap();
            assert!(profile.all_finite());
            for q in 0..n {
                assert_eq!(profile.d(q, q), Some(0));
                for p in 0..q {
                    let merge = (1..=n).find(|&t| dfa.apply(p, &vec![0; t]) == dfa.apply(q, &vec![0; t]));
                    assert_eq!(profile.d(p, q), merge.map(|t| t as u32));
                }
            }
        }
        let three = level_profile(&families::one_way_line(3).unwrap()).unwrap();
        assert_eq!(three.d(0, 1), Some(1));
        assert_eq!(three.d(1, 2), Some(2));
    }

    #[test]
    fn two_way_line_middle_pair_is_infinite() {
        let dfa = families::two_way_line(4).unwrap();
        let profile = level_profile(&dfa).unwrap();
        assert_eq!(profile.d(1, 2), None);
        assert!(!profile.all_finite());
    }

    #[test]
    fn finiteness_matches_omega_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dfa in oracle::enumerate_dfas(3, 2).unwrap() {
            let profile = level_profile(&dfa).unwrap();
            let alice = decide_omega(&dfa).unwrap().alice_wins();
            assert_eq!(profile.all_finite(), alice, "{dfa:?}");
            let brute = oracle::decide_k_bruteforce(&dfa, KBound::Omega).unwrap();
            assert_eq!(brute == Winner::Alice, alice);
            check_d_properties(&dfa, &profile, &mut rng);
        }
        for _ in 0..200 {
            let dfa = oracle::random_dfa(6, 2, &mut rng);
            let profile = level_profile(&dfa).unwrap();
            assert_eq!(profile.all_finite(), decide_omega(&dfa).unwrap().alice_wins());
            check_d_properties(&dfa, &profile, &mut rng);
        }
    }
}
