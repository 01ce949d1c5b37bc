//! Generators for the named automata and words.

use std::fmt;

use crate::automaton::{Dfa, PairAutomaton, StateSet, Word};
use crate::error::{Error, Result};

const A: usize = 0;
const B: usize = 1;

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg()))
    }
}

fn indexed_letters(prefix: &str, count: usize) -> Vec<String> {
    (1..=count).map(|i| format!("{prefix}_{i}")).collect()
}

fn cerny_step(n: usize, q: usize, a: usize) -> usize {
    match (q, a) {
        (0, A) => 1,
        (q, A) => q,
        (q, _) => (q + 1) % n,
    }
}

/// The Černý automaton: `a` sends 0 to 1 and fixes the rest, `b` is the
/// cyclic shift.
pub fn cerny(n: usize) -> Result<Dfa> {
    require(n >= 2, || format!("cerny needs n >= 2, got {n}"))?;
    Dfa::from_fn(n, ["a", "b"], |q, a| cerny_step(n, q, a))
}

/// The reset word `(a b^{n-1})^{n-2} a` of length `(n-1)^2`.
pub fn cerny_reset_word(n: usize) -> Word {
    let mut block = Word::new(vec![A]);
    block.extend_from(&Word::repeat_letter(B, n - 1));
    let mut w = block.power(n.saturating_sub(2));
    w.push(A);
    w
}

/// Letters `b`, `c`, `d`: `b` is the cyclic shift, `c` fixes 0 and sends the
/// rest to 1, `d` sends `n-1` to 1 and the rest to 0.
pub fn e_series(n: usize) -> Result<Dfa> {
    require(n >= 3, || format!("e_series needs n >= 3, got {n}"))?;
    Dfa::from_fn(n, ["b", "c", "d"], |q, a| match a {
        0 => (q + 1) % n,
        1 => usize::from(q != 0),
        _ => usize::from(q == n - 1),
    })
}

/// Three states; `a a` is a constant map.
pub fn b2() -> Dfa {
    const TABLE: [[usize; 2]; 3] = [[0, 0], [2, 0], [0, 1]];
    Dfa::from_fn(3, ["a", "b"], |q, a| TABLE[q][a]).expect("valid table")
}

/// Letters `a_1 … a_{n-1}`: `a_1` sends 1 to 0, `a_k` (k ≥ 2) swaps 1 and `k`.
pub fn flower(n: usize) -> Result<Dfa> {
    require(n >= 3, || format!("flower needs n >= 3, got {n}"))?;
    Dfa::from_fn(n, indexed_letters("a", n - 1), |q, a| {
        let k = a + 1;
        match (k, q) {
            (1, 1) => 0,
            (1, q) => q,
            (k, 1) => k,
            (k, q) if q == k => 1,
            (_, q) => q,
        }
    })
}

/// `a_1 a_2 a_1 a_3 a_1 … a_{n-1} a_1`, of length `2n-3`.
pub fn flower_reset_word(n: usize) -> Word {
    let mut w = Word::new(vec![0]);
    for k in 1..n - 1 {
        w.push(k);
        w.push(0);
    }
    w
}

/// States `0..=k+m` with sink 0 and letters `a_1 … a_{k+m}`. For `i ≤ k`,
/// `a_i` sends `i` to 0; for `j ≥ 1`, `a_{k+j}` shifts `j..k+j` up by one and
/// sends `k+j` back to `j`. Every other state is fixed.
pub fn l_series(k: usize, m: usize) -> Result<Dfa> {
    require(k >= 1 && m >= 1, || format!("l_series needs k, m >= 1, got k={k}, m={m}"))?;
    Dfa::from_fn(k + m + 1, indexed_letters("a", k + m), |q, a| {
        let i = a + 1;
        if i <= k {
            if q == i {
                0
            } else {
                q
            }
        } else {
            let j = i - k;
            if j <= q && q < k + j {
                q + 1
            } else if q == k + j {
                j
            } else {
                q
            }
        }
    })
}

/// `Σ_{q=1}^{k+m} ⌈q/k⌉`, the reset threshold of `l_series(k, m)`.
pub fn l_series_rt(k: usize, m: usize) -> usize {
    (1..=k + m).map(|q| q.div_ceil(k)).sum()
}

pub fn rystsov(n: usize) -> Result<Dfa> {
    require(n >= 3, || format!("rystsov needs n >= 3, got {n}"))?;
    l_series(1, n - 2)
}

fn cerny_plus(n: usize, p: usize, q: usize) -> Result<Dfa> {
    Dfa::from_fn(n, ["a", "b", "c", "d"], |s, a| match a {
        A | B => cerny_step(n, s, a),
        2 => usize::from(s != p),
        _ => usize::from(s == q),
    })
}

/// The Černý automaton plus `c` (fixes 0, sends the rest to 1) and `d` (sends
/// `⌈n/2⌉` to 1, the rest to 0).
pub fn d_series(n: usize) -> Result<Dfa> {
    require(n >= 4, || format!("d_series needs n >= 4, got {n}"))?;
    cerny_plus(n, 0, n.div_ceil(2))
}

/// The pair `{p_k, q_k} = {0,1}·u_k` for the length-`k` prefix `u_k` of
/// [`w_forward`], returned as `(min, max)`.
pub fn d_series_pair(n: usize, k: usize) -> Result<(usize, usize)> {
    let c = cerny(n)?;
    let w = w_forward(n)?;
    require(k <= w.len(), || format!("k = {k} exceeds |w_forward| = {}", w.len()))?;
    let set = c.apply_set(&StateSet::from_states(n, [0, 1]), &w[..k]);
    let v = set.to_vec();
    debug_assert_eq!(v.len(), 2);
    Ok((v[0], v[1]))
}

/// Like [`d_series`] with `c` fixing `p_k` and `d` sending `q_k` to 1, where
/// `(p_k, q_k)` is [`d_series_pair`]. `d_series_k(n, C(n,2)-1) == d_series(n)`.
pub fn d_series_k(n: usize, k: usize) -> Result<Dfa> {
    require(n >= 4, || format!("d_series_k needs n >= 4, got {n}"))?;
    let top = n * (n - 1) / 2 - 1;
    require((n..=top).contains(&k), || {
        format!("d_series_k needs {n} <= k <= {top}, got {k}")
    })?;
    let (p, q) = d_series_pair(n, k)?;
    cerny_plus(n, p, q)
}

/// One letter: `a` fixes 0 and moves every other state down by one.
pub fn one_way_line(n: usize) -> Result<Dfa> {
    require(n >= 1, || "one_way_line needs n >= 1".to_string())?;
    Dfa::from_fn(n, ["a"], |q, _| q.saturating_sub(1))
}

/// `a` moves down towards 0, `b` moves up towards `n-1`; both ends are fixed
/// by the letter pointing into them.
pub fn two_way_line(n: usize) -> Result<Dfa> {
    require(n >= 2, || format!("two_way_line needs n >= 2, got {n}"))?;
    Dfa::from_fn(n, ["a", "b"], |q, a| match a {
        A => q.saturating_sub(1),
        _ => (q + 1).min(n - 1),
    })
}

/// Over the Černý letters: `(b^{n-1}a)^{(n-1)/2-1} b^{n-1}` for odd `n`,
/// `(b^{n-1}a)^{n/2-1} b^{n/2-1}` for even `n`. Length `C(n,2)-1`.
pub fn w_forward(n: usize) -> Result<Word> {
    require(n >= 3, || format!("w_forward needs n >= 3, got {n}"))?;
    let mut block = Word::repeat_letter(B, n - 1);
    block.push(A);
    Ok(if n % 2 == 1 {
        block
            .power((n - 1) / 2 - 1)
            .concat(&Word::repeat_letter(B, n - 1))
    } else {
        block
            .power(n / 2 - 1)
            .concat(&Word::repeat_letter(B, n / 2 - 1))
    })
}

/// `(b^{n-1}a)^{(n-1)/2}` for odd `n`, `b^{n/2-1} a (b^{n-1}a)^{n/2-1}` for
/// even `n`. Length `C(n,2)`.
pub fn w_backward(n: usize) -> Result<Word> {
    require(n >= 3, || format!("w_backward needs n >= 3, got {n}"))?;
    let mut block = Word::repeat_letter(B, n - 1);
    block.push(A);
    Ok(if n % 2 == 1 {
        block.power((n - 1) / 2)
    } else {
        let mut w = Word::repeat_letter(B, n / 2 - 1);
        w.push(A);
        w.concat(&block.power(n / 2 - 1))
    })
}

/// Start pair of [`w_forward`] in the Černý pair automaton: `{0,1}`.
pub fn w_forward_start(n: usize) -> Result<usize> {
    Ok(PairAutomaton::new(&cerny(n)?)?.index(0, 1))
}

/// The pair `{⌊n/2⌋+1, 1}` from which [`w_backward`] walks a Hamiltonian path
/// to the sink. For even `n` this is `{⌈n/2⌉+1, 1}`; for odd `n` that pair
/// reaches the sink in fewer than `C(n,2)` letters, so the start must be
/// `{⌈n/2⌉, 1}`.
pub fn w_backward_start(n: usize) -> Result<usize> {
    Ok(PairAutomaton::new(&cerny(n)?)?.index(n / 2 + 1, 1))
}

/// A named family member with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    Cerny { n: usize },
    ESeries { n: usize },
    B2,
    Flower { n: usize },
    LSeries { k: usize, m: usize },
    DSeries { n: usize },
    DSeriesK { n: usize, k: usize },
    OneWayLine { n: usize },
    TwoWayLine { n: usize },
    Rystsov { n: usize },
}

impl FamilySpec {
    pub const NAMES: [&'static str; 10] = [
        "cerny",
        "e_series",
        "b2",
        "flower",
        "l_series",
        "d_series",
        "d_series_k",
        "one_way_line",
        "two_way_line",
        "rystsov",
    ];

    /// Builds a spec from a family name and optional `n`, `k`, `m` parameters.
    pub fn from_parts(
        name: &str,
        n: Option<usize>,
        k: Option<usize>,
        m: Option<usize>,
    ) -> Result<Self> {
        let need = |v: Option<usize>, p: &str| {
            v.ok_or_else(|| Error::InvalidArgument(format!("family {name} needs --{p}")))
        };
        Ok(match name {
            "cerny" => FamilySpec::Cerny { n: need(n, "n")? },
            "e_series" => FamilySpec::ESeries { n: need(n, "n")? },
            "b2" => FamilySpec::B2,
            "flower" => FamilySpec::Flower { n: need(n, "n")? },
            "l_series" => FamilySpec::LSeries {
                k: need(k, "k")?,
                m: need(m, "m")?,
            },
            "d_series" => FamilySpec::DSeries { n: need(n, "n")? },
            "d_series_k" => FamilySpec::DSeriesK {
                n: need(n, "n")?,
                k: need(k, "k")?,
            },
            "one_way_line" => FamilySpec::OneWayLine { n: need(n, "n")? },
            "two_way_line" => FamilySpec::TwoWayLine { n: need(n, "n")? },
            "rystsov" => FamilySpec::Rystsov { n: need(n, "n")? },
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown family {other:?}; expected one of {}",
                    Self::NAMES.join(", ")
                )))
            }
        })
    }

    pub fn build(&self) -> Result<Dfa> {
        match *self {
            FamilySpec::Cerny { n } => cerny(n),
            FamilySpec::ESeries { n } => e_series(n),
            FamilySpec::B2 => Ok(b2()),
            FamilySpec::Flower { n } => flower(n),
            FamilySpec::LSeries { k, m } => l_series(k, m),
            FamilySpec::DSeries { n } => d_series(n),
            FamilySpec::DSeriesK { n, k } => d_series_k(n, k),
            FamilySpec::OneWayLine { n } => one_way_line(n),
            FamilySpec::TwoWayLine { n } => two_way_line(n),
            FamilySpec::Rystsov { n } => rystsov(n),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Cerny { n } => write!(f, "cerny({n})"),
            FamilySpec::ESeries { n } => write!(f, "e_series({n})"),
            FamilySpec::B2 => f.write_str("b2"),
            FamilySpec::Flower { n } => write!(f, "flower({n})"),
            FamilySpec::LSeries { k, m } => write!(f, "l_series({k},{m})"),
            FamilySpec::DSeries { n } => write!(f, "d_series({n})"),
            FamilySpec::DSeriesK { n, k } => write!(f, "d_series_k({n},{k})"),
            FamilySpec::OneWayLine { n } => write!(f, "one_way_line({n})"),
            FamilySpec::TwoWayLine { n } => write!(f, "two_way_line({n})"),
            FamilySpec::Rystsov { n } => write!(f, "rystsov({n})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cerny_word_resets() {
        for n in 2..8 {
            let c = cerny(n).unwrap();
            let w = cerny_reset_word(n);
            assert_eq!(w.len(), (n - 1) * (n - 1));
            assert!(c.is_reset_word(&w));
        }
        let c4 = cerny(4).unwrap();
        assert_eq!(c4.apply(0, &c4.parse_word("a b b b a").unwrap()), 1);
    }

    #[test]
    fn e_series_pair_maps_to_zero_one() {
        for n in 3..8 {
            let e = e_series(n).unwrap();
            let p = StateSet::from_states(n, [0, n - 1]);
            for x in 0..3 {
                assert_eq!(e.step_set(&p, x).to_vec(), vec![0, 1]);
            }
        }
    }

    #[test]
    fn b2_square_of_a_is_constant() {
        let b = b2();
        let aa = Word::new(vec![0, 0]);
        assert!(b.is_reset_word(&aa));
    }

    #[test]
    fn flower_word() {
        for n in 3..8 {
            let f = flower(n).unwrap();
            let w = flower_reset_word(n);
            assert_eq!(w.len(), 2 * n - 3);
            assert!(f.is_reset_word(&w));
            for k in 1..n - 1 {
                for q in 0..n {
                    assert_eq!(f.step(f.step(q, k), k), q);
                }
            }
        }
    }

    #[test]
    fn l_series_shape() {
        let l = l_series(3, 2).unwrap();
        assert_eq!(l.n(), 6);
        assert_eq!(l.apply(4, &[3]), 1);
        assert!(l.is_sink(0));
        assert_eq!(l_series_rt(3, 2), 7);
        assert_eq!(l_series_rt(2, 2), 6);
        assert_eq!(rystsov(5).unwrap(), l_series(1, 3).unwrap());
    }

    #[test]
    fn words_have_expected_shape() {
        let c5 = cerny(5).unwrap();
        assert_eq!(c5.format_word_compact(&w_forward(5).unwrap()), "bbbbabbbb");
        let c6 = cerny(6).unwrap();
        assert_eq!(
            c6.format_word_compact(&w_forward(6).unwrap()),
            "bbbbbabbbbbabb"
        );
        for n in 3..10 {
            let c = cerny(n).unwrap();
            let wf = w_forward(n).unwrap();
            let wb = w_backward(n).unwrap();
            assert_eq!(wf.len(), n * (n - 1) / 2 - 1);
            assert_eq!(wb.len(), n * (n - 1) / 2);
            let img = c.apply_set(&StateSet::from_states(n, [0, 1]), &wf);
            assert_eq!(img.to_vec(), vec![0, n.div_ceil(2)]);
        }
    }

    #[test]
    fn d_series_top_coincides() {
        for n in 4..8 {
            let top = n * (n - 1) / 2 - 1;
            assert_eq!(d_series_k(n, top).unwrap(), d_series(n).unwrap());
            assert_eq!(d_series_pair(n, n).unwrap(), (1, n - 1));
        }
        assert!(d_series_k(5, 4).is_err());
        assert!(d_series_k(5, 10).is_err());
    }

    #[test]
    fn specs_build() {
        let s = FamilySpec::from_parts("l_series", None, Some(2), Some(3)).unwrap();
        assert_eq!(s.to_string(), "l_series(2,3)");
        assert_eq!(s.build().unwrap().n(), 6);
        assert!(FamilySpec::from_parts("cerny", None, None, None).is_err());
        assert!(FamilySpec::from_parts("nope", Some(3), None, None).is_err());
    }
}
