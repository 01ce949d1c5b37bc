use super::{Dfa, Word};
use crate::error::{Error, Result};

/// Default cap on the derived alphabet size of [`iterate`].
pub const DEFAULT_ITERATION_CAP: usize = 1_000_000;

/// Number of nonempty words of length at most `m` over `k` letters, or `None`
/// on overflow.
pub fn iteration_alphabet_size(k: usize, m: usize) -> Option<usize> {
    let mut total = 0usize;
    let mut layer = 1usize;
    for _ in 0..m {
        layer = layer.checked_mul(k)?;
        total = total.checked_add(layer)?;
    }
    Some(total)
}

/// The words labelling the letters of the iteration automaton, ordered by length
/// then lexicographically by letter index.
pub fn iteration_words(num_letters: usize, m: usize) -> Vec<Word> {
    let mut out: Vec<Word> = (0..num_letters).map(|a| Word::new(vec![a])).collect();
    let mut layer_start = 0;
    for _ in 1..m {
        let layer_end = out.len();
        for i in layer_start..layer_end {
            for a in 0..num_letters {
                let mut w = out[i].clone();
                w.push(a);
                out.push(w);
            }
        }
        layer_start = layer_end;
    }
    out
}

/// The iteration automaton: same states, one letter per nonempty word of
/// length at most `m`, acting by composition. Letter names join the base names
/// with `.`.
pub fn iterate(dfa: &Dfa, m: usize) -> Result<Dfa> {
    iterate_with_cap(dfa, m, DEFAULT_ITERATION_CAP)
}

pub fn iterate_with_cap(dfa: &Dfa, m: usize, cap: usize) -> Result<Dfa> {
    if m == 0 {
        return Err(Error::InvalidArgument("iteration depth must be at least 1".into()));
    }
    if let Some(name) = dfa.letters().iter().find(|l| l.contains('.')) {
        return Err(Error::Precondition(format!(
            "base letter {name:?} contains '.', which iteration uses as a separator"
        )));
    }
    let k = dfa.num_letters();
    let size = iteration_alphabet_size(k, m)
        .filter(|&s| s <= cap)
        .ok_or_else(|| {
            let requested = (1..=m as u32)
                .map(|i| (k as u128).saturating_pow(i))
                .fold(0u128, u128::saturating_add);
            Error::cap("iteration alphabet", requested, cap as u128)
        })?;
    let n = dfa.n();
    let words = iteration_words(k, m);
    debug_assert_eq!(words.len(), size);
    // column[i][q] = q · words[i]; the word at index i >= k extends the word at
    // index (i - k) / k by letter (i - k) % k.
    let mut columns: Vec<Vec<u32>> = Vec::with_capacity(size);
    for i in 0..size {
        let col = if i < k {
            (0..n).map(|q| dfa.step(q, i) as u32).collect()
        } else {
            let (prefix, a) = ((i - k) / k, (i - k) % k);
            columns[prefix]
                .iter()
                .map(|&p| dfa.step(p as usize, a) as u32)
                .collect()
        };
        columns.push(col);
    }
    let mut delta = Vec::with_capacity(n * size);
    for q in 0..n {
        delta.extend(columns.iter().map(|c| c[q]));
    }
    let names = words
        .iter()
        .map(|w| {
            w.iter()
                .map(|&a| dfa.letter_name(a))
                .collect::<Vec<_>>()
                .join(".")
        })
        .collect();
    Ok(Dfa::from_raw(n, names, delta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_letter() -> Dfa {
        Dfa::from_fn(3, ["a", "b"], |q, a| if a == 0 { (q + 1) % 3 } else { 0 }).unwrap()
    }

    #[test]
    fn alphabet_sizes() {
        assert_eq!(iteration_alphabet_size(2, 2), Some(6));
        assert_eq!(iteration_alphabet_size(3, 3), Some(39));
        assert_eq!(iteration_alphabet_size(usize::MAX, 2), None);
    }

    #[test]
    fn columns_compose() {
        let d = two_letter();
        let it = iterate(&d, 3).unwrap();
        assert_eq!(it.num_letters(), 14);
        let words = iteration_words(2, 3);
        for (i, w) in words.iter().enumerate() {
            let name = w
                .iter()
                .map(|&a| d.letter_name(a))
                .collect::<Vec<_>>()
                .join(".");
            assert_eq!(it.letter_name(i), name);
            for q in 0..3 {
                assert_eq!(it.step(q, i), d.apply(q, w));
            }
        }
        assert_eq!(it.letter_name(2), "a.a");
        assert_eq!(it.letter_name(5), "b.b");
    }

    #[test]
    fn depth_one_is_isomorphic() {
        let d = two_letter();
        assert_eq!(iterate(&d, 1).unwrap(), d);
    }

    #[test]
    fn refuses_over_cap_and_dotted_names() {
        let d = two_letter();
        assert!(matches!(
            iterate_with_cap(&d, 10, 100),
            Err(Error::CapExceeded { .. })
        ));
        let it = iterate(&d, 2).unwrap();
        assert!(matches!(iterate(&it, 2), Err(Error::Precondition(_))));
        assert!(iterate(&d, 0).is_err());
    }
}
