use std::fmt;

use serde::{Deserialize, Serialize};

use super::KnotError;

/// A freely reduced word: (generator index, nonzero exponent) with distinct adjacent generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<(usize, i64)>,
}

impl Word {
    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn generator(g: usize) -> Self {
        Word { letters: vec![(g, 1)] }
    }

    pub fn letter(g: usize, e: i64) -> Self {
        Word::new(vec![(g, e)])
    }

    /// Builds a word, freely reducing the letters.
    pub fn new(letters: Vec<(usize, i64)>) -> Self {
        let mut out: Vec<(usize, i64)> = Vec::with_capacity(letters.len());
        for (g, e) in letters {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((h, f)) if *h == g => {
                    *f += e;
                    if *f == 0 {
                        out.pop();
                    }
                }
                _ => out.push((g, e)),
            }
        }
        Word { letters: out }
    }

    /// From ±1 signs on alternating generators, starting with `first`.
    pub fn alternating(first: usize, second: usize, signs: &[i64]) -> Self {
        Word::new(signs.iter().enumerate().map(|(i, &s)| (if i % 2 == 0 { first } else { second }, s)).collect())
    }

    /// Parses whitespace-separated tokens `name` or `name^exp`; `1` is the empty word.
    pub fn parse(s: &str, names: &[&str]) -> Result<Self, KnotError> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e = e.trim_matches(|c| c == '{' || c == '}' || c == '(' || c == ')');
                    let e: i64 = e.parse().map_err(|_| KnotError::BadWord(tok.to_string()))?;
                    (n, e)
                }
                None => (tok, 1),
            };
            let g = names.iter().position(|n| *n == name).ok_or_else(|| KnotError::BadWord(tok.to_string()))?;
            letters.push((g, exp));
        }
        Ok(Word::new(letters))
    }

    pub fn letters(&self) -> &[(usize, i64)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Syllable count.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Sum of absolute exponents.
    pub fn length(&self) -> u64 {
        self.letters.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|(g, _)| *g).max()
    }

    pub fn inverse(&self) -> Self {
        Word { letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    /// The word spelled backwards (exponents kept).
    pub fn reversed(&self) -> Self {
        Word { letters: self.letters.iter().rev().copied().collect() }
    }

    pub fn concat(&self, o: &Self) -> Self {
        let mut l = self.letters.clone();
        l.extend_from_slice(&o.letters);
        Word::new(l)
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut l = Vec::new();
        for _ in 0..n.unsigned_abs() {
            l.extend_from_slice(&base.letters);
        }
        Word::new(l)
    }

    pub fn conjugate_by(&self, g: &Self) -> Self {
        g.concat(self).concat(&g.inverse())
    }

    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.concat(b).concat(&a.inverse()).concat(&b.inverse())
    }

    pub fn display_with(&self, names: &[&str]) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        self.letters
            .iter()
            .map(|&(g, e)| {
                let n = names.get(g).map(|s| s.to_string()).unwrap_or_else(|| format!("g{g}"));
                if e == 1 {
                    n
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

/// Per-generator exponent sums.
pub fn abelianization_exponents(w: &Word, generator_count: usize) -> Vec<i64> {
    let mut out = vec![0i64; generator_count.max(w.max_generator().map_or(0, |g| g + 1))];
    for &(g, e) in w.letters() {
        out[g] += e;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_display_round_trip() {
        let w = Word::parse("a b^-1 a^2", &["a", "b"]).unwrap();
        assert_eq!(w.letters(), &[(0, 1), (1, -1), (0, 2)]);
        assert_eq!(w.display_with(&["a", "b"]), "a b^-1 a^2");
        assert_eq!(Word::parse("a a^-1", &["a", "b"]).unwrap(), Word::empty());
        assert!(Word::parse("c", &["a", "b"]).is_err());
        assert!(Word::parse("a^x", &["a", "b"]).is_err());
        assert_eq!(Word::parse("s1^{-2} s3", &["s1", "s2", "s3"]).unwrap().letters(), &[(0, -2), (2, 1)]);
    }

    #[test]
    fn abelianization_of_empty_word() {
        assert_eq!(abelianization_exponents(&Word::empty(), 2), vec![0, 0]);
    }

    fn word() -> impl Strategy<Value = Word> {
        prop::collection::vec((0usize..3, -3i64..4), 0..12).prop_map(Word::new)
    }

    proptest! {
        #[test]
        fn inverse_cancels(w in word()) {
            prop_assert!(w.inverse().concat(&w).is_empty());
            prop_assert!(w.concat(&w.inverse()).is_empty());
        }

        #[test]
        fn reduced_words_have_distinct_neighbours(w in word(), u in word()) {
            let c = w.concat(&u);
            prop_assert!(c.letters().windows(2).all(|p| p[0].0 != p[1].0));
            prop_assert!(c.letters().iter().all(|l| l.1 != 0));
        }

        #[test]
        fn exponent_sums_are_additive(w in word(), u in word()) {
            let a = abelianization_exponents(&w, 3);
            let b = abelianization_exponents(&u, 3);
            let c = abelianization_exponents(&w.concat(&u), 3);
            prop_assert_eq!(c, a.iter().zip(&b).map(|(x, y)| x + y).collect::<Vec<_>>());
        }
    }
}
