//! Letters `x_0..x_m`, words over them, the grading `|x_0| = 2`, `|x_j| = 1`,
//! and the shuffle product.

use std::fmt::{self, Display};
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::scalar::Coeff;

/// Alphabet `X = {x_0, x_1, ..., x_m}` with `m ≥ 1`. Also the range `1..=m`
/// of root labels and extraction labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    m: u8,
}

impl Alphabet {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 || m > u8::MAX as usize - 1 {
            return Err(Error::InvalidAlphabet(m));
        }
        Ok(Alphabet { m: m as u8 })
    }

    pub fn m(self) -> usize {
        self.m as usize
    }

    /// Channel / root labels `1..=m`.
    pub fn labels(self) -> impl Iterator<Item = u8> + Clone {
        1..=self.m
    }

    /// All letters `x_0..=x_m`.
    pub fn letters(self) -> impl Iterator<Item = Letter> + Clone {
        (0..=self.m).map(Letter)
    }

    pub fn letter(self, index: usize) -> Result<Letter> {
        if index > self.m() {
            return Err(Error::LetterOutOfRange { index, m: self.m() });
        }
        Ok(Letter(index as u8))
    }

    pub fn check_label(self, label: usize) -> Result<u8> {
        if label == 0 || label > self.m() {
            return Err(Error::LabelOutOfRange { label, m: self.m() });
        }
        Ok(label as u8)
    }

    pub fn contains_word(self, w: &Word) -> bool {
        w.letters().iter().all(|l| l.0 <= self.m)
    }

    /// Every word of length at most `max_len`, shortest first.
    pub fn words_up_to_len(self, max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(layer.len() * (self.m() + 1));
            for w in &layer {
                for l in self.letters() {
                    next.push(w.with_suffix(l));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// Every word whose grading sum is at most `max_weight`.
    pub fn words_up_to_degree(self, max_weight: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut stack = vec![(Word::empty(), 0usize)];
        while let Some((w, deg)) = stack.pop() {
            for l in self.letters() {
                let d = deg + l.weight();
                if d <= max_weight {
                    stack.push((w.with_suffix(l), d));
                }
            }
            out.push(w);
        }
        out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
        out
    }
}

/// Letter `x_i`. `x_0` is the drift ("white") letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u8);

impl Letter {
    pub const X0: Letter = Letter(0);

    /// Unchecked constructor; range is validated against an [`Alphabet`]
    /// where it matters.
    pub const fn new(index: u8) -> Self {
        Letter(index)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn weight(self) -> usize {
        if self.0 == 0 {
            2
        } else {
            1
        }
    }

    pub fn is_white(self) -> bool {
        self.0 == 0
    }
}

pub fn letter_weight(l: Letter) -> usize {
    l.weight()
}

/// Finite word, stored left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(SmallVec<[Letter; 14]>);

impl Word {
    pub fn empty() -> Self {
        Word(SmallVec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        Word(letters.into_iter().collect())
    }

    pub fn from_indices(indices: &[u8]) -> Self {
        Word(indices.iter().map(|&i| Letter(i)).collect())
    }

    /// Parses `0.1.2` (or `e` for the empty word) and checks every index
    /// against the alphabet.
    pub fn parse(s: &str, alphabet: Alphabet) -> Result<Self> {
        let w: Word = s.parse()?;
        if let Some(bad) = w.letters().iter().find(|l| l.0 > alphabet.m) {
            return Err(Error::LetterOutOfRange { index: bad.index(), m: alphabet.m() });
        }
        Ok(w)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of letter weights.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|l| l.weight()).sum()
    }

    /// Number of occurrences of a letter, `|η|_{x_i}`.
    pub fn count(&self, l: Letter) -> usize {
        self.0.iter().filter(|&&x| x == l).count()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn with_prefix(&self, l: Letter) -> Word {
        let mut v = SmallVec::with_capacity(self.0.len() + 1);
        v.push(l);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    pub fn with_suffix(&self, l: Letter) -> Word {
        let mut v = self.0.clone();
        v.push(l);
        Word(v)
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    /// Word without its first letter.
    pub fn tail(&self) -> Word {
        Word(self.0.iter().skip(1).copied().collect())
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word(self.0[range].iter().copied().collect())
    }
}

pub fn word_degree(w: &Word) -> usize {
    w.degree()
}

pub fn concat(u: &Word, v: &Word) -> Word {
    u.concat(v)
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "e" || s == "∅" {
            return Ok(Word::empty());
        }
        if s.is_empty() {
            return Err(Error::Parse("empty word must be written as `e`".into()));
        }
        s.split('.')
            .map(|tok| {
                tok.parse::<u8>()
                    .map(Letter)
                    .map_err(|_| Error::Parse(format!("bad letter index `{tok}` in word `{s}`")))
            })
            .collect::<Result<SmallVec<_>>>()
            .map(Word)
    }
}

impl Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{}", l.0)?;
        }
        Ok(())
    }
}

/// Linear combination of words.
pub type WordPoly<T> = LinComb<Word, T>;

/// Shuffle product of two words: the sum over all interleavings.
pub fn shuffle<T: Coeff>(u: &Word, v: &Word) -> WordPoly<T> {
    shuffle_truncated(u, v, usize::MAX)
}

/// Shuffle product keeping only the result when `|u| + |v| ≤ max_len`.
pub fn shuffle_truncated<T: Coeff>(u: &Word, v: &Word, max_len: usize) -> WordPoly<T> {
    let mut out = WordPoly::zero();
    shuffle_into(u, v, max_len, &T::one(), &mut out);
    out
}

/// Adds `scale · (u ⧢ v)` to `out`, dropping it entirely when the result
/// would exceed `max_len`.
pub fn shuffle_into<T: Coeff>(u: &Word, v: &Word, max_len: usize, scale: &T, out: &mut WordPoly<T>) {
    let n = u.len() + v.len();
    if n > max_len {
        return;
    }
    if u.is_empty() || v.is_empty() {
        out.add_term(u.concat(v), scale.clone());
        return;
    }
    let (a, b) = (u.letters(), v.letters());
    let mut buf: SmallVec<[Letter; 14]> = SmallVec::with_capacity(n);
    fn rec<T: Coeff>(a: &[Letter], b: &[Letter], buf: &mut SmallVec<[Letter; 14]>, scale: &T, out: &mut WordPoly<T>) {
        if a.is_empty() || b.is_empty() {
            let mark = buf.len();
            buf.extend_from_slice(a);
            buf.extend_from_slice(b);
            out.add_term(Word(buf.clone()), scale.clone());
            buf.truncate(mark);
            return;
        }
        buf.push(a[0]);
        rec(&a[1..], b, buf, scale, out);
        buf.pop();
        buf.push(b[0]);
        rec(a, &b[1..], buf, scale, out);
        buf.pop();
    }
    rec(a, b, &mut buf, scale, out);
}

/// Bilinear shuffle of two word polynomials, truncated at `max_len`.
pub fn shuffle_poly<T: Coeff>(a: &WordPoly<T>, b: &WordPoly<T>, max_len: usize) -> WordPoly<T> {
    let mut out = WordPoly::zero();
    for (u, cu) in a.iter() {
        for (v, cv) in b.iter() {
            shuffle_into(u, v, max_len, &(cu.clone() * cv.clone()), &mut out);
        }
    }
    out
}

/// Prepends a letter to every word, dropping words that would exceed `max_len`.
pub fn left_concat_poly<T: Coeff>(l: Letter, a: &WordPoly<T>, max_len: usize) -> WordPoly<T> {
    let mut out = WordPoly::zero();
    for (w, c) in a.iter() {
        if w.len() < max_len {
            out.add_term(w.with_prefix(l), c.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn letter_weights() {
        assert_eq!(letter_weight(Letter::new(0)), 2);
        assert_eq!(letter_weight(Letter::new(1)), 1);
        assert_eq!(letter_weight(Letter::new(5)), 1);
    }

    #[test]
    fn word_degrees() {
        assert_eq!(word_degree(&Word::empty()), 0);
        assert_eq!(word_degree(&w("0.1")), 3);
        assert_eq!(word_degree(&w("0.0")), 4);
    }

    #[test]
    fn concatenation() {
        assert_eq!(concat(&w("1"), &w("2")), w("1.2"));
        assert_eq!(concat(&Word::empty(), &w("0")), w("0"));
        assert_eq!(concat(&w("0.1"), &w("2.0")), w("0.1.2.0"));
    }

    #[test]
    fn shuffle_examples() {
        let s: WordPoly<Q> = shuffle(&w("1"), &Word::empty());
        assert_eq!(s, WordPoly::from_term(w("1"), q(1)));

        let s: WordPoly<Q> = shuffle(&w("1"), &w("2"));
        assert_eq!(s, [(w("1.2"), q(1)), (w("2.1"), q(1))].into_iter().collect());

        let s: WordPoly<Q> = shuffle(&w("1"), &w("1"));
        assert_eq!(s, WordPoly::from_term(w("1.1"), q(2)));
    }

    /// Interleavings enumerated by choosing which output slots carry `u`.
    fn brute_force_shuffle(u: &Word, v: &Word) -> WordPoly<i64> {
        let n = u.len() + v.len();
        let mut out = WordPoly::zero();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != u.len() {
                continue;
            }
            let (mut i, mut j) = (0, 0);
            let mut letters = Vec::new();
            for slot in 0..n {
                if mask & (1 << slot) != 0 {
                    letters.push(u.letters()[i]);
                    i += 1;
                } else {
                    letters.push(v.letters()[j]);
                    j += 1;
                }
            }
            out.add_term(Word::from_letters(letters), 1);
        }
        out
    }

    #[test]
    fn shuffle_matches_brute_force_interleavings() {
        let expected = brute_force_shuffle(&w("0.1"), &w("2"));
        assert_eq!(expected, [(w("0.1.2"), 1), (w("0.2.1"), 1), (w("2.0.1"), 1)].into_iter().collect());
        assert_eq!(shuffle::<i64>(&w("0.1"), &w("2")), expected);
        for (a, b) in [("0.1.0", "1.2"), ("1.1", "1.1.2"), ("2.0.1.1", "0.2")] {
            assert_eq!(shuffle::<i64>(&w(a), &w(b)), brute_force_shuffle(&w(a), &w(b)));
        }
    }

    #[test]
    fn exhaustive_shuffle_commutative_associative_and_mass() {
        let alpha = Alphabet::new(2).unwrap();
        let words: Vec<Word> = alpha.words_up_to_len(2);
        for u in &words {
            for v in &words {
                let uv: WordPoly<i64> = shuffle(u, v);
                assert_eq!(uv, shuffle(v, u));
                let mass: i64 = uv.iter().map(|(_, c)| *c).sum();
                assert_eq!(mass, binom(u.len() + v.len(), u.len()));
                for x in &words {
                    let left = shuffle_poly(&uv, &WordPoly::from_term(x.clone(), 1), usize::MAX);
                    let right = shuffle_poly(&WordPoly::from_term(u.clone(), 1), &shuffle(v, x), usize::MAX);
                    assert_eq!(left, right);
                }
            }
        }
    }

    fn binom(n: usize, k: usize) -> i64 {
        (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
    }

    #[test]
    fn truncated_shuffle_drops_long_results() {
        assert!(shuffle_truncated::<i64>(&w("1.1"), &w("2"), 2).is_zero());
        assert_eq!(shuffle_truncated::<i64>(&w("1"), &w("2"), 2).len(), 2);
    }

    #[test]
    fn parse_and_display() {
        let alpha = Alphabet::new(2).unwrap();
        assert_eq!(Word::parse("0.1.2", alpha).unwrap().to_string(), "0.1.2");
        assert_eq!(Word::parse("e", alpha).unwrap(), Word::empty());
        assert_eq!(Word::parse("0.3", alpha), Err(Error::LetterOutOfRange { index: 3, m: 2 }));
        assert!(matches!(Word::parse("0..1", alpha), Err(Error::Parse(_))));
        assert!(matches!(Word::parse("", alpha), Err(Error::Parse(_))));
    }

    #[test]
    fn enumeration_counts() {
        let alpha = Alphabet::new(2).unwrap();
        assert_eq!(alpha.words_up_to_len(2).len(), 1 + 3 + 9);
        // weights: f(w) = 2 f(w-1) + f(w-2)
        assert_eq!(alpha.words_up_to_degree(3).len(), 1 + 2 + 5 + 12);
        assert!(Alphabet::new(0).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn word_strategy() -> impl Strategy<Value = Word> {
            proptest::collection::vec(0u8..3, 0..5).prop_map(|v| Word::from_indices(&v))
        }

        proptest! {
            #[test]
            fn degree_is_additive(u in word_strategy(), v in word_strategy()) {
                prop_assert_eq!(concat(&u, &v).degree(), u.degree() + v.degree());
            }

            #[test]
            fn text_round_trip(u in word_strategy()) {
                prop_assert_eq!(u.to_string().parse::<Word>().unwrap(), u);
            }
        }
    }
}
