//! Vector-valued formal power series `ℝ^ℓ⟨⟨X⟩⟩`, truncated by word length.

use std::fmt::{self, Display};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Coeff;
use crate::words::{left_concat_poly, shuffle_poly, Alphabet, Letter, Word, WordPoly};

/// `ℓ` channels of word polynomials; every stored word has length at most
/// `max_len`.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<T: Coeff> {
    alphabet: Alphabet,
    max_len: usize,
    channels: Vec<WordPoly<T>>,
}

impl<T: Coeff> Series<T> {
    pub fn zero(ell: usize, alphabet: Alphabet, max_len: usize) -> Result<Self> {
        if ell == 0 {
            return Err(Error::DimensionMismatch("a series needs at least one channel".into()));
        }
        Ok(Series { alphabet, max_len, channels: vec![WordPoly::zero(); ell] })
    }

    /// Builds a series from `(channel, word, coefficient)` triples with
    /// 1-based channels. Words longer than `max_len` are dropped.
    pub fn from_terms(
        ell: usize,
        alphabet: Alphabet,
        max_len: usize,
        terms: impl IntoIterator<Item = (usize, Word, T)>,
    ) -> Result<Self> {
        let mut s = Self::zero(ell, alphabet, max_len)?;
        for (ch, w, c) in terms {
            s.add_term(ch, w, c)?;
        }
        Ok(s)
    }

    /// Series with every channel given explicitly (channel `i` is `polys[i-1]`).
    pub fn from_channels(alphabet: Alphabet, max_len: usize, polys: Vec<WordPoly<T>>) -> Result<Self> {
        let mut s = Self::zero(polys.len(), alphabet, max_len)?;
        for (i, p) in polys.into_iter().enumerate() {
            for (w, c) in p {
                s.add_term(i + 1, w, c)?;
            }
        }
        Ok(s)
    }

    pub fn ell(&self) -> usize {
        self.channels.len()
    }

    pub fn m(&self) -> usize {
        self.alphabet.m()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn is_zero(&self) -> bool {
        self.channels.iter().all(WordPoly::is_zero)
    }

    /// Channel `i`, 1-based.
    pub fn channel(&self, i: usize) -> &WordPoly<T> {
        &self.channels[i - 1]
    }

    pub fn channels(&self) -> &[WordPoly<T>] {
        &self.channels
    }

    fn check_channel(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.ell() {
            return Err(Error::DimensionMismatch(format!("channel {i} outside 1..={}", self.ell())));
        }
        Ok(())
    }

    /// `(c_i, η)`; zero for words beyond the truncation.
    pub fn coeff(&self, i: usize, w: &Word) -> T {
        self.channels.get(i.wrapping_sub(1)).map_or_else(T::zero, |p| p.coeff(w))
    }

    pub fn add_term(&mut self, i: usize, w: Word, c: T) -> Result<()> {
        self.check_channel(i)?;
        if !self.alphabet.contains_word(&w) {
            let index = w.letters().iter().map(|l| l.index()).max().unwrap_or(0);
            return Err(Error::LetterOutOfRange { index, m: self.m() });
        }
        if w.len() <= self.max_len {
            self.channels[i - 1].add_term(w, c);
        }
        Ok(())
    }

    /// Triples sorted by channel, then length, then word.
    pub fn terms(&self) -> Vec<(usize, &Word, &T)> {
        let mut out: Vec<_> =
            self.channels.iter().enumerate().flat_map(|(i, p)| p.iter().map(move |(w, c)| (i + 1, w, c))).collect();
        out.sort_by(|a, b| (a.0, a.1.len(), a.1).cmp(&(b.0, b.1.len(), b.1)));
        out
    }

    pub fn truncate(&self, max_len: usize) -> Self {
        let max_len = max_len.min(self.max_len);
        let channels = self
            .channels
            .iter()
            .map(|p| {
                let mut p = p.clone();
                p.retain(|w, _| w.len() <= max_len);
                p
            })
            .collect();
        Series { alphabet: self.alphabet, max_len, channels }
    }

    /// Same coefficients with a larger nominal truncation (the caller
    /// vouches that the missing words really are zero).
    pub fn with_max_len(&self, max_len: usize) -> Self {
        if max_len <= self.max_len {
            return self.truncate(max_len);
        }
        Series { max_len, ..self.clone() }
    }

    pub(crate) fn check_same_shape(&self, other: &Self, what: &str) -> Result<()> {
        if self.ell() != other.ell() || self.m() != other.m() {
            return Err(Error::DimensionMismatch(format!(
                "{what}: (ell={}, m={}) vs (ell={}, m={})",
                self.ell(),
                self.m(),
                other.ell(),
                other.m()
            )));
        }
        Ok(())
    }

    fn zip_with(
        &self,
        other: &Self,
        what: &str,
        f: impl Fn(&WordPoly<T>, &WordPoly<T>) -> WordPoly<T>,
    ) -> Result<Self> {
        self.check_same_shape(other, what)?;
        let a = self.truncate(other.max_len);
        let b = other.truncate(self.max_len);
        let channels = a.channels.iter().zip(&b.channels).map(|(x, y)| f(x, y)).collect();
        Ok(Series { alphabet: self.alphabet, max_len: a.max_len, channels })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "series_add", |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "series_sub", |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Self {
        self.map_channels(|p| p.neg())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map_channels(|p| p.scale(s))
    }

    /// Channel-wise shuffle product.
    pub fn shuffle(&self, other: &Self) -> Result<Self> {
        let max_len = self.max_len.min(other.max_len);
        self.zip_with(other, "series_shuffle", |a, b| shuffle_poly(a, b, max_len))
    }

    /// Prepends `l` to every word, dropping words pushed past `max_len`.
    pub fn left_concat(&self, l: Letter) -> Self {
        self.map_channels(|p| left_concat_poly(l, p, self.max_len))
    }

    fn map_channels(&self, f: impl Fn(&WordPoly<T>) -> WordPoly<T>) -> Self {
        Series { alphabet: self.alphabet, max_len: self.max_len, channels: self.channels.iter().map(f).collect() }
    }

    /// Parses one `<channel> <word> <num>/<den>` per line. Blank lines,
    /// `#` comments and a lone `0` are ignored; repeated terms add up.
    pub fn parse_text(s: &str, ell: usize, alphabet: Alphabet, max_len: usize) -> Result<Self> {
        let mut out = Self::zero(ell, alphabet, max_len)?;
        for (lineno, line) in s.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() || line == "0" {
                continue;
            }
            let bad = |what: &str| Error::Parse(format!("line {}: {what} in `{line}`", lineno + 1));
            let mut parts = line.split_whitespace();
            let (Some(ch), Some(w), Some(c), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
                return Err(bad("expected `<channel> <word> <coeff>`"));
            };
            let ch: usize = ch.parse().map_err(|_| bad("bad channel"))?;
            let w = Word::parse(w, alphabet)?;
            let c = T::parse_text(c).ok_or_else(|| bad("bad coefficient"))?;
            out.add_term(ch, w, c)?;
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0\n".into();
        }
        let mut s = String::new();
        for (i, w, c) in self.terms() {
            s.push_str(&format!("{i} {w} {}\n", c.to_text()));
        }
        s
    }

    pub fn to_doc(&self) -> SeriesDoc {
        SeriesDoc {
            ell: self.ell(),
            m: self.m(),
            max_len: self.max_len,
            terms: self
                .terms()
                .into_iter()
                .map(|(channel, w, c)| TermDoc { channel, word: w.to_string(), coeff: c.to_text() })
                .collect(),
        }
    }

    pub fn from_doc(doc: &SeriesDoc) -> Result<Self> {
        let alphabet = Alphabet::new(doc.m)?;
        let mut out = Self::zero(doc.ell, alphabet, doc.max_len)?;
        for t in &doc.terms {
            let c = T::parse_text(&t.coeff).ok_or_else(|| Error::Parse(format!("bad coefficient `{}`", t.coeff)))?;
            out.add_term(t.channel, Word::parse(&t.word, alphabet)?, c)?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("series documents serialise")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: SeriesDoc = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_doc(&doc)
    }

    /// Converts coefficients to another scalar type.
    pub fn map_coeffs<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Series<U> {
        Series {
            alphabet: self.alphabet,
            max_len: self.max_len,
            channels: self.channels.iter().map(|p| p.iter().map(|(w, c)| (w.clone(), f(c))).collect()).collect(),
        }
    }
}

impl<T: Coeff> Display for Series<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Structured form of a series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesDoc {
    pub ell: usize,
    pub m: usize,
    pub max_len: usize,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub channel: usize,
    pub word: String,
    pub coeff: String,
}

/// `δ + c` for a square series `c` (`ℓ = m`); `δ` is the identity symbol
/// and is never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaSeries<T: Coeff> {
    base: Series<T>,
}

impl<T: Coeff> DeltaSeries<T> {
    pub fn new(base: Series<T>) -> Result<Self> {
        if base.ell() != base.m() {
            return Err(Error::DimensionMismatch(format!(
                "δ + c needs ell = m, got ell={} m={}",
                base.ell(),
                base.m()
            )));
        }
        Ok(DeltaSeries { base })
    }

    /// The group identity `δ`.
    pub fn identity(alphabet: Alphabet, max_len: usize) -> Self {
        DeltaSeries { base: Series::zero(alphabet.m(), alphabet, max_len).expect("m ≥ 1") }
    }

    pub fn base(&self) -> &Series<T> {
        &self.base
    }

    pub fn into_base(self) -> Series<T> {
        self.base
    }
}

impl<T: Coeff> Display for DeltaSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "delta +")?;
        f.write_str(&self.base.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn alpha(m: usize) -> Alphabet {
        Alphabet::new(m).unwrap()
    }

    fn series(ell: usize, m: usize, max_len: usize, text: &str) -> Series<Q> {
        Series::parse_text(text, ell, alpha(m), max_len).unwrap()
    }

    #[test]
    fn add_examples() {
        let a = series(1, 2, 3, "1 1 1");
        let b = series(1, 2, 3, "1 2 1");
        assert_eq!(a.add(&b).unwrap(), series(1, 2, 3, "1 1 1\n1 2 1"));
        let z = Series::zero(1, alpha(2), 3).unwrap();
        assert_eq!(a.add(&z).unwrap(), a);
        let c = series(1, 2, 3, "1 e 2");
        let d = series(1, 2, 3, "1 e -2");
        assert!(c.add(&d).unwrap().is_zero());
        assert!(a.add(&series(2, 2, 3, "")).is_err());
    }

    #[test]
    fn shuffle_examples() {
        let a = series(1, 2, 3, "1 1 1");
        let b = series(1, 2, 3, "1 2 1");
        assert_eq!(a.shuffle(&b).unwrap(), series(1, 2, 3, "1 1.2 1\n1 2.1 1"));
        let one = series(1, 2, 3, "1 e 1");
        let c = series(1, 2, 3, "1 0.1 3/2\n1 2 -1");
        assert_eq!(one.shuffle(&c).unwrap(), c);
        let x0 = series(1, 2, 3, "1 0 1");
        assert_eq!(x0.shuffle(&x0).unwrap(), series(1, 2, 3, "1 0.0 2"));
    }

    #[test]
    fn left_concat_examples() {
        let a = series(1, 2, 3, "1 1 1");
        assert_eq!(a.left_concat(Letter::X0), series(1, 2, 3, "1 0.1 1"));
        assert!(Series::<Q>::zero(1, alpha(2), 3).unwrap().left_concat(Letter::new(1)).is_zero());
        let b = series(1, 2, 3, "1 e 1\n1 2 1");
        assert_eq!(b.left_concat(Letter::X0), series(1, 2, 3, "1 0 1\n1 0.2 1"));
        // pushed past the truncation
        assert!(series(1, 2, 1, "1 1 1").left_concat(Letter::X0).is_zero());
    }

    #[test]
    fn truncation_is_monotone() {
        let a = series(1, 2, 4, "1 1 1\n1 0.2 -1\n1 e 1/3");
        let b = series(1, 2, 4, "1 2 1\n1 0 2");
        for l in 0..=4 {
            let full = a.shuffle(&b).unwrap().truncate(l);
            let direct = a.truncate(l).shuffle(&b.truncate(l)).unwrap();
            assert_eq!(full, direct, "L={l}");
        }
    }

    #[test]
    fn shuffle_laws_on_small_supports() {
        // every series with one or two words of length ≤ 2 from a fixed pool
        let m = alpha(2);
        let pool: Vec<Word> = m.words_up_to_len(2);
        let mut sample = Vec::new();
        for (i, u) in pool.iter().enumerate().step_by(2) {
            for v in pool.iter().skip(i + 1).step_by(3) {
                sample.push(
                    Series::<Q>::from_terms(
                        1,
                        m,
                        6,
                        [(1, u.clone(), Q::from_integer(1.into())), (1, v.clone(), Q::from_integer((-2).into()))],
                    )
                    .unwrap(),
                );
            }
        }
        for a in sample.iter().take(12) {
            for b in sample.iter().take(12) {
                assert_eq!(a.shuffle(b).unwrap(), b.shuffle(a).unwrap());
                for c in sample.iter().take(4) {
                    let l = a.shuffle(b).unwrap().shuffle(c).unwrap();
                    let r = a.shuffle(&b.shuffle(c).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn text_and_json_round_trip() {
        let a = series(2, 2, 3, "2 0.1 -3/2\n1 e 1\n1 2.2.2 4");
        assert_eq!(a.to_text(), "1 e 1/1\n1 2.2.2 4/1\n2 0.1 -3/2\n");
        assert_eq!(Series::parse_text(&a.to_text(), 2, alpha(2), 3).unwrap(), a);
        assert_eq!(Series::<Q>::from_json(&a.to_json()).unwrap(), a);
        assert_eq!(Series::<Q>::zero(1, alpha(1), 2).unwrap().to_text(), "0\n");
    }

    #[test]
    fn parse_errors() {
        let m = alpha(2);
        assert!(!Series::<Q>::parse_text("1 0.3 1", 1, m, 3).unwrap_err().is_parse());
        assert!(Series::<Q>::parse_text("1 0.1", 1, m, 3).unwrap_err().is_parse());
        assert!(Series::<Q>::parse_text("x 0 1", 1, m, 3).unwrap_err().is_parse());
        assert!(Series::<Q>::parse_text("1 0 1/0", 1, m, 3).unwrap_err().is_parse());
        assert!(matches!(Series::<Q>::parse_text("3 0 1", 2, m, 3), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn delta_series_needs_square_shape() {
        assert!(DeltaSeries::new(series(1, 2, 2, "1 1 1")).is_err());
        let d = DeltaSeries::new(series(2, 2, 2, "1 1 1")).unwrap();
        assert_eq!(d.base().ell(), 2);
        assert!(DeltaSeries::<Q>::identity(alpha(2), 3).base().is_zero());
    }
}
