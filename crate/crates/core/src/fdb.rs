//! Faà di Bruno type Hopf algebra `H` on coordinate maps `a^i_η`, built from
//! the deshuffle coproduct and the first-letter recursion for `Δ̃`, plus the
//! isomorphism `φ` with the rct side.

use std::fmt::{self, Display};
use std::sync::{Arc, Mutex};

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::lincomb::{Generator, Monomial, Poly, Tensor};
use crate::rct::Rct;
use crate::rct_hopf::memo_enabled_from_env;
use crate::scalar::Coeff;
use crate::words::{Alphabet, Letter, Word};

/// Coordinate map `a^i_η : c ↦ (c_i, η)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordMap {
    channel: u8,
    word: Word,
}

impl CoordMap {
    pub fn new(channel: usize, word: Word, alphabet: Alphabet) -> Result<Self> {
        let channel = alphabet.check_label(channel)?;
        if !alphabet.contains_word(&word) {
            let index = word.letters().iter().map(|l| l.index()).max().unwrap_or(0);
            return Err(Error::LetterOutOfRange { index, m: alphabet.m() });
        }
        Ok(CoordMap { channel, word })
    }

    pub(crate) fn from_parts(channel: u8, word: Word) -> Self {
        CoordMap { channel, word }
    }

    /// Parses `a[<i>;<word>]`.
    pub fn parse(s: &str, alphabet: Alphabet) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix("a[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected `a[<i>;<word>]`, got `{s}`")))?;
        let (ch, w) =
            inner.split_once(';').ok_or_else(|| Error::Parse(format!("expected `a[<i>;<word>]`, got `{s}`")))?;
        let ch: usize = ch.trim().parse().map_err(|_| Error::Parse(format!("bad channel `{ch}`")))?;
        CoordMap::new(ch, Word::parse(w, alphabet)?, alphabet)
    }

    pub fn channel(&self) -> u8 {
        self.channel
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    /// `θ_k`: prepend `x_k` to the word.
    pub fn theta(&self, k: Letter) -> CoordMap {
        CoordMap { channel: self.channel, word: self.word.with_prefix(k) }
    }
}

impl Display for CoordMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a[{};{}]", self.channel, self.word)
    }
}

impl Generator for CoordMap {
    fn degree(&self) -> usize {
        self.word.degree() + 1
    }
}

pub type HMonomial = Monomial<CoordMap>;

pub fn phi(c: &Rct) -> CoordMap {
    CoordMap::from_parts(c.root(), c.word().clone())
}

pub fn phi_inv(a: &CoordMap) -> Rct {
    Rct::from_parts(a.channel, a.word.clone())
}

pub fn phi_poly<T: Coeff>(p: &Poly<Rct, T>) -> Poly<CoordMap, T> {
    p.map_keys(|m| m.map(phi))
}

pub fn phi_inv_poly<T: Coeff>(p: &Poly<CoordMap, T>) -> Poly<Rct, T> {
    p.map_keys(|m| m.map(phi_inv))
}

pub fn phi_tensor<T: Coeff>(t: &Tensor<Rct, T>) -> Tensor<CoordMap, T> {
    t.map_keys(|[a, b]| [a.map(phi), b.map(phi)])
}

/// `Δ^j_⧢ a^i_η = Σ a^i_{η|S} ⊗ a^j_{η|S^c}` over all position subsets `S`.
pub fn shuffle_coproduct<T: Coeff>(j: u8, a: &CoordMap) -> Tensor<CoordMap, T> {
    let letters = a.word.letters();
    let n = letters.len();
    let mut out = Tensor::zero();
    for mask in 0u64..(1u64 << n) {
        let pick =
            |keep: bool| Word::from_letters((0..n).filter(|&p| ((mask >> p) & 1 == 1) == keep).map(|p| letters[p]));
        let left = CoordMap::from_parts(a.channel, pick(true));
        let right = CoordMap::from_parts(j, pick(false));
        out.add_term([Monomial::single(left), Monomial::single(right)], T::one());
    }
    out
}

type Memo<K, V> = Mutex<FxHashMap<K, Arc<V>>>;

/// Operations of `H` for a fixed alphabet, with memoised `Δ̃` and antipodes.
pub struct FdbHopf<T: Coeff> {
    alphabet: Alphabet,
    memo: bool,
    tilde: Memo<CoordMap, Tensor<CoordMap, T>>,
    left: Memo<CoordMap, Poly<CoordMap, T>>,
    right: Memo<CoordMap, Poly<CoordMap, T>>,
}

impl<T: Coeff> FdbHopf<T> {
    pub fn new(alphabet: Alphabet) -> Self {
        Self::with_memo(alphabet, memo_enabled_from_env())
    }

    pub fn with_memo(alphabet: Alphabet, memo: bool) -> Self {
        FdbHopf { alphabet, memo, tilde: Mutex::default(), left: Mutex::default(), right: Mutex::default() }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn lookup<V>(&self, memo: &Memo<CoordMap, V>, a: &CoordMap) -> Option<Arc<V>> {
        if self.memo {
            memo.lock().unwrap().get(a).cloned()
        } else {
            None
        }
    }

    fn store<V>(&self, memo: &Memo<CoordMap, V>, a: &CoordMap, v: V) -> Arc<V> {
        let v = Arc::new(v);
        if self.memo {
            memo.lock().unwrap().entry(a.clone()).or_insert_with(|| v.clone());
        }
        v
    }

    /// `Δ̃ a^i_η` by recursion on the first letter of `η`.
    pub fn tilde_delta(&self, a: &CoordMap) -> Arc<Tensor<CoordMap, T>> {
        if let Some(t) = self.lookup(&self.tilde, a) {
            return t;
        }
        let mut out = Tensor::zero();
        match a.word.first() {
            None => out.add_term([Monomial::single(a.clone()), Monomial::one()], T::one()),
            Some(first) => {
                let rest = CoordMap::from_parts(a.channel, a.word.tail());
                let inner = self.tilde_delta(&rest);
                for ([l, r], c) in inner.iter() {
                    out.add_term([theta_mono(l, first), r.clone()], c.clone());
                }
                if first == Letter::X0 {
                    for j in self.alphabet.labels() {
                        for ([l, r], c) in shuffle_coproduct::<T>(j, &rest).iter() {
                            let l = &l.factors()[0];
                            for ([l2, m2], c2) in self.tilde_delta(l).iter() {
                                out.add_term([theta_mono(l2, Letter::new(j)), m2.mul(r)], c.clone() * c2.clone());
                            }
                        }
                    }
                }
            }
        }
        self.store(&self.tilde, a, out)
    }

    /// `Δ a = Δ̃ a + 1 ⊗ a`.
    pub fn coproduct(&self, a: &CoordMap) -> Tensor<CoordMap, T> {
        let mut out = (*self.tilde_delta(a)).clone();
        out.add_term([Monomial::one(), Monomial::single(a.clone())], T::one());
        out
    }

    /// `Δ′ a = Δ̃ a − a ⊗ 1`.
    pub fn reduced_coproduct(&self, a: &CoordMap) -> Tensor<CoordMap, T> {
        let mut out = (*self.tilde_delta(a)).clone();
        out.add_term([Monomial::single(a.clone()), Monomial::one()], -T::one());
        out
    }

    pub fn coproduct_monomial(&self, mono: &HMonomial) -> Tensor<CoordMap, T> {
        let mut out = Tensor::from_term([Monomial::one(), Monomial::one()], T::one());
        for g in mono.factors() {
            out = out.mul(&self.coproduct(g));
        }
        out
    }

    pub fn coproduct_poly(&self, p: &Poly<CoordMap, T>) -> Tensor<CoordMap, T> {
        let mut out = Tensor::zero();
        for (mono, c) in p.iter() {
            out.add_assign_scaled(&self.coproduct_monomial(mono), c);
        }
        out
    }

    /// `S a = −a − m(S ⊗ id)Δ′ a`.
    pub fn antipode_left(&self, a: &CoordMap) -> Arc<Poly<CoordMap, T>> {
        if let Some(s) = self.lookup(&self.left, a) {
            return s;
        }
        let mut s = Poly::from_term(Monomial::single(a.clone()), -T::one());
        for ([l, r], c) in self.reduced_coproduct(a).iter() {
            let sl = self.antipode_monomial(l, Side::Left);
            for (mono, c2) in sl.iter() {
                s.add_term(mono.mul(r), -(c.clone() * c2.clone()));
            }
        }
        self.store(&self.left, a, s)
    }

    /// `S a = −a − m(id ⊗ S)Δ′ a`.
    pub fn antipode_right(&self, a: &CoordMap) -> Arc<Poly<CoordMap, T>> {
        if let Some(s) = self.lookup(&self.right, a) {
            return s;
        }
        let mut s = Poly::from_term(Monomial::single(a.clone()), -T::one());
        for ([l, r], c) in self.reduced_coproduct(a).iter() {
            let sr = self.antipode_monomial(r, Side::Right);
            for (mono, c2) in sr.iter() {
                s.add_term(mono.mul(l), -(c.clone() * c2.clone()));
            }
        }
        self.store(&self.right, a, s)
    }

    pub fn antipode(&self, a: &CoordMap, side: Side) -> Arc<Poly<CoordMap, T>> {
        match side {
            Side::Left => self.antipode_left(a),
            Side::Right => self.antipode_right(a),
        }
    }

    pub fn antipode_monomial(&self, mono: &HMonomial, side: Side) -> Poly<CoordMap, T> {
        let mut out = Poly::one();
        for g in mono.factors() {
            out = out.mul(&self.antipode(g, side));
        }
        out
    }

    pub fn antipode_poly(&self, p: &Poly<CoordMap, T>, side: Side) -> Poly<CoordMap, T> {
        let mut out = Poly::zero();
        for (mono, c) in p.iter() {
            out.add_assign_scaled(&self.antipode_monomial(mono, side), c);
        }
        out
    }
}

/// Which recursion the antipode uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

fn theta_mono(m: &HMonomial, k: Letter) -> HMonomial {
    debug_assert_eq!(m.len(), 1);
    Monomial::single(m.factors()[0].theta(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rct::rcts_up_to_degree;
    use crate::rct_hopf::RctHopf;
    use num_rational::BigRational;

    type Q = BigRational;

    fn alpha(m: usize) -> Alphabet {
        Alphabet::new(m).unwrap()
    }

    fn a(s: &str) -> CoordMap {
        CoordMap::parse(s, alpha(9)).unwrap()
    }

    fn mono(f: &[&str]) -> HMonomial {
        Monomial::from_factors(f.iter().map(|x| a(x)).collect())
    }

    fn tensor(terms: &[(i64, &[&str], &[&str])]) -> Tensor<CoordMap, Q> {
        terms.iter().map(|(c, l, r)| ([mono(l), mono(r)], Q::from_integer((*c).into()))).collect()
    }

    fn poly(terms: &[(i64, &[&str])]) -> Poly<CoordMap, Q> {
        terms.iter().map(|(c, f)| (mono(f), Q::from_integer((*c).into()))).collect()
    }

    #[test]
    fn deshuffle_examples() {
        assert_eq!(shuffle_coproduct::<Q>(2, &a("a[1;e]")), tensor(&[(1, &["a[1;e]"], &["a[2;e]"])]));
        assert_eq!(
            shuffle_coproduct::<Q>(2, &a("a[1;1]")),
            tensor(&[(1, &["a[1;1]"], &["a[2;e]"]), (1, &["a[1;e]"], &["a[2;1]"])])
        );
        assert_eq!(
            shuffle_coproduct::<Q>(3, &a("a[1;2.1]")),
            tensor(&[
                (1, &["a[1;2.1]"], &["a[3;e]"]),
                (1, &["a[1;2]"], &["a[3;1]"]),
                (1, &["a[1;1]"], &["a[3;2]"]),
                (1, &["a[1;e]"], &["a[3;2.1]"]),
            ])
        );
        // repeated letters: coefficients are binomial
        assert_eq!(
            shuffle_coproduct::<Q>(1, &a("a[1;1.1]")).coeff(&[mono(&["a[1;1]"]), mono(&["a[1;1]"])]),
            Q::from_integer(2.into())
        );
    }

    #[test]
    fn tilde_delta_examples() {
        let h = FdbHopf::<Q>::with_memo(alpha(1), true);
        assert_eq!(*h.tilde_delta(&a("a[1;e]")), tensor(&[(1, &["a[1;e]"], &[])]));
        assert_eq!(*h.tilde_delta(&a("a[1;0]")), tensor(&[(1, &["a[1;0]"], &[]), (1, &["a[1;1]"], &["a[1;e]"])]));
        // first-letter x_1 just shifts the left legs
        let t = h.tilde_delta(&a("a[1;0.1]"));
        let shifted: Tensor<CoordMap, Q> = t.map_keys(|[l, r]| [theta_mono(l, Letter::new(1)), r.clone()]);
        assert_eq!(*h.tilde_delta(&a("a[1;1.0.1]")), shifted);
    }

    #[test]
    fn full_coproduct_examples() {
        let h = FdbHopf::<Q>::with_memo(alpha(2), true);
        assert_eq!(h.coproduct(&a("a[2;e]")), tensor(&[(1, &["a[2;e]"], &[]), (1, &[], &["a[2;e]"])]));
        assert!(h.reduced_coproduct(&a("a[1;2.1]")).is_zero());
    }

    #[test]
    fn antipode_closed_forms() {
        let h = FdbHopf::<Q>::with_memo(alpha(2), true);
        for side in [Side::Left, Side::Right] {
            assert_eq!(*h.antipode(&a("a[1;2]"), side), poly(&[(-1, &["a[1;2]"])]));
            assert_eq!(
                *h.antipode(&a("a[2;0.1]"), side),
                poly(&[
                    (-1, &["a[2;0.1]"]),
                    (1, &["a[2;1]", "a[1;1]"]),
                    (1, &["a[2;2]", "a[2;1]"]),
                    (1, &["a[2;1.1]", "a[1;e]"]),
                    (1, &["a[2;2.1]", "a[2;e]"]),
                ])
            );
            assert_eq!(
                *h.antipode(&a("a[1;2.0]"), side),
                poly(&[(-1, &["a[1;2.0]"]), (1, &["a[1;2.1]", "a[1;e]"]), (1, &["a[1;2.2]", "a[2;e]"])])
            );
        }
    }

    #[test]
    fn phi_round_trips_and_keeps_degree() {
        for c in rcts_up_to_degree(alpha(2), 6) {
            let x = phi(&c);
            assert_eq!(phi_inv(&x), c);
            assert_eq!(x.degree(), c.degree());
        }
    }

    #[test]
    fn isomorphism_on_small_generators() {
        for m in [1, 2] {
            let r = RctHopf::<Q>::with_memo(alpha(m), true);
            let h = FdbHopf::<Q>::with_memo(alpha(m), true);
            for c in rcts_up_to_degree(alpha(m), 7) {
                assert_eq!(phi_tensor(&r.coproduct(&c)), h.coproduct(&phi(&c)), "{c}");
                let s = phi_poly(&r.antipode_left(&c));
                assert_eq!(s, *h.antipode_left(&phi(&c)), "{c}");
                assert_eq!(s, *h.antipode_right(&phi(&c)), "{c}");
            }
        }
    }

    #[test]
    fn parse_errors() {
        let m = alpha(2);
        assert!(CoordMap::parse("a[1;0.1]", m).is_ok());
        assert!(CoordMap::parse("a[3;0]", m).is_err());
        assert!(CoordMap::parse("b[1;0]", m).unwrap_err().is_parse());
        assert!(CoordMap::parse("a[1,0]", m).unwrap_err().is_parse());
    }
}
