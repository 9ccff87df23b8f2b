//! Polynomial Hopf algebra on rooted circle trees: coproduct by admissible
//! extraction, the two recursive antipodes, the forest formula and term
//! statistics.
//!
//! Extraction labels are summed over `1..=m` eagerly, so every tensor and
//! polynomial here is a concrete finite sum.

use std::fmt::{self, Display};
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::lincomb::{Monomial, Poly, Tensor};
use crate::rct::{AdmissibleSubset, Rct};
use crate::scalar::Coeff;
use crate::words::{Alphabet, Word};

pub type RctMonomial = Monomial<Rct>;

/// Environment variable switching antipode memoisation off when set to `off`.
pub const MEMO_ENV: &str = "CIRCLETREE_MEMO";

pub fn memo_enabled_from_env() -> bool {
    !matches!(std::env::var(MEMO_ENV).as_deref(), Ok("off") | Ok("OFF") | Ok("0"))
}

/// Calls `f` on every tuple in `{1..=m}^k`, first entry fastest.
pub(crate) fn for_each_labelling(k: usize, m: u8, mut f: impl FnMut(&[u8])) {
    let mut labels = vec![1u8; k];
    loop {
        f(&labels);
        let mut i = 0;
        loop {
            if i == k {
                return;
            }
            if labels[i] < m {
                labels[i] += 1;
                break;
            }
            labels[i] = 1;
            i += 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AntipodeMethod {
    Left,
    Right,
    Forest,
}

impl AntipodeMethod {
    pub const ALL: [AntipodeMethod; 3] = [AntipodeMethod::Left, AntipodeMethod::Right, AntipodeMethod::Forest];
}

impl FromStr for AntipodeMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" | "recursive_left" => Ok(AntipodeMethod::Left),
            "right" | "recursive_right" => Ok(AntipodeMethod::Right),
            "forest" => Ok(AntipodeMethod::Forest),
            _ => Err(Error::Parse(format!("unknown antipode method `{s}`"))),
        }
    }
}

impl Display for AntipodeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AntipodeMethod::Left => "left",
            AntipodeMethod::Right => "right",
            AntipodeMethod::Forest => "forest",
        })
    }
}

/// One row of antipode term statistics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatsRecord {
    pub degree: usize,
    pub method: AntipodeMethod,
    /// Signed monomials produced before anything is combined.
    pub generated: u128,
    /// Support size of the final polynomial.
    pub distinct: usize,
    /// `generated − Σ |coefficient|`.
    pub cancelled_mass: u128,
}

impl StatsRecord {
    pub const CSV_HEADER: &'static str = "degree,method,generated,distinct,cancelled_mass";

    pub fn to_csv(&self) -> String {
        format!("{},{},{},{},{}", self.degree, self.method, self.generated, self.distinct, self.cancelled_mass)
    }
}

type Memo<T> = Mutex<FxHashMap<Rct, Arc<Poly<Rct, T>>>>;

/// Hopf algebra operations for a fixed alphabet, with optional antipode
/// memoisation shared by all calls on the same value.
pub struct RctHopf<T: Coeff> {
    alphabet: Alphabet,
    memo: bool,
    left_memo: Memo<T>,
    right_memo: Memo<T>,
}

impl<T: Coeff> RctHopf<T> {
    /// Memoisation follows [`MEMO_ENV`].
    pub fn new(alphabet: Alphabet) -> Self {
        Self::with_memo(alphabet, memo_enabled_from_env())
    }

    pub fn with_memo(alphabet: Alphabet, memo: bool) -> Self {
        RctHopf { alphabet, memo, left_memo: Mutex::default(), right_memo: Mutex::default() }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn memo_enabled(&self) -> bool {
        self.memo
    }

    fn m(&self) -> u8 {
        self.alphabet.m() as u8
    }

    /// Calls `f(quotient, restrictions)` once per proper admissible
    /// extraction and labelling.
    pub fn for_each_proper_term(&self, c: &Rct, mut f: impl FnMut(Rct, RctMonomial)) {
        for e in c.admissible_extractions(false) {
            let subs = e.subsets();
            for_each_labelling(subs.len(), self.m(), |labels| {
                let q = c.quotient_unchecked(subs, labels);
                let r = subs.iter().zip(labels).map(|(s, &l)| c.restrict_unchecked(s, l)).collect();
                f(q, Monomial::from_factors(r));
            });
        }
    }

    pub fn coproduct(&self, c: &Rct) -> Tensor<Rct, T> {
        let mut out = self.reduced_coproduct(c);
        out.add_term([Monomial::single(c.clone()), Monomial::one()], T::one());
        out.add_term([Monomial::one(), Monomial::single(c.clone())], T::one());
        out
    }

    /// Coproduct minus `c ⊗ 1` and `1 ⊗ c`.
    pub fn reduced_coproduct(&self, c: &Rct) -> Tensor<Rct, T> {
        let mut out = Tensor::zero();
        self.for_each_proper_term(c, |q, r| out.add_term([Monomial::single(q), r], T::one()));
        out
    }

    /// Coproduct extended multiplicatively to monomials.
    pub fn coproduct_monomial(&self, mono: &RctMonomial) -> Tensor<Rct, T> {
        let mut out = Tensor::from_term([Monomial::one(), Monomial::one()], T::one());
        for g in mono.factors() {
            out = out.mul(&self.coproduct(g));
        }
        out
    }

    pub fn coproduct_poly(&self, p: &Poly<Rct, T>) -> Tensor<Rct, T> {
        let mut out = Tensor::zero();
        for (mono, c) in p.iter() {
            out.add_assign_scaled(&self.coproduct_monomial(mono), c);
        }
        out
    }

    /// Single-subset part of the coproduct.
    pub fn linearized_coproduct(&self, c: &Rct) -> Tensor<Rct, T> {
        let mut out = Tensor::zero();
        for j in c.admissible_subsets() {
            for n in self.alphabet.labels() {
                let q = c.quotient_unchecked(&[j], &[n]);
                let r = c.restrict_unchecked(&j, n);
                out.add_term([Monomial::single(q), Monomial::single(r)], T::one());
            }
        }
        out
    }

    /// For `c = (i; x_0 η)`: the sum over admissible subsets `J` containing
    /// the first vertex of `(c minus J) ⊗ c|_J` with the extracted root
    /// labelled `n`. Zero when the first vertex is black or absent.
    pub fn deshuffle_extraction(&self, c: &Rct, n: u8) -> Tensor<Rct, T> {
        let mut out = Tensor::zero();
        if c.word().first() != Some(crate::words::Letter::X0) {
            return out;
        }
        for j in c.admissible_subsets().into_iter().filter(|j| j.min_pos() == 1) {
            let kept = Word::from_letters(
                c.word().letters().iter().enumerate().filter(|(p, _)| j.mask() & (1 << p) == 0).map(|(_, &l)| l),
            );
            let left = Rct::from_parts(c.root(), kept);
            out.add_term([Monomial::single(left), Monomial::single(c.restrict_unchecked(&j, n))], T::one());
        }
        out
    }

    pub fn antipode(&self, c: &Rct, method: AntipodeMethod) -> Arc<Poly<Rct, T>> {
        match method {
            AntipodeMethod::Left => self.antipode_left(c),
            AntipodeMethod::Right => self.antipode_right(c),
            AntipodeMethod::Forest => Arc::new(self.antipode_forest(c)),
        }
    }

    fn cached(&self, memo: &Memo<T>, c: &Rct) -> Option<Arc<Poly<Rct, T>>> {
        if !self.memo {
            return None;
        }
        memo.lock().unwrap().get(c).cloned()
    }

    fn store(&self, memo: &Memo<T>, c: &Rct, s: Poly<Rct, T>) -> Arc<Poly<Rct, T>> {
        let s = Arc::new(s);
        if self.memo {
            memo.lock().unwrap().entry(c.clone()).or_insert_with(|| s.clone());
        }
        s
    }

    /// `S(c) = −c − Σ S(c′) c″` over the reduced coproduct.
    pub fn antipode_left(&self, c: &Rct) -> Arc<Poly<Rct, T>> {
        if let Some(s) = self.cached(&self.left_memo, c) {
            return s;
        }
        let mut s = Poly::from_term(Monomial::single(c.clone()), -T::one());
        self.for_each_proper_term(c, |q, r| {
            let sq = self.antipode_left(&q);
            for (mono, coeff) in sq.iter() {
                s.add_term(mono.mul(&r), -coeff.clone());
            }
        });
        self.store(&self.left_memo, c, s)
    }

    /// `S(c) = −c − Σ c′ S(c″)` over the reduced coproduct.
    pub fn antipode_right(&self, c: &Rct) -> Arc<Poly<Rct, T>> {
        if let Some(s) = self.cached(&self.right_memo, c) {
            return s;
        }
        let mut s = Poly::from_term(Monomial::single(c.clone()), -T::one());
        self.for_each_proper_term(c, |q, r| {
            let mut prod = Poly::from_term(Monomial::single(q), -T::one());
            for g in r.factors() {
                prod = prod.mul(&self.antipode_right(g));
            }
            s.add_assign_scaled(&prod, &T::one());
        });
        self.store(&self.right_memo, c, s)
    }

    /// Visits every signed term of the forest formula: one per general
    /// extraction and labelling. The flag is `true` for a negative term.
    pub fn for_each_forest_term(&self, c: &Rct, mut f: impl FnMut(RctMonomial, bool)) {
        let m = self.m();
        c.for_each_extraction(|subs| {
            let k = subs.len();
            let negative = k % 2 == 0;
            if k == 0 {
                f(Monomial::single(c.clone()), negative);
                return;
            }
            // direct parent = smallest strict superset
            let parent: Vec<Option<usize>> = subs
                .iter()
                .map(|s| (0..k).filter(|&t| s.is_strict_subset_of(&subs[t])).min_by_key(|&t| subs[t].len()))
                .collect();
            let top: Vec<usize> = (0..k).filter(|&t| parent[t].is_none()).collect();
            let top_subs: Vec<AdmissibleSubset> = top.iter().map(|&t| subs[t]).collect();
            let children: Vec<(Vec<usize>, Vec<AdmissibleSubset>)> = (0..k)
                .map(|s| {
                    let ch: Vec<usize> = (0..k).filter(|&t| parent[t] == Some(s)).collect();
                    let rel = ch.iter().map(|&t| subs[t].relative_to(&subs[s])).collect();
                    (ch, rel)
                })
                .collect();
            let mut buf = Vec::new();
            for_each_labelling(k, m, |labels| {
                buf.clear();
                buf.extend(top.iter().map(|&t| labels[t]));
                let mut factors = Vec::with_capacity(k + 1);
                factors.push(c.quotient_unchecked(&top_subs, &buf));
                for s in 0..k {
                    let node = c.restrict_unchecked(&subs[s], labels[s]);
                    let (ch, rel) = &children[s];
                    buf.clear();
                    buf.extend(ch.iter().map(|&t| labels[t]));
                    factors.push(node.quotient_unchecked(rel, &buf));
                }
                f(Monomial::from_factors(factors), negative);
            });
        });
    }

    /// Antipode as a signed sum over general extractions.
    pub fn antipode_forest(&self, c: &Rct) -> Poly<Rct, T> {
        let mut s = Poly::zero();
        self.for_each_forest_term(c, |mono, neg| s.add_term(mono, if neg { -T::one() } else { T::one() }));
        s
    }

    /// Per monomial, the number of positive and negative forest terms.
    pub fn forest_sign_table(&self, c: &Rct) -> FxHashMap<RctMonomial, (u64, u64)> {
        let mut table: FxHashMap<RctMonomial, (u64, u64)> = FxHashMap::default();
        self.for_each_forest_term(c, |mono, neg| {
            let e = table.entry(mono).or_default();
            if neg {
                e.1 += 1;
            } else {
                e.0 += 1;
            }
        });
        table
    }

    /// Antipode on a single monomial (an algebra morphism, the algebra
    /// being commutative).
    pub fn antipode_monomial(&self, mono: &RctMonomial, method: AntipodeMethod) -> Poly<Rct, T> {
        let mut out = Poly::one();
        for g in mono.factors() {
            out = out.mul(&self.antipode(g, method));
        }
        out
    }

    pub fn antipode_poly(&self, p: &Poly<Rct, T>, method: AntipodeMethod) -> Poly<Rct, T> {
        let mut out = Poly::zero();
        for (mono, c) in p.iter() {
            out.add_assign_scaled(&self.antipode_monomial(mono, method), c);
        }
        out
    }

    /// Number of monomials each method emits before combining terms.
    pub fn generated_terms(&self, c: &Rct, method: AntipodeMethod) -> u128 {
        let mut memo = FxHashMap::default();
        match method {
            AntipodeMethod::Left => self.generated_left(c, &mut memo),
            AntipodeMethod::Right => self.generated_right(c, &mut memo),
            AntipodeMethod::Forest => {
                let mut n = 0u128;
                let m = self.m() as u128;
                c.for_each_extraction(|subs| n += m.pow(subs.len() as u32));
                n
            }
        }
    }

    fn generated_left(&self, c: &Rct, memo: &mut FxHashMap<Rct, u128>) -> u128 {
        if let Some(&n) = memo.get(c) {
            return n;
        }
        let mut quotients = Vec::new();
        self.for_each_proper_term(c, |q, _| quotients.push(q));
        let n = 1 + quotients.iter().map(|q| self.generated_left(q, memo)).sum::<u128>();
        memo.insert(c.clone(), n);
        n
    }

    fn generated_right(&self, c: &Rct, memo: &mut FxHashMap<Rct, u128>) -> u128 {
        if let Some(&n) = memo.get(c) {
            return n;
        }
        let mut legs = Vec::new();
        self.for_each_proper_term(c, |_, r| legs.push(r));
        let n = 1 + legs
            .iter()
            .map(|r| r.factors().iter().map(|g| self.generated_right(g, memo)).product::<u128>())
            .sum::<u128>();
        memo.insert(c.clone(), n);
        n
    }

    pub fn antipode_stats(&self, c: &Rct, method: AntipodeMethod) -> StatsRecord {
        let s = self.antipode(c, method);
        let generated = self.generated_terms(c, method);
        let mass = s.mass().round() as u128;
        StatsRecord {
            degree: c.degree(),
            method,
            generated,
            distinct: s.len(),
            cancelled_mass: generated.saturating_sub(mass),
        }
    }
}
