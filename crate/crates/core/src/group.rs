//! Composition products of series, the output feedback group product and
//! its inverse, characters and infinitesimal characters on `H`.

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::fdb::{CoordMap, FdbHopf, HMonomial, Side};
use crate::lincomb::Poly;
use crate::scalar::Coeff;
use crate::series::{DeltaSeries, Series};
use crate::words::{shuffle_poly, Letter, Word, WordPoly};

fn check_right_operand<T: Coeff>(c: &Series<T>, d: &Series<T>, what: &str) -> Result<()> {
    if c.m() != d.m() || d.ell() != d.m() {
        return Err(Error::DimensionMismatch(format!(
            "{what}: right operand must have ell = m = {} (got ell={}, m={})",
            c.m(),
            d.ell(),
            d.m()
        )));
    }
    Ok(())
}

/// Word-by-word image of `η` under a substitution homomorphism built from
/// `step(i, e)`, applied right to left starting from `∅`; cached by suffix.
struct WordImage<T: Coeff, F: Fn(usize, &WordPoly<T>) -> WordPoly<T>> {
    step: F,
    cache: FxHashMap<Word, WordPoly<T>>,
}

impl<T: Coeff, F: Fn(usize, &WordPoly<T>) -> WordPoly<T>> WordImage<T, F> {
    fn new(step: F) -> Self {
        WordImage { step, cache: FxHashMap::default() }
    }

    fn image(&mut self, w: &Word) -> WordPoly<T> {
        if let Some(p) = self.cache.get(w) {
            return p.clone();
        }
        let p = match w.first() {
            None => WordPoly::from_term(Word::empty(), T::one()),
            Some(l) => {
                let inner = self.image(&w.tail());
                (self.step)(l.index(), &inner)
            }
        };
        self.cache.insert(w.clone(), p.clone());
        p
    }
}

fn apply_homomorphism<T: Coeff>(
    c: &Series<T>,
    max_len: usize,
    step: impl Fn(usize, &WordPoly<T>) -> WordPoly<T>,
) -> Result<Series<T>> {
    let mut img = WordImage::new(step);
    let mut channels = Vec::with_capacity(c.ell());
    for p in c.channels() {
        let mut out = WordPoly::zero();
        for (w, coeff) in p.iter() {
            if w.len() <= max_len {
                out.add_assign_scaled(&img.image(w), coeff);
            }
        }
        channels.push(out);
    }
    Series::from_channels(c.alphabet(), max_len, channels)
}

/// `x_0 (d_i ⧢ e)` with `d_0` fixed by the caller.
fn x0_shuffle<T: Coeff>(d_i: &WordPoly<T>, e: &WordPoly<T>, max_len: usize) -> WordPoly<T> {
    let s = shuffle_poly(d_i, e, max_len.saturating_sub(1));
    crate::words::left_concat_poly(Letter::X0, &s, max_len)
}

/// `c ∘ d = Σ (c,η) ψ_d(η)(1)` with `ψ_d(x_i)(e) = x_0(d_i ⧢ e)`, `d_0 = 1`.
pub fn compose<T: Coeff>(c: &Series<T>, d: &Series<T>) -> Result<Series<T>> {
    check_right_operand(c, d, "compose")?;
    let max_len = c.max_len().min(d.max_len());
    let one = WordPoly::from_term(Word::empty(), T::one());
    apply_homomorphism(c, max_len, |i, e| {
        let d_i = if i == 0 { &one } else { d.channel(i) };
        x0_shuffle(d_i, e, max_len)
    })
}

/// `c ∘̃ d` with `φ_d(x_i)(e) = x_i e + x_0(d_i ⧢ e)`, `d_0 = 0`.
pub fn mod_compose<T: Coeff>(c: &Series<T>, d: &Series<T>) -> Result<Series<T>> {
    check_right_operand(c, d, "mod_compose")?;
    let max_len = c.max_len().min(d.max_len());
    apply_homomorphism(c, max_len, |i, e| {
        let mut out = crate::words::left_concat_poly(Letter::new(i as u8), e, max_len);
        if i != 0 {
            out.add_assign_scaled(&x0_shuffle(d.channel(i), e, max_len), &T::one());
        }
        out
    })
}

fn check_square<T: Coeff>(c: &Series<T>, what: &str) -> Result<()> {
    if c.ell() != c.m() {
        return Err(Error::DimensionMismatch(format!("{what}: needs ell = m, got ell={} m={}", c.ell(), c.m())));
    }
    Ok(())
}

/// `c ∘̂ d = d + c ∘ d`, the series of `(I + F_c) ∘ F_d`.
pub fn hat_compose<T: Coeff>(c: &Series<T>, d: &Series<T>) -> Result<Series<T>> {
    check_square(c, "hat_compose")?;
    d.add(&compose(c, d)?)
}

/// `c ⊚ d = d + c ∘̃ d`, the series part of `c_δ ∘ d_δ`.
pub fn group_product<T: Coeff>(c: &Series<T>, d: &Series<T>) -> Result<Series<T>> {
    check_square(c, "group_product")?;
    d.add(&mod_compose(c, d)?)
}

/// Product in the group `δ + ℝ^m⟨⟨X⟩⟩`.
pub fn delta_product<T: Coeff>(c: &DeltaSeries<T>, d: &DeltaSeries<T>) -> Result<DeltaSeries<T>> {
    DeltaSeries::new(group_product(c.base(), d.base())?)
}

/// Character `Φ_c : a^i_η ↦ (c_i, η)`, extended multiplicatively.
#[derive(Clone, Debug)]
pub struct Character<'a, T: Coeff> {
    series: &'a Series<T>,
}

impl<'a, T: Coeff> Character<'a, T> {
    pub fn new(series: &'a Series<T>) -> Self {
        Character { series }
    }

    pub fn series(&self) -> &Series<T> {
        self.series
    }

    pub fn eval_generator(&self, a: &CoordMap) -> Result<T> {
        let s = self.series;
        if a.word().len() > s.max_len() {
            return Err(Error::InsufficientData { len: a.word().len(), max_len: s.max_len() });
        }
        let ch = a.channel() as usize;
        if ch > s.ell() {
            return Err(Error::DimensionMismatch(format!("channel {ch} outside 1..={}", s.ell())));
        }
        Ok(s.coeff(ch, a.word()))
    }

    pub fn eval_monomial(&self, m: &HMonomial) -> Result<T> {
        let mut out = T::one();
        for g in m.factors() {
            out = out * self.eval_generator(g)?;
        }
        Ok(out)
    }

    pub fn eval(&self, p: &Poly<CoordMap, T>) -> Result<T> {
        let mut out = T::zero();
        for (m, c) in p.iter() {
            out += &(c.clone() * self.eval_monomial(m)?);
        }
        Ok(out)
    }
}

pub fn char_eval<T: Coeff>(phi: &Character<'_, T>, p: &Poly<CoordMap, T>) -> Result<T> {
    phi.eval(p)
}

/// `(Φ ⋆ Ψ)(a) = Σ Φ(a′) Ψ(a″)` over `Δ a`.
pub fn convolve<T: Coeff>(h: &FdbHopf<T>, phi: &Character<'_, T>, psi: &Character<'_, T>, a: &CoordMap) -> Result<T> {
    let mut out = T::zero();
    for ([l, r], c) in h.coproduct(a).iter() {
        out += &(c.clone() * phi.eval_monomial(l)? * psi.eval_monomial(r)?);
    }
    Ok(out)
}

/// `c⁻¹` with `(c⁻¹_i, η) = Φ_c(S a^i_η)` for `|η| ≤ max_len`.
pub fn group_inverse<T: Coeff>(h: &FdbHopf<T>, c: &Series<T>, max_len: usize) -> Result<Series<T>> {
    check_square(c, "group_inverse")?;
    if max_len > c.max_len() {
        return Err(Error::InsufficientData { len: max_len, max_len: c.max_len() });
    }
    let phi = Character::new(c);
    let mut out = Series::zero(c.ell(), c.alphabet(), max_len)?;
    for i in c.alphabet().labels() {
        for w in c.alphabet().words_up_to_len(max_len) {
            let a = CoordMap::from_parts(i, w.clone());
            let v = phi.eval(&h.antipode(&a, Side::Left))?;
            out.add_term(i as usize, w, v)?;
        }
    }
    Ok(out)
}

/// Partial sum `Σ_{k=1..K} (−1)^{k−1} x^k / k`.
pub fn log1p_partial<T: Coeff>(x: &T, terms: usize) -> T {
    let mut out = T::zero();
    let mut pow = T::one();
    for k in 1..=terms {
        pow = pow * x.clone();
        let term = pow.clone() / T::from_usize(k).expect("term index fits");
        if k % 2 == 1 {
            out += &term;
        } else {
            out += &(-term);
        }
    }
    out
}

/// Infinitesimal character `ξ_c`, truncated to `terms` summands of the
/// logarithm on generators; zero on the unit and on products.
#[derive(Clone, Debug)]
pub struct InfChar<'a, T: Coeff> {
    series: &'a Series<T>,
    terms: usize,
}

impl<'a, T: Coeff> InfChar<'a, T> {
    pub fn new(series: &'a Series<T>, terms: usize) -> Self {
        InfChar { series, terms }
    }

    pub fn eval_generator(&self, a: &CoordMap) -> Result<T> {
        let x = Character::new(self.series).eval_generator(a)?;
        Ok(log1p_partial(&x, self.terms))
    }

    pub fn eval(&self, p: &Poly<CoordMap, T>) -> Result<T> {
        let mut out = T::zero();
        for (m, c) in p.iter() {
            if m.len() == 1 {
                out += &(c.clone() * self.eval_generator(&m.factors()[0])?);
            }
        }
        Ok(out)
    }
}

pub fn inf_char<T: Coeff>(c: &Series<T>, a: &CoordMap, terms: usize) -> Result<T> {
    InfChar::new(c, terms).eval_generator(a)
}
