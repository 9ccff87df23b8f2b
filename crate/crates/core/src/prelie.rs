//! Right pre-Lie product on rcts by insertion at matching decorations, its
//! Lie bracket, and the dual co-pre-Lie relation of the linearized
//! coproduct.

use crate::lincomb::{LinComb, Monomial, Tensor3};
use crate::rct::Rct;
use crate::rct_hopf::RctHopf;
use crate::scalar::Coeff;
use crate::words::{shuffle, Letter, Word};

pub type Span<T> = LinComb<Rct, T>;

/// `c ⊲ d`: at every vertex of `c` decorated `x_j` with `j` the root label of
/// `d`, turn the vertex white and shuffle `d`'s word into the suffix after it.
pub fn prelie_product<T: Coeff>(c: &Rct, d: &Rct) -> Span<T> {
    let mut out = Span::zero();
    let target = Letter::new(d.root());
    let letters = c.word().letters();
    for (p, &l) in letters.iter().enumerate() {
        if l != target {
            continue;
        }
        let prefix = Word::from_letters(letters[..p].iter().copied()).with_suffix(Letter::X0);
        let suffix = Word::from_letters(letters[p + 1..].iter().copied());
        for (w, coeff) in shuffle::<T>(&suffix, d.word()) {
            out.add_term(Rct::from_parts(c.root(), prefix.concat(&w)), coeff);
        }
    }
    out
}

/// Bilinear extension of [`prelie_product`].
pub fn prelie_span<T: Coeff>(a: &Span<T>, b: &Span<T>) -> Span<T> {
    let mut out = Span::zero();
    for (x, cx) in a.iter() {
        for (y, cy) in b.iter() {
            out.add_assign_scaled(&prelie_product(x, y), &(cx.clone() * cy.clone()));
        }
    }
    out
}

pub fn lie_bracket<T: Coeff>(c: &Rct, d: &Rct) -> Span<T> {
    prelie_product::<T>(c, d).sub(&prelie_product(d, c))
}

pub fn lie_bracket_span<T: Coeff>(a: &Span<T>, b: &Span<T>) -> Span<T> {
    prelie_span(a, b).sub(&prelie_span(b, a))
}

/// `(a⊲b)⊲c − a⊲(b⊲c) − (a⊲c)⊲b + a⊲(c⊲b)`; zero for a right pre-Lie product.
pub fn prelie_associator_defect<T: Coeff>(a: &Rct, b: &Rct, c: &Rct) -> Span<T> {
    let (a, b, c) = (
        Span::from_term(a.clone(), T::one()),
        Span::from_term(b.clone(), T::one()),
        Span::from_term(c.clone(), T::one()),
    );
    let lhs = prelie_span(&prelie_span(&a, &b), &c).sub(&prelie_span(&a, &prelie_span(&b, &c)));
    let rhs = prelie_span(&prelie_span(&a, &c), &b).sub(&prelie_span(&a, &prelie_span(&c, &b)));
    lhs.sub(&rhs)
}

/// `[a,[b,c]] + [b,[c,a]] + [c,[a,b]]`.
pub fn jacobi_defect<T: Coeff>(a: &Rct, b: &Rct, c: &Rct) -> Span<T> {
    let s = |x: &Rct| Span::from_term(x.clone(), T::one());
    let (a, b, c) = (s(a), s(b), s(c));
    let t1 = lie_bracket_span(&a, &lie_bracket_span(&b, &c));
    let t2 = lie_bracket_span(&b, &lie_bracket_span(&c, &a));
    let t3 = lie_bracket_span(&c, &lie_bracket_span(&a, &b));
    t1.add(&t2).add(&t3)
}

/// Pairing `⟨z_a ⋆ z_b, c⟩`: coefficient of `a ⊗ b` in the linearized
/// coproduct of `c`.
pub fn pairing<T: Coeff>(h: &RctHopf<T>, a: &Rct, b: &Rct, c: &Rct) -> T {
    h.linearized_coproduct(c).coeff(&[Monomial::single(a.clone()), Monomial::single(b.clone())])
}

/// `(id − π₂₃)((Δ̂⊗id)Δ̂ − (id⊗Δ̂)Δ̂)(c)`; zero when `Δ̂` is right co-pre-Lie.
pub fn co_prelie_defect<T: Coeff>(h: &RctHopf<T>, c: &Rct) -> Tensor3<Rct, T> {
    let lin = |m: &Monomial<Rct>| h.linearized_coproduct(&m.factors()[0]);
    let d = h.linearized_coproduct(c);
    let assoc = d.expand_left(lin).sub(&d.expand_right(lin));
    let swapped = assoc.map_keys(|[x, y, z]| [x.clone(), z.clone(), y.clone()]);
    assoc.sub(&swapped)
}
