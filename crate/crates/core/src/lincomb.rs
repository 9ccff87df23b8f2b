//! Finitely supported linear combinations, commutative monomials over a
//! generator set, and the polynomial / tensor spaces built from them.
//!
//! Every [`LinComb`] is kept canonical: zero coefficients are never stored, so
//! structural equality is equality of vectors.

use std::fmt::{self, Display};
use std::hash::Hash;

use rustc_hash::FxHashMap;

use crate::scalar::Coeff;

#[derive(Clone, Debug)]
pub struct LinComb<K, T> {
    terms: FxHashMap<K, T>,
}

impl<K: Eq + Hash, T: PartialEq> PartialEq for LinComb<K, T> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<K: Eq + Hash, T: Eq> Eq for LinComb<K, T> {}

impl<K, T> Default for LinComb<K, T> {
    fn default() -> Self {
        LinComb { terms: FxHashMap::default() }
    }
}

impl<K: Clone + Eq + Hash, T: Coeff> LinComb<K, T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_term(key: K, coeff: T) -> Self {
        let mut out = Self::zero();
        out.add_term(key, coeff);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Support size.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: K, coeff: T) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    pub fn coeff(&self, key: &K) -> T {
        self.terms.get(key).cloned().unwrap_or_else(T::zero)
    }

    pub fn get(&self, key: &K) -> Option<&T> {
        self.terms.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &T)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn add_assign_scaled(&mut self, other: &Self, scale: &T) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c.clone() * scale.clone());
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut out = Self::zero();
        out.add_assign_scaled(self, s);
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_scaled(other, &T::one());
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_scaled(other, &-T::one());
        out
    }

    /// Linear extension of a map on basis elements.
    pub fn map_keys<K2: Clone + Eq + Hash>(&self, mut f: impl FnMut(&K) -> K2) -> LinComb<K2, T> {
        let mut out = LinComb::zero();
        for (k, c) in &self.terms {
            out.add_term(f(k), c.clone());
        }
        out
    }

    /// Linear extension of a map from basis elements to linear combinations.
    pub fn flat_map<K2: Clone + Eq + Hash>(&self, mut f: impl FnMut(&K) -> LinComb<K2, T>) -> LinComb<K2, T> {
        let mut out = LinComb::zero();
        for (k, c) in &self.terms {
            out.add_assign_scaled(&f(k), c);
        }
        out
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&K, &T) -> bool) {
        self.terms.retain(|k, c| keep(k, c));
    }

    /// Terms in canonical key order.
    pub fn sorted_terms(&self) -> Vec<(&K, &T)>
    where
        K: Ord,
    {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    /// Sum of absolute coefficient values.
    pub fn mass(&self) -> f64 {
        self.terms.values().map(Coeff::magnitude).sum()
    }
}

impl<K: Clone + Eq + Hash, T: Coeff> FromIterator<(K, T)> for LinComb<K, T> {
    fn from_iter<I: IntoIterator<Item = (K, T)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }
}

impl<K, T> IntoIterator for LinComb<K, T> {
    type Item = (K, T);
    type IntoIter = std::collections::hash_map::IntoIter<K, T>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.into_iter()
    }
}

/// One line per term, `<coeff> <key>`, in canonical order; `0` when empty.
impl<K: Clone + Eq + Hash + Ord + Display, T: Coeff> Display for LinComb<K, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return writeln!(f, "0");
        }
        for (k, c) in self.sorted_terms() {
            writeln!(f, "{} {}", c.to_text(), k)?;
        }
        Ok(())
    }
}

/// A graded generator of a free commutative algebra.
pub trait Generator: Clone + Eq + Hash + Ord + fmt::Debug + Display + Send + Sync + 'static {
    fn degree(&self) -> usize;
}

/// Commutative monomial: a multiset of generators kept sorted. The empty
/// monomial is the unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial<G>(Vec<G>);

impl<G: Generator> Monomial<G> {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn single(g: G) -> Self {
        Monomial(vec![g])
    }

    pub fn from_factors(mut factors: Vec<G>) -> Self {
        factors.sort_unstable();
        Monomial(factors)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[G] {
        &self.0
    }

    /// Number of generator factors.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(Generator::degree).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => {
                    if x <= y {
                        out.push(a.next().unwrap().clone());
                    } else {
                        out.push(b.next().unwrap().clone());
                    }
                }
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => out.push(b.next().unwrap().clone()),
                (None, None) => break,
            }
        }
        Monomial(out)
    }

    pub fn map<H: Generator>(&self, f: impl FnMut(&G) -> H) -> Monomial<H> {
        Monomial::from_factors(self.0.iter().map(f).collect())
    }
}

impl<G: Generator> Display for Monomial<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Element of the free commutative algebra on `G`.
pub type Poly<G, T> = LinComb<Monomial<G>, T>;

/// Element of the tensor square of the free commutative algebra on `G`.
pub type Tensor<G, T> = LinComb<[Monomial<G>; 2], T>;

/// Element of the tensor cube.
pub type Tensor3<G, T> = LinComb<[Monomial<G>; 3], T>;

/// Key wrapper used only for printing tensors as `left | right`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorKey<'a, G, const N: usize>(pub &'a [Monomial<G>; N]);

impl<G: Generator, const N: usize> Display for TensorKey<'_, G, N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Renders a tensor one term per line, `<coeff> <left> | <right>`.
pub fn format_tensor<G: Generator, T: Coeff, const N: usize>(t: &LinComb<[Monomial<G>; N], T>) -> String {
    if t.is_zero() {
        return "0\n".to_string();
    }
    let mut s = String::new();
    for (k, c) in t.sorted_terms() {
        s.push_str(&format!("{} {}\n", c.to_text(), TensorKey(k)));
    }
    s
}

impl<G: Generator, T: Coeff> Poly<G, T> {
    pub fn one() -> Self {
        Self::from_term(Monomial::one(), T::one())
    }

    pub fn generator(g: G) -> Self {
        Self::from_term(Monomial::single(g), T::one())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in self.iter() {
            for (b, cb) in other.iter() {
                out.add_term(a.mul(b), ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Multiplies every term by a fixed monomial.
    pub fn mul_monomial(&self, m: &Monomial<G>) -> Self {
        self.map_keys(|k| k.mul(m))
    }

    /// Counit: the coefficient of the unit monomial.
    pub fn counit(&self) -> T {
        self.coeff(&Monomial::one())
    }

    /// True when every term has the given degree.
    pub fn is_homogeneous(&self, degree: usize) -> bool {
        self.keys().all(|k| k.degree() == degree)
    }

    /// Algebra morphism induced by a map on generators.
    pub fn substitute(&self, mut f: impl FnMut(&G) -> Poly<G, T>) -> Self {
        self.flat_map(|mono| mono.factors().iter().fold(Self::one(), |acc, g| acc.mul(&f(g))))
    }
}

impl<G: Generator, T: Coeff> Tensor<G, T> {
    /// Componentwise product in the tensor-square algebra.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ([a1, a2], ca) in self.iter() {
            for ([b1, b2], cb) in other.iter() {
                out.add_term([a1.mul(b1), a2.mul(b2)], ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Multiplication map `a ⊗ b ↦ ab`.
    pub fn multiply_legs(&self) -> Poly<G, T> {
        self.map_keys(|[a, b]| a.mul(b))
    }

    /// Swaps the two legs.
    pub fn flip(&self) -> Self {
        self.map_keys(|[a, b]| [b.clone(), a.clone()])
    }

    /// Applies linear maps to both legs.
    pub fn map_legs(
        &self,
        mut left: impl FnMut(&Monomial<G>) -> Poly<G, T>,
        mut right: impl FnMut(&Monomial<G>) -> Poly<G, T>,
    ) -> Self {
        let mut out = Self::zero();
        for ([a, b], c) in self.iter() {
            let la = left(a);
            let rb = right(b);
            for (x, cx) in la.iter() {
                for (y, cy) in rb.iter() {
                    out.add_term([x.clone(), y.clone()], c.clone() * cx.clone() * cy.clone());
                }
            }
        }
        out
    }

    /// Image under `f ⊗ id` where `f` takes values in tensors (used for
    /// `(Δ ⊗ id)`).
    pub fn expand_left(&self, mut f: impl FnMut(&Monomial<G>) -> Tensor<G, T>) -> Tensor3<G, T> {
        let mut out = Tensor3::zero();
        for ([a, b], c) in self.iter() {
            for ([x, y], cx) in f(a).iter() {
                out.add_term([x.clone(), y.clone(), b.clone()], c.clone() * cx.clone());
            }
        }
        out
    }

    /// Image under `id ⊗ f`.
    pub fn expand_right(&self, mut f: impl FnMut(&Monomial<G>) -> Tensor<G, T>) -> Tensor3<G, T> {
        let mut out = Tensor3::zero();
        for ([a, b], c) in self.iter() {
            for ([x, y], cx) in f(b).iter() {
                out.add_term([a.clone(), x.clone(), y.clone()], c.clone() * cx.clone());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
    struct G(u8);

    impl Display for G {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write!(f, "g{}", self.0)
        }
    }

    impl Generator for G {
        fn degree(&self) -> usize {
            self.0 as usize
        }
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut p: Poly<G, i64> = Poly::generator(G(1));
        p.add_term(Monomial::single(G(1)), -1);
        assert!(p.is_zero());
        p.add_term(Monomial::single(G(2)), 0);
        assert!(p.is_zero());
    }

    #[test]
    fn monomial_product_is_sorted_multiset_union() {
        let a = Monomial::from_factors(vec![G(3), G(1)]);
        let b = Monomial::from_factors(vec![G(2), G(1)]);
        assert_eq!(a.mul(&b).factors(), &[G(1), G(1), G(2), G(3)]);
        assert_eq!(a.mul(&Monomial::one()), a);
        assert_eq!(a.degree(), 4);
    }

    #[test]
    fn polynomial_product_expands() {
        // (g1 + g2)^2 = g1^2 + 2 g1 g2 + g2^2
        let p: Poly<G, i64> = Poly::generator(G(1)).add(&Poly::generator(G(2)));
        let sq = p.mul(&p);
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.coeff(&Monomial::from_factors(vec![G(1), G(2)])), 2);
        assert!(!sq.is_homogeneous(2));
    }

    #[test]
    fn display_is_canonical() {
        let p: Poly<G, i64> = [(Monomial::single(G(2)), 1), (Monomial::one(), -3)].into_iter().collect();
        assert_eq!(p.to_string(), "-3/1 1\n1/1 g2\n");
    }
}
