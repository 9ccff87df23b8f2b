//! Property suites over all generators up to a degree: Hopf axioms, antipode
//! agreement, forest sign coherence, the isomorphism with `H`, and the
//! pre-Lie identities. Each suite returns a [`CheckReport`] instead of
//! panicking so the CLI and the acceptance runner can print summaries.

use std::fmt::{self, Display};

use crate::fdb::{phi, phi_poly, phi_tensor, shuffle_coproduct, CoordMap, FdbHopf, Side};
use crate::lincomb::{Monomial, Poly, Tensor};
use crate::prelie::{co_prelie_defect, jacobi_defect, prelie_associator_defect, prelie_product};
use crate::rct::{rcts_up_to_degree, Rct};
use crate::rct_hopf::{AntipodeMethod, RctHopf};
use crate::scalar::Coeff;

#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport { name: name.into(), ..Default::default() }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

impl Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            write!(f, "{}: OK ({} cases)", self.name, self.cases)
        } else {
            write!(
                f,
                "{}: FAIL ({} of {} cases), first: {}",
                self.name,
                self.failures.len(),
                self.cases,
                self.failures[0]
            )
        }
    }
}

fn generators<T: Coeff>(h: &RctHopf<T>, max_degree: usize) -> Vec<Rct> {
    rcts_up_to_degree(h.alphabet(), max_degree)
}

/// `(Δ⊗id)Δ = (id⊗Δ)Δ`.
pub fn check_coassociativity<T: Coeff>(h: &RctHopf<T>, max_degree: usize) -> CheckReport {
    let mut r = CheckReport::new(format!("coassociativity m={} deg<={max_degree}", h.alphabet().m()));
    for c in generators(h, max_degree) {
        let d = h.coproduct(&c);
        let left = d.expand_left(|m| h.coproduct_monomial(m));
        let right = d.expand_right(|m| h.coproduct_monomial(m));
        r.record(left == right, || c.to_string());
    }
    r
}

/// `(ε⊗id)Δ = id = (id⊗ε)Δ`.
pub fn check_counit<T: Coeff>(h: &RctHopf<T>, max_degree: usize) -> CheckReport {
    let mut r = CheckReport::new(format!("counit m={} deg<={max_degree}", h.alphabet().m()));
    for c in generators(h, max_degree) {
        let d = h.coproduct(&c);
        let one = Monomial::one();
        let mono = Monomial::single(c.clone());
        let left: Vec<_> = d.iter().filter(|([l, _], _)| *l == one).collect();
        let right: Vec<_> = d.iter().filter(|([_, rr], _)| *rr == one).collect();
        let ok = |side: &[(&[Monomial<Rct>; 2], &T)], pick: usize| {
            side.len() == 1 && side[0].0[pick] == mono && side[0].1.is_one()
        };
        r.record(ok(&left, 1) && ok(&right, 0), || c.to_string());
    }
    r
}

/// Every term of `Δc` has `deg(left) + deg(right) = deg(c)`.
pub fn check_grading<T: Coeff>(h: &RctHopf<T>, max_degree: usize) -> CheckReport {
    let mut r = CheckReport::new(format!("grading m={} deg<={max_degree}", h.alphabet().m()));
    for c in generators(h, max_degree) {
        let ok = h.coproduct(&c).keys().all(|[a, b]| a.degree() + b.degree() == c.degree());
        r.record(ok, || c.to_string());
    }
    r
}

/// `m(S⊗id)Δ = m(id⊗S)Δ = e∘ε`, zero on generators.
pub fn check_antipode_axiom<T: Coeff>(h: &RctHopf<T>, max_degree: usize) -> CheckReport {
    let mut r = CheckReport::new(format!("antipode axiom m={} deg<={max_degree}", h.alphabet().m()));
    for c in generators(h, max_degree) {
        let d = h.coproduct(&c);
        let left = d.map_legs(|a| h.antipode_monomial(a, AntipodeMethod::Left), as_poly).multiply_legs();
        let right = d.map_legs(as_poly, |b| h.antipode_monomial(b, AntipodeMethod::Left)).multiply_legs();
        r.record(left.is_zero() && right.is_zero(), || c.to_string());
    }
    r
}

fn as_poly<T: Coeff>(m: &Monomial<Rct>) -> Poly<Rct, T> {
    Poly::from_term(m.clone(), T::one())
}

/// Left, right and forest antipodes coincide.
pub fn check_antipode_agreement<T: Coeff>(h: &RctHopf<T>, max_degree: usize) -> CheckReport {
    let mut r = CheckReport::new(format!("antipode left=right=forest m={} deg<={max_degree}", h.alphabet().m()));
    for c in generators(h, max_degree) {
        let s = h.antipode_left(&c);
        let ok = *s == *h.antipode_right(&c) && *s == h.antipode_forest(&c);
        r.record(ok, || c.to_string());
    }
    r
}

/// No monomial of the forest formula receives terms of both signs.
pub fn check_forest_signs<T: Coeff>(h: &RctHopf<T>, max_degree: usize) -> CheckReport {
    let mut r = CheckReport::new(format!("forest cancellation-free m={} deg<={max_degree}", h.alphabet().m()));
    for c in generators(h, max_degree) {
        let table = h.forest_sign_table(&c);
        let bad = table.iter().find(|(_, &(p, n))| p > 0 && n > 0).map(|(k, _)| k.to_string());
        r.record(bad.is_none(), || format!("{c}: {}", bad.unwrap_or_default()));
    }
    r
}

/// `(φ⊗φ)Δ = Δ_H φ` and `φ S = S_H φ` (both recursions on the `H` side).
pub fn check_isomorphism<T: Coeff>(h: &RctHopf<T>, fdb: &FdbHopf<T>, max_degree: usize) -> CheckReport {
    let mut r = CheckReport::new(format!("isomorphism m={} deg<={max_degree}", h.alphabet().m()));
    for c in generators(h, max_degree) {
        let a = phi(&c);
        let cop = phi_tensor(&h.coproduct(&c)) == fdb.coproduct(&a);
        let s = phi_poly(&h.antipode_left(&c));
        let ant = s == *fdb.antipode(&a, Side::Left) && s == *fdb.antipode(&a, Side::Right);
        r.record(cop && ant, || format!("{c} (coproduct {cop}, antipode {ant})"));
    }
    r
}

/// `Δ̃ = Δ′ + a⊗1` and `Δ = Δ̃ + 1⊗a`, comparing the rct reduced coproduct
/// with the `H` recursion.
pub fn check_coproduct_relations<T: Coeff>(h: &RctHopf<T>, fdb: &FdbHopf<T>, max_degree: usize) -> CheckReport {
    let mut r = CheckReport::new(format!("coproduct relations m={} deg<={max_degree}", h.alphabet().m()));
    for c in generators(h, max_degree) {
        let a = phi(&c);
        let mut tilde = phi_tensor(&h.reduced_coproduct(&c));
        tilde.add_term([Monomial::single(a.clone()), Monomial::one()], T::one());
        let ok1 = tilde == *fdb.tilde_delta(&a);
        let mut full = tilde.clone();
        full.add_term([Monomial::one(), Monomial::single(a.clone())], T::one());
        let ok2 = full == fdb.coproduct(&a);
        r.record(ok1 && ok2, || c.to_string());
    }
    r
}

/// `(φ⊗φ)△^n(c) = Δ^n_⧢ a^i_η` for `c = (i; x_0 η)`.
pub fn check_deshuffle_correspondence<T: Coeff>(h: &RctHopf<T>, max_degree: usize) -> CheckReport {
    let mut r = CheckReport::new(format!("deshuffle correspondence m={} deg<={max_degree}", h.alphabet().m()));
    for c in generators(h, max_degree) {
        if c.word().first() != Some(crate::words::Letter::X0) {
            continue;
        }
        let rest = CoordMap::from_parts(c.root(), c.word().tail());
        for n in h.alphabet().labels() {
            let ok = phi_tensor(&h.deshuffle_extraction(&c, n)) == shuffle_coproduct::<T>(n, &rest);
            r.record(ok, || format!("{c} n={n}"));
        }
    }
    r
}

/// Right pre-Lie and Jacobi identities on the given triples.
pub fn check_prelie_triples<'a, T: Coeff>(
    name: &str,
    triples: impl IntoIterator<Item = (&'a Rct, &'a Rct, &'a Rct)>,
) -> (CheckReport, CheckReport) {
    let mut pl = CheckReport::new(format!("pre-Lie identity {name}"));
    let mut jac = CheckReport::new(format!("Jacobi identity {name}"));
    for (a, b, c) in triples {
        pl.record(prelie_associator_defect::<T>(a, b, c).is_zero(), || format!("{a} {b} {c}"));
        jac.record(jacobi_defect::<T>(a, b, c).is_zero(), || format!("{a} {b} {c}"));
    }
    (pl, jac)
}

/// Right pre-Lie and Jacobi identities on all triples up to a degree.
pub fn check_prelie_exhaustive<T: Coeff>(h: &RctHopf<T>, max_degree: usize) -> (CheckReport, CheckReport) {
    let trees = generators(h, max_degree);
    let t = &trees;
    let triples = t.iter().flat_map(|a| t.iter().flat_map(move |b| t.iter().map(move |c| (a, b, c))));
    check_prelie_triples::<T>(&format!("m={} deg<={max_degree}", h.alphabet().m()), triples)
}

/// The linearized coproduct is dual to `⊲`: the coefficient of `a⊗b` in
/// `Δ̂c` equals the coefficient of `c` in `a⊲b`, for every `c` up to the
/// degree and every pair of total degree up to it.
pub fn check_duality<T: Coeff>(h: &RctHopf<T>, max_degree: usize) -> CheckReport {
    let mut r = CheckReport::new(format!("pre-Lie duality m={} deg<={max_degree}", h.alphabet().m()));
    let trees = generators(h, max_degree);
    for c in &trees {
        let lin: Tensor<Rct, T> = h.linearized_coproduct(c);
        let ok = lin.iter().all(|([a, b], k)| prelie_product::<T>(&a.factors()[0], &b.factors()[0]).coeff(c) == *k);
        r.record(ok, || format!("coproduct side {c}"));
    }
    for a in &trees {
        for b in trees.iter().filter(|b| a.degree() + b.degree() <= max_degree) {
            let p = prelie_product::<T>(a, b);
            let key = [Monomial::single(a.clone()), Monomial::single(b.clone())];
            let ok = p.iter().all(|(c, k)| h.linearized_coproduct(c).coeff(&key) == *k);
            r.record(ok, || format!("product side {a} {b}"));
        }
    }
    r
}

/// Right co-pre-Lie relation of the linearized coproduct.
pub fn check_co_prelie<T: Coeff>(h: &RctHopf<T>, max_degree: usize) -> CheckReport {
    let mut r = CheckReport::new(format!("co-pre-Lie relation m={} deg<={max_degree}", h.alphabet().m()));
    for c in generators(h, max_degree) {
        r.record(co_prelie_defect(h, &c).is_zero(), || c.to_string());
    }
    r
}

/// Everything above for one alphabet, pre-Lie triples capped at degree 4.
pub fn full_suite<T: Coeff>(h: &RctHopf<T>, fdb: &FdbHopf<T>, max_degree: usize) -> Vec<CheckReport> {
    let (pl, jac) = check_prelie_exhaustive(h, max_degree.min(4));
    vec![
        check_coassociativity(h, max_degree),
        check_counit(h, max_degree),
        check_grading(h, max_degree),
        check_antipode_axiom(h, max_degree),
        check_antipode_agreement(h, max_degree),
        check_forest_signs(h, max_degree),
        check_isomorphism(h, fdb, max_degree),
        check_coproduct_relations(h, fdb, max_degree),
        check_deshuffle_correspondence(h, max_degree.min(6)),
        pl,
        jac,
        check_duality(h, max_degree.min(6)),
        check_co_prelie(h, max_degree.min(7)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;
    use num_rational::BigRational;

    #[test]
    fn suite_passes_on_small_degrees() {
        for m in [1, 2] {
            let a = Alphabet::new(m).unwrap();
            let h = RctHopf::<BigRational>::with_memo(a, true);
            let f = FdbHopf::<BigRational>::with_memo(a, true);
            for rep in full_suite(&h, &f, 5) {
                assert!(rep.ok(), "{rep}");
                assert!(rep.cases > 0, "{rep}");
            }
        }
    }

    #[test]
    fn report_formatting() {
        let mut r = CheckReport::new("demo");
        r.record(true, || unreachable!());
        assert_eq!(r.to_string(), "demo: OK (1 cases)");
        r.record(false, || "x".into());
        assert_eq!(r.to_string(), "demo: FAIL (1 of 2 cases), first: x");
    }
}
