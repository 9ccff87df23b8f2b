#![allow(dead_code)]

use circletree::{Alphabet, CoordMap, Monomial, Poly, Series, Word, Q};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn alpha(m: usize) -> Alphabet {
    Alphabet::new(m).unwrap()
}

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Square series over `m` letters, words up to `word_len`, integer
/// coefficients in `-2..=2`, stored with truncation length `max_len`.
pub fn random_series(rng: &mut ChaCha8Rng, m: usize, word_len: usize, max_len: usize) -> Series<Q> {
    let a = alpha(m);
    let mut s = Series::zero(m, a, max_len).unwrap();
    for i in 1..=m {
        for w in a.words_up_to_len(word_len) {
            let k: i64 = rng.gen_range(-2..=2);
            if k != 0 {
                s.add_term(i, w, q(k)).unwrap();
            }
        }
    }
    s
}

pub fn series(text: &str, ell: usize, m: usize, max_len: usize) -> Series<Q> {
    Series::parse_text(text, ell, alpha(m), max_len).unwrap()
}

pub fn word(s: &str, m: usize) -> Word {
    Word::parse(s, alpha(m)).unwrap()
}

pub fn coord(channel: usize, w: &[u8], m: usize) -> CoordMap {
    CoordMap::new(channel, Word::from_indices(w), alpha(m)).unwrap()
}

/// Polynomial from terms given as (coefficient, factors).
pub fn hpoly(terms: &[(i64, Vec<CoordMap>)]) -> Poly<CoordMap, Q> {
    let mut p = Poly::zero();
    for (c, f) in terms {
        p.add_term(Monomial::from_factors(f.clone()), q(*c));
    }
    p
}

/// The low-degree antipodes of `H` written out by hand, one entry per
/// choice of free indices, with the summed indices expanded over `1..=m`.
pub fn closed_form_antipodes(m: usize) -> Vec<(CoordMap, Poly<CoordMap, Q>)> {
    let a = |i: usize, w: &[u8]| coord(i, w, m);
    let idx = || 1..=m;
    let mut out = Vec::new();
    for i in idx() {
        out.push((a(i, &[]), hpoly(&[(-1, vec![a(i, &[])])])));
        let mut s = vec![(-1, vec![a(i, &[0])])];
        s.extend(idx().map(|n| (1, vec![a(i, &[n as u8]), a(n, &[])])));
        out.push((a(i, &[0]), hpoly(&s)));
        let mut s = vec![(-1, vec![a(i, &[0, 0])])];
        for n in idx() {
            s.push((1, vec![a(i, &[n as u8]), a(n, &[0])]));
            s.push((1, vec![a(i, &[n as u8, 0]), a(n, &[])]));
            s.push((1, vec![a(i, &[0, n as u8]), a(n, &[])]));
            for n2 in idx() {
                s.push((-1, vec![a(i, &[n as u8]), a(n, &[n2 as u8]), a(n2, &[])]));
                s.push((-1, vec![a(i, &[n as u8, n2 as u8]), a(n, &[]), a(n2, &[])]));
            }
        }
        out.push((a(i, &[0, 0]), hpoly(&s)));
        for j in idx().map(|j| j as u8) {
            out.push((a(i, &[j]), hpoly(&[(-1, vec![a(i, &[j])])])));
            let mut s = vec![(-1, vec![a(i, &[0, j])])];
            for n in idx() {
                s.push((1, vec![a(i, &[n as u8]), a(n, &[j])]));
                s.push((1, vec![a(i, &[n as u8, j]), a(n, &[])]));
            }
            out.push((a(i, &[0, j]), hpoly(&s)));
            let mut s = vec![(-1, vec![a(i, &[j, 0])])];
            s.extend(idx().map(|n| (1, vec![a(i, &[j, n as u8]), a(n, &[])])));
            out.push((a(i, &[j, 0]), hpoly(&s)));
            for k in idx().map(|k| k as u8) {
                out.push((a(i, &[j, k]), hpoly(&[(-1, vec![a(i, &[j, k])])])));
                for l in idx().map(|l| l as u8) {
                    out.push((a(i, &[j, k, l]), hpoly(&[(-1, vec![a(i, &[j, k, l])])])));
                }
            }
        }
    }
    out
}
