//! Floating point evaluation of Fliess operators `F_c[u] = Σ (c,η) E_η[u]`
//! by trapezoidal iterated integrals on a uniform grid, and numerical checks
//! of the shuffle, composition and group product identities.

use std::fmt::{self, Display};
use std::str::FromStr;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::group::{compose, group_product};
use crate::scalar::{Coeff, Real};
use crate::series::Series;
use crate::words::{Alphabet, Word};

/// Input `u = (u_1, ..., u_m)` sampled at `t_k = k T / N`, `k = 0..=N`.
/// The drift letter `x_0` integrates against `u_0 = 1`, which is not stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Signal<F: Real> {
    t_end: F,
    n: usize,
    channels: Vec<Vec<F>>,
}

impl<F: Real> Signal<F> {
    pub fn new(t_end: F, n: usize, channels: Vec<Vec<F>>) -> Result<Self> {
        if n == 0 || t_end.partial_cmp(&F::zero()) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::DimensionMismatch("grid needs N ≥ 1 and T > 0".into()));
        }
        if channels.is_empty() {
            return Err(Error::DimensionMismatch("a signal needs at least one channel".into()));
        }
        if let Some(bad) = channels.iter().find(|c| c.len() != n + 1) {
            return Err(Error::DimensionMismatch(format!("channel has {} samples, grid has {}", bad.len(), n + 1)));
        }
        Ok(Signal { t_end, n, channels })
    }

    /// Samples `f(j, t)` for channels `j = 1..=m`.
    pub fn from_fn(m: usize, t_end: F, n: usize, f: impl Fn(usize, F) -> F) -> Result<Self> {
        let h = t_end / F::of_usize(n);
        let channels = (1..=m).map(|j| (0..=n).map(|k| f(j, h * F::of_usize(k))).collect()).collect();
        Signal::new(t_end, n, channels)
    }

    pub fn m(&self) -> usize {
        self.channels.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t_end(&self) -> F {
        self.t_end
    }

    pub fn step(&self) -> F {
        self.t_end / F::of_usize(self.n)
    }

    pub fn times(&self) -> Vec<F> {
        let h = self.step();
        (0..=self.n).map(|k| h * F::of_usize(k)).collect()
    }

    /// Channel `j`, 1-based.
    pub fn channel(&self, j: usize) -> &[F] {
        &self.channels[j - 1]
    }

    /// Same grid, new samples.
    pub fn with_channels(&self, channels: Vec<Vec<F>>) -> Result<Self> {
        Signal::new(self.t_end, self.n, channels)
    }
}

/// Running trapezoid integral starting at zero.
pub fn cumulative_trapezoid<F: Real>(f: &[F], h: F) -> Vec<F> {
    let half = h / F::of_usize(2);
    let mut out = Vec::with_capacity(f.len());
    let mut acc = F::zero();
    out.push(acc);
    for w in f.windows(2) {
        acc = acc + half * (w[0] + w[1]);
        out.push(acc);
    }
    out
}

/// Iterated integrals of words, sharing work between common suffixes.
pub struct IntegralCache<'a, F: Real> {
    u: &'a Signal<F>,
    cache: FxHashMap<Word, Vec<F>>,
}

impl<'a, F: Real> IntegralCache<'a, F> {
    pub fn new(u: &'a Signal<F>) -> Self {
        IntegralCache { u, cache: FxHashMap::default() }
    }

    /// `E_η[u]` on the grid.
    pub fn get(&mut self, eta: &Word) -> &[F] {
        if !self.cache.contains_key(eta) {
            let v = match eta.first() {
                None => vec![F::one(); self.u.n + 1],
                Some(l) => {
                    let inner = self.get(&eta.tail()).to_vec();
                    let integrand: Vec<F> = if l.index() == 0 {
                        inner
                    } else {
                        inner.iter().zip(self.u.channel(l.index())).map(|(&e, &u)| e * u).collect()
                    };
                    cumulative_trapezoid(&integrand, self.u.step())
                }
            };
            self.cache.insert(eta.clone(), v);
        }
        &self.cache[eta]
    }
}

pub fn iterated_integral<F: Real>(eta: &Word, u: &Signal<F>) -> Result<Vec<F>> {
    if let Some(l) = eta.letters().iter().find(|l| l.index() > u.m()) {
        return Err(Error::LetterOutOfRange { index: l.index(), m: u.m() });
    }
    Ok(IntegralCache::new(u).get(eta).to_vec())
}

/// `F_c[u]`, one track per output channel.
pub fn fliess_eval<T: Coeff, F: Real>(c: &Series<T>, u: &Signal<F>) -> Result<Vec<Vec<F>>> {
    if c.m() != u.m() {
        return Err(Error::DimensionMismatch(format!("series over m={} but input has {} channels", c.m(), u.m())));
    }
    let mut cache = IntegralCache::new(u);
    let mut out = Vec::with_capacity(c.ell());
    for p in c.channels() {
        let mut y = vec![F::zero(); u.n + 1];
        for (w, coeff) in p.iter() {
            let k = F::from_coeff(coeff);
            for (yi, &e) in y.iter_mut().zip(cache.get(w)) {
                *yi = *yi + k * e;
            }
        }
        out.push(y);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IdentityKind {
    Shuffle,
    Compose,
    Group,
}

impl IdentityKind {
    pub const ALL: [IdentityKind; 3] = [IdentityKind::Shuffle, IdentityKind::Compose, IdentityKind::Group];
}

impl FromStr for IdentityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shuffle" => Ok(IdentityKind::Shuffle),
            "compose" => Ok(IdentityKind::Compose),
            "group" => Ok(IdentityKind::Group),
            _ => Err(Error::Parse(format!("unknown identity kind `{s}`"))),
        }
    }
}

impl Display for IdentityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdentityKind::Shuffle => "shuffle",
            IdentityKind::Compose => "compose",
            IdentityKind::Group => "group",
        })
    }
}

fn max_abs_diff<F: Real>(a: &[Vec<F>], b: &[Vec<F>]) -> F {
    a.iter().zip(b).flat_map(|(x, y)| x.iter().zip(y).map(|(&p, &q)| (p - q).abs())).fold(F::zero(), F::max)
}

fn add_tracks<F: Real>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(&p, &q)| p + q).collect()).collect()
}

/// Sup-norm deviation between the two sides of an identity:
///
/// * shuffle: `F_c[u] F_d[u]` vs `F_{c⧢d}[u]`;
/// * compose: `F_c[F_d[u]]` vs `F_{c∘d}[u]`;
/// * group: `F_d[u] + F_c[u + F_d[u]]` vs `F_{c⊚d}[u]`.
///
/// `c` and `d` must be polynomials short enough that the symbolic product
/// is not cut by the truncation.
pub fn numeric_identity_check<T: Coeff, F: Real>(
    kind: IdentityKind,
    c: &Series<T>,
    d: &Series<T>,
    u: &Signal<F>,
) -> Result<F> {
    match kind {
        IdentityKind::Shuffle => {
            let (fc, fd) = (fliess_eval(c, u)?, fliess_eval(d, u)?);
            let lhs: Vec<Vec<F>> =
                fc.iter().zip(&fd).map(|(x, y)| x.iter().zip(y).map(|(&p, &q)| p * q).collect()).collect();
            let rhs = fliess_eval(&c.shuffle(d)?, u)?;
            Ok(max_abs_diff(&lhs, &rhs))
        }
        IdentityKind::Compose => {
            let v = u.with_channels(fliess_eval(d, u)?)?;
            let lhs = fliess_eval(c, &v)?;
            let rhs = fliess_eval(&compose(c, d)?, u)?;
            Ok(max_abs_diff(&lhs, &rhs))
        }
        IdentityKind::Group => {
            let fd = fliess_eval(d, u)?;
            let u_plus: Vec<Vec<F>> = (1..=u.m()).map(|j| u.channel(j).to_vec()).collect();
            let v = u.with_channels(add_tracks(&u_plus, &fd))?;
            let lhs = add_tracks(&fd, &fliess_eval(c, &v)?);
            let rhs = fliess_eval(&group_product(c, d)?, u)?;
            Ok(max_abs_diff(&lhs, &rhs))
        }
    }
}

/// One test case of the numerical corpus.
#[derive(Clone, Debug)]
pub struct NumericCase<T: Coeff> {
    pub name: &'static str,
    pub kind: IdentityKind,
    pub c: Series<T>,
    pub d: Series<T>,
    /// The quadrature error has a nonzero `h²` term, so refinement ratios
    /// are meaningful. False for cases where both sides are the same
    /// quadrature up to rounding.
    pub second_order: bool,
}

/// Smooth test input: `u_j(t) = cos((j + 1) t) + sin(j t) / 2`.
pub fn smooth_input<F: Real>(j: usize, t: F) -> F {
    let jf = F::of_usize(j);
    let half = F::of_usize(1) / F::of_usize(2);
    ((jf + F::one()) * t).cos() + half * (jf * t).sin()
}

fn corpus_series<T: Coeff>(text: &str) -> Series<T> {
    // lengths stay small enough that no product reaches the truncation
    Series::parse_text(text, 2, Alphabet::new(2).expect("m = 2"), 12).expect("corpus series parse")
}

/// Fixed corpus over `m = 2` used by the CLI and the acceptance suite.
pub fn numeric_corpus<T: Coeff>() -> Vec<NumericCase<T>> {
    let case = |name, kind, c: &str, d: &str, second_order| NumericCase {
        name,
        kind,
        c: corpus_series(c),
        d: corpus_series(d),
        second_order,
    };
    vec![
        case(
            "shuffle-mixed",
            IdentityKind::Shuffle,
            "1 1 1\n1 0.2 1/2\n2 2.1 1",
            "1 2 1\n1 1.1 -1/2\n2 0 1\n2 e 1",
            true,
        ),
        case("shuffle-trivial", IdentityKind::Shuffle, "1 1 1", "1 1 1", false),
        case(
            "compose-mixed",
            IdentityKind::Compose,
            "1 1 1\n1 0.2 1\n2 2.1 1/2",
            "1 1 1\n1 e 1/2\n2 0.2 1\n2 2 -1",
            true,
        ),
        case("compose-small", IdentityKind::Compose, "1 1 1", "1 e 1", false),
        case("group-mixed", IdentityKind::Group, "1 1.2 1\n1 0 1/2\n2 2.2 -1", "1 2 1\n2 1.1 1/2\n2 e 1", true),
        case("group-example", IdentityKind::Group, "1 2 1", "2 1 1", false),
    ]
}

/// Deviation for each grid size.
pub fn convergence_table<T: Coeff, F: Real>(case: &NumericCase<T>, t_end: F, ns: &[usize]) -> Result<Vec<(usize, F)>> {
    ns.iter()
        .map(|&n| {
            let u = Signal::from_fn(case.c.m(), t_end, n, smooth_input)?;
            Ok((n, numeric_identity_check(case.kind, &case.c, &case.d, &u)?))
        })
        .collect()
}
