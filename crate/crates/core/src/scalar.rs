//! Scalar traits the algebraic and numeric layers are generic over.

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, Neg};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Float, FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Coefficient ring of every symbolic structure (word polynomials, series,
/// Hopf polynomials, tensors).
///
/// Exact types ([`BigRational`], [`Rational64`], `i64`, `i128`) are what the
/// combinatorial code is meant to run on; `f32`/`f64` are admitted so that a
/// series can be lowered to floating point for Fliess-operator evaluation.
pub trait Coeff:
    Clone
    + Debug
    + Display
    + PartialEq
    + Num
    + Neg<Output = Self>
    + FromPrimitive
    + for<'a> AddAssign<&'a Self>
    + Send
    + Sync
    + 'static
{
    /// Renders the value in the `num/den` text format.
    fn to_text(&self) -> String;

    /// Parses `num/den` or a bare integer.
    fn parse_text(s: &str) -> Option<Self>;

    /// Absolute value as an `f64` magnitude, used for term statistics.
    fn magnitude(&self) -> f64;

    /// Lossy conversion used when lowering a series to floating point.
    fn to_f64_lossy(&self) -> f64;
}

fn split_fraction(s: &str) -> (&str, Option<&str>) {
    match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s.trim(), None),
    }
}

macro_rules! impl_coeff_ratio {
    ($t:ty, $int:ty) => {
        impl Coeff for $t {
            fn to_text(&self) -> String {
                format!("{}/{}", self.numer(), self.denom())
            }

            fn parse_text(s: &str) -> Option<Self> {
                let (n, d) = split_fraction(s);
                let n: $int = n.parse().ok()?;
                let d: $int = match d {
                    Some(d) => d.parse().ok()?,
                    None => <$int>::one(),
                };
                if d.is_zero() {
                    return None;
                }
                Some(<$t>::new(n, d))
            }

            fn magnitude(&self) -> f64 {
                self.abs().to_f64().unwrap_or(f64::INFINITY)
            }

            fn to_f64_lossy(&self) -> f64 {
                self.to_f64().unwrap_or(f64::NAN)
            }
        }
    };
}

impl_coeff_ratio!(BigRational, BigInt);
impl_coeff_ratio!(Rational64, i64);

macro_rules! impl_coeff_int {
    ($t:ty) => {
        impl Coeff for $t {
            fn to_text(&self) -> String {
                format!("{}/1", self)
            }

            fn parse_text(s: &str) -> Option<Self> {
                let (n, d) = split_fraction(s);
                let n: $t = n.parse().ok()?;
                match d {
                    None => Some(n),
                    Some(d) => {
                        let d: $t = d.parse().ok()?;
                        (d != 0 && n % d == 0).then(|| n / d)
                    }
                }
            }

            fn magnitude(&self) -> f64 {
                self.unsigned_abs() as f64
            }

            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }
        }
    };
}

impl_coeff_int!(i64);
impl_coeff_int!(i128);

macro_rules! impl_coeff_float {
    ($t:ty) => {
        impl Coeff for $t {
            fn to_text(&self) -> String {
                format!("{}", self)
            }

            fn parse_text(s: &str) -> Option<Self> {
                let (n, d) = split_fraction(s);
                let n: $t = n.parse().ok()?;
                match d {
                    None => Some(n),
                    Some(d) => Some(n / d.parse::<$t>().ok()?),
                }
            }

            fn magnitude(&self) -> f64 {
                self.abs() as f64
            }

            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }
        }
    };
}

impl_coeff_float!(f32);
impl_coeff_float!(f64);

/// Floating point type used by the iterated-integral kernels: `f32` or `f64`.
pub trait Real: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {
    fn of_usize(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("grid size representable")
    }

    fn from_coeff<T: Coeff>(c: &T) -> Self {
        <Self as FromPrimitive>::from_f64(c.to_f64_lossy()).unwrap_or_else(Self::nan)
    }
}

impl Real for f32 {}
impl Real for f64 {}
