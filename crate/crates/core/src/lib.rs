//! Exact arithmetic for the Hopf algebra of decorated rooted circle trees
//! and the Faà di Bruno type Hopf algebra of the output feedback group of
//! Chen–Fliess series.
//!
//! Everything symbolic is generic over a [`Coeff`] scalar; the aliases at the
//! crate root fix it to [`BigRational`]. Iterated-integral evaluation is
//! generic over a [`Real`] float.

pub mod checks;
pub mod error;
pub mod fdb;
pub mod fliess;
pub mod group;
pub mod lincomb;
pub mod prelie;
pub mod rct;
pub mod rct_hopf;
pub mod scalar;
pub mod series;
pub mod words;

pub use error::{Error, Result};
pub use fdb::{phi, phi_inv, phi_poly, phi_tensor, shuffle_coproduct, CoordMap, FdbHopf, HMonomial, Side};
pub use fliess::{
    fliess_eval, iterated_integral, numeric_corpus, numeric_identity_check, IdentityKind, NumericCase, Signal,
};
pub use group::{
    char_eval, compose, convolve, delta_product, group_inverse, group_product, hat_compose, inf_char, mod_compose,
    Character, InfChar,
};
pub use lincomb::{format_tensor, Generator, LinComb, Monomial, Poly, Tensor, Tensor3};
pub use prelie::{lie_bracket, prelie_product};
pub use rct::{
    build_nesting_forest, rct_degree, rct_weight, rcts_up_to_degree, relation, AdmissibleSubset, Extraction,
    NestingForest, NestingNode, Rct, SubsetRelation,
};
pub use rct_hopf::{AntipodeMethod, RctHopf, RctMonomial, StatsRecord, MEMO_ENV};
pub use scalar::{Coeff, Real};
pub use series::{DeltaSeries, Series, SeriesDoc};
pub use words::{shuffle, shuffle_poly, word_degree, Alphabet, Letter, Word};

pub use num_rational::BigRational;

/// Exact rational scalar.
pub type Q = BigRational;
pub type HopfPoly = Poly<Rct, Q>;
pub type TensorPoly = Tensor<Rct, Q>;
pub type WordPoly = words::WordPoly<Q>;
pub type RctSpan = LinComb<Rct, Q>;
pub type HPoly = Poly<CoordMap, Q>;
pub type HTensor = Tensor<CoordMap, Q>;
pub type QSeries = Series<Q>;
pub type QDeltaSeries = DeltaSeries<Q>;
pub type Signal64 = Signal<f64>;
