//! Exact computations for quadratic semigroup algebras `K<x1..xn> / (relations)`
//! where every relation is `ab = 0` or `ab = cd`.
//!
//! - [`model`]: words, relations, presentations, QHS validation, `delta(n)`.
//! - [`coset`]: congruence classes, minimal monomials, tame/singular words,
//!   regularity.
//! - [`analysis`]: Hilbert profiles and nilpotency indices.
//! - [`certificates`]: infinite-dimensionality witnesses.
//! - [`constructions`]: regular QHS with `delta(n)` relations.
//! - [`census`]: exhaustive enumeration at small `n`.
//! - [`format`], [`cache`]: text files and the run cache.

pub mod analysis;
pub mod cache;
pub mod census;
pub mod certificates;
pub mod constructions;
pub mod coset;
pub mod error;
pub mod format;
pub mod model;
mod store;

pub use analysis::{dim3_report, hilbert_profile, total_dimension, DimensionVerdict, HilbertProfile};
pub use certificates::{find_se_pair, theorem1_certificate, verify_witness, Certificate, CertificateKind};
pub use constructions::{base_qhs, build_regular_qhs, extend, lemma_m1_witness};
pub use coset::{
    classify, coset_class, minimal_monomial, next_minimal_basis, regularity_degree,
    singular_monomials, Classification, CosetClass, EngineLimits, MinimalBasis, Regularity,
};
pub use error::{Error, Result};
pub use format::{parse_presentation, render_presentation};
pub use model::{
    delta, rtl_lex_cmp, strip_top, validate_qhs, Alphabet, IdealMode, Pair, Presentation,
    QhsReport, Relation, Word,
};
