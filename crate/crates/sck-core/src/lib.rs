//! Combinatorial small cancellation machinery for ring presentations over
//! free group algebras.
//!
//! The crate works with *relation sets*: sets of polynomials (finite linear
//! combinations of reduced words) closed under field scaling and under
//! multiplication by letters that cancel into some monomial. On top of that
//! closure it computes:
//!
//! - **small pieces** — words whose occurrences in two relation polynomials
//!   cannot always be transported between them while staying inside the
//!   relation set ([`measure`]);
//! - **Λ-measure** — the minimal number of small pieces concatenating to a
//!   word ([`measure`]);
//! - **occurrence charts and minimal covers** of host words ([`cover`]);
//! - **axiom checks** — bounded verification of the small cancellation
//!   axiom and related hypotheses ([`checker`]);
//! - **witness constructions** — a pair of words generating a free
//!   subalgebra, and the word family used for non-amenability certificates
//!   ([`construct`]).
//!
//! Everything is exact: words are always kept freely reduced, coefficients
//! live in ℚ or GF(p), and every search is bounded with the bounds recorded
//! in the result. Closures are truncated by a monomial-length bound, so
//! membership tests are three-valued (`Yes` / `No` / `Unknown`) and all
//! downstream verdicts track which side of the truncation they stand on.
//!
//! The fixed letter order used for deglex comparisons everywhere is
//! `x₀ < x₀⁻¹ < x₁ < x₁⁻¹ < …` in generator-index order.

pub mod cover;
pub mod measure;
pub mod poly;
pub mod relset;
mod trie;
pub mod word;

pub use cover::{
    chart, maximal_occurrences, min_cov, min_cov_bounds_check, occurrences, overlap_anomalies,
    Chart, CoverError, CoverReport, MinCovBounds, Occurrence,
};
pub use measure::{
    is_small_piece, lambda, lambda_admitting_unknown, lambda_inverse_symmetric, small_pieces,
    LambdaValue, MeasureError, MeasureVariant, PieceTable, PieceVerdict, SymmetryViolation,
};
pub use poly::{FieldError, FieldSpec, ParsePolyError, Poly, Scalar, Side};
pub use relset::{Chain, CloseOptions, RelSet, RelSetError, Tri};
pub use word::{Alphabet, Letter, ParseWordError, Word, WordError};
