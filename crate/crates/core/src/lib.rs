//! Spectra of tridiagonal sign matrices and periodic tridiagonal sign
//! operators.
//!
//! * [`sign`] — sign vectors, finite matrices, gauge normalization.
//! * [`poly`] — Aberth–Ehrlich root finding, exact integer polynomials.
//! * [`finite`] — continuant characteristic polynomials, exhaustive enumeration.
//! * [`symbol`] — the `m x m` symbol of a periodic operator and its spectrum.
//! * [`embed`] — block circulants and the finite embedding of symbol spectra.
//! * [`density`] — directed Hausdorff distances and density reports.
//! * [`io`] — CSV / JSON / SVG emitters and run manifests.
//!
//! Numerical code is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar for the common cases.

pub mod cloud;
pub mod density;
pub mod embed;
pub mod error;
pub mod finite;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod sign;
pub mod symbol;

pub use num_complex::Complex;

pub use cloud::{multisets_match, CloudPoint, SpectrumCloud, Tag};
pub use density::{density_report, directed_hausdorff, directed_hausdorff_brute, DensityReport};
pub use embed::{
    build_block_circulant, circulant_factorization_check, multiplicity_check, target_set, truncate,
    verify_embedding, BlockCirculant, EmbeddingResult,
};
pub use error::{Error, Result};
pub use finite::{
    charpoly_eval_at, charpoly_finite, enumerate_sigma, enumerate_sigma_accumulated, finite_eigenvalues,
    EnumerationOptions,
};
pub use linalg::DenseMatrix;
pub use poly::{int_charpoly_oracle, preimage, roots, ComplexPolynomial, IntPolynomial};
pub use scalar::Real;
pub use sign::{
    ensure_even_parity, gauge_normalize_finite, gauge_normalize_periodic, PeriodicOperatorSpec, Sign,
    SignVector, TridiagSignMatrix,
};
pub use symbol::{periodic_spectrum, symbol_eigenvalues, symbol_matrix, symbol_poly, SymbolPolynomial};

pub type C64 = Complex<f64>;
pub type C32 = Complex<f32>;
pub type Poly64 = ComplexPolynomial<f64>;
pub type Poly32 = ComplexPolynomial<f32>;
pub type Cloud64 = SpectrumCloud<f64>;
pub type Cloud32 = SpectrumCloud<f32>;
pub type Embedding64 = EmbeddingResult<f64>;
pub type Symbol64 = SymbolPolynomial<f64>;
